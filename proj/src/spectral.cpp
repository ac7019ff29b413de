#include "graphon/spectral.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "graphon/error.hpp"

namespace graphon {

double Spectrum::power_sum(int k) const {
  double s = 0.0;
  for (double l : positives) s += std::pow(l, k);
  for (double l : negatives) s += std::pow(l, k);
  return s;
}

Spectrum eigendecompose(const StepGraphon& w) {
  const int n = w.size();
  Eigen::MatrixXd a(n, n);
  std::vector<double> sq(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) sq[static_cast<std::size_t>(i)] = std::sqrt(w.weight(i));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      a(i, j) = sq[static_cast<std::size_t>(i)] * sq[static_cast<std::size_t>(j)] * w.value(i, j);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    fail(Errc::ValidationError, "eigendecomposition failed");

  Spectrum s;
  for (int i = 0; i < n; ++i) {
    double l = solver.eigenvalues()(i);
    if (l >= 0.0)
      s.positives.push_back(l);
    else
      s.negatives.push_back(l);
  }
  std::sort(s.positives.begin(), s.positives.end(), std::greater<>());
  std::sort(s.negatives.begin(), s.negatives.end());
  s.positives.resize(static_cast<std::size_t>(n), 0.0);
  s.negatives.resize(static_cast<std::size_t>(n), 0.0);
  return s;
}

SpectralComparison spectral_compare(const Spectrum& w, const Spectrum& u,
                                    double tol) {
  std::size_t n = std::max(w.positives.size(), u.positives.size());
  auto pos = [](const Spectrum& s, std::size_t i) {
    return i < s.positives.size() ? s.positives[i] : 0.0;
  };
  auto neg = [](const Spectrum& s, std::size_t i) {
    return i < s.negatives.size() ? s.negatives[i] : 0.0;
  };

  bool below = true, above = true, strict_below = false, strict_above = false;
  for (std::size_t i = 0; i < n; ++i) {
    double dp = pos(w, i) - pos(u, i);
    double dn = neg(w, i) - neg(u, i);
    // Below: w's positive eigenvalues no bigger, negative ones no smaller.
    if (dp > tol || dn < -tol) below = false;
    if (dp < -tol || dn > tol) above = false;
    if (dp < -tol || dn > tol) strict_below = true;
    if (dp > tol || dn < -tol) strict_above = true;
  }

  SpectralComparison out;
  if (below && above) {
    out.relation = SpectralRelation::Equal;
    out.strict = false;
  } else if (below) {
    out.relation = SpectralRelation::Below;
    out.strict = strict_below;
  } else if (above) {
    out.relation = SpectralRelation::Above;
    out.strict = strict_above;
  } else {
    out.relation = SpectralRelation::Incomparable;
    out.strict = false;
  }
  return out;
}

SpectralComparison spectral_compare(const StepGraphon& w, const StepGraphon& u,
                                    double tol) {
  return spectral_compare(eigendecompose(w), eigendecompose(u), tol);
}

double cycle_density_via_spectrum(int k, const Spectrum& s) {
  if (k < 3) fail(Errc::BadCycleLength, "cycle length must be >= 3");
  return s.power_sum(k);
}

}  // namespace graphon
