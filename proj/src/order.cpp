#include "graphon/order.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "graphon/core.hpp"
#include "graphon/error.hpp"
#include "graphon/rng.hpp"
#include "graphon/spectral.hpp"

namespace graphon {

// ---------------------------------------------------------------------------
// Stepping

namespace {

// Part weights and averaged part-pair values.
struct SteppingData {
  std::vector<double> part_weight;
  std::vector<double> avg;  // parts x parts
};

SteppingData stepping_data(const StepGraphon& w, const AtomPartition& p) {
  if (p.atom_count() != w.size())
    fail(Errc::BadArgument, "partition size mismatch");
  const int parts = p.part_count();
  SteppingData d;
  d.part_weight.assign(static_cast<std::size_t>(parts), 0.0);
  for (int i = 0; i < w.size(); ++i)
    d.part_weight[static_cast<std::size_t>(p.part_of(i))] += w.weight(i);
  for (double pw : d.part_weight)
    if (pw <= 0.0) fail(Errc::EmptyPart, "partition has an empty part");
  d.avg.assign(static_cast<std::size_t>(parts) * parts, 0.0);
  for (int i = 0; i < w.size(); ++i)
    for (int j = 0; j < w.size(); ++j)
      d.avg[static_cast<std::size_t>(p.part_of(i)) * parts + p.part_of(j)] +=
          w.weight(i) * w.weight(j) * w.value(i, j);
  for (int a = 0; a < parts; ++a)
    for (int b = 0; b < parts; ++b)
      d.avg[static_cast<std::size_t>(a) * parts + b] /=
          d.part_weight[static_cast<std::size_t>(a)] *
          d.part_weight[static_cast<std::size_t>(b)];
  return d;
}

}  // namespace

StepGraphon stepping(const StepGraphon& w, const AtomPartition& p) {
  SteppingData d = stepping_data(w, p);
  return StepGraphon::unchecked(std::move(d.part_weight), std::move(d.avg),
                                w.kind());
}

StepGraphon stepping_expanded(const StepGraphon& w, const AtomPartition& p) {
  SteppingData d = stepping_data(w, p);
  const int parts = p.part_count();
  const int n = w.size();
  std::vector<double> vals(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      vals[static_cast<std::size_t>(i) * n + j] =
          d.avg[static_cast<std::size_t>(p.part_of(i)) * parts + p.part_of(j)];
  return StepGraphon::unchecked(w.weights(), std::move(vals), w.kind());
}

// ---------------------------------------------------------------------------
// Pushforward frequencies

DiscreteMeasure pushforward_frequencies(const StepGraphon& w, FrequencyMode mode,
                                        double resolution) {
  std::vector<std::pair<double, double>> atoms;
  if (mode == FrequencyMode::range) {
    for (int i = 0; i < w.size(); ++i)
      for (int j = 0; j < w.size(); ++j)
        atoms.emplace_back(w.value(i, j), w.weight(i) * w.weight(j));
  } else {
    for (int i = 0; i < w.size(); ++i)
      atoms.emplace_back(degree(w, i), w.weight(i));
  }
  if (resolution > 0.0)
    for (auto& [x, m] : atoms) x = std::round(x / resolution) * resolution;
  return DiscreteMeasure(std::move(atoms));
}

// ---------------------------------------------------------------------------
// Flatness (convex order) and the martingale coupling certificate

namespace {

// Phase-1 simplex (Bland's rule) for A x = b, x >= 0. Returns a feasible x
// or nullopt. Dense and small-scale; rhs must be nonnegative.
std::optional<std::vector<double>> phase1_feasible(
    const std::vector<std::vector<double>>& a, const std::vector<double>& b) {
  const int rows = static_cast<int>(b.size());
  const int cols = rows == 0 ? 0 : static_cast<int>(a[0].size());
  const int width = cols + rows + 1;  // structural + artificial + rhs
  std::vector<std::vector<double>> t(static_cast<std::size_t>(rows),
                                     std::vector<double>(static_cast<std::size_t>(width), 0.0));
  for (int r = 0; r < rows; ++r) {
    double sgn = b[static_cast<std::size_t>(r)] < 0.0 ? -1.0 : 1.0;
    for (int c = 0; c < cols; ++c)
      t[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] =
          sgn * a[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
    t[static_cast<std::size_t>(r)][static_cast<std::size_t>(cols + r)] = 1.0;
    t[static_cast<std::size_t>(r)].back() = sgn * b[static_cast<std::size_t>(r)];
  }
  std::vector<int> basis(static_cast<std::size_t>(rows));
  for (int r = 0; r < rows; ++r) basis[static_cast<std::size_t>(r)] = cols + r;

  // Objective row: minimize the artificial sum.
  std::vector<double> z(static_cast<std::size_t>(width), 0.0);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < width; ++c)
      z[static_cast<std::size_t>(c)] += t[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
  for (int c = cols; c < cols + rows; ++c) z[static_cast<std::size_t>(c)] -= 1.0;

  const double eps = 1e-11;
  for (long iter = 0; iter < 200000; ++iter) {
    int enter = -1;
    for (int c = 0; c < cols + rows; ++c)
      if (z[static_cast<std::size_t>(c)] > eps) {
        enter = c;
        break;  // Bland: first improving column
      }
    if (enter < 0) break;
    int leave = -1;
    double best_ratio = 0.0;
    for (int r = 0; r < rows; ++r) {
      double arc = t[static_cast<std::size_t>(r)][static_cast<std::size_t>(enter)];
      if (arc > eps) {
        double ratio = t[static_cast<std::size_t>(r)].back() / arc;
        if (leave < 0 || ratio < best_ratio - eps ||
            (std::fabs(ratio - best_ratio) <= eps &&
             basis[static_cast<std::size_t>(r)] < basis[static_cast<std::size_t>(leave)])) {
          leave = r;
          best_ratio = ratio;
        }
      }
    }
    if (leave < 0) return std::nullopt;  // unbounded; cannot happen here
    double piv = t[static_cast<std::size_t>(leave)][static_cast<std::size_t>(enter)];
    for (double& x : t[static_cast<std::size_t>(leave)]) x /= piv;
    for (int r = 0; r < rows; ++r) {
      if (r == leave) continue;
      double f = t[static_cast<std::size_t>(r)][static_cast<std::size_t>(enter)];
      if (f == 0.0) continue;
      for (int c = 0; c < width; ++c)
        t[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] -=
            f * t[static_cast<std::size_t>(leave)][static_cast<std::size_t>(c)];
    }
    double fz = z[static_cast<std::size_t>(enter)];
    for (int c = 0; c < width; ++c)
      z[static_cast<std::size_t>(c)] -=
          fz * t[static_cast<std::size_t>(leave)][static_cast<std::size_t>(c)];
    basis[static_cast<std::size_t>(leave)] = enter;
  }

  double resid = 0.0;
  for (int r = 0; r < rows; ++r)
    if (basis[static_cast<std::size_t>(r)] >= cols)
      resid += std::fabs(t[static_cast<std::size_t>(r)].back());
  if (resid > 1e-7) return std::nullopt;

  std::vector<double> x(static_cast<std::size_t>(cols), 0.0);
  for (int r = 0; r < rows; ++r)
    if (basis[static_cast<std::size_t>(r)] < cols)
      x[static_cast<std::size_t>(basis[static_cast<std::size_t>(r)])] =
          std::max(0.0, t[static_cast<std::size_t>(r)].back());
  return x;
}

std::optional<MartingaleCoupling> solve_coupling(const DiscreteMeasure& a,
                                                 const DiscreteMeasure& b) {
  const int n = a.size(), m = b.size();
  if (static_cast<long>(n) * m > 4096) return std::nullopt;
  const int vars = n * m;
  std::vector<std::vector<double>> rows;
  std::vector<double> rhs;
  for (int i = 0; i < n; ++i) {  // row sums
    std::vector<double> r(static_cast<std::size_t>(vars), 0.0);
    for (int j = 0; j < m; ++j) r[static_cast<std::size_t>(i * m + j)] = 1.0;
    rows.push_back(std::move(r));
    rhs.push_back(a.mass(i));
  }
  for (int j = 0; j < m; ++j) {  // column sums
    std::vector<double> r(static_cast<std::size_t>(vars), 0.0);
    for (int i = 0; i < n; ++i) r[static_cast<std::size_t>(i * m + j)] = 1.0;
    rows.push_back(std::move(r));
    rhs.push_back(b.mass(j));
  }
  for (int i = 0; i < n; ++i) {  // barycenter per first-marginal atom
    std::vector<double> r(static_cast<std::size_t>(vars), 0.0);
    for (int j = 0; j < m; ++j)
      r[static_cast<std::size_t>(i * m + j)] = b.location(j);
    rows.push_back(std::move(r));
    rhs.push_back(a.mass(i) * a.location(i));
  }
  auto x = phase1_feasible(rows, rhs);
  if (!x) return std::nullopt;
  MartingaleCoupling c;
  c.rows = n;
  c.cols = m;
  c.plan = std::move(*x);
  return c;
}

}  // namespace

FlatnessResult flatness_compare(const DiscreteMeasure& a,
                                const DiscreteMeasure& b, double tol,
                                bool want_coupling) {
  FlatnessResult out;
  double ma = a.total_mass(), mb = b.total_mass();
  if (std::fabs(ma - mb) > tol) {
    out.verdict = FlatnessVerdict::NotFlatter;
    out.detail = "total mass differs";
    return out;
  }
  if (std::fabs(a.mean() - b.mean()) > tol) {
    out.verdict = FlatnessVerdict::NotFlatter;
    out.detail = "means differ";
    return out;
  }
  std::vector<double> grid;
  for (int i = 0; i < a.size(); ++i) grid.push_back(a.location(i));
  for (int j = 0; j < b.size(); ++j) grid.push_back(b.location(j));
  std::sort(grid.begin(), grid.end());
  for (double t : grid) {
    if (a.call_price(t) > b.call_price(t) + tol) {
      out.verdict = FlatnessVerdict::NotFlatter;
      std::ostringstream os;
      os << "call price exceeds at t=" << t;
      out.detail = os.str();
      return out;
    }
  }
  out.verdict = a.approx_equal(b, tol) ? FlatnessVerdict::Flatter
                                       : FlatnessVerdict::StrictlyFlatter;
  if (out.verdict == FlatnessVerdict::Flatter) out.detail = "measures equal";
  if (want_coupling) out.coupling = solve_coupling(a, b);
  return out;
}

// ---------------------------------------------------------------------------
// Convex parameters

ConvexFunctionSpec ConvexFunctionSpec::square() {
  ConvexFunctionSpec f;
  f.kind_ = Kind::square;
  f.strictly_convex_ = true;
  f.lo_ = -std::numeric_limits<double>::infinity();
  f.hi_ = std::numeric_limits<double>::infinity();
  f.name_ = "square";
  return f;
}

ConvexFunctionSpec ConvexFunctionSpec::xlogx() {
  ConvexFunctionSpec f;
  f.kind_ = Kind::xlogx;
  f.strictly_convex_ = true;
  f.lo_ = 0.0;
  f.hi_ = std::numeric_limits<double>::infinity();
  f.name_ = "xlogx";
  return f;
}

ConvexFunctionSpec ConvexFunctionSpec::piecewise_linear(
    std::vector<std::pair<double, double>> knots) {
  if (knots.size() < 2) fail(Errc::ValidationError, "need >= 2 knots");
  std::sort(knots.begin(), knots.end());
  double prev_slope = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    double dx = knots[i + 1].first - knots[i].first;
    if (dx <= 0.0) fail(Errc::ValidationError, "knot locations must increase");
    double slope = (knots[i + 1].second - knots[i].second) / dx;
    if (slope < prev_slope - 1e-12)
      fail(Errc::ValidationError, "slopes must be nondecreasing");
    prev_slope = slope;
  }
  ConvexFunctionSpec f;
  f.kind_ = Kind::pwl;
  f.lo_ = knots.front().first;
  f.hi_ = knots.back().first;
  f.knots_ = std::move(knots);
  f.strictly_convex_ = false;
  f.name_ = "piecewise_linear";
  return f;
}

ConvexFunctionSpec ConvexFunctionSpec::polynomial(std::vector<double> coeffs) {
  auto second = [&](double x) {
    double s = 0.0;
    for (std::size_t d = 2; d < coeffs.size(); ++d)
      s += static_cast<double>(d) * static_cast<double>(d - 1) *
           coeffs[d] * std::pow(x, static_cast<double>(d - 2));
    return s;
  };
  double min2 = std::numeric_limits<double>::infinity();
  for (int g = 0; g <= 1000; ++g) min2 = std::min(min2, second(g / 1000.0));
  if (min2 < -1e-9)
    fail(Errc::ValidationError, "polynomial is not convex on [0,1]");
  ConvexFunctionSpec f;
  f.kind_ = Kind::poly;
  f.coeffs_ = std::move(coeffs);
  f.lo_ = 0.0;
  f.hi_ = 1.0;
  f.strictly_convex_ = min2 > 1e-9;
  f.name_ = "polynomial";
  return f;
}

double ConvexFunctionSpec::operator()(double x) const {
  switch (kind_) {
    case Kind::square:
      return x * x;
    case Kind::xlogx:
      return x <= 0.0 ? 0.0 : x * std::log(x);
    case Kind::pwl: {
      auto it = std::upper_bound(knots_.begin(), knots_.end(),
                                 std::make_pair(x, std::numeric_limits<double>::infinity()));
      if (it == knots_.begin()) return knots_.front().second;
      if (it == knots_.end()) return knots_.back().second;
      auto [x1, y1] = *(it - 1);
      auto [x2, y2] = *it;
      return y1 + (y2 - y1) * (x - x1) / (x2 - x1);
    }
    case Kind::poly: {
      double s = 0.0;
      for (std::size_t d = coeffs_.size(); d-- > 0;) s = s * x + coeffs_[d];
      return s;
    }
  }
  return 0.0;
}

double int_f(const ConvexFunctionSpec& f, const StepGraphon& w) {
  const double lo = f.domain_lo(), hi = f.domain_hi();
  double s = 0.0;
  for (int i = 0; i < w.size(); ++i)
    for (int j = 0; j < w.size(); ++j) {
      double x = w.value(i, j);
      if (x < lo - 1e-12 || x > hi + 1e-12)
        fail(Errc::DomainViolation, "kernel value outside the domain of f");
      s += w.weight(i) * w.weight(j) * f(std::clamp(x, lo, hi));
    }
  return s;
}

double int_square(const StepGraphon& w) {
  double s = 0.0;
  for (int i = 0; i < w.size(); ++i)
    for (int j = 0; j < w.size(); ++j)
      s += w.weight(i) * w.weight(j) * w.value(i, j) * w.value(i, j);
  return s;
}

// ---------------------------------------------------------------------------
// Structuredness probe

namespace {

// Smallest m <= cap such that every atom weight of both graphons is an
// integer multiple of 1/m.
std::optional<int> common_grid_cells(const StepGraphon& a, const StepGraphon& b,
                                     int cap) {
  for (int m = std::max(a.size(), b.size()); m <= cap; ++m) {
    auto fits = [m](const StepGraphon& g) {
      int total = 0;
      for (int i = 0; i < g.size(); ++i) {
        double c = g.weight(i) * m;
        int n = static_cast<int>(std::llround(c));
        if (n < 1 || std::fabs(c - n) > 1e-7) return false;
        total += n;
      }
      return total == m;
    };
    if (fits(a) && fits(b)) return m;
  }
  return std::nullopt;
}

StepGraphon to_cells(const StepGraphon& g, int m) {
  std::vector<double> bounds;
  bounds.reserve(static_cast<std::size_t>(m) + 1);
  for (int c = 0; c <= m; ++c) bounds.push_back(static_cast<double>(c) / m);
  return refine_to_boundaries(g, bounds);
}

// L1 distance between u (coarse, one atom per part) and the stepping of
// w_cells permuted by perm, over the cell partition `owner`.
double probe_objective(const StepGraphon& u, const StepGraphon& w_cells,
                       const std::vector<int>& perm,
                       const std::vector<int>& owner) {
  const int m = w_cells.size();
  const int parts = u.size();
  std::vector<double> acc(static_cast<std::size_t>(parts) * parts, 0.0);
  std::vector<int> cells_per_part(static_cast<std::size_t>(parts), 0);
  for (int c = 0; c < m; ++c) ++cells_per_part[static_cast<std::size_t>(owner[static_cast<std::size_t>(c)])];
  for (int c = 0; c < m; ++c)
    for (int d = 0; d < m; ++d)
      acc[static_cast<std::size_t>(owner[static_cast<std::size_t>(c)]) * parts +
          owner[static_cast<std::size_t>(d)]] +=
          w_cells.value(perm[static_cast<std::size_t>(c)], perm[static_cast<std::size_t>(d)]);
  double l1 = 0.0;
  for (int p = 0; p < parts; ++p)
    for (int q = 0; q < parts; ++q) {
      double cnt = static_cast<double>(cells_per_part[static_cast<std::size_t>(p)]) *
                   cells_per_part[static_cast<std::size_t>(q)];
      double avg = acc[static_cast<std::size_t>(p) * parts + q] / cnt;
      l1 += u.weight(p) * u.weight(q) * std::fabs(avg - u.value(p, q));
    }
  return l1;
}

}  // namespace

ProbeVerdict structuredness_probe(const StepGraphon& u, const StepGraphon& w,
                                  const ProbeOptions& opts) {
  ProbeVerdict out;
  auto refute = [&](const std::string& inv, const std::string& detail) {
    out.relation = ProbeRelation::RefutedBelow;
    out.evidence.push_back({inv, detail});
  };

  double du = edge_density(u), dw = edge_density(w);
  if (std::fabs(du - dw) > kRealTol) {
    std::ostringstream os;
    os << "edge densities " << du << " vs " << dw;
    refute("edge-density", os.str());
    return out;
  }
  out.evidence.push_back({"edge-density", "equal"});

  auto phi = flatness_compare(pushforward_frequencies(u, FrequencyMode::range),
                              pushforward_frequencies(w, FrequencyMode::range),
                              kRealTol, false);
  if (phi.verdict == FlatnessVerdict::NotFlatter) {
    refute("range-frequencies", "Phi_U not flatter than Phi_W: " + phi.detail);
    return out;
  }
  out.evidence.push_back({"range-frequencies", "flatter"});

  auto ups = flatness_compare(pushforward_frequencies(u, FrequencyMode::degree),
                              pushforward_frequencies(w, FrequencyMode::degree),
                              kRealTol, false);
  if (ups.verdict == FlatnessVerdict::NotFlatter) {
    refute("degree-frequencies", "Upsilon_U not flatter: " + ups.detail);
    return out;
  }
  out.evidence.push_back({"degree-frequencies", "flatter"});

  auto sc = spectral_compare(u, w);
  if (sc.relation == SpectralRelation::Incomparable) {
    refute("spectral-quasiorder", "spectra incomparable");
    return out;
  }
  if (sc.relation == SpectralRelation::Above && sc.strict) {
    refute("spectral-quasiorder", "U strictly above W");
    return out;
  }
  out.evidence.push_back({"spectral-quasiorder", "below or equal"});

  double iu = int_square(u), iw = int_square(w);
  if (iu > iw + kRealTol) {
    std::ostringstream os;
    os << "INT_square " << iu << " > " << iw;
    refute("int-square", os.str());
    return out;
  }
  out.evidence.push_back({"int-square", "no excess"});

  // Sufficient test: is U a stepping of a version of W on a common uniform
  // grid of cells?
  auto cells = common_grid_cells(u, w, opts.grid_cap);
  if (!cells) {
    out.relation = ProbeRelation::Unknown;
    out.evidence.push_back({"stepping-search", "no common uniform grid within cap"});
    return out;
  }
  const int m = *cells;
  StepGraphon wg = to_cells(w, m);
  // Cell ownership by U's atoms (U atoms are contiguous cell ranges).
  std::vector<int> owner(static_cast<std::size_t>(m), 0);
  {
    auto ub = u.boundaries();
    for (int c = 0; c < m; ++c) {
      double mid = (c + 0.5) / m;
      int idx = 0;
      while (idx + 1 < u.size() && ub[static_cast<std::size_t>(idx) + 1] <= mid) ++idx;
      owner[static_cast<std::size_t>(c)] = idx;
    }
  }
  AtomPartition cell_partition{std::vector<int>(owner)};

  auto try_perm = [&](const std::vector<int>& perm) {
    return probe_objective(u, wg, perm, owner);
  };

  std::vector<int> best_perm(static_cast<std::size_t>(m));
  std::iota(best_perm.begin(), best_perm.end(), 0);
  double best = try_perm(best_perm);

  if (best > opts.l1_tol && m <= opts.exhaustive_cells) {
    std::vector<int> p(best_perm);
    std::sort(p.begin(), p.end());
    do {
      double v = try_perm(p);
      if (v < best) {
        best = v;
        best_perm = p;
        if (best <= opts.l1_tol) break;
      }
    } while (std::next_permutation(p.begin(), p.end()));
  } else if (best > opts.l1_tol) {
    Rng master(opts.seed);
    int restarts = m > 24 ? std::max(8, opts.restarts / 4) : opts.restarts;
    for (int r = 0; r < restarts && best > opts.l1_tol; ++r) {
      Rng rng = master.fork(static_cast<std::uint64_t>(r));
      std::vector<int> p = r == 0 ? best_perm : rng.permutation(m);
      double cur = try_perm(p);
      bool improved = true;
      while (improved && cur > opts.l1_tol) {
        improved = false;
        for (int x = 0; x < m && cur > opts.l1_tol; ++x)
          for (int y = x + 1; y < m; ++y) {
            std::swap(p[static_cast<std::size_t>(x)], p[static_cast<std::size_t>(y)]);
            double v = try_perm(p);
            if (v < cur - 1e-15) {
              cur = v;
              improved = true;
            } else {
              std::swap(p[static_cast<std::size_t>(x)], p[static_cast<std::size_t>(y)]);
            }
          }
      }
      if (cur < best) {
        best = cur;
        best_perm = p;
      }
    }
  }

  if (best <= opts.l1_tol) {
    out.relation = ProbeRelation::ConfirmedBelow;
    out.evidence.push_back({"stepping-search", "U is a stepping of a version of W"});
    out.certificate = ProbeCertificate{m, AtomPermutation(best_perm),
                                       cell_partition, best};
  } else {
    out.relation = ProbeRelation::Unknown;
    std::ostringstream os;
    os << "best stepping distance " << best;
    out.evidence.push_back({"stepping-search", os.str()});
  }
  return out;
}

}  // namespace graphon
