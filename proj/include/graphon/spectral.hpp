#pragma once

#include <vector>

#include "graphon/types.hpp"

namespace graphon {

/// Signed spectrum of the graphon operator T_W, zero-padded to the atom
/// count. positives descending; negatives most-negative first.
struct Spectrum {
  std::vector<double> positives;
  std::vector<double> negatives;

  double power_sum(int k) const;
  double sum_of_squares() const { return power_sum(2); }
};

/// Eigenvalues of T_W for a step graphon: the spectrum of the k x k matrix
/// A_ij = sqrt(mu_i mu_j) W_ij, which is similar to T_W on step functions.
Spectrum eigendecompose(const StepGraphon& w);

enum class SpectralRelation { Below, Above, Equal, Incomparable };

struct SpectralComparison {
  SpectralRelation relation = SpectralRelation::Equal;
  bool strict = false;
};

/// Spectral quasiorder: Below means lambda_i^+(W) <= lambda_i^+(U) and
/// lambda_i^-(W) >= lambda_i^-(U) for all i (within tol).
SpectralComparison spectral_compare(const Spectrum& w, const Spectrum& u,
                                    double tol = 1e-9);
SpectralComparison spectral_compare(const StepGraphon& w, const StepGraphon& u,
                                    double tol = 1e-9);

/// t(C_k, W) = sum_i lambda_i^+(W)^k + sum_i lambda_i^-(W)^k, k >= 3.
double cycle_density_via_spectrum(int k, const Spectrum& s);

}  // namespace graphon
