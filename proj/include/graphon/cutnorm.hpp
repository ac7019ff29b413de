#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "graphon/types.hpp"

namespace graphon {

/// Box-set witness for the cut norm: value = signed integral over S x T.
struct CutWitness {
  std::vector<int> s;
  std::vector<int> t;
  double value = 0.0;
};

enum class CutNormStrategy { exact, heuristic, automatic };

struct CutNormOptions {
  CutNormStrategy strategy = CutNormStrategy::automatic;
  /// Exact enumeration cap; above it `exact` raises TooLargeForExact and
  /// `automatic` falls back to the heuristic.
  int exact_max_atoms = 26;
  int restarts = 48;
  std::uint64_t seed = 1;
};

struct CutNormResult {
  double value = 0.0;
  CutWitness witness;
  bool exact = false;
};

/// Cut norm of a step kernel. Exact mode enumerates S over {0,1}^k (Gray
/// code, parallel over prefix blocks, deterministic tie-break) and picks T
/// coordinate-wise; restriction to atom unions is lossless for step kernels.
/// Heuristic mode is alternating maximization over restarts; its value never
/// exceeds the true norm.
CutNormResult cut_norm(const StepGraphon& kernel,
                       const CutNormOptions& opts = {});

/// Certified upper bound on the cut norm: the exact value when the atom
/// count permits, otherwise min(||K||_1, t(C4,K)^{1/4}).
double cut_norm_upper(const StepGraphon& kernel, int exact_max_atoms = 26);

/// t(C4,K) and t(C6,K) through traces of powers of the mass-scaled matrix;
/// exact for step kernels.
double c4_density_trace(const StepGraphon& kernel);
double c6_density_trace(const StepGraphon& kernel);

/// Disjoint cut-norm witness: |integral over A x B| >= ||K||_square / 4 with
/// A, B disjoint unions of (half-)atoms. Overlapping atoms of the box
/// witness are bisected; the pattern choice is derandomized by conditional
/// expectations and then improved by alternating ascent.
struct DisjointWitness {
  StepGraphon refined;      ///< kernel after any atom bisections
  std::vector<int> a;       ///< atom indices into `refined`
  std::vector<int> b;
  double value = 0.0;       ///< signed integral over A x B
  double box_norm = 0.0;    ///< cut-norm value the witness was derived from
};

DisjointWitness disjoint_witness(const StepGraphon& kernel,
                                 const CutNormOptions& opts = {});

/// Certified two-sided bounds for the cut distance of two graphons.
struct DistanceBounds {
  double lower = 0.0;
  double upper = 0.0;
  AtomPermutation upper_certificate;  ///< permutation of the refined atoms
  StepGraphon refined_a;
  StepGraphon refined_b;
};

struct DistanceBoundsOptions {
  int exact_perm_atoms = 8;   ///< full permutation enumeration up to here
  int restarts = 64;          ///< local-search restarts beyond that
  int refinement_cap = 4096;
  int exact_cutnorm_atoms = 26;
  std::uint64_t seed = 7;
};

DistanceBounds cut_distance_bounds(const StepGraphon& u, const StepGraphon& w,
                                   const DistanceBoundsOptions& opts = {});

/// Weak* test metric over the frozen dyadic-interval family of depth d:
/// interval (j,a) = [a 2^{-j}, (a+1) 2^{-j}] carries weight 2^{-(j+a+1)} and
/// the metric sums weight(I1) * weight(I2) * |integral over I1 x I2 (U-W)|
/// over ordered pairs in a fixed enumeration order.
double weakstar_distance(const StepGraphon& u, const StepGraphon& w, int depth);

}  // namespace graphon
