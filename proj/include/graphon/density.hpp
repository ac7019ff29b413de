#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "graphon/types.hpp"

namespace graphon {

struct DensityOptions {
  /// Multiply-add budget; ComplexityCap when even elimination exceeds it.
  double budget = 1e9;
  /// Force the plain k^{v(H)} summation (used by the test oracles).
  bool force_bruteforce = false;
};

/// Homomorphism density t(H, W) = sum over maps f: V(H) -> atoms of
/// prod_v mu_{f(v)} * prod_{uv in E} W_{f(u)f(v)}. Small instances run the
/// pruned brute-force sum (parallel over the first vertex, deterministic
/// combine); larger ones run dynamic programming over a greedy elimination
/// order.
double hom_density(const SimpleGraph& h, const StepGraphon& w,
                   const DensityOptions& opts = {});

/// Density of an edge-decorated graph; all labels must share one atom
/// sequence (LabelMismatch otherwise).
double decorated_density(const Decoration& d, const DensityOptions& opts = {});

struct GraphNormValue {
  SimpleGraph graph;
  double value = 0.0;
};

/// ||W||_H = |t(H,W)|^{1/e(H)}; the weak variant uses t(H, |W|).
GraphNormValue graph_norm(const SimpleGraph& h, const StepGraphon& w,
                          bool weak = false);

/// t(K_{1,l}, W) computed as sum_i mu_i deg_i^l.
double star_density_via_degrees(int l, const StepGraphon& w);

/// hbar(x) = x^{2^k e(H) / (2k)} where 2k is the length of the shortest even
/// cycle of H. NoEvenCycle when H has none.
double hbar(const SimpleGraph& h, double x);

/// One Hoelder check: slack = t(H,w)^{e(H)} - prod_e t(H,W_e); a positive
/// slack beyond tolerance violates the (weak) Hoelder inequality.
struct HolderReport {
  double slack = 0.0;
  bool violated = false;
  double lhs = 0.0;
  double rhs = 0.0;
};

HolderReport holder_check(const Decoration& d, double tol = 1e-9);

/// Randomized search for weak-Hoelder violations over seeded graphon
/// decorations; labels are normalized to t(H, W_e) = 1 before the check
/// unless raw = true. Returns the worst (largest-slack) trial.
struct HolderSearchReport {
  int trials = 0;
  double max_slack = 0.0;
  bool violation_found = false;
  std::optional<Decoration> witness;
};

HolderSearchReport holder_search(const SimpleGraph& h, int trials,
                                 std::uint64_t seed, bool normalize = true,
                                 int atoms = 2);

}  // namespace graphon
