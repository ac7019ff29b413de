#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "graphon/types.hpp"

namespace graphon {

inline constexpr int kDefaultRefinementCap = 4096;

/// Validates and builds a step graphon/kernel. Weights are renormalized when
/// their sum is within 1e-9 of 1; larger deviations raise BadWeights. Values
/// must be symmetric exactly; graphon entries must lie in [0,1] up to 1e-9
/// (clamped).
StepGraphon make_step_graphon(std::vector<double> weights,
                              const std::vector<std::vector<double>>& values,
                              Kind kind);
StepGraphon make_step_graphon_flat(std::vector<double> weights,
                                   std::vector<double> flat_values, Kind kind);

/// Equal-atom representation: n atoms of weight 1/n.
StepGraphon uniform_grid(const std::vector<std::vector<double>>& values,
                         Kind kind);
StepGraphon constant_graphon(double p);

/// W^phi with W^phi(i,j) = W(phi(i), phi(j)). phi may only permute atoms of
/// equal weight (WeightMismatch otherwise), so the weight vector is
/// unchanged and the result is a version of W.
StepGraphon apply_version(const StepGraphon& w, const AtomPermutation& phi);

/// (U (x) V)((i,p),(j,q)) = U(i,j) V(p,q) on atoms of weight mu_i nu_p.
StepGraphon tensor_product(const StepGraphon& u, const StepGraphon& v);

/// t(P2, W) = sum_ij mu_i mu_j W_ij. Terms are accumulated in sorted order,
/// so versions of W produce the identical float.
double edge_density(const StepGraphon& w);

double degree(const StepGraphon& w, int atom);
std::vector<double> degrees(const StepGraphon& w);

/// Re-expresses both graphons on the overlay of their atom boundaries
/// (interval model, atom order preserved). RefinementTooLarge beyond the cap.
std::pair<StepGraphon, StepGraphon> common_refinement(
    const StepGraphon& a, const StepGraphon& b,
    int max_atoms = kDefaultRefinementCap);

/// Re-expresses w on the given boundary grid, which must refine w's own
/// boundaries (within kWeightTol).
StepGraphon refine_to_boundaries(const StepGraphon& w,
                                 const std::vector<double>& boundaries);

/// Smallest m <= max_cells such that every atom weight is an integer
/// multiple of 1/m (within tolerance); returns w on m equal cells, or
/// nullopt when no such grid exists.
std::optional<StepGraphon> to_uniform_cells(const StepGraphon& w,
                                            int max_cells);

/// Half-scaled block diagonal: U placed on [0,1/2)^2, V on [1/2,1)^2, zero
/// elsewhere. For connected H, t(H, result) = (t(H,U) + t(H,V)) / 2^{v(H)}.
StepGraphon block_diagonal_half(const StepGraphon& u, const StepGraphon& v);

/// Pointwise ops on a shared atom sequence (WeightMismatch otherwise).
StepGraphon kernel_difference(const StepGraphon& a, const StepGraphon& b);
StepGraphon subtract_constant(const StepGraphon& w, double c);
StepGraphon scale_kernel(const StepGraphon& w, double c);
StepGraphon abs_kernel(const StepGraphon& w);
StepGraphon average(const std::vector<StepGraphon>& ws);

double l1_norm(const StepGraphon& k);
double l1_distance(const StepGraphon& a, const StepGraphon& b);
double linf_distance(const StepGraphon& a, const StepGraphon& b);

bool same_weights(const StepGraphon& a, const StepGraphon& b,
                  double tol = kWeightTol);
/// Exact equality of weight and value arrays.
bool identical(const StepGraphon& a, const StepGraphon& b);

}  // namespace graphon
