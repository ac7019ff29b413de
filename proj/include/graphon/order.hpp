#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "graphon/types.hpp"

namespace graphon {

/// Stepping operator: averages W over the rectangles of P. The coarse form
/// lives on one atom per part (in part-id order); the expanded form keeps
/// W's atom sequence with each rectangle replaced by its average.
StepGraphon stepping(const StepGraphon& w, const AtomPartition& p);
StepGraphon stepping_expanded(const StepGraphon& w, const AtomPartition& p);

enum class FrequencyMode { range, degree };

/// Pushforward frequency measures: range mode collects (value, mu_i mu_j)
/// pairs, degree mode (deg_i, mu_i). Exact for step graphons; a positive
/// resolution only bins the result for display.
DiscreteMeasure pushforward_frequencies(const StepGraphon& w, FrequencyMode mode,
                                        double resolution = 0.0);

enum class FlatnessVerdict { Flatter, StrictlyFlatter, NotFlatter };

/// Row-stochastic-style coupling plan: plan[i*cols + j] is the mass moved
/// from atom i of the flatter measure to atom j of the other; rows sum to
/// the first measure, columns to the second, and each row's barycenter is
/// the row's location (martingale property).
struct MartingaleCoupling {
  int rows = 0;
  int cols = 0;
  std::vector<double> plan;
};

struct FlatnessResult {
  FlatnessVerdict verdict = FlatnessVerdict::NotFlatter;
  std::string detail;
  std::optional<MartingaleCoupling> coupling;
};

/// Convex-order test: equal mass, equal mean, and call-price dominance on
/// the union of atom locations decide "at least as flat"; the coupling
/// certificate comes from a feasibility solve of the martingale transport
/// program.
FlatnessResult flatness_compare(const DiscreteMeasure& a,
                                const DiscreteMeasure& b, double tol = 1e-9,
                                bool want_coupling = true);

/// Convex integrand for INT_f.
class ConvexFunctionSpec {
 public:
  static ConvexFunctionSpec square();
  static ConvexFunctionSpec xlogx();
  /// Knots (x, f(x)) with nondecreasing slopes.
  static ConvexFunctionSpec piecewise_linear(std::vector<std::pair<double, double>> knots);
  /// Coefficients in ascending degree; f'' checked >= 0 on a 1e-3 grid over
  /// [0, 1].
  static ConvexFunctionSpec polynomial(std::vector<double> coeffs);

  double operator()(double x) const;
  bool strictly_convex() const { return strictly_convex_; }
  double domain_lo() const { return lo_; }
  double domain_hi() const { return hi_; }
  const std::string& name() const { return name_; }

 private:
  enum class Kind { square, xlogx, pwl, poly } kind_ = Kind::square;
  std::vector<std::pair<double, double>> knots_;
  std::vector<double> coeffs_;
  bool strictly_convex_ = true;
  double lo_ = 0.0, hi_ = 1.0;
  std::string name_;
};

/// INT_f(W) = sum_ij mu_i mu_j f(W_ij); DomainViolation when an entry falls
/// outside f's domain.
double int_f(const ConvexFunctionSpec& f, const StepGraphon& w);
/// INT_{x^2}, the squared L2 norm.
double int_square(const StepGraphon& w);

enum class ProbeRelation { ConfirmedBelow, RefutedBelow, Unknown };

struct ProbeEvidence {
  std::string invariant;
  std::string detail;
};

struct ProbeCertificate {
  int grid_cells = 0;
  AtomPermutation version;   ///< permutation of W's uniform grid cells
  AtomPartition partition;   ///< stepping partition on those cells
  double l1 = 0.0;
};

struct ProbeVerdict {
  ProbeRelation relation = ProbeRelation::Unknown;
  std::vector<ProbeEvidence> evidence;
  std::optional<ProbeCertificate> certificate;
};

struct ProbeOptions {
  int grid_cap = 48;         ///< max uniform cells for the sufficient test
  int exhaustive_cells = 8;  ///< full version enumeration up to here
  int restarts = 64;
  double l1_tol = 1e-9;
  std::uint64_t seed = 11;
};

/// Three-valued structuredness probe for "U at most as structured as W":
/// RefutedBelow when a necessary invariant fails (edge density, flatness of
/// the range/degree frequencies, spectral quasiorder, INT_{x^2});
/// ConfirmedBelow when U is found to be a stepping of a version of W;
/// Unknown otherwise.
ProbeVerdict structuredness_probe(const StepGraphon& u, const StepGraphon& w,
                                  const ProbeOptions& opts = {});

}  // namespace graphon
