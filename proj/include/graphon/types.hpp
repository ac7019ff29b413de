#pragma once

#include <utility>
#include <vector>

#include "graphon/error.hpp"

namespace graphon {

inline constexpr double kWeightTol = 1e-12;
inline constexpr double kRealTol = 1e-9;

enum class Kind { graphon, kernel };

/// Symmetric step function on [0,1)^2: atom weights (summing to 1) plus a
/// symmetric value matrix. Graphons have entries in [0,1]; kernels are
/// bounded symmetric functions with the sup bound recorded. Atom order is
/// meaningful: atom i occupies the interval [prefix(i), prefix(i+1)).
/// Immutable after construction.
class StepGraphon {
 public:
  StepGraphon() = default;

  int size() const { return static_cast<int>(weights_.size()); }
  double weight(int i) const { return weights_[static_cast<std::size_t>(i)]; }
  const std::vector<double>& weights() const { return weights_; }
  double value(int i, int j) const {
    return values_[static_cast<std::size_t>(i) * weights_.size() +
                   static_cast<std::size_t>(j)];
  }
  const double* row(int i) const {
    return values_.data() + static_cast<std::size_t>(i) * weights_.size();
  }
  const std::vector<double>& flat_values() const { return values_; }
  Kind kind() const { return kind_; }
  bool is_graphon() const { return kind_ == Kind::graphon; }
  /// Sup-norm bound of the entries (tight: max |value|).
  double bound() const { return bound_; }

  /// Cumulative interval boundaries, size k+1, boundaries[0] = 0,
  /// boundaries[k] = 1 (total measure).
  std::vector<double> boundaries() const;

  /// Internal trusted constructor; validation happens in the factories in
  /// core.hpp.
  static StepGraphon unchecked(std::vector<double> weights,
                               std::vector<double> flat_values, Kind kind);

 private:
  std::vector<double> weights_;
  std::vector<double> values_;  // row-major k*k, symmetric
  Kind kind_ = Kind::graphon;
  double bound_ = 0.0;
};

/// Finite simple graph: the pattern H for densities, norms, and parameter
/// registration. No loops, no parallel edges.
class SimpleGraph {
 public:
  SimpleGraph(int n, std::vector<std::pair<int, int>> edges);

  int vertex_count() const { return n_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  const std::vector<std::vector<int>>& adjacency() const { return adj_; }
  int degree(int v) const {
    return static_cast<int>(adj_[static_cast<std::size_t>(v)].size());
  }
  bool connected() const;

 private:
  int n_ = 0;
  std::vector<std::pair<int, int>> edges_;  // normalized u < v, sorted
  std::vector<std::vector<int>> adj_;
};

/// Labeling of atoms into parts 0..part_count-1; every part nonempty.
class AtomPartition {
 public:
  explicit AtomPartition(std::vector<int> part_of);

  static AtomPartition trivial(int atoms);
  static AtomPartition discrete(int atoms);

  int atom_count() const { return static_cast<int>(part_of_.size()); }
  int part_count() const { return parts_; }
  int part_of(int atom) const {
    return part_of_[static_cast<std::size_t>(atom)];
  }
  const std::vector<int>& labels() const { return part_of_; }
  std::vector<std::vector<int>> groups() const;
  bool is_trivial() const { return parts_ == 1; }

 private:
  std::vector<int> part_of_;
  int parts_ = 0;
};

/// Bijection on atom indices. Weight compatibility with a concrete graphon
/// is checked by apply_version, not here.
class AtomPermutation {
 public:
  explicit AtomPermutation(std::vector<int> perm);

  static AtomPermutation identity(int n);

  int size() const { return static_cast<int>(perm_.size()); }
  int operator()(int i) const { return perm_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& mapping() const { return perm_; }

  /// compose(g)(i) = (*this)(g(i)).
  AtomPermutation compose(const AtomPermutation& inner) const;
  AtomPermutation inverse() const;
  bool is_identity() const;

 private:
  std::vector<int> perm_;
};

/// Finite atomic measure on [0,1]: sorted deduplicated locations with
/// positive masses. Houses the pushforward frequencies and the flatness
/// (convex order) comparison.
class DiscreteMeasure {
 public:
  DiscreteMeasure() = default;
  /// Atoms as (location, mass); merged within kWeightTol and sorted.
  explicit DiscreteMeasure(std::vector<std::pair<double, double>> atoms);

  static DiscreteMeasure dirac(double x, double mass = 1.0);

  int size() const { return static_cast<int>(atoms_.size()); }
  double location(int i) const { return atoms_[static_cast<std::size_t>(i)].first; }
  double mass(int i) const { return atoms_[static_cast<std::size_t>(i)].second; }
  const std::vector<std::pair<double, double>>& atoms() const { return atoms_; }

  double total_mass() const;
  /// First moment (not normalized).
  double mean() const;
  /// Call price: integral of (x - t)_+ against the measure.
  double call_price(double t) const;

  bool approx_equal(const DiscreteMeasure& other, double tol = kRealTol) const;

 private:
  std::vector<std::pair<double, double>> atoms_;
};

/// Pattern graph with one step graphon per edge, all on shared atoms.
struct Decoration {
  SimpleGraph graph;
  std::vector<StepGraphon> labels;  // indexed like graph.edges()
};

}  // namespace graphon
