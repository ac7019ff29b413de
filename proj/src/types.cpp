#include "graphon/types.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "graphon/error.hpp"

namespace graphon {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::NonSymmetric: return "NonSymmetric";
    case Errc::BadWeights: return "BadWeights";
    case Errc::RangeViolation: return "RangeViolation";
    case Errc::WeightMismatch: return "WeightMismatch";
    case Errc::RefinementTooLarge: return "RefinementTooLarge";
    case Errc::TooLargeForExact: return "TooLargeForExact";
    case Errc::ComplexityCap: return "ComplexityCap";
    case Errc::LabelMismatch: return "LabelMismatch";
    case Errc::NoEvenCycle: return "NoEvenCycle";
    case Errc::BadCycleLength: return "BadCycleLength";
    case Errc::EmptyPart: return "EmptyPart";
    case Errc::MassMismatch: return "MassMismatch";
    case Errc::DomainViolation: return "DomainViolation";
    case Errc::IterationCapExceeded: return "IterationCapExceeded";
    case Errc::DivisibilityViolation: return "DivisibilityViolation";
    case Errc::BoundNotMet: return "BoundNotMet";
    case Errc::TooManyAtoms: return "TooManyAtoms";
    case Errc::CannotBridge: return "CannotBridge";
    case Errc::ConcentrationFailure: return "ConcentrationFailure";
    case Errc::ParseError: return "ParseError";
    case Errc::ValidationError: return "ValidationError";
    case Errc::BadArgument: return "BadArgument";
  }
  return "Unknown";
}

// ---------------------------------------------------------------------------
// StepGraphon

std::vector<double> StepGraphon::boundaries() const {
  std::vector<double> b(weights_.size() + 1, 0.0);
  for (std::size_t i = 0; i < weights_.size(); ++i) b[i + 1] = b[i] + weights_[i];
  return b;
}

StepGraphon StepGraphon::unchecked(std::vector<double> weights,
                                   std::vector<double> flat_values, Kind kind) {
  StepGraphon g;
  g.weights_ = std::move(weights);
  g.values_ = std::move(flat_values);
  g.kind_ = kind;
  double b = 0.0;
  for (double v : g.values_) b = std::max(b, std::fabs(v));
  g.bound_ = b;
  return g;
}

// ---------------------------------------------------------------------------
// SimpleGraph

SimpleGraph::SimpleGraph(int n, std::vector<std::pair<int, int>> edges) : n_(n) {
  if (n < 0) fail(Errc::BadArgument, "negative vertex count");
  edges_.reserve(edges.size());
  for (auto [u, v] : edges) {
    if (u == v) fail(Errc::ValidationError, "loop edge");
    if (u < 0 || v < 0 || u >= n || v >= n)
      fail(Errc::ValidationError, "edge endpoint out of range");
    if (u > v) std::swap(u, v);
    edges_.emplace_back(u, v);
  }
  std::sort(edges_.begin(), edges_.end());
  if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
    fail(Errc::ValidationError, "duplicate edge");
  adj_.assign(static_cast<std::size_t>(n), {});
  for (auto [u, v] : edges_) {
    adj_[static_cast<std::size_t>(u)].push_back(v);
    adj_[static_cast<std::size_t>(v)].push_back(u);
  }
}

bool SimpleGraph::connected() const {
  if (n_ <= 1) return true;
  std::vector<char> seen(static_cast<std::size_t>(n_), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int u : adj_[static_cast<std::size_t>(v)]) {
      if (!seen[static_cast<std::size_t>(u)]) {
        seen[static_cast<std::size_t>(u)] = 1;
        ++reached;
        stack.push_back(u);
      }
    }
  }
  return reached == n_;
}

// ---------------------------------------------------------------------------
// AtomPartition

AtomPartition::AtomPartition(std::vector<int> part_of)
    : part_of_(std::move(part_of)) {
  if (part_of_.empty()) fail(Errc::BadArgument, "empty partition");
  int maxid = *std::max_element(part_of_.begin(), part_of_.end());
  int minid = *std::min_element(part_of_.begin(), part_of_.end());
  if (minid < 0) fail(Errc::ValidationError, "negative part id");
  parts_ = maxid + 1;
  std::vector<int> count(static_cast<std::size_t>(parts_), 0);
  for (int p : part_of_) ++count[static_cast<std::size_t>(p)];
  for (int c : count)
    if (c == 0) fail(Errc::EmptyPart, "part ids must be contiguous and nonempty");
}

AtomPartition AtomPartition::trivial(int atoms) {
  return AtomPartition(std::vector<int>(static_cast<std::size_t>(atoms), 0));
}

AtomPartition AtomPartition::discrete(int atoms) {
  std::vector<int> ids(static_cast<std::size_t>(atoms));
  std::iota(ids.begin(), ids.end(), 0);
  return AtomPartition(std::move(ids));
}

std::vector<std::vector<int>> AtomPartition::groups() const {
  std::vector<std::vector<int>> g(static_cast<std::size_t>(parts_));
  for (int i = 0; i < atom_count(); ++i)
    g[static_cast<std::size_t>(part_of(i))].push_back(i);
  return g;
}

// ---------------------------------------------------------------------------
// AtomPermutation

AtomPermutation::AtomPermutation(std::vector<int> perm) : perm_(std::move(perm)) {
  std::vector<char> seen(perm_.size(), 0);
  for (int p : perm_) {
    if (p < 0 || p >= static_cast<int>(perm_.size()) ||
        seen[static_cast<std::size_t>(p)])
      fail(Errc::ValidationError, "not a bijection");
    seen[static_cast<std::size_t>(p)] = 1;
  }
}

AtomPermutation AtomPermutation::identity(int n) {
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  return AtomPermutation(std::move(p));
}

AtomPermutation AtomPermutation::compose(const AtomPermutation& inner) const {
  if (size() != inner.size()) fail(Errc::BadArgument, "size mismatch");
  std::vector<int> p(perm_.size());
  for (int i = 0; i < size(); ++i)
    p[static_cast<std::size_t>(i)] = (*this)(inner(i));
  return AtomPermutation(std::move(p));
}

AtomPermutation AtomPermutation::inverse() const {
  std::vector<int> p(perm_.size());
  for (int i = 0; i < size(); ++i)
    p[static_cast<std::size_t>(perm_[static_cast<std::size_t>(i)])] = i;
  return AtomPermutation(std::move(p));
}

bool AtomPermutation::is_identity() const {
  for (int i = 0; i < size(); ++i)
    if ((*this)(i) != i) return false;
  return true;
}

// ---------------------------------------------------------------------------
// DiscreteMeasure

DiscreteMeasure::DiscreteMeasure(std::vector<std::pair<double, double>> atoms) {
  for (auto& [x, m] : atoms)
    if (m <= 0.0) fail(Errc::ValidationError, "atom mass must be positive");
  std::sort(atoms.begin(), atoms.end());
  atoms_.reserve(atoms.size());
  for (const auto& [x, m] : atoms) {
    if (!atoms_.empty() && x - atoms_.back().first <= kWeightTol) {
      // Merge; keep the mass-weighted location for stability.
      auto& [px, pm] = atoms_.back();
      px = (px * pm + x * m) / (pm + m);
      pm += m;
    } else {
      atoms_.emplace_back(x, m);
    }
  }
}

DiscreteMeasure DiscreteMeasure::dirac(double x, double mass) {
  return DiscreteMeasure({{x, mass}});
}

double DiscreteMeasure::total_mass() const {
  double s = 0.0;
  for (const auto& [x, m] : atoms_) s += m;
  return s;
}

double DiscreteMeasure::mean() const {
  double s = 0.0;
  for (const auto& [x, m] : atoms_) s += x * m;
  return s;
}

double DiscreteMeasure::call_price(double t) const {
  double s = 0.0;
  for (const auto& [x, m] : atoms_)
    if (x > t) s += (x - t) * m;
  return s;
}

bool DiscreteMeasure::approx_equal(const DiscreteMeasure& other,
                                   double tol) const {
  if (size() != other.size()) return false;
  for (int i = 0; i < size(); ++i) {
    if (std::fabs(location(i) - other.location(i)) > tol) return false;
    if (std::fabs(mass(i) - other.mass(i)) > tol) return false;
  }
  return true;
}

}  // namespace graphon
