#include "graphon/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "graphon/error.hpp"

namespace graphon {

namespace {

void validate_symmetric(const std::vector<double>& flat, int k) {
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      if (flat[static_cast<std::size_t>(i) * k + j] !=
          flat[static_cast<std::size_t>(j) * k + i])
        fail(Errc::NonSymmetric, "values[" + std::to_string(i) + "][" +
                                     std::to_string(j) + "] != transpose");
}

}  // namespace

StepGraphon make_step_graphon_flat(std::vector<double> weights,
                                   std::vector<double> flat_values, Kind kind) {
  const int k = static_cast<int>(weights.size());
  if (k == 0) fail(Errc::BadWeights, "no atoms");
  if (flat_values.size() != static_cast<std::size_t>(k) * k)
    fail(Errc::BadArgument, "value matrix dimension mismatch");
  double sum = 0.0;
  for (double w : weights) {
    if (!(w > 0.0)) fail(Errc::BadWeights, "atom weights must be positive");
    sum += w;
  }
  if (std::fabs(sum - 1.0) > 1e-9)
    fail(Errc::BadWeights, "weights sum to " + std::to_string(sum));
  if (sum != 1.0)
    for (double& w : weights) w /= sum;

  validate_symmetric(flat_values, k);
  if (kind == Kind::graphon) {
    for (double& v : flat_values) {
      if (v < -1e-9 || v > 1.0 + 1e-9)
        fail(Errc::RangeViolation, "graphon entry " + std::to_string(v));
      v = std::clamp(v, 0.0, 1.0);
    }
  }
  return StepGraphon::unchecked(std::move(weights), std::move(flat_values), kind);
}

StepGraphon make_step_graphon(std::vector<double> weights,
                              const std::vector<std::vector<double>>& values,
                              Kind kind) {
  const std::size_t k = weights.size();
  if (values.size() != k) fail(Errc::BadArgument, "value matrix dimension mismatch");
  std::vector<double> flat;
  flat.reserve(k * k);
  for (const auto& row : values) {
    if (row.size() != k) fail(Errc::BadArgument, "value matrix not square");
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return make_step_graphon_flat(std::move(weights), std::move(flat), kind);
}

StepGraphon uniform_grid(const std::vector<std::vector<double>>& values,
                         Kind kind) {
  const int n = static_cast<int>(values.size());
  if (n == 0) fail(Errc::BadWeights, "no atoms");
  std::vector<double> w(static_cast<std::size_t>(n), 1.0 / n);
  return make_step_graphon(std::move(w), values, kind);
}

StepGraphon constant_graphon(double p) { return uniform_grid({{p}}, Kind::graphon); }

StepGraphon apply_version(const StepGraphon& w, const AtomPermutation& phi) {
  const int k = w.size();
  if (phi.size() != k) fail(Errc::BadArgument, "permutation size mismatch");
  for (int i = 0; i < k; ++i)
    if (std::fabs(w.weight(phi(i)) - w.weight(i)) > kWeightTol)
      fail(Errc::WeightMismatch, "permutation maps across unequal atom weights");
  std::vector<double> vals(static_cast<std::size_t>(k) * k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      vals[static_cast<std::size_t>(i) * k + j] = w.value(phi(i), phi(j));
  return StepGraphon::unchecked(w.weights(), std::move(vals), w.kind());
}

StepGraphon tensor_product(const StepGraphon& u, const StepGraphon& v) {
  const int ku = u.size(), kv = v.size();
  const int k = ku * kv;
  std::vector<double> wts(static_cast<std::size_t>(k));
  for (int i = 0; i < ku; ++i)
    for (int p = 0; p < kv; ++p)
      wts[static_cast<std::size_t>(i) * kv + p] = u.weight(i) * v.weight(p);
  std::vector<double> vals(static_cast<std::size_t>(k) * k);
  for (int i = 0; i < ku; ++i)
    for (int p = 0; p < kv; ++p)
      for (int j = 0; j < ku; ++j)
        for (int q = 0; q < kv; ++q)
          vals[static_cast<std::size_t>(i * kv + p) * k + (j * kv + q)] =
              u.value(i, j) * v.value(p, q);
  Kind kind = (u.kind() == Kind::graphon && v.kind() == Kind::graphon)
                  ? Kind::graphon
                  : Kind::kernel;
  // Weight products may drift off 1 by more than the strict tolerance;
  // renormalize through the factory.
  return make_step_graphon_flat(std::move(wts), std::move(vals), kind);
}

double edge_density(const StepGraphon& w) {
  const int k = w.size();
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(k) * k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      terms.push_back(w.weight(i) * w.weight(j) * w.value(i, j));
  std::sort(terms.begin(), terms.end());
  double s = 0.0;
  for (double t : terms) s += t;
  return s;
}

double degree(const StepGraphon& w, int atom) {
  double d = 0.0;
  for (int j = 0; j < w.size(); ++j) d += w.weight(j) * w.value(atom, j);
  return d;
}

std::vector<double> degrees(const StepGraphon& w) {
  std::vector<double> d(static_cast<std::size_t>(w.size()));
  for (int i = 0; i < w.size(); ++i) d[static_cast<std::size_t>(i)] = degree(w, i);
  return d;
}

namespace {

// Overlay of two boundary grids; duplicates within kWeightTol collapse.
std::vector<double> overlay_boundaries(const std::vector<double>& a,
                                       const std::vector<double>& b) {
  std::vector<double> merged;
  merged.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(merged));
  std::vector<double> out;
  out.reserve(merged.size());
  for (double x : merged)
    if (out.empty() || x - out.back() > kWeightTol) out.push_back(x);
  // Snap the final boundary to the exact total.
  out.back() = std::max(a.back(), b.back());
  return out;
}

}  // namespace

StepGraphon refine_to_boundaries(const StepGraphon& w,
                                 const std::vector<double>& boundaries) {
  const auto own = w.boundaries();
  const int m = static_cast<int>(boundaries.size()) - 1;
  std::vector<int> source(static_cast<std::size_t>(m));
  std::size_t oi = 0;
  for (int c = 0; c < m; ++c) {
    double mid = 0.5 * (boundaries[static_cast<std::size_t>(c)] +
                        boundaries[static_cast<std::size_t>(c) + 1]);
    while (oi + 2 < own.size() && own[oi + 1] <= mid) ++oi;
    source[static_cast<std::size_t>(c)] = static_cast<int>(oi);
  }
  std::vector<double> wts(static_cast<std::size_t>(m));
  for (int c = 0; c < m; ++c)
    wts[static_cast<std::size_t>(c)] = boundaries[static_cast<std::size_t>(c) + 1] -
                                       boundaries[static_cast<std::size_t>(c)];
  std::vector<double> vals(static_cast<std::size_t>(m) * m);
  for (int c = 0; c < m; ++c)
    for (int d = 0; d < m; ++d)
      vals[static_cast<std::size_t>(c) * m + d] =
          w.value(source[static_cast<std::size_t>(c)],
                  source[static_cast<std::size_t>(d)]);
  return StepGraphon::unchecked(std::move(wts), std::move(vals), w.kind());
}

std::pair<StepGraphon, StepGraphon> common_refinement(const StepGraphon& a,
                                                      const StepGraphon& b,
                                                      int max_atoms) {
  auto grid = overlay_boundaries(a.boundaries(), b.boundaries());
  const int m = static_cast<int>(grid.size()) - 1;
  if (m > max_atoms)
    fail(Errc::RefinementTooLarge,
         std::to_string(m) + " atoms exceeds cap " + std::to_string(max_atoms));
  return {refine_to_boundaries(a, grid), refine_to_boundaries(b, grid)};
}

std::optional<StepGraphon> to_uniform_cells(const StepGraphon& w,
                                            int max_cells) {
  const int k = w.size();
  for (int m = k; m <= max_cells; ++m) {
    bool ok = true;
    int total = 0;
    for (int i = 0; i < k && ok; ++i) {
      double c = w.weight(i) * m;
      int n = static_cast<int>(std::llround(c));
      if (n < 1 || std::fabs(c - n) > 1e-7) ok = false;
      total += n;
    }
    if (!ok || total != m) continue;
    std::vector<double> bounds;
    bounds.reserve(static_cast<std::size_t>(m) + 1);
    for (int c = 0; c <= m; ++c) bounds.push_back(static_cast<double>(c) / m);
    return refine_to_boundaries(w, bounds);
  }
  return std::nullopt;
}

StepGraphon block_diagonal_half(const StepGraphon& u, const StepGraphon& v) {
  const int ku = u.size(), kv = v.size();
  const int k = ku + kv;
  std::vector<double> wts;
  wts.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < ku; ++i) wts.push_back(u.weight(i) * 0.5);
  for (int i = 0; i < kv; ++i) wts.push_back(v.weight(i) * 0.5);
  std::vector<double> vals(static_cast<std::size_t>(k) * k, 0.0);
  for (int i = 0; i < ku; ++i)
    for (int j = 0; j < ku; ++j)
      vals[static_cast<std::size_t>(i) * k + j] = u.value(i, j);
  for (int i = 0; i < kv; ++i)
    for (int j = 0; j < kv; ++j)
      vals[static_cast<std::size_t>(ku + i) * k + (ku + j)] = v.value(i, j);
  Kind kind = (u.kind() == Kind::graphon && v.kind() == Kind::graphon)
                  ? Kind::graphon
                  : Kind::kernel;
  return StepGraphon::unchecked(std::move(wts), std::move(vals), kind);
}

bool same_weights(const StepGraphon& a, const StepGraphon& b, double tol) {
  if (a.size() != b.size()) return false;
  for (int i = 0; i < a.size(); ++i)
    if (std::fabs(a.weight(i) - b.weight(i)) > tol) return false;
  return true;
}

bool identical(const StepGraphon& a, const StepGraphon& b) {
  return a.size() == b.size() && a.weights() == b.weights() &&
         a.flat_values() == b.flat_values();
}

StepGraphon kernel_difference(const StepGraphon& a, const StepGraphon& b) {
  if (!same_weights(a, b)) fail(Errc::WeightMismatch, "different atom sequences");
  std::vector<double> vals(a.flat_values());
  const auto& bv = b.flat_values();
  for (std::size_t i = 0; i < vals.size(); ++i) vals[i] -= bv[i];
  return StepGraphon::unchecked(a.weights(), std::move(vals), Kind::kernel);
}

StepGraphon subtract_constant(const StepGraphon& w, double c) {
  std::vector<double> vals(w.flat_values());
  for (double& v : vals) v -= c;
  return StepGraphon::unchecked(w.weights(), std::move(vals), Kind::kernel);
}

StepGraphon scale_kernel(const StepGraphon& w, double c) {
  std::vector<double> vals(w.flat_values());
  for (double& v : vals) v *= c;
  Kind kind = w.kind();
  if (kind == Kind::graphon && (c < 0.0 || c > 1.0)) kind = Kind::kernel;
  return StepGraphon::unchecked(w.weights(), std::move(vals), kind);
}

StepGraphon abs_kernel(const StepGraphon& w) {
  std::vector<double> vals(w.flat_values());
  for (double& v : vals) v = std::fabs(v);
  return StepGraphon::unchecked(w.weights(), std::move(vals), w.kind());
}

StepGraphon average(const std::vector<StepGraphon>& ws) {
  if (ws.empty()) fail(Errc::BadArgument, "empty average");
  std::vector<double> vals(ws.front().flat_values().size(), 0.0);
  for (const auto& w : ws) {
    if (!same_weights(w, ws.front()))
      fail(Errc::WeightMismatch, "different atom sequences");
    const auto& v = w.flat_values();
    for (std::size_t i = 0; i < vals.size(); ++i) vals[i] += v[i];
  }
  const double inv = 1.0 / static_cast<double>(ws.size());
  for (double& v : vals) v *= inv;
  return StepGraphon::unchecked(ws.front().weights(), std::move(vals),
                                ws.front().kind());
}

double l1_norm(const StepGraphon& k) {
  double s = 0.0;
  for (int i = 0; i < k.size(); ++i)
    for (int j = 0; j < k.size(); ++j)
      s += k.weight(i) * k.weight(j) * std::fabs(k.value(i, j));
  return s;
}

double l1_distance(const StepGraphon& a, const StepGraphon& b) {
  if (!same_weights(a, b)) fail(Errc::WeightMismatch, "different atom sequences");
  double s = 0.0;
  for (int i = 0; i < a.size(); ++i)
    for (int j = 0; j < a.size(); ++j)
      s += a.weight(i) * a.weight(j) * std::fabs(a.value(i, j) - b.value(i, j));
  return s;
}

double linf_distance(const StepGraphon& a, const StepGraphon& b) {
  if (!same_weights(a, b)) fail(Errc::WeightMismatch, "different atom sequences");
  double s = 0.0;
  for (std::size_t i = 0; i < a.flat_values().size(); ++i)
    s = std::max(s, std::fabs(a.flat_values()[i] - b.flat_values()[i]));
  return s;
}

}  // namespace graphon
