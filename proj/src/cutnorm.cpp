#include "graphon/cutnorm.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

#include "graphon/core.hpp"
#include "graphon/error.hpp"
#include "graphon/parallel.hpp"
#include "graphon/rng.hpp"

namespace graphon {

namespace {

// Mass matrix M_ij = mu_i mu_j K_ij, row-major.
std::vector<double> mass_matrix(const StepGraphon& k) {
  const int n = k.size();
  std::vector<double> m(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      m[static_cast<std::size_t>(i) * n + j] =
          k.weight(i) * k.weight(j) * k.value(i, j);
  return m;
}

std::vector<int> mask_to_atoms(std::uint64_t mask, int n) {
  std::vector<int> out;
  for (int i = 0; i < n; ++i)
    if (mask >> i & 1) out.push_back(i);
  return out;
}

struct ExactBest {
  double value = -1.0;
  std::uint64_t s_mask = 0;
  int sign = 1;  // +1: T = positive columns, -1: T = negative columns
};

bool better(const ExactBest& a, const ExactBest& b) {
  if (a.value != b.value) return a.value > b.value;
  if (a.s_mask != b.s_mask) return a.s_mask < b.s_mask;
  return a.sign > b.sign;
}

// Scans all S in [block_begin, block_end) by Gray code over the low bits.
ExactBest exact_scan_block(const std::vector<double>& m, int n,
                           std::uint64_t block_begin, std::uint64_t block_end) {
  std::vector<double> col(static_cast<std::size_t>(n), 0.0);
  double pos = 0.0, neg = 0.0;
  std::uint64_t gray_prev = 0;  // Gray code of the previous rank

  auto flip_row = [&](int i, double dir) {
    const double* row = &m[static_cast<std::size_t>(i) * n];
    for (int j = 0; j < n; ++j) {
      double c = col[static_cast<std::size_t>(j)];
      pos -= std::max(c, 0.0);
      neg -= std::max(-c, 0.0);
      c += dir * row[j];
      col[static_cast<std::size_t>(j)] = c;
      pos += std::max(c, 0.0);
      neg += std::max(-c, 0.0);
    }
  };

  // Initialize at the Gray code of block_begin.
  std::uint64_t g0 = block_begin ^ (block_begin >> 1);
  for (int i = 0; i < n; ++i)
    if (g0 >> i & 1) flip_row(i, +1.0);
  gray_prev = g0;

  ExactBest best;
  for (std::uint64_t rank = block_begin; rank < block_end; ++rank) {
    std::uint64_t g = rank ^ (rank >> 1);
    if (rank != block_begin) {
      std::uint64_t changed = g ^ gray_prev;
      int bit = std::countr_zero(changed);
      flip_row(bit, (g >> bit & 1) ? +1.0 : -1.0);
      gray_prev = g;
    }
    // Evaluate both sign options with the deterministic tie-break.
    ExactBest cpos{pos, g, 1}, cneg{neg, g, -1};
    ExactBest cand = better(cpos, cneg) ? cpos : cneg;
    if (better(cand, best)) best = cand;
  }
  return best;
}

CutNormResult exact_cut_norm(const StepGraphon& kernel, int max_atoms) {
  const int n = kernel.size();
  if (n > max_atoms)
    fail(Errc::TooLargeForExact,
         std::to_string(n) + " atoms exceeds exact cap " + std::to_string(max_atoms));
  const auto m = mass_matrix(kernel);

  const std::uint64_t total = 1ULL << n;
  int block_bits = n >= 12 ? 6 : 0;
  const int blocks = 1 << block_bits;
  const std::uint64_t per = total >> block_bits;

  std::vector<ExactBest> results(static_cast<std::size_t>(blocks));
  par::run_blocks(blocks, [&](int b) {
    results[static_cast<std::size_t>(b)] =
        exact_scan_block(m, n, per * static_cast<std::uint64_t>(b),
                         per * static_cast<std::uint64_t>(b + 1));
  });
  ExactBest best;
  for (const auto& r : results)
    if (better(r, best)) best = r;

  // Rebuild the witness from the winning mask.
  CutNormResult out;
  out.exact = true;
  out.witness.s = mask_to_atoms(best.s_mask, n);
  double signed_value = 0.0;
  for (int j = 0; j < n; ++j) {
    double c = 0.0;
    for (int i : out.witness.s) c += m[static_cast<std::size_t>(i) * n + j];
    if (best.sign > 0 ? c > 0.0 : c < 0.0) {
      out.witness.t.push_back(j);
      signed_value += c;
    }
  }
  out.witness.value = signed_value;
  out.value = std::fabs(signed_value);
  return out;
}

CutNormResult heuristic_cut_norm(const StepGraphon& kernel,
                                 const CutNormOptions& opts) {
  const int n = kernel.size();
  const auto m = mass_matrix(kernel);
  Rng master(opts.seed);

  CutNormResult best;
  best.exact = false;
  for (int restart = 0; restart < std::max(1, opts.restarts); ++restart) {
    Rng rng = master.fork(static_cast<std::uint64_t>(restart));
    std::vector<char> in_s(static_cast<std::size_t>(n));
    for (auto& b : in_s) b = static_cast<char>(rng.uniform_int(2));

    double value = 0.0;
    std::vector<char> in_t(static_cast<std::size_t>(n), 0);
    for (int iter = 0; iter < 4 * n + 8; ++iter) {
      // T given S, trying both signs.
      std::vector<double> col(static_cast<std::size_t>(n), 0.0);
      for (int i = 0; i < n; ++i)
        if (in_s[static_cast<std::size_t>(i)])
          for (int j = 0; j < n; ++j)
            col[static_cast<std::size_t>(j)] += m[static_cast<std::size_t>(i) * n + j];
      double pos = 0.0, neg = 0.0;
      for (double c : col) {
        pos += std::max(c, 0.0);
        neg += std::max(-c, 0.0);
      }
      double dir = pos >= neg ? 1.0 : -1.0;
      for (int j = 0; j < n; ++j)
        in_t[static_cast<std::size_t>(j)] = dir * col[static_cast<std::size_t>(j)] > 0.0;
      // S given T (m is symmetric, so reuse column logic on rows).
      std::vector<double> rowsum(static_cast<std::size_t>(n), 0.0);
      for (int j = 0; j < n; ++j)
        if (in_t[static_cast<std::size_t>(j)])
          for (int i = 0; i < n; ++i)
            rowsum[static_cast<std::size_t>(i)] += m[static_cast<std::size_t>(i) * n + j];
      bool changed = false;
      double new_value = 0.0;
      for (int i = 0; i < n; ++i) {
        char want = dir * rowsum[static_cast<std::size_t>(i)] > 0.0;
        if (want != in_s[static_cast<std::size_t>(i)]) changed = true;
        in_s[static_cast<std::size_t>(i)] = want;
        if (want) new_value += rowsum[static_cast<std::size_t>(i)];
      }
      value = std::fabs(new_value);
      if (!changed) break;
    }
    if (value > best.value + 1e-15) {
      best.value = value;
      best.witness.s.clear();
      best.witness.t.clear();
      for (int i = 0; i < n; ++i)
        if (in_s[static_cast<std::size_t>(i)]) best.witness.s.push_back(i);
      for (int j = 0; j < n; ++j)
        if (in_t[static_cast<std::size_t>(j)]) best.witness.t.push_back(j);
      double sv = 0.0;
      for (int i : best.witness.s)
        for (int j : best.witness.t) sv += m[static_cast<std::size_t>(i) * n + j];
      best.witness.value = sv;
      best.value = std::fabs(sv);
    }
  }
  return best;
}

}  // namespace

CutNormResult cut_norm(const StepGraphon& kernel, const CutNormOptions& opts) {
  switch (opts.strategy) {
    case CutNormStrategy::exact:
      return exact_cut_norm(kernel, opts.exact_max_atoms);
    case CutNormStrategy::heuristic:
      return heuristic_cut_norm(kernel, opts);
    case CutNormStrategy::automatic:
      if (kernel.size() <= opts.exact_max_atoms)
        return exact_cut_norm(kernel, opts.exact_max_atoms);
      return heuristic_cut_norm(kernel, opts);
  }
  fail(Errc::BadArgument, "unknown strategy");
}

namespace {

// A = D^{1/2} V D^{1/2}; t(C_k, K) = trace(A^k).
std::vector<double> scaled_matrix(const StepGraphon& k) {
  const int n = k.size();
  std::vector<double> a(static_cast<std::size_t>(n) * n);
  std::vector<double> sq(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) sq[static_cast<std::size_t>(i)] = std::sqrt(k.weight(i));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      a[static_cast<std::size_t>(i) * n + j] =
          sq[static_cast<std::size_t>(i)] * sq[static_cast<std::size_t>(j)] * k.value(i, j);
  return a;
}

std::vector<double> mat_mul(const std::vector<double>& a,
                            const std::vector<double>& b, int n) {
  std::vector<double> c(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int l = 0; l < n; ++l) {
      double ail = a[static_cast<std::size_t>(i) * n + l];
      if (ail == 0.0) continue;
      const double* brow = &b[static_cast<std::size_t>(l) * n];
      double* crow = &c[static_cast<std::size_t>(i) * n];
      for (int j = 0; j < n; ++j) crow[j] += ail * brow[j];
    }
  return c;
}

double frobenius_sq(const std::vector<double>& a) {
  double s = 0.0;
  for (double x : a) s += x * x;
  return s;
}

}  // namespace

double c4_density_trace(const StepGraphon& kernel) {
  const int n = kernel.size();
  auto a = scaled_matrix(kernel);
  auto a2 = mat_mul(a, a, n);
  return frobenius_sq(a2);  // trace(A^4)
}

double c6_density_trace(const StepGraphon& kernel) {
  const int n = kernel.size();
  auto a = scaled_matrix(kernel);
  auto a2 = mat_mul(a, a, n);
  auto a3 = mat_mul(a2, a, n);
  return frobenius_sq(a3);  // trace(A^6)
}

double cut_norm_upper(const StepGraphon& kernel, int exact_max_atoms) {
  if (kernel.size() <= exact_max_atoms) {
    CutNormOptions o;
    o.strategy = CutNormStrategy::exact;
    o.exact_max_atoms = exact_max_atoms;
    return cut_norm(kernel, o).value;
  }
  double l1 = l1_norm(kernel);
  double c4 = std::max(c4_density_trace(kernel), 0.0);
  double cert = std::pow(c4, 0.25);
  // The C4 route needs ||K||_inf <= 1; rescale otherwise.
  if (kernel.bound() > 1.0) {
    double b = kernel.bound();
    cert = b * std::pow(std::max(c4_density_trace(scale_kernel(kernel, 1.0 / b)), 0.0), 0.25);
  }
  return std::min(l1, cert);
}

// ---------------------------------------------------------------------------
// Disjoint witness

namespace {

struct SplitKernel {
  StepGraphon refined;
  std::vector<int> s;  // refined indices of S
  std::vector<int> t;  // refined indices of T
  std::vector<int> a_seed;  // forced A members (left halves of overlaps)
  std::vector<int> b_seed;  // forced B members (right halves)
};

// Bisects every atom that lies in both S and T; left half keeps membership
// bookkeeping for A, right half for B.
SplitKernel split_overlaps(const StepGraphon& k, const std::vector<int>& s,
                           const std::vector<int>& t) {
  const int n = k.size();
  std::vector<char> in_s(static_cast<std::size_t>(n), 0), in_t(static_cast<std::size_t>(n), 0);
  for (int i : s) in_s[static_cast<std::size_t>(i)] = 1;
  for (int j : t) in_t[static_cast<std::size_t>(j)] = 1;

  std::vector<double> wts;
  std::vector<int> source;
  std::vector<int> half;  // 0 = whole atom, 1 = left half, 2 = right half
  for (int i = 0; i < n; ++i) {
    if (in_s[static_cast<std::size_t>(i)] && in_t[static_cast<std::size_t>(i)]) {
      wts.push_back(k.weight(i) / 2);
      source.push_back(i);
      half.push_back(1);
      wts.push_back(k.weight(i) / 2);
      source.push_back(i);
      half.push_back(2);
    } else {
      wts.push_back(k.weight(i));
      source.push_back(i);
      half.push_back(0);
    }
  }
  const int m = static_cast<int>(wts.size());
  std::vector<double> vals(static_cast<std::size_t>(m) * m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      vals[static_cast<std::size_t>(a) * m + b] =
          k.value(source[static_cast<std::size_t>(a)], source[static_cast<std::size_t>(b)]);
  SplitKernel out;
  out.refined = StepGraphon::unchecked(std::move(wts), std::move(vals), Kind::kernel);
  for (int a = 0; a < m; ++a) {
    int src = source[static_cast<std::size_t>(a)];
    bool overlap = in_s[static_cast<std::size_t>(src)] && in_t[static_cast<std::size_t>(src)];
    if (overlap) {
      if (half[static_cast<std::size_t>(a)] == 1) out.a_seed.push_back(a);
      else out.b_seed.push_back(a);
      out.s.push_back(a);
      out.t.push_back(a);
    } else {
      if (in_s[static_cast<std::size_t>(src)]) out.s.push_back(a);
      if (in_t[static_cast<std::size_t>(src)]) out.t.push_back(a);
    }
  }
  return out;
}

double box_integral(const std::vector<double>& m, int n, const std::vector<int>& a,
                    const std::vector<int>& b) {
  double v = 0.0;
  for (int i : a)
    for (int j : b) v += m[static_cast<std::size_t>(i) * n + j];
  return v;
}

}  // namespace

DisjointWitness disjoint_witness(const StepGraphon& kernel,
                                 const CutNormOptions& opts) {
  CutNormResult cn = cut_norm(kernel, opts);
  DisjointWitness out;
  out.box_norm = cn.value;

  std::vector<char> in_t(static_cast<std::size_t>(kernel.size()), 0);
  for (int j : cn.witness.t) in_t[static_cast<std::size_t>(j)] = 1;
  bool overlap = false;
  for (int i : cn.witness.s)
    if (in_t[static_cast<std::size_t>(i)]) overlap = true;

  if (!overlap) {
    out.refined = kernel;
    out.a = cn.witness.s;
    out.b = cn.witness.t;
    const auto m = mass_matrix(kernel);
    out.value = box_integral(m, kernel.size(), out.a, out.b);
    return out;
  }

  SplitKernel sk = split_overlaps(kernel, cn.witness.s, cn.witness.t);
  const int n = sk.refined.size();
  const auto m = mass_matrix(sk.refined);
  const double sign = cn.witness.value >= 0 ? 1.0 : -1.0;

  // Membership probabilities: overlap halves are fixed (left -> A,
  // right -> B); exclusive atoms start as fair coins and are fixed one at a
  // time by conditional expectation of sign * integral(A x B).
  std::vector<char> in_s(static_cast<std::size_t>(n), 0), in_t2(static_cast<std::size_t>(n), 0);
  for (int i : sk.s) in_s[static_cast<std::size_t>(i)] = 1;
  for (int j : sk.t) in_t2[static_cast<std::size_t>(j)] = 1;
  std::vector<double> pa(static_cast<std::size_t>(n), 0.0);  // P(atom in A)
  std::vector<double> pb(static_cast<std::size_t>(n), 0.0);  // P(atom in B)
  std::vector<int> free_atoms;
  for (int i = 0; i < n; ++i) {
    bool s_only = in_s[static_cast<std::size_t>(i)] && !in_t2[static_cast<std::size_t>(i)];
    bool t_only = in_t2[static_cast<std::size_t>(i)] && !in_s[static_cast<std::size_t>(i)];
    if (s_only || t_only) {
      pa[static_cast<std::size_t>(i)] = s_only ? 0.5 : 0.0;
      pb[static_cast<std::size_t>(i)] = t_only ? 0.5 : 0.0;
      free_atoms.push_back(i);
    }
  }
  for (int i : sk.a_seed) pa[static_cast<std::size_t>(i)] = 1.0;
  for (int j : sk.b_seed) pb[static_cast<std::size_t>(j)] = 1.0;

  // E[sign * integral] = sign * sum_ij pa_i pb_j M_ij; fixing one coin is a
  // linear decision. An S-only coin x couples pa_x; a T-only coin couples
  // pb_x (in B iff the coin says "not in R").
  for (int x : free_atoms) {
    bool s_only = in_s[static_cast<std::size_t>(x)] != 0;
    double grad = 0.0;
    for (int j = 0; j < n; ++j) {
      if (s_only)
        grad += pb[static_cast<std::size_t>(j)] * m[static_cast<std::size_t>(x) * n + j];
      else
        grad += pa[static_cast<std::size_t>(j)] * m[static_cast<std::size_t>(j) * n + x];
    }
    grad *= sign;
    if (s_only)
      pa[static_cast<std::size_t>(x)] = grad > 0.0 ? 1.0 : 0.0;
    else
      pb[static_cast<std::size_t>(x)] = grad > 0.0 ? 1.0 : 0.0;
  }

  std::vector<char> a_mem(static_cast<std::size_t>(n), 0), b_mem(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i) {
    a_mem[static_cast<std::size_t>(i)] = pa[static_cast<std::size_t>(i)] == 1.0;
    b_mem[static_cast<std::size_t>(i)] = pb[static_cast<std::size_t>(i)] == 1.0;
  }

  // Alternating ascent over all atoms, keeping A and B disjoint.
  for (int round = 0; round < 8; ++round) {
    bool changed = false;
    std::vector<double> colb(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i)
      if (a_mem[static_cast<std::size_t>(i)])
        for (int j = 0; j < n; ++j)
          colb[static_cast<std::size_t>(j)] += m[static_cast<std::size_t>(i) * n + j];
    for (int j = 0; j < n; ++j) {
      if (a_mem[static_cast<std::size_t>(j)]) continue;
      char want = sign * colb[static_cast<std::size_t>(j)] > 0.0;
      if (want != b_mem[static_cast<std::size_t>(j)]) changed = true;
      b_mem[static_cast<std::size_t>(j)] = want;
    }
    std::vector<double> rowa(static_cast<std::size_t>(n), 0.0);
    for (int j = 0; j < n; ++j)
      if (b_mem[static_cast<std::size_t>(j)])
        for (int i = 0; i < n; ++i)
          rowa[static_cast<std::size_t>(i)] += m[static_cast<std::size_t>(i) * n + j];
    for (int i = 0; i < n; ++i) {
      if (b_mem[static_cast<std::size_t>(i)]) continue;
      char want = sign * rowa[static_cast<std::size_t>(i)] > 0.0;
      if (want != a_mem[static_cast<std::size_t>(i)]) changed = true;
      a_mem[static_cast<std::size_t>(i)] = want;
    }
    if (!changed) break;
  }

  out.refined = sk.refined;
  for (int i = 0; i < n; ++i) {
    if (a_mem[static_cast<std::size_t>(i)]) out.a.push_back(i);
    if (b_mem[static_cast<std::size_t>(i)]) out.b.push_back(i);
  }
  out.value = box_integral(m, n, out.a, out.b);
  return out;
}

// ---------------------------------------------------------------------------
// Cut distance bounds

namespace {

double counting_lower(const StepGraphon& a, const StepGraphon& b) {
  double lower = std::fabs(edge_density(a) - edge_density(b));
  lower = std::max(lower, std::fabs(c4_density_trace(a) - c4_density_trace(b)) / 16.0);
  lower = std::max(lower, std::fabs(c6_density_trace(a) - c6_density_trace(b)) / 24.0);
  return lower;
}

// Weight classes (atoms of equal weight) of a refined graphon.
std::vector<std::vector<int>> weight_classes(const StepGraphon& g) {
  std::vector<int> order(static_cast<std::size_t>(g.size()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
    return g.weight(x) < g.weight(y);
  });
  std::vector<std::vector<int>> classes;
  for (int idx : order) {
    if (classes.empty() ||
        std::fabs(g.weight(classes.back().back()) - g.weight(idx)) > kWeightTol)
      classes.emplace_back();
    classes.back().push_back(idx);
  }
  return classes;
}

void enumerate_class_perms(const std::vector<std::vector<int>>& classes,
                           std::size_t ci, std::vector<int>& perm,
                           const std::function<void(const std::vector<int>&)>& emit,
                           long long& budget) {
  if (budget <= 0) return;
  if (ci == classes.size()) {
    --budget;
    emit(perm);
    return;
  }
  std::vector<int> targets = classes[ci];
  std::sort(targets.begin(), targets.end());
  do {
    for (std::size_t p = 0; p < targets.size(); ++p)
      perm[static_cast<std::size_t>(classes[ci][p])] = targets[p];
    enumerate_class_perms(classes, ci + 1, perm, emit, budget);
    if (budget <= 0) return;
  } while (std::next_permutation(targets.begin(), targets.end()));
}

// Degree-profile greedy matching candidate: within each weight class, match
// a-atoms to b-atoms by degree rank.
std::vector<int> profile_match(const StepGraphon& a, const StepGraphon& b) {
  auto ca = weight_classes(a);
  auto cb = weight_classes(b);
  std::vector<int> perm(static_cast<std::size_t>(a.size()));
  std::iota(perm.begin(), perm.end(), 0);
  if (ca.size() != cb.size()) return perm;
  auto da = degrees(a);
  auto db = degrees(b);
  for (std::size_t c = 0; c < ca.size(); ++c) {
    if (ca[c].size() != cb[c].size()) return perm;
    auto sa = ca[c], sb = cb[c];
    std::stable_sort(sa.begin(), sa.end(), [&](int x, int y) {
      return da[static_cast<std::size_t>(x)] < da[static_cast<std::size_t>(y)];
    });
    std::stable_sort(sb.begin(), sb.end(), [&](int x, int y) {
      return db[static_cast<std::size_t>(x)] < db[static_cast<std::size_t>(y)];
    });
    // b atom sb[r] should see a atom sa[r]: perm[sb[r]] = sa[r].
    for (std::size_t r = 0; r < sa.size(); ++r)
      perm[static_cast<std::size_t>(sb[r])] = sa[r];
  }
  return perm;
}

double l1_of_perm(const StepGraphon& a, const StepGraphon& b,
                  const std::vector<int>& perm) {
  double s = 0.0;
  const int n = a.size();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      s += b.weight(i) * b.weight(j) *
           std::fabs(a.value(perm[static_cast<std::size_t>(i)],
                             perm[static_cast<std::size_t>(j)]) -
                     b.value(i, j));
  return s;
}

}  // namespace

DistanceBounds cut_distance_bounds(const StepGraphon& u, const StepGraphon& w,
                                   const DistanceBoundsOptions& opts) {
  auto [a, b] = common_refinement(u, w, opts.refinement_cap);
  const int n = a.size();

  DistanceBounds out;
  out.lower = counting_lower(a, b);
  out.refined_a = a;
  out.refined_b = b;

  CutNormOptions cno;
  cno.exact_max_atoms = opts.exact_cutnorm_atoms;
  auto upper_of = [&](const std::vector<int>& perm) {
    StepGraphon av = apply_version(a, AtomPermutation(std::vector<int>(perm)));
    return cut_norm_upper(kernel_difference(av, b), opts.exact_cutnorm_atoms);
  };

  std::vector<std::vector<int>> candidates;
  {
    std::vector<int> ident(static_cast<std::size_t>(n));
    std::iota(ident.begin(), ident.end(), 0);
    candidates.push_back(ident);
    candidates.push_back(profile_match(a, b));
  }

  if (n <= opts.exact_perm_atoms) {
    // Full enumeration of equal-weight permutations, cheapest L1 first so the
    // scan can stop as soon as the certified lower bound is met.
    auto classes = weight_classes(a);
    std::vector<std::vector<int>> all;
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    long long budget = 50000;
    enumerate_class_perms(classes, 0, perm,
                          [&](const std::vector<int>& p) { all.push_back(p); },
                          budget);
    std::stable_sort(all.begin(), all.end(),
                     [&](const std::vector<int>& x, const std::vector<int>& y) {
                       return l1_of_perm(a, b, x) < l1_of_perm(a, b, y);
                     });
    double best = -1.0;
    std::vector<int> best_perm;
    for (const auto& p : all) {
      double v = upper_of(p);
      if (best < 0.0 || v < best) {
        best = v;
        best_perm = p;
        if (best <= out.lower + 1e-15) break;  // cannot improve further
      }
    }
    out.upper = best;
    out.upper_certificate = AtomPermutation(best_perm);
  } else {
    // Seeded local search minimizing the L1 proxy; certify the best few.
    Rng master(opts.seed);
    auto classes = weight_classes(a);
    std::vector<std::pair<double, std::vector<int>>> pool;
    auto consider = [&](std::vector<int> p) {
      pool.emplace_back(l1_of_perm(a, b, p), std::move(p));
    };
    for (auto& c : candidates) consider(c);
    for (int r = 0; r < opts.restarts; ++r) {
      Rng rng = master.fork(static_cast<std::uint64_t>(r));
      std::vector<int> p(static_cast<std::size_t>(n));
      std::iota(p.begin(), p.end(), 0);
      for (auto& cls : classes) {
        std::vector<int> shuffled = cls;
        rng.shuffle(shuffled);
        for (std::size_t i = 0; i < cls.size(); ++i)
          p[static_cast<std::size_t>(cls[i])] = shuffled[i];
      }
      // Swap descent within weight classes on the L1 objective.
      double cur = l1_of_perm(a, b, p);
      bool improved = true;
      while (improved) {
        improved = false;
        for (const auto& cls : classes)
          for (std::size_t x = 0; x < cls.size(); ++x)
            for (std::size_t y = x + 1; y < cls.size(); ++y) {
              std::swap(p[static_cast<std::size_t>(cls[x])],
                        p[static_cast<std::size_t>(cls[y])]);
              double val = l1_of_perm(a, b, p);
              if (val < cur - 1e-15) {
                cur = val;
                improved = true;
              } else {
                std::swap(p[static_cast<std::size_t>(cls[x])],
                          p[static_cast<std::size_t>(cls[y])]);
              }
            }
      }
      consider(std::move(p));
    }
    std::stable_sort(pool.begin(), pool.end(),
                     [](const auto& x, const auto& y) { return x.first < y.first; });
    double best = -1.0;
    std::vector<int> best_perm;
    std::size_t tried = 0;
    for (const auto& [l1, p] : pool) {
      if (tried++ >= 16) break;
      double v = upper_of(p);
      if (best < 0.0 || v < best) {
        best = v;
        best_perm = p;
      }
    }
    out.upper = best;
    out.upper_certificate = AtomPermutation(best_perm);
  }

  // A certified lower bound can never exceed a certified upper bound; clamp
  // away float dust so downstream assertions stay simple.
  out.lower = std::min(out.lower, out.upper);
  return out;
}

// ---------------------------------------------------------------------------
// Weak* test metric

double weakstar_distance(const StepGraphon& u, const StepGraphon& w, int depth) {
  if (depth < 0) fail(Errc::BadArgument, "negative depth");
  auto [a, b] = common_refinement(u, w);
  StepGraphon diff = kernel_difference(a, b);
  const int n = diff.size();
  auto bounds = diff.boundaries();

  struct Interval {
    double lo, hi, weight;
  };
  std::vector<Interval> family;
  for (int j = 0; j <= depth; ++j) {
    double width = std::ldexp(1.0, -j);
    for (int aidx = 0; aidx < (1 << j); ++aidx)
      family.push_back({aidx * width, (aidx + 1) * width,
                        std::ldexp(1.0, -(j + aidx + 1))});
  }

  // Overlap masses of each interval with each atom.
  std::vector<std::vector<double>> overlap(family.size(),
                                           std::vector<double>(static_cast<std::size_t>(n), 0.0));
  for (std::size_t f = 0; f < family.size(); ++f)
    for (int i = 0; i < n; ++i) {
      double lo = std::max(family[f].lo, bounds[static_cast<std::size_t>(i)]);
      double hi = std::min(family[f].hi, bounds[static_cast<std::size_t>(i) + 1]);
      if (hi > lo) overlap[f][static_cast<std::size_t>(i)] = hi - lo;
    }

  double total = 0.0;
  std::vector<double> tmp(static_cast<std::size_t>(n));
  for (std::size_t f2 = 0; f2 < family.size(); ++f2) {
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int j = 0; j < n; ++j)
        s += diff.value(i, j) * overlap[f2][static_cast<std::size_t>(j)];
      tmp[static_cast<std::size_t>(i)] = s;
    }
    for (std::size_t f1 = 0; f1 < family.size(); ++f1) {
      double integral = 0.0;
      for (int i = 0; i < n; ++i)
        integral += overlap[f1][static_cast<std::size_t>(i)] * tmp[static_cast<std::size_t>(i)];
      total += family[f1].weight * family[f2].weight * std::fabs(integral);
    }
  }
  return total;
}

}  // namespace graphon
