#include "graphon/density.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "graphon/core.hpp"
#include "graphon/error.hpp"
#include "graphon/graphs.hpp"
#include "graphon/parallel.hpp"
#include "graphon/rng.hpp"

namespace graphon {

namespace {

// Edge value matrices, one per edge of H (all views into the labels or the
// single graphon W).
struct EdgeTables {
  const SimpleGraph* h;
  std::vector<const StepGraphon*> per_edge;
  const StepGraphon* weights_from;
};

double brute_force_density(const EdgeTables& tabs) {
  const SimpleGraph& h = *tabs.h;
  const StepGraphon& w0 = *tabs.weights_from;
  const int nv = h.vertex_count();
  const int k = w0.size();

  // BFS-ish order so each vertex sees placed neighbours early (better
  // pruning); components appended one after another.
  std::vector<int> order;
  {
    std::vector<char> seen(static_cast<std::size_t>(nv), 0);
    std::vector<int> by_degree(static_cast<std::size_t>(nv));
    std::iota(by_degree.begin(), by_degree.end(), 0);
    std::stable_sort(by_degree.begin(), by_degree.end(), [&](int x, int y) {
      return h.degree(x) > h.degree(y);
    });
    for (int root : by_degree) {
      if (seen[static_cast<std::size_t>(root)]) continue;
      std::vector<int> queue{root};
      seen[static_cast<std::size_t>(root)] = 1;
      for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        int v = queue[qi];
        order.push_back(v);
        for (int u : h.adjacency()[static_cast<std::size_t>(v)])
          if (!seen[static_cast<std::size_t>(u)]) {
            seen[static_cast<std::size_t>(u)] = 1;
            queue.push_back(u);
          }
      }
    }
  }
  std::vector<int> pos_of(static_cast<std::size_t>(nv));
  for (int p = 0; p < nv; ++p) pos_of[static_cast<std::size_t>(order[static_cast<std::size_t>(p)])] = p;

  // For each position, the edges to earlier positions.
  struct Back {
    int earlier_pos;
    const StepGraphon* mat;
  };
  std::vector<std::vector<Back>> back(static_cast<std::size_t>(nv));
  for (int e = 0; e < h.edge_count(); ++e) {
    auto [u, v] = h.edges()[static_cast<std::size_t>(e)];
    int pu = pos_of[static_cast<std::size_t>(u)], pv = pos_of[static_cast<std::size_t>(v)];
    if (pu > pv) std::swap(pu, pv);
    back[static_cast<std::size_t>(pv)].push_back({pu, tabs.per_edge[static_cast<std::size_t>(e)]});
  }

  std::vector<double> branch(static_cast<std::size_t>(k), 0.0);
  par::run_blocks(k, [&](int first_block) {
    std::vector<int> assign(static_cast<std::size_t>(nv), 0);
    double acc = 0.0;
    // Depth-first product accumulation with zero pruning.
    auto rec = [&](auto&& self, int pos, double prod) -> void {
      if (pos == nv) {
        acc += prod;
        return;
      }
      int lo = 0, hi = k;
      if (pos == 0) {
        lo = first_block;
        hi = first_block + 1;
      }
      for (int b = lo; b < hi; ++b) {
        double p = prod * w0.weight(b);
        for (const Back& bk : back[static_cast<std::size_t>(pos)]) {
          p *= bk.mat->value(b, assign[static_cast<std::size_t>(bk.earlier_pos)]);
          if (p == 0.0) break;
        }
        if (p == 0.0) continue;
        assign[static_cast<std::size_t>(pos)] = b;
        self(self, pos + 1, p);
      }
    };
    rec(rec, 0, 1.0);
    branch[static_cast<std::size_t>(first_block)] = acc;
  });
  double total = 0.0;
  for (double b : branch) total += b;
  return total;
}

struct Factor {
  std::vector<int> vars;          // ascending vertex ids
  std::vector<double> table;      // little-endian mixed radix, radix k
};

double elimination_density(const EdgeTables& tabs, double budget) {
  const SimpleGraph& h = *tabs.h;
  const StepGraphon& w0 = *tabs.weights_from;
  const int nv = h.vertex_count();
  const int k = w0.size();

  std::vector<Factor> factors;
  for (int e = 0; e < h.edge_count(); ++e) {
    auto [u, v] = h.edges()[static_cast<std::size_t>(e)];
    Factor f;
    f.vars = {std::min(u, v), std::max(u, v)};
    f.table.resize(static_cast<std::size_t>(k) * k);
    const StepGraphon* m = tabs.per_edge[static_cast<std::size_t>(e)];
    // Symmetric matrices, so the edge orientation is immaterial.
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b)
        f.table[static_cast<std::size_t>(b) * k + a] = m->value(a, b);
    factors.push_back(std::move(f));
  }

  double scalars = 1.0;
  double spent = 0.0;
  std::vector<char> alive(static_cast<std::size_t>(nv), 1);

  auto scope_of = [&](int v) {
    std::vector<int> scope;
    for (const Factor& f : factors)
      if (std::find(f.vars.begin(), f.vars.end(), v) != f.vars.end())
        for (int x : f.vars)
          if (std::find(scope.begin(), scope.end(), x) == scope.end())
            scope.push_back(x);
    if (scope.empty()) scope.push_back(v);
    std::sort(scope.begin(), scope.end());
    return scope;
  };

  for (int step = 0; step < nv; ++step) {
    // Pick the live vertex whose elimination touches the smallest scope.
    int best_v = -1;
    std::size_t best_size = 0;
    for (int v = 0; v < nv; ++v) {
      if (!alive[static_cast<std::size_t>(v)]) continue;
      std::size_t s = scope_of(v).size();
      if (best_v < 0 || s < best_size) {
        best_v = v;
        best_size = s;
      }
    }
    int v = best_v;
    alive[static_cast<std::size_t>(v)] = 0;

    std::vector<int> scope = scope_of(v);
    std::vector<Factor> touched, rest;
    for (Factor& f : factors) {
      if (std::find(f.vars.begin(), f.vars.end(), v) != f.vars.end())
        touched.push_back(std::move(f));
      else
        rest.push_back(std::move(f));
    }
    factors = std::move(rest);

    double cost = static_cast<double>(touched.size() + 2);
    for (std::size_t i = 0; i < scope.size(); ++i) cost *= k;
    spent += cost;
    if (spent > budget)
      fail(Errc::ComplexityCap, "elimination cost exceeds budget");

    std::vector<int> out_vars;
    for (int x : scope)
      if (x != v) out_vars.push_back(x);

    std::size_t out_size = 1;
    for (std::size_t i = 0; i < out_vars.size(); ++i) out_size *= static_cast<std::size_t>(k);
    Factor nf;
    nf.vars = out_vars;
    nf.table.assign(out_size, 0.0);

    // Strides of each scope variable inside each touched factor and in the
    // output table.
    std::vector<std::vector<std::size_t>> strides(touched.size(),
                                                  std::vector<std::size_t>(scope.size(), 0));
    for (std::size_t t = 0; t < touched.size(); ++t) {
      std::size_t s = 1;
      for (int var : touched[t].vars) {
        auto it = std::find(scope.begin(), scope.end(), var);
        strides[t][static_cast<std::size_t>(it - scope.begin())] = s;
        s *= static_cast<std::size_t>(k);
      }
    }
    std::vector<std::size_t> out_stride(scope.size(), 0);
    {
      std::size_t s = 1;
      for (int var : out_vars) {
        auto it = std::find(scope.begin(), scope.end(), var);
        out_stride[static_cast<std::size_t>(it - scope.begin())] = s;
        s *= static_cast<std::size_t>(k);
      }
    }
    std::size_t v_pos = static_cast<std::size_t>(
        std::find(scope.begin(), scope.end(), v) - scope.begin());

    std::vector<int> digits(scope.size(), 0);
    std::size_t total = 1;
    for (std::size_t i = 0; i < scope.size(); ++i) total *= static_cast<std::size_t>(k);
    for (std::size_t flat = 0; flat < total; ++flat) {
      double prod = w0.weight(digits[v_pos]);
      for (std::size_t t = 0; t < touched.size() && prod != 0.0; ++t) {
        std::size_t idx = 0;
        for (std::size_t d = 0; d < scope.size(); ++d)
          idx += strides[t][d] * static_cast<std::size_t>(digits[d]);
        prod *= touched[t].table[idx];
      }
      if (prod != 0.0) {
        std::size_t oidx = 0;
        for (std::size_t d = 0; d < scope.size(); ++d)
          oidx += out_stride[d] * static_cast<std::size_t>(digits[d]);
        nf.table[oidx] += prod;
      }
      // Increment mixed-radix digits.
      for (std::size_t d = 0; d < scope.size(); ++d) {
        if (++digits[d] < k) break;
        digits[d] = 0;
      }
    }

    if (nf.vars.empty())
      scalars *= nf.table[0];
    else
      factors.push_back(std::move(nf));
  }
  for (const Factor& f : factors) scalars *= f.table.empty() ? 1.0 : f.table[0];
  return scalars;
}

double density_impl(const EdgeTables& tabs, const DensityOptions& opts) {
  const int nv = tabs.h->vertex_count();
  const int k = tabs.weights_from->size();
  if (nv < 1) fail(Errc::BadArgument, "pattern graph needs vertices");

  double brute_cost = static_cast<double>(std::max(1, tabs.h->edge_count()));
  for (int i = 0; i < nv; ++i) {
    brute_cost *= k;
    if (brute_cost > 1e18) break;
  }
  if (opts.force_bruteforce) {
    if (brute_cost > opts.budget)
      fail(Errc::ComplexityCap, "brute force exceeds budget");
    return brute_force_density(tabs);
  }
  if (nv <= 8 && brute_cost <= 2e7) return brute_force_density(tabs);
  return elimination_density(tabs, opts.budget);
}

}  // namespace

double hom_density(const SimpleGraph& h, const StepGraphon& w,
                   const DensityOptions& opts) {
  EdgeTables tabs;
  tabs.h = &h;
  tabs.weights_from = &w;
  tabs.per_edge.assign(static_cast<std::size_t>(h.edge_count()), &w);
  return density_impl(tabs, opts);
}

double decorated_density(const Decoration& d, const DensityOptions& opts) {
  if (static_cast<int>(d.labels.size()) != d.graph.edge_count())
    fail(Errc::LabelMismatch, "one label per edge required");
  if (d.labels.empty()) return 1.0;
  for (const auto& l : d.labels)
    if (!same_weights(l, d.labels.front()))
      fail(Errc::LabelMismatch, "labels on different atom sequences");
  EdgeTables tabs;
  tabs.h = &d.graph;
  tabs.weights_from = &d.labels.front();
  tabs.per_edge.clear();
  for (const auto& l : d.labels) tabs.per_edge.push_back(&l);
  return density_impl(tabs, opts);
}

GraphNormValue graph_norm(const SimpleGraph& h, const StepGraphon& w, bool weak) {
  if (h.edge_count() < 1) fail(Errc::BadArgument, "norm needs e(H) >= 1");
  double t = weak ? hom_density(h, abs_kernel(w)) : hom_density(h, w);
  return {h, std::pow(std::fabs(t), 1.0 / h.edge_count())};
}

double star_density_via_degrees(int l, const StepGraphon& w) {
  if (l < 1) fail(Errc::BadArgument, "star arm count must be >= 1");
  double s = 0.0;
  for (int i = 0; i < w.size(); ++i) {
    double d = degree(w, i);
    double p = 1.0;
    for (int q = 0; q < l; ++q) p *= d;
    s += w.weight(i) * p;
  }
  return s;
}

double hbar(const SimpleGraph& h, double x) {
  if (!(x > 0.0)) fail(Errc::BadArgument, "hbar needs x > 0");
  int len = graphs::shortest_even_cycle(h);
  if (len == 0) fail(Errc::NoEvenCycle, "pattern has no even cycle");
  int k = len / 2;
  double exponent = std::ldexp(1.0, k) * h.edge_count() / static_cast<double>(len);
  return std::pow(x, exponent);
}

HolderReport holder_check(const Decoration& d, double tol) {
  const int e = d.graph.edge_count();
  if (e < 1) fail(Errc::BadArgument, "needs e(H) >= 1");
  HolderReport r;
  double t = decorated_density(d);
  r.lhs = std::pow(t, e);
  r.rhs = 1.0;
  for (const auto& l : d.labels) r.rhs *= hom_density(d.graph, l);
  r.slack = r.lhs - r.rhs;
  r.violated = r.slack > tol;
  return r;
}

namespace {

StepGraphon random_label(Rng& rng, int atoms) {
  // Random weights (floored away from zero) and iid uniform values.
  std::vector<double> w(static_cast<std::size_t>(atoms));
  double sum = 0.0;
  for (auto& x : w) {
    x = 0.1 + rng.uniform01();
    sum += x;
  }
  for (auto& x : w) x /= sum;
  std::vector<std::vector<double>> vals(static_cast<std::size_t>(atoms),
                                        std::vector<double>(static_cast<std::size_t>(atoms), 0.0));
  for (int i = 0; i < atoms; ++i)
    for (int j = i; j < atoms; ++j)
      vals[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          vals[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = rng.uniform01();
  return make_step_graphon(std::move(w), vals, Kind::graphon);
}

// Structured restart pool: block patterns that stress unequal degrees
// (bipartite with lopsided parts, cliques, constants).
StepGraphon structured_label(Rng& rng, int pattern) {
  double a = 0.05 + 0.4 * rng.uniform01();
  switch (pattern % 3) {
    case 0:
      return make_step_graphon({a, 1 - a}, {{0, 1}, {1, 0}}, Kind::graphon);
    case 1:
      return make_step_graphon({a, 1 - a}, {{1, 0}, {0, 0}}, Kind::graphon);
    default:
      return constant_graphon(0.2 + 0.8 * rng.uniform01());
  }
}

// Scale-invariant objective: log t(H,w)^e - sum_e log t(H,W_e); positive
// means a weak Hoelder violation.
double log_ratio(const SimpleGraph& h, const std::vector<StepGraphon>& labels) {
  Decoration d{h, labels};
  double t = decorated_density(d);
  if (t <= 0.0) return -1e18;
  double v = h.edge_count() * std::log(t);
  for (const auto& l : labels) {
    double tl = hom_density(h, l);
    if (tl <= 0.0) return -1e18;
    v -= std::log(tl);
  }
  return v;
}

}  // namespace

HolderSearchReport holder_search(const SimpleGraph& h, int trials,
                                 std::uint64_t seed, bool normalize, int atoms) {
  const int e = h.edge_count();
  if (e < 1) fail(Errc::BadArgument, "needs e(H) >= 1");
  Rng master(seed);
  HolderSearchReport rep;
  rep.max_slack = -1e18;

  std::vector<StepGraphon> best_labels;
  double best_ratio = -1e18;
  for (int trial = 0; trial < trials; ++trial) {
    Rng rng = master.fork(static_cast<std::uint64_t>(trial));
    std::vector<StepGraphon> labels;
    for (int i = 0; i < e; ++i) {
      if (trial % 2 == 1)
        labels.push_back(structured_label(rng, rng.uniform_int(3)));
      else
        labels.push_back(random_label(rng, atoms));
    }
    double r = log_ratio(h, labels);
    if (r > best_ratio) {
      best_ratio = r;
      best_labels = labels;
    }
    ++rep.trials;
  }

  // Coordinate ascent from the best start: nudge label entries.
  if (!best_labels.empty()) {
    for (double step : {0.25, 0.1, 0.04}) {
      for (int sweep = 0; sweep < 3; ++sweep) {
        for (std::size_t li = 0; li < best_labels.size(); ++li) {
          const StepGraphon& cur = best_labels[li];
          int k = cur.size();
          for (int i = 0; i < k; ++i)
            for (int j = i; j < k; ++j)
              for (double dir : {+1.0, -1.0}) {
                std::vector<std::vector<double>> vals(
                    static_cast<std::size_t>(k),
                    std::vector<double>(static_cast<std::size_t>(k), 0.0));
                for (int a = 0; a < k; ++a)
                  for (int b = 0; b < k; ++b)
                    vals[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
                        best_labels[li].value(a, b);
                double nv = std::clamp(
                    vals[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] + dir * step,
                    0.0, 1.0);
                vals[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = nv;
                vals[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = nv;
                StepGraphon cand = make_step_graphon(best_labels[li].weights(), vals,
                                                     Kind::graphon);
                std::swap(best_labels[li], cand);
                double r = log_ratio(h, best_labels);
                if (r > best_ratio + 1e-14) {
                  best_ratio = r;
                } else {
                  std::swap(best_labels[li], cand);
                }
              }
        }
      }
    }
  }

  if (!best_labels.empty()) {
    std::vector<StepGraphon> labels = best_labels;
    if (normalize) {
      // Homogeneous form: scale to t(H, W_e) = 1; slack sign is invariant.
      bool ok = true;
      for (auto& l : labels) {
        double tl = hom_density(h, l);
        if (tl <= 1e-14) {
          ok = false;
          break;
        }
        l = scale_kernel(l, std::pow(tl, -1.0 / e));
      }
      if (!ok) labels = best_labels;
    }
    Decoration d{h, labels};
    HolderReport hr = holder_check(d);
    rep.max_slack = hr.slack;
    rep.violation_found = hr.violated;
    if (rep.violation_found) rep.witness = d;
  }
  return rep;
}

}  // namespace graphon
