#include "graphon/graphs.hpp"

#include <algorithm>
#include <cctype>

#include "graphon/error.hpp"

namespace graphon::graphs {

SimpleGraph path(int k) {
  if (k < 1) fail(Errc::BadArgument, "path needs >= 1 vertex");
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i + 1 < k; ++i) e.emplace_back(i, i + 1);
  return SimpleGraph(k, std::move(e));
}

SimpleGraph cycle(int k) {
  if (k < 3) fail(Errc::BadArgument, "cycle needs >= 3 vertices");
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < k; ++i) e.emplace_back(i, (i + 1) % k);
  return SimpleGraph(k, std::move(e));
}

SimpleGraph complete_bipartite(int a, int b) {
  if (a < 1 || b < 1) fail(Errc::BadArgument, "parts must be nonempty");
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < a; ++i)
    for (int j = 0; j < b; ++j) e.emplace_back(i, a + j);
  return SimpleGraph(a + b, std::move(e));
}

SimpleGraph star(int l) { return complete_bipartite(1, l); }

SimpleGraph hypercube_q3() {
  std::vector<std::pair<int, int>> e;
  for (int v = 0; v < 8; ++v)
    for (int bit = 0; bit < 3; ++bit) {
      int u = v ^ (1 << bit);
      if (v < u) e.emplace_back(v, u);
    }
  return SimpleGraph(8, std::move(e));
}

SimpleGraph c4_plus() {
  return SimpleGraph(5, {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {0, 4}});
}

SimpleGraph single_edge() { return SimpleGraph(2, {{0, 1}}); }

std::optional<SimpleGraph> by_name(std::string_view name) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (s == "edge") return single_edge();
  if (s == "q3") return hypercube_q3();
  if (s == "c4plus" || s == "c4+") return c4_plus();
  if (s.size() >= 2 && (s[0] == 'p' || s[0] == 'c')) {
    int k = 0;
    for (std::size_t i = 1; i < s.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) return std::nullopt;
      k = k * 10 + (s[i] - '0');
    }
    if (s[0] == 'p' && k >= 1) return path(k);
    if (s[0] == 'c' && k >= 3) return cycle(k);
    return std::nullopt;
  }
  if (s.size() == 3 && s[0] == 'k' &&
      std::isdigit(static_cast<unsigned char>(s[1])) &&
      std::isdigit(static_cast<unsigned char>(s[2]))) {
    int a = s[1] - '0', b = s[2] - '0';
    if (a >= 1 && b >= 1) return complete_bipartite(a, b);
  }
  return std::nullopt;
}

std::vector<std::string> catalog_names() {
  return {"edge", "p2",  "p3",  "p4", "c3", "c4",     "c5",
          "c6",   "c8",  "k12", "k13", "k22", "k33",  "q3",
          "c4plus"};
}

namespace {

// DFS over simple paths from `start`, visiting only vertices > start so each
// cycle is enumerated from its minimal vertex. Stops as soon as a cycle of
// the target length closes.
bool has_cycle_of_length(const SimpleGraph& h, int target) {
  int n = h.vertex_count();
  std::vector<char> used(static_cast<std::size_t>(n), 0);
  const auto& adj = h.adjacency();

  for (int start = 0; start < n; ++start) {
    std::vector<int> stack;
    // Iterative DFS with explicit path.
    struct Frame {
      int vertex;
      std::size_t next_idx;
    };
    std::vector<Frame> frames;
    frames.push_back({start, 0});
    used[static_cast<std::size_t>(start)] = 1;
    int depth = 1;
    while (!frames.empty()) {
      Frame& f = frames.back();
      const auto& nb = adj[static_cast<std::size_t>(f.vertex)];
      if (f.next_idx >= nb.size()) {
        used[static_cast<std::size_t>(f.vertex)] = 0;
        frames.pop_back();
        --depth;
        continue;
      }
      int u = nb[f.next_idx++];
      if (u == start && depth == target) return true;
      if (depth < target && u > start && !used[static_cast<std::size_t>(u)]) {
        used[static_cast<std::size_t>(u)] = 1;
        frames.push_back({u, 0});
        ++depth;
      }
    }
  }
  return false;
}

}  // namespace

int shortest_even_cycle(const SimpleGraph& h) {
  for (int len = 4; len <= h.vertex_count(); len += 2)
    if (has_cycle_of_length(h, len)) return len;
  return 0;
}

}  // namespace graphon::graphs
