#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "graphon/types.hpp"

namespace graphon::graphs {

/// Path on k vertices (k-1 edges).
SimpleGraph path(int k);
/// Cycle on k >= 3 vertices.
SimpleGraph cycle(int k);
SimpleGraph complete_bipartite(int a, int b);
/// K_{1,l}.
SimpleGraph star(int l);
/// 3-dimensional hypercube Q3.
SimpleGraph hypercube_q3();
/// 4-cycle with a pendant edge.
SimpleGraph c4_plus();
SimpleGraph single_edge();

/// Catalog lookup: "p2", "p4", "c4", "c6", "k12" (= K_{1,2}), "k22", "q3",
/// "c4plus", "edge". Returns nullopt for unknown names.
std::optional<SimpleGraph> by_name(std::string_view name);
std::vector<std::string> catalog_names();

/// Length of the shortest even cycle (4, 6, ...), or 0 when none exists.
/// Enumerates simple cycles; intended for small pattern graphs.
int shortest_even_cycle(const SimpleGraph& h);

}  // namespace graphon::graphs
