#pragma once

#include <string>
#include <vector>

#include "a2opt/dataset.hpp"

namespace a2opt {

// Undirected cell-adjacency graph. Cells are indexed by their position in
// `cell_ids`, which is ascending; neighbor lists hold indices, sorted.
struct NetworkGraph {
    std::vector<int> cell_ids;
    std::vector<std::vector<int>> adj;

    size_t cell_count() const { return cell_ids.size(); }
    const std::vector<int>& neighbors(int idx) const { return adj[idx]; }
    int degree(int idx) const { return static_cast<int>(adj[idx].size()); }

    // Index of a cell id; throws DataError if the id is unknown.
    int index_of(int cell_id) const;
};

// Edge u~v iff max(count(u->v), count(v->u)) > tau, strictly. Cells never
// referenced by a stat stay isolated. Stats naming unknown cells or with
// src == dst are rejected.
NetworkGraph build_graph(const std::vector<HandoverStat>& stats, std::vector<int> cell_ids, double tau);

inline constexpr double kDefaultHandoverTau = 10.0;

}  // namespace a2opt
