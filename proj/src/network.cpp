#include "a2opt/network.hpp"

#include <algorithm>
#include <map>

namespace a2opt {

int NetworkGraph::index_of(int cell_id) const {
    auto it = std::lower_bound(cell_ids.begin(), cell_ids.end(), cell_id);
    if (it == cell_ids.end() || *it != cell_id)
        throw DataError("graph: unknown cell id " + std::to_string(cell_id));
    return static_cast<int>(it - cell_ids.begin());
}

NetworkGraph build_graph(const std::vector<HandoverStat>& stats, std::vector<int> cell_ids, double tau) {
    std::sort(cell_ids.begin(), cell_ids.end());
    if (std::adjacent_find(cell_ids.begin(), cell_ids.end()) != cell_ids.end())
        throw DataError("build_graph: duplicate cell id");

    NetworkGraph g;
    g.cell_ids = std::move(cell_ids);
    g.adj.assign(g.cell_ids.size(), {});

    // strongest direction per unordered pair
    std::map<std::pair<int, int>, double> best;
    for (const HandoverStat& s : stats) {
        if (s.src == s.dst) throw DataError("build_graph: self handover for cell " + std::to_string(s.src));
        if (s.avg_count < 0) throw DataError("build_graph: negative handover count");
        int u = g.index_of(s.src);
        int v = g.index_of(s.dst);
        auto key = std::minmax(u, v);
        auto [it, inserted] = best.emplace(key, s.avg_count);
        if (!inserted) it->second = std::max(it->second, s.avg_count);
    }
    for (const auto& [key, count] : best) {
        if (count > tau) {
            g.adj[key.first].push_back(key.second);
            g.adj[key.second].push_back(key.first);
        }
    }
    for (std::vector<int>& nb : g.adj) std::sort(nb.begin(), nb.end());
    return g;
}

}  // namespace a2opt
