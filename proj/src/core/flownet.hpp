#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "core/types.hpp"

namespace areaflow::flownet {

// Directed weighted graph of zip-to-zip movements for one period. Node order
// is lexicographic so serialization is deterministic; adjacency lists are
// sorted by target index.
struct FlowNetwork {
    Period period = Period::overnight;
    std::vector<std::string> nodes;
    std::vector<std::vector<std::pair<std::uint32_t, std::uint64_t>>> out;  // (target, weight)
    std::vector<std::uint32_t> in_degree;

    std::optional<std::uint32_t> index_of(std::string_view zip) const;
    bool has_edge(std::uint32_t from, std::uint32_t to) const;
    std::uint64_t weight(std::uint32_t from, std::uint32_t to) const;  // 0 when absent
    bool isolated(std::uint32_t i) const { return out[i].empty() && in_degree[i] == 0; }
    std::size_t edge_count() const;
};

struct NetworkStats {
    std::uint64_t node_count = 0;
    std::uint64_t edge_count = 0;
    std::uint64_t total_weight = 0;
    std::uint64_t isolated_node_count = 0;
};

// Builds the network for `period` from zip transitions, pooling months.
// Nodes default to the full kept set; `active_only` restricts them to zips
// touched by a transition in this period.
FlowNetwork build_network(std::span<const ZipTransition> transitions, Period period,
                          const std::set<std::string>& kept, bool active_only = false);

NetworkStats network_stats(const FlowNetwork& net);

// w'(i,j) = w(i,j) + w(j,i); used when walks should ignore edge direction.
FlowNetwork symmetrized(const FlowNetwork& net);

// Edge-list format: `# nodes: <n> period: <p>` comment first, one
// `from<TAB>to<TAB>weight` line per edge, `zip<TAB>-<TAB>0` sentinel per
// edgeless node, all lexicographic.
void save_network(std::ostream& out, const FlowNetwork& net, const std::string* meta = nullptr);
FlowNetwork load_network(std::istream& in, const std::string& source);

}  // namespace areaflow::flownet
