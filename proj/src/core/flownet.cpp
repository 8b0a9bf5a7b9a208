#include "core/flownet.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "core/error.hpp"

namespace areaflow::flownet {

std::optional<std::uint32_t> FlowNetwork::index_of(std::string_view zip) const {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), zip);
    if (it == nodes.end() || *it != zip) return std::nullopt;
    return static_cast<std::uint32_t>(it - nodes.begin());
}

bool FlowNetwork::has_edge(std::uint32_t from, std::uint32_t to) const {
    const auto& adj = out[from];
    auto it = std::lower_bound(adj.begin(), adj.end(), to,
                               [](const auto& e, std::uint32_t t) { return e.first < t; });
    return it != adj.end() && it->first == to;
}

std::uint64_t FlowNetwork::weight(std::uint32_t from, std::uint32_t to) const {
    const auto& adj = out[from];
    auto it = std::lower_bound(adj.begin(), adj.end(), to,
                               [](const auto& e, std::uint32_t t) { return e.first < t; });
    return (it != adj.end() && it->first == to) ? it->second : 0;
}

std::size_t FlowNetwork::edge_count() const {
    std::size_t n = 0;
    for (const auto& adj : out) n += adj.size();
    return n;
}

FlowNetwork build_network(std::span<const ZipTransition> transitions, Period period,
                          const std::set<std::string>& kept, bool active_only) {
    for (const auto& t : transitions) {
        if (!kept.count(t.start_zip) || !kept.count(t.end_zip)) {
            throw error(errc::state, "zip transition outside the kept set: " + t.start_zip + " -> " + t.end_zip);
        }
    }

    std::set<std::string> node_set;
    if (active_only) {
        for (const auto& t : transitions) {
            if (t.period != period) continue;
            node_set.insert(t.start_zip);
            node_set.insert(t.end_zip);
        }
    } else {
        node_set = kept;
    }

    FlowNetwork net;
    net.period = period;
    net.nodes.assign(node_set.begin(), node_set.end());
    net.out.resize(net.nodes.size());
    net.in_degree.assign(net.nodes.size(), 0);

    // sum checkins over months for this period
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint64_t> weights;
    for (const auto& t : transitions) {
        if (t.period != period) continue;
        const auto i = *net.index_of(t.start_zip);
        const auto j = *net.index_of(t.end_zip);
        weights[{i, j}] += t.checkins;
    }
    for (const auto& [edge, w] : weights) {
        net.out[edge.first].emplace_back(edge.second, w);
        ++net.in_degree[edge.second];
    }
    return net;
}

NetworkStats network_stats(const FlowNetwork& net) {
    NetworkStats s;
    s.node_count = net.nodes.size();
    for (std::size_t i = 0; i < net.nodes.size(); ++i) {
        s.edge_count += net.out[i].size();
        for (const auto& [_, w] : net.out[i]) s.total_weight += w;
        if (net.isolated(static_cast<std::uint32_t>(i))) ++s.isolated_node_count;
    }
    return s;
}

FlowNetwork symmetrized(const FlowNetwork& net) {
    FlowNetwork sym;
    sym.period = net.period;
    sym.nodes = net.nodes;
    sym.out.resize(net.nodes.size());
    sym.in_degree.assign(net.nodes.size(), 0);
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint64_t> weights;
    for (std::uint32_t i = 0; i < net.out.size(); ++i) {
        for (const auto& [j, w] : net.out[i]) {
            weights[{i, j}] += w;
            weights[{j, i}] += w;
        }
    }
    for (const auto& [edge, w] : weights) {
        sym.out[edge.first].emplace_back(edge.second, w);
        ++sym.in_degree[edge.second];
    }
    return sym;
}

void save_network(std::ostream& out, const FlowNetwork& net, const std::string* meta) {
    out << "# nodes: " << net.nodes.size() << " period: " << to_string(net.period) << '\n';
    if (meta) out << "# meta: " << *meta << '\n';
    for (std::uint32_t i = 0; i < net.out.size(); ++i) {
        for (const auto& [j, w] : net.out[i]) {
            out << net.nodes[i] << '\t' << net.nodes[j] << '\t' << w << '\n';
        }
    }
    for (std::uint32_t i = 0; i < net.nodes.size(); ++i) {
        if (net.isolated(i)) out << net.nodes[i] << "\t-\t0\n";
    }
}

FlowNetwork load_network(std::istream& in, const std::string& source) {
    std::string line;
    std::size_t line_no = 0;
    std::size_t declared_nodes = 0;
    std::optional<Period> period;
    struct RawEdge {
        std::string from, to;
        std::uint64_t w;
    };
    std::vector<RawEdge> edges;
    std::set<std::string> node_set;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream hs(line);
            std::string hash, key;
            hs >> hash >> key;
            if (key == "nodes:") {
                std::string pkey, pval;
                if (!(hs >> declared_nodes >> pkey >> pval) || pkey != "period:") {
                    throw_parse(source, line_no, "bad network header line");
                }
                period = period_from_string(pval);
                if (!period) throw_parse(source, line_no, "unknown period '" + pval + "'");
            }
            continue;  // other comments (meta) are skipped
        }
        const auto tab1 = line.find('\t');
        const auto tab2 = tab1 == std::string::npos ? std::string::npos : line.find('\t', tab1 + 1);
        if (tab1 == std::string::npos || tab2 == std::string::npos) {
            throw_parse(source, line_no, "expected from<TAB>to<TAB>weight");
        }
        RawEdge e;
        e.from = line.substr(0, tab1);
        e.to = line.substr(tab1 + 1, tab2 - tab1 - 1);
        const std::string wstr = line.substr(tab2 + 1);
        auto [p, ec] = std::from_chars(wstr.data(), wstr.data() + wstr.size(), e.w);
        if (ec != std::errc() || p != wstr.data() + wstr.size()) {
            throw_parse(source, line_no, "bad weight '" + wstr + "'");
        }
        if (e.to == "-") {
            if (e.w != 0) throw_parse(source, line_no, "sentinel line must carry weight 0");
            node_set.insert(e.from);
            continue;
        }
        if (e.w < 1) throw_parse(source, line_no, "edge weight must be >= 1");
        node_set.insert(e.from);
        node_set.insert(e.to);
        edges.push_back(std::move(e));
    }
    if (!period) throw_parse(source, 1, "missing '# nodes: <n> period: <p>' header");
    if (node_set.size() != declared_nodes) {
        throw_parse(source, line_no,
                    "header declares " + std::to_string(declared_nodes) + " nodes, file contains " +
                        std::to_string(node_set.size()));
    }

    FlowNetwork net;
    net.period = *period;
    net.nodes.assign(node_set.begin(), node_set.end());
    net.out.resize(net.nodes.size());
    net.in_degree.assign(net.nodes.size(), 0);
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint64_t> weights;
    for (const auto& e : edges) {
        weights[{*net.index_of(e.from), *net.index_of(e.to)}] += e.w;
    }
    for (const auto& [edge, w] : weights) {
        net.out[edge.first].emplace_back(edge.second, w);
        ++net.in_degree[edge.second];
    }
    return net;
}

}  // namespace areaflow::flownet
