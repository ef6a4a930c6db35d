#include "airnet/snapshot.hpp"

#include <algorithm>
#include <cctype>

#include "airnet/error.hpp"

namespace airnet {

std::string canonical_code(std::string_view raw) {
    size_t begin = 0;
    size_t end = raw.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(raw[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(raw[end - 1]))) --end;
    std::string out;
    out.reserve(end - begin);
    for (size_t i = begin; i < end; ++i) {
        out.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(raw[i]))));
    }
    return out;
}

MergeMap::MergeMap(std::map<std::string, std::string> entries, bool strict)
    : strict_(strict) {
    for (auto& [raw, city] : entries) {
        entries_.emplace(canonical_code(raw), canonical_code(city));
    }
}

AirportId MergeMap::canonical(std::string_view raw) const {
    std::string code = canonical_code(raw);
    if (code.empty()) throw ParseError("empty airport code");
    auto it = entries_.find(code);
    if (it != entries_.end()) return it->second;
    if (strict_) throw ParseError("code '" + code + "' missing from merge map (strict mode)");
    return code;
}

GraphSnapshot build_snapshot(std::span<const Arc> records, const BuildOptions& options,
                             PeriodLabel period) {
    return GraphSnapshot::build(records, options, period);
}

GraphSnapshot GraphSnapshot::build(std::span<const Arc> records, const BuildOptions& options,
                                   PeriodLabel period) {
    if (records.empty()) {
        throw ParseError("snapshot " + period.str() + ": no arc records");
    }
    auto keep = [&](const AirportId& id) {
        return !options.domestic || options.domestic->count(id) > 0;
    };

    std::vector<Arc> arcs;
    std::vector<AirportId> extra;
    arcs.reserve(records.size());
    for (const auto& [raw_src, raw_dst] : records) {
        AirportId src = options.merge.canonical(raw_src);
        AirportId dst = options.merge.canonical(raw_dst);
        if (!keep(src) || !keep(dst)) continue;  // non-domestic record
        if (src == dst) {
            // Merge-collapsed intra-city flight: the arc vanishes but the
            // airport stays in the node set.
            extra.push_back(std::move(src));
            continue;
        }
        arcs.emplace_back(std::move(src), std::move(dst));
    }

    for (const auto& raw : options.isolated) {
        AirportId id = options.merge.canonical(raw);
        if (keep(id)) extra.push_back(std::move(id));
    }

    if (arcs.empty() && extra.empty()) {
        throw ParseError("snapshot " + period.str() +
                         ": no nodes remain after merge and domestic filtering");
    }

    GraphSnapshot g;
    g.finalize(std::move(arcs), std::move(extra), period);
    return g;
}

GraphSnapshot GraphSnapshot::from_arcs(PeriodLabel period, std::vector<Arc> arcs,
                                       std::vector<AirportId> isolated) {
    std::erase_if(arcs, [](const Arc& a) { return a.first == a.second; });
    if (arcs.empty() && isolated.empty()) {
        throw ParseError("snapshot " + period.str() + ": empty node set");
    }
    GraphSnapshot g;
    g.finalize(std::move(arcs), std::move(isolated), period);
    return g;
}

void GraphSnapshot::finalize(std::vector<Arc> arcs, std::vector<AirportId> extra_nodes,
                             PeriodLabel period) {
    period_ = period;

    std::sort(arcs.begin(), arcs.end());
    arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());

    nodes_.reserve(arcs.size() * 2 + extra_nodes.size());
    for (const auto& [src, dst] : arcs) {
        nodes_.push_back(src);
        nodes_.push_back(dst);
    }
    for (auto& id : extra_nodes) nodes_.push_back(std::move(id));
    std::sort(nodes_.begin(), nodes_.end());
    nodes_.erase(std::unique(nodes_.begin(), nodes_.end()), nodes_.end());

    const int n = node_count();
    out_.assign(n, {});
    in_.assign(n, {});
    und_.assign(n, {});
    for (const auto& [src, dst] : arcs) {
        int i = index_of(src);
        int j = index_of(dst);
        out_[i].push_back(j);
        in_[j].push_back(i);
        und_[i].push_back(j);
        und_[j].push_back(i);
    }
    arc_count_ = static_cast<int>(arcs.size());

    edge_count_ = 0;
    for (int i = 0; i < n; ++i) {
        std::sort(out_[i].begin(), out_[i].end());
        std::sort(in_[i].begin(), in_[i].end());
        auto& u = und_[i];
        std::sort(u.begin(), u.end());
        u.erase(std::unique(u.begin(), u.end()), u.end());
        edge_count_ += static_cast<int>(u.size());
    }
    edge_count_ /= 2;
}

int GraphSnapshot::index_of(std::string_view code) const {
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), code);
    if (it == nodes_.end() || *it != code) return -1;
    return static_cast<int>(it - nodes_.begin());
}

std::span<const int> GraphSnapshot::out_neighbors(int index) const {
    return out_[static_cast<size_t>(index)];
}

std::span<const int> GraphSnapshot::in_neighbors(int index) const {
    return in_[static_cast<size_t>(index)];
}

std::span<const int> GraphSnapshot::neighbors(int index) const {
    return und_[static_cast<size_t>(index)];
}

bool GraphSnapshot::has_arc(int from, int to) const {
    const auto& adj = out_[static_cast<size_t>(from)];
    return std::binary_search(adj.begin(), adj.end(), to);
}

bool GraphSnapshot::has_edge(int a, int b) const {
    const auto& adj = und_[static_cast<size_t>(a)];
    return std::binary_search(adj.begin(), adj.end(), b);
}

std::vector<Arc> GraphSnapshot::arcs() const {
    std::vector<Arc> out;
    out.reserve(static_cast<size_t>(arc_count_));
    for (int i = 0; i < node_count(); ++i) {
        for (int j : out_neighbors(i)) {
            out.emplace_back(node(i), node(j));
        }
    }
    return out;  // node order is sorted, so pairs come out sorted
}

UndirectedView undirected_projection(const GraphSnapshot& g) { return UndirectedView(g); }

std::vector<DegreeRecord> degree_sequences(const GraphSnapshot& g) {
    std::vector<DegreeRecord> records;
    records.reserve(static_cast<size_t>(g.node_count()));
    for (int i = 0; i < g.node_count(); ++i) {
        records.push_back({g.node(i), static_cast<int>(g.neighbors(i).size()),
                           static_cast<int>(g.in_neighbors(i).size()),
                           static_cast<int>(g.out_neighbors(i).size())});
    }
    return records;
}

double mean_degree(const GraphSnapshot& g) {
    return 2.0 * g.undirected_edge_count() / g.node_count();
}

}  // namespace airnet
