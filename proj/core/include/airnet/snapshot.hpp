#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "airnet/period.hpp"

namespace airnet {

/// Canonical city-level airport code: uppercase, non-empty.
using AirportId = std::string;

/// Directed flight relation between two canonical codes.
using Arc = std::pair<AirportId, AirportId>;

/// Maps raw timetable codes onto canonical city codes. Raw codes are
/// case-folded to uppercase before lookup. Codes absent from the map pass
/// through unchanged unless strict mode is enabled, in which case they are
/// an ingest error.
class MergeMap {
public:
    MergeMap() = default;
    explicit MergeMap(std::map<std::string, std::string> entries, bool strict = false);

    AirportId canonical(std::string_view raw) const;

    bool strict() const noexcept { return strict_; }
    size_t size() const noexcept { return entries_.size(); }

private:
    std::map<std::string, std::string> entries_;
    bool strict_ = false;
};

struct BuildOptions {
    MergeMap merge;
    /// Canonical codes of domestic airports. Arcs with an endpoint outside
    /// the set are dropped. nullopt disables the filter.
    std::optional<std::set<AirportId>> domestic;
    /// Airports with no scheduled flights, present in the node set anyway.
    std::vector<std::string> isolated;
};

struct DegreeRecord {
    AirportId node;
    int k = 0;      ///< distinct neighbors in the undirected projection
    int k_in = 0;
    int k_out = 0;
};

/// One timetable period's directed graph. Nodes are canonical airport codes,
/// arcs are unweighted (present or not), no self-loops, no duplicates.
/// Immutable after construction; safe to share across threads.
class GraphSnapshot {
public:
    /// Applies merge map, domestic filter, self-loop and duplicate removal
    /// to raw (src, dst) records. Throws on empty input or, in strict merge
    /// mode, on a code missing from the merge map.
    static GraphSnapshot build(std::span<const Arc> records, const BuildOptions& options,
                               PeriodLabel period);

    /// Trusted constructor for already-canonical arcs (duplicates and
    /// self-loops are still dropped). An arc-free snapshot is allowed when
    /// isolated nodes are given.
    static GraphSnapshot from_arcs(PeriodLabel period, std::vector<Arc> arcs,
                                   std::vector<AirportId> isolated = {});

    PeriodLabel period() const noexcept { return period_; }
    int node_count() const noexcept { return static_cast<int>(nodes_.size()); }
    int arc_count() const noexcept { return arc_count_; }
    int undirected_edge_count() const noexcept { return edge_count_; }

    const std::vector<AirportId>& nodes() const noexcept { return nodes_; }
    const AirportId& node(int index) const { return nodes_[static_cast<size_t>(index)]; }
    /// -1 when the code is not a node.
    int index_of(std::string_view code) const;

    std::span<const int> out_neighbors(int index) const;
    std::span<const int> in_neighbors(int index) const;
    /// Undirected projection neighbors (i adjacent to j iff a_ij or a_ji).
    std::span<const int> neighbors(int index) const;

    bool has_arc(int from, int to) const;
    bool has_edge(int a, int b) const;

    /// All arcs as canonical code pairs, lexicographically sorted.
    std::vector<Arc> arcs() const;

private:
    GraphSnapshot() = default;
    void finalize(std::vector<Arc> arcs, std::vector<AirportId> extra_nodes, PeriodLabel period);

    PeriodLabel period_;
    std::vector<AirportId> nodes_;               // sorted
    std::vector<std::vector<int>> out_;
    std::vector<std::vector<int>> in_;
    std::vector<std::vector<int>> und_;
    int arc_count_ = 0;
    int edge_count_ = 0;
};

/// Lightweight undirected view over a snapshot: edge {i,j} iff a_ij or a_ji.
class UndirectedView {
public:
    explicit UndirectedView(const GraphSnapshot& g) : g_(&g) {}

    int node_count() const { return g_->node_count(); }
    int edge_count() const { return g_->undirected_edge_count(); }
    std::span<const int> neighbors(int index) const { return g_->neighbors(index); }
    bool has_edge(int a, int b) const { return g_->has_edge(a, b); }
    const GraphSnapshot& snapshot() const { return *g_; }

private:
    const GraphSnapshot* g_;
};

GraphSnapshot build_snapshot(std::span<const Arc> records, const BuildOptions& options,
                             PeriodLabel period);

UndirectedView undirected_projection(const GraphSnapshot& g);

/// One record per node. Sum of k equals twice the undirected edge count;
/// sums of k_in and k_out both equal the arc count.
std::vector<DegreeRecord> degree_sequences(const GraphSnapshot& g);

/// 2 * |undirected edges| / N.
double mean_degree(const GraphSnapshot& g);

/// Uppercases an ASCII code and trims surrounding whitespace.
std::string canonical_code(std::string_view raw);

}  // namespace airnet
