#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "airnet/error.hpp"
#include "airnet/evolution.hpp"
#include "generators.hpp"

using namespace airnet;
using testsupport::Rng;

namespace {

const PeriodLabel kEarlier{2004, Half::H1};
const PeriodLabel kLater{2004, Half::H2};

GraphSnapshot snap(PeriodLabel period, std::vector<Arc> arcs) {
    return GraphSnapshot::from_arcs(period, std::move(arcs));
}

// Random node subset plus random arcs among them.
GraphSnapshot random_snapshot(Rng& rng, PeriodLabel period) {
    while (true) {
        std::vector<int> members;
        for (int v = 0; v < 14; ++v) {
            if (rng.uniform() < 0.6) members.push_back(v);
        }
        if (members.size() < 2) continue;
        std::vector<Arc> arcs;
        for (int i : members) {
            for (int j : members) {
                if (i != j && rng.uniform() < 0.25) {
                    arcs.emplace_back(testsupport::node_label(i), testsupport::node_label(j));
                }
            }
        }
        if (arcs.empty()) continue;
        return GraphSnapshot::from_arcs(period, std::move(arcs));
    }
}

std::set<Arc> as_set(const std::vector<Arc>& arcs) { return {arcs.begin(), arcs.end()}; }

}  // namespace

TEST_CASE("identical snapshots diff to the zero report") {
    const auto a = snap(kEarlier, {{"A", "B"}, {"B", "C"}});
    const auto b = snap(kLater, {{"A", "B"}, {"B", "C"}});
    const auto report = diff_snapshots(a, b);
    CHECK(report.added_count() == 0);
    CHECK(report.deleted_count() == 0);
    CHECK(report.nodes_added.empty());
    CHECK(report.nodes_removed.empty());
    CHECK(report.pct_changed == 0.0);
}

TEST_CASE("additions split by endpoint novelty") {
    const auto a = snap(kEarlier, {{"A", "B"}});
    const auto b = snap(kLater, {{"A", "B"}, {"A", "C"}, {"C", "D"}});
    const auto report = diff_snapshots(a, b);
    CHECK(report.nodes_added == std::vector<AirportId>{"C", "D"});
    CHECK(report.added_old_old.empty());
    CHECK(report.added_old_new == std::vector<Arc>{{"A", "C"}});
    CHECK(report.added_new_new == std::vector<Arc>{{"C", "D"}});
    CHECK(report.deleted_count() == 0);
    CHECK(report.pct_changed == 200.0);
}

TEST_CASE("deletions split by endpoint removal") {
    const auto a = snap(kEarlier, {{"A", "B"}, {"B", "C"}});
    const auto b = snap(kLater, {{"A", "B"}});
    const auto report = diff_snapshots(a, b);
    CHECK(report.nodes_removed == std::vector<AirportId>{"C"});
    CHECK(report.deleted_old_removed == std::vector<Arc>{{"B", "C"}});
    CHECK(report.deleted_old_old.empty());
    CHECK(report.pct_changed == 50.0);
}

TEST_CASE("diff demands increasing periods") {
    const auto a = snap(kEarlier, {{"A", "B"}});
    const auto b = snap(kLater, {{"A", "B"}});
    CHECK_THROWS_AS(diff_snapshots(b, a), ComputationError);
    const auto same = snap(kEarlier, {{"A", "C"}});
    CHECK_THROWS_AS(diff_snapshots(a, same), ComputationError);
}

TEST_CASE("turnover categories partition the changed arcs") {
    Rng rng(2718);
    for (int trial = 0; trial < 150; ++trial) {
        const auto a = random_snapshot(rng, kEarlier);
        const auto b = random_snapshot(rng, kLater);
        const auto report = diff_snapshots(a, b);

        std::set<Arc> before = as_set(a.arcs());
        std::set<Arc> after = as_set(b.arcs());
        std::vector<Arc> added, deleted;
        std::set_difference(after.begin(), after.end(), before.begin(), before.end(),
                            std::back_inserter(added));
        std::set_difference(before.begin(), before.end(), after.begin(), after.end(),
                            std::back_inserter(deleted));
        CHECK(report.added_count() == added.size());
        CHECK(report.deleted_count() == deleted.size());

        std::set<Arc> added_union;
        for (const auto* bucket :
             {&report.added_old_old, &report.added_old_new, &report.added_new_new}) {
            for (const auto& arc : *bucket) CHECK(added_union.insert(arc).second);
        }
        CHECK(added_union == as_set(added));

        const std::set<AirportId> removed(report.nodes_removed.begin(),
                                          report.nodes_removed.end());
        const std::set<AirportId> fresh(report.nodes_added.begin(), report.nodes_added.end());
        for (const auto& [src, dst] : report.deleted_old_removed) {
            CHECK((removed.count(src) + removed.count(dst)) == 1);
        }
        for (const auto& [src, dst] : report.deleted_removed_removed) {
            CHECK(removed.count(src) == 1);
            CHECK(removed.count(dst) == 1);
        }
        for (const auto& [src, dst] : report.added_old_new) {
            CHECK((fresh.count(src) + fresh.count(dst)) == 1);
        }
        for (const auto& [src, dst] : report.added_new_new) {
            CHECK(fresh.count(src) == 1);
            CHECK(fresh.count(dst) == 1);
        }
    }
}

TEST_CASE("diff symmetry under direction reversal") {
    Rng rng(314);
    for (int trial = 0; trial < 60; ++trial) {
        const auto a = random_snapshot(rng, kEarlier);
        const auto b = random_snapshot(rng, kLater);
        const auto forward = diff_snapshots(a, b);

        const auto a_flipped = GraphSnapshot::from_arcs(kEarlier, b.arcs());
        const auto b_flipped = GraphSnapshot::from_arcs(kLater, a.arcs());
        const auto backward = diff_snapshots(a_flipped, b_flipped);

        CHECK(as_set(forward.added_old_old) == as_set(backward.deleted_old_old));
        CHECK(as_set(forward.added_old_new) == as_set(backward.deleted_old_removed));
        CHECK(as_set(forward.added_new_new) == as_set(backward.deleted_removed_removed));
        CHECK(forward.nodes_added == backward.nodes_removed);
    }
}

TEST_CASE("evolution row for a single triangle snapshot") {
    const auto g = snap(kEarlier, {{"A", "B"}, {"B", "A"}, {"B", "C"}, {"C", "B"},
                                   {"A", "C"}, {"C", "A"}});
    const auto table = evolution_table(std::span(&g, 1));
    REQUIRE(table.rows.size() == 1);
    const auto& row = table.rows[0];
    CHECK(row.mean_k == 2.0);
    REQUIRE(row.reciprocity_r.has_value());
    CHECK(*row.reciprocity_r == 1.0);  // symmetric but uniform adjacency
    CHECK(row.mean_clustering == 1.0);
    CHECK(row.avg_path_length == 1.0);
    CHECK(row.diameter == 1);
    CHECK(!row.lambda1.has_value());
    CHECK(row.note.find("degree fit") != std::string::npos);
    CHECK(row.note.find("reciprocity") != std::string::npos);
}

TEST_CASE("evolution rows equal standalone metric calls") {
    Rng rng(99);
    const auto d1 = testsupport::random_connected_symmetric(rng, 25, 0.2);
    const auto d2 = testsupport::random_connected_digraph(rng, 30, 0.15);
    std::vector<GraphSnapshot> snapshots{testsupport::to_snapshot(d1, kEarlier),
                                         testsupport::to_snapshot(d2, kLater)};
    const auto table = evolution_table(snapshots);
    REQUIRE(table.rows.size() == 2);
    for (size_t i = 0; i < snapshots.size(); ++i) {
        const auto& g = snapshots[i];
        const auto& row = table.rows[i];
        CHECK(row.period == g.period());
        CHECK(row.mean_k == mean_degree(g));
        CHECK(row.mean_k_in == static_cast<double>(g.arc_count()) / g.node_count());
        CHECK(row.mean_clustering == clustering(g).mean);
        const auto paths = shortest_path_stats(g);
        CHECK(row.avg_path_length == paths.avg_length);
        CHECK(row.diameter == paths.diameter);
        REQUIRE(row.reciprocity_r.has_value());
        CHECK(*row.reciprocity_r == reciprocity(g).r);
    }
}

TEST_CASE("evolution table rejects unordered snapshots") {
    std::vector<GraphSnapshot> snapshots{snap(kLater, {{"A", "B"}}),
                                         snap(kEarlier, {{"A", "B"}})};
    CHECK_THROWS_AS(evolution_table(snapshots), ComputationError);
    CHECK_THROWS_AS(evolution_table({}), InsufficientDataError);
}
