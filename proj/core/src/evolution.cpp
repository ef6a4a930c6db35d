#include "airnet/evolution.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "airnet/error.hpp"

namespace airnet {
namespace {

bool adjacency_symmetric(const GraphSnapshot& g) {
    for (int i = 0; i < g.node_count(); ++i) {
        for (int j : g.out_neighbors(i)) {
            if (!g.has_arc(j, i)) return false;
        }
    }
    return true;
}

}  // namespace

TurnoverReport diff_snapshots(const GraphSnapshot& earlier, const GraphSnapshot& later) {
    if (!(earlier.period() < later.period())) {
        throw ComputationError("diff requires strictly increasing periods, got " +
                               earlier.period().str() + " then " + later.period().str());
    }

    TurnoverReport report;
    report.from = earlier.period();
    report.to = later.period();

    const auto& old_nodes = earlier.nodes();
    const auto& new_nodes = later.nodes();
    std::set_difference(new_nodes.begin(), new_nodes.end(), old_nodes.begin(), old_nodes.end(),
                        std::back_inserter(report.nodes_added));
    std::set_difference(old_nodes.begin(), old_nodes.end(), new_nodes.begin(), new_nodes.end(),
                        std::back_inserter(report.nodes_removed));

    const std::set<AirportId> added_set(report.nodes_added.begin(), report.nodes_added.end());
    const std::set<AirportId> removed_set(report.nodes_removed.begin(),
                                          report.nodes_removed.end());

    const auto arcs_before = earlier.arcs();
    const auto arcs_after = later.arcs();

    std::vector<Arc> added, deleted;
    std::set_difference(arcs_after.begin(), arcs_after.end(), arcs_before.begin(),
                        arcs_before.end(), std::back_inserter(added));
    std::set_difference(arcs_before.begin(), arcs_before.end(), arcs_after.begin(),
                        arcs_after.end(), std::back_inserter(deleted));

    for (const auto& arc : added) {
        const int fresh = static_cast<int>(added_set.count(arc.first)) +
                          static_cast<int>(added_set.count(arc.second));
        (fresh == 0 ? report.added_old_old
                    : fresh == 1 ? report.added_old_new : report.added_new_new)
            .push_back(arc);
    }
    for (const auto& arc : deleted) {
        const int gone = static_cast<int>(removed_set.count(arc.first)) +
                         static_cast<int>(removed_set.count(arc.second));
        (gone == 0 ? report.deleted_old_old
                   : gone == 1 ? report.deleted_old_removed : report.deleted_removed_removed)
            .push_back(arc);
    }

    const double changed = static_cast<double>(added.size() + deleted.size());
    if (earlier.arc_count() > 0) {
        report.pct_changed = 100.0 * changed / earlier.arc_count();
    } else {
        report.pct_changed =
            changed == 0.0 ? 0.0 : std::numeric_limits<double>::quiet_NaN();
    }
    return report;
}

EvolutionTable evolution_table(std::span<const GraphSnapshot> snapshots,
                               const EvolutionOptions& options) {
    if (snapshots.empty()) throw InsufficientDataError("evolution table over zero snapshots");
    for (size_t i = 1; i < snapshots.size(); ++i) {
        if (!(snapshots[i - 1].period() < snapshots[i].period())) {
            throw ComputationError("snapshots must have strictly increasing periods (" +
                                   snapshots[i - 1].period().str() + " then " +
                                   snapshots[i].period().str() + ")");
        }
    }

    EvolutionTable table;
    table.rows.reserve(snapshots.size());
    for (const auto& g : snapshots) {
        EvolutionRow row;
        row.period = g.period();
        row.nodes = g.node_count();
        row.arcs = g.arc_count();
        row.mean_k = mean_degree(g);
        row.mean_k_in = static_cast<double>(g.arc_count()) / g.node_count();
        row.mean_k_out = row.mean_k_in;

        std::string note;
        try {
            const auto fit = fit_two_regime_power_law(
                degree_distribution(g, options.binning, DegreeKind::undirected));
            row.lambda1 = fit.lambda1;
            row.lambda2 = fit.lambda2;
        } catch (const ComputationError& e) {
            note += std::string("degree fit: ") + e.what();
        }

        try {
            row.reciprocity_r = reciprocity(g).r;
        } catch (const DegenerateError&) {
            if (adjacency_symmetric(g)) {
                row.reciprocity_r = 1.0;  // uniform but symmetric adjacency
                if (!note.empty()) note += "; ";
                note += "reciprocity: uniform symmetric adjacency, reported as 1";
            } else {
                if (!note.empty()) note += "; ";
                note += "reciprocity: uniform adjacency, undefined";
            }
        } catch (const ComputationError& e) {
            if (!note.empty()) note += "; ";
            note += std::string("reciprocity: ") + e.what();
        }

        try {
            row.mean_clustering = clustering(g, options.clustering).mean;
            const auto paths = shortest_path_stats(g, options.workers);
            row.avg_path_length = paths.avg_length;
            row.diameter = paths.diameter;
        } catch (const Error& e) {
            throw ComputationError("snapshot " + g.period().str() + ": " + e.what());
        }
        row.note = std::move(note);
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace airnet
