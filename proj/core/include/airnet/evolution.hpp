#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "airnet/metrics.hpp"
#include "airnet/snapshot.hpp"

namespace airnet {

/// Six-way link turnover between consecutive snapshots. Added arcs are
/// classified by whether their endpoints already existed (old) or are new;
/// deleted arcs by whether theirs persist or were removed. The six arc sets
/// partition the added and deleted arc sets exactly.
struct TurnoverReport {
    PeriodLabel from;
    PeriodLabel to;

    std::vector<AirportId> nodes_added;
    std::vector<AirportId> nodes_removed;

    std::vector<Arc> added_old_old;
    std::vector<Arc> added_old_new;
    std::vector<Arc> added_new_new;
    std::vector<Arc> deleted_old_old;
    std::vector<Arc> deleted_old_removed;
    std::vector<Arc> deleted_removed_removed;

    /// (|added| + |deleted|) / |arcs in the earlier snapshot| * 100.
    /// NaN when the earlier snapshot has no arcs but changes exist.
    double pct_changed = 0.0;

    size_t added_count() const {
        return added_old_old.size() + added_old_new.size() + added_new_new.size();
    }
    size_t deleted_count() const {
        return deleted_old_old.size() + deleted_old_removed.size() +
               deleted_removed_removed.size();
    }
};

/// Requires earlier.period() < later.period().
TurnoverReport diff_snapshots(const GraphSnapshot& earlier, const GraphSnapshot& later);

struct EvolutionRow {
    PeriodLabel period;
    int nodes = 0;
    int arcs = 0;
    double mean_k = 0.0;
    std::optional<double> lambda1;  ///< absent when the two-regime fit failed
    std::optional<double> lambda2;
    double mean_k_in = 0.0;
    double mean_k_out = 0.0;
    std::optional<double> reciprocity_r;
    double mean_clustering = 0.0;
    double avg_path_length = 0.0;
    int diameter = 0;
    std::string note;  ///< fit or reciprocity fallbacks, empty when clean
};

struct EvolutionTable {
    std::vector<EvolutionRow> rows;
};

struct EvolutionOptions {
    Binning binning = Binning::logarithmic(1.5);  ///< for the degree pdf fed to the fit
    ClusteringOptions clustering;
    int workers = 1;
};

/// One row per snapshot in period order: mean degrees, two-regime exponents
/// of the degree pdf, reciprocity, clustering, path stats. Fit failures are
/// recorded in the row note; other metric errors propagate with the period
/// attached. A snapshot whose adjacency is symmetric but uniform (reciprocity
/// formula degenerate) reports r = 1, noted.
EvolutionTable evolution_table(std::span<const GraphSnapshot> snapshots,
                               const EvolutionOptions& options = {});

}  // namespace airnet
