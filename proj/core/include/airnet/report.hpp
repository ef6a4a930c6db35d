#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "airnet/evolution.hpp"
#include "airnet/ingest.hpp"
#include "airnet/metrics.hpp"
#include "airnet/traffic.hpp"

namespace airnet {

inline constexpr int kReportSchemaVersion = 1;

/// JSON blocks: model name, parameters, goodness of fit, point count.
std::string fit_json(const LinearFit& fit);
std::string fit_json(const PowerFit& fit);
std::string fit_json(const TwoRegimeFit& fit);
std::string fit_json(const ExponentialFit& fit);
std::string fit_json(const GrowthFit& fit);

std::string turnover_json(const TurnoverReport& report);

/// CSV with columns node,k,k_in,k_out,c,b,knn; knn empty for isolated nodes.
std::string node_metrics_csv(std::span<const NodeMetrics> metrics, PeriodLabel period);
std::string node_metrics_json(std::span<const NodeMetrics> metrics, PeriodLabel period);

std::string distribution_csv(const DistributionTable& table, PeriodLabel period);

/// Columns period,N,arcs,mean_k,lambda1,lambda2,mean_k_in,mean_k_out,R,C,d,D,note.
std::string evolution_csv(const EvolutionTable& table);
std::string evolution_json(const EvolutionTable& table);

struct SnapshotReportOptions {
    Binning fit_binning = Binning::logarithmic(1.5);
    NodeMetricsOptions node;
    int workers = 1;
};

/// Full per-snapshot block: node metrics, degree pdf (raw and binned),
/// two-regime fit, in/out correlation, reciprocity, path stats.
std::string snapshot_report_json(const GraphSnapshot& g, const SnapshotReportOptions& options);

struct TrafficReportOptions {
    Half annual_half = Half::H1;
};

/// Growth fits, seasonal decomposition, cargo/passenger and GDP correlations
/// per scope; strength tables and per-link/per-node series when snapshots
/// cover the data. Analyses a series cannot support are marked "skipped"
/// with the reason instead of being dropped.
std::string traffic_report_json(const std::map<std::string, TrafficSeries>& traffic,
                                std::span<const GraphSnapshot> snapshots,
                                const TrafficReportOptions& options);

struct RunResult {
    std::vector<std::string> files;  ///< emitted file names, sorted
};

/// Batch run over a validated config: per-snapshot reports, evolution table,
/// consecutive turnover reports, traffic analyses, and a summary manifest.
/// Identical config and inputs produce byte-identical files (the summary
/// timestamp is suppressible via emit_timestamp).
RunResult run_report(const RunConfig& config);

/// Shortest round-trip decimal form; integral values keep a trailing ".0"
/// only when `keep_point` is set.
std::string format_double(double value);

}  // namespace airnet
