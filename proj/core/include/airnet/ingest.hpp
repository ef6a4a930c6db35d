#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "airnet/fitting.hpp"
#include "airnet/snapshot.hpp"
#include "airnet/traffic.hpp"

namespace airnet {

/// Snapshot CSV: header `src,dst`, one arc per line. Comment lines start
/// with `#`; `# period=YYYYH1` pins the period and `# node=CODE` declares an
/// isolated airport. Without a period comment the file stem must be a period
/// label. Parse errors carry file:line.
GraphSnapshot parse_snapshot_file(const std::filesystem::path& path, const BuildOptions& options,
                                  std::optional<PeriodLabel> period_override = std::nullopt);

/// All *.csv snapshot files in a directory, sorted by period.
/// Duplicate periods are an error.
std::vector<GraphSnapshot> parse_snapshot_dir(const std::filesystem::path& dir,
                                              const BuildOptions& options);

/// Merge map CSV: header `raw_code,city_code`.
MergeMap parse_merge_map(const std::filesystem::path& path, bool strict = false);

/// One canonical code per line, `#` comments allowed.
std::set<AirportId> parse_domestic_list(const std::filesystem::path& path);

/// Traffic CSV keyed by scope. Header `date,scope,passengers,cargo_tonnes[,gdp]`
/// (or `cargo_kg`, converted to tonnes). date is YYYY or YYYY-MM, scope is
/// NATIONAL or an airport code, empty cells mean missing.
std::map<std::string, TrafficSeries> parse_traffic_csv(const std::filesystem::path& path);

/// Per-airport strengths for one year, pulled from airport-scoped series.
std::vector<AirportAnnual> annual_strengths(const std::map<std::string, TrafficSeries>& traffic,
                                            int year);

/// Points CSV: header `x,y`.
std::vector<Point> parse_points_csv(const std::filesystem::path& path);

/// Batch-run configuration. File form is flat key=value lines ('#' comments);
/// CLI flags override file values.
struct RunConfig {
    std::filesystem::path snapshots_dir;
    std::filesystem::path merge_map;      // optional
    std::filesystem::path domestic_list;  // optional
    std::filesystem::path traffic_file;   // optional
    std::filesystem::path out_dir;

    std::string format = "csv";  // csv | json, for tabular reports
    std::string binning = "log";  // log | raw, degree pdf fed to the two-regime fit
    double binning_base = 1.5;
    bool normalized_betweenness = false;
    bool include_low_degree_clustering = true;
    bool strict_merge = false;
    int workers = 1;
    bool emit_timestamp = true;
    Half annual_half = Half::H1;  // snapshot half matched to annual traffic dates

    static RunConfig from_file(const std::filesystem::path& path);

    /// Rejects missing paths and out-of-range values before any computation.
    void validate() const;

    Binning fit_binning() const;
    BuildOptions build_options() const;  ///< loads merge map and domestic list
};

}  // namespace airnet
