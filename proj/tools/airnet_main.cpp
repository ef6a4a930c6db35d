// airnet: topology, turnover and traffic reports for timetable-derived
// airport networks. One subcommand per report family; see README.md.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "airnet/error.hpp"
#include "airnet/evolution.hpp"
#include "airnet/ingest.hpp"
#include "airnet/metrics.hpp"
#include "airnet/report.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitParse = 3;
constexpr int kExitComputation = 4;

int exit_code(airnet::ErrorKind kind) {
    switch (kind) {
        case airnet::ErrorKind::config: return kExitConfig;
        case airnet::ErrorKind::parse: return kExitParse;
        case airnet::ErrorKind::computation: return kExitComputation;
    }
    return 1;
}

void write_output(const std::string& content, const std::string& out_path) {
    if (out_path.empty() || out_path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw airnet::ConfigError("cannot write " + out_path);
    out << content;
}

struct CommonGraphFlags {
    std::string merge_map;
    std::string domestic;
    bool strict_merge = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("--merge-map", merge_map, "merge map CSV (raw_code,city_code)");
        cmd->add_option("--domestic", domestic, "domestic airport list, one code per line");
        cmd->add_flag("--strict-merge", strict_merge,
                      "error on codes missing from the merge map");
    }

    airnet::BuildOptions build() const {
        airnet::BuildOptions options;
        if (!merge_map.empty()) {
            options.merge = airnet::parse_merge_map(merge_map, strict_merge);
        } else if (strict_merge) {
            throw airnet::ConfigError("--strict-merge needs --merge-map");
        }
        if (!domestic.empty()) options.domestic = airnet::parse_domestic_list(domestic);
        return options;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"airport network analytics"};
    app.require_subcommand(1);

    // metrics <snapshot>
    auto* metrics_cmd = app.add_subcommand("metrics", "per-snapshot topology report (JSON)");
    std::string metrics_snapshot, metrics_out, metrics_period;
    CommonGraphFlags metrics_graph;
    std::string metrics_binning = "log";
    double metrics_base = 1.5;
    bool metrics_normalized = false;
    bool metrics_exclude_low = false;
    int metrics_workers = 1;
    std::string metrics_format = "json";
    metrics_cmd->add_option("snapshot", metrics_snapshot, "snapshot CSV (src,dst)")->required();
    metrics_cmd->add_option("-o,--out", metrics_out, "output file, '-' for stdout");
    metrics_cmd->add_option("--period", metrics_period, "period label override (YYYYH1)");
    metrics_cmd->add_option("--format", metrics_format,
                            "json: full topology report; csv: per-node table only")
        ->check(CLI::IsMember({"json", "csv"}));
    metrics_graph.attach(metrics_cmd);
    metrics_cmd->add_option("--binning", metrics_binning, "pdf binning for the fit: log|raw")
        ->check(CLI::IsMember({"log", "raw"}));
    metrics_cmd->add_option("--binning-base", metrics_base, "geometric bin base");
    metrics_cmd->add_flag("--normalized-betweenness", metrics_normalized,
                          "scale betweenness by 2/((N-1)(N-2))");
    metrics_cmd->add_flag("--exclude-low-degree-clustering", metrics_exclude_low,
                          "exclude k<2 nodes from mean C instead of counting them as 0");
    metrics_cmd->add_option("--workers", metrics_workers, "worker threads")
        ->check(CLI::PositiveNumber);

    // evolve <dir>
    auto* evolve_cmd = app.add_subcommand("evolve", "evolution table over a snapshot directory");
    std::string evolve_dir, evolve_out, evolve_format = "csv";
    CommonGraphFlags evolve_graph;
    std::string evolve_binning = "log";
    double evolve_base = 1.5;
    bool evolve_exclude_low = false;
    int evolve_workers = 1;
    evolve_cmd->add_option("dir", evolve_dir, "directory of snapshot CSVs")->required();
    evolve_cmd->add_option("-o,--out", evolve_out, "output file, '-' for stdout");
    evolve_cmd->add_option("--format", evolve_format, "csv|json")
        ->check(CLI::IsMember({"csv", "json"}));
    evolve_graph.attach(evolve_cmd);
    evolve_cmd->add_option("--binning", evolve_binning, "pdf binning for the fit: log|raw")
        ->check(CLI::IsMember({"log", "raw"}));
    evolve_cmd->add_option("--binning-base", evolve_base, "geometric bin base");
    evolve_cmd->add_flag("--exclude-low-degree-clustering", evolve_exclude_low,
                         "exclude k<2 nodes from mean C");
    evolve_cmd->add_option("--workers", evolve_workers, "worker threads")
        ->check(CLI::PositiveNumber);

    // diff <a> <b>
    auto* diff_cmd = app.add_subcommand("diff", "link/node turnover between two snapshots");
    std::string diff_a, diff_b, diff_out;
    CommonGraphFlags diff_graph;
    diff_cmd->add_option("earlier", diff_a, "earlier snapshot CSV")->required();
    diff_cmd->add_option("later", diff_b, "later snapshot CSV")->required();
    diff_cmd->add_option("-o,--out", diff_out, "output file, '-' for stdout");
    diff_graph.attach(diff_cmd);

    // traffic <file>
    auto* traffic_cmd = app.add_subcommand("traffic", "traffic growth/seasonality/correlations");
    std::string traffic_file, traffic_out, traffic_snapshots;
    CommonGraphFlags traffic_graph;
    std::string traffic_half = "H1";
    traffic_cmd->add_option("file", traffic_file, "traffic CSV")->required();
    traffic_cmd->add_option("-o,--out", traffic_out, "output file, '-' for stdout");
    traffic_cmd->add_option("--snapshots", traffic_snapshots,
                            "snapshot directory for strength and per-link/per-node analyses");
    traffic_cmd->add_option("--annual-half", traffic_half, "half matched to annual dates: H1|H2")
        ->check(CLI::IsMember({"H1", "H2"}));
    traffic_graph.attach(traffic_cmd);

    // fit <kind> <file>
    auto* fit_cmd = app.add_subcommand("fit", "fit a model to an x,y points CSV");
    std::string fit_kind, fit_file, fit_out;
    fit_cmd->add_option("kind", fit_kind, "linear|power|exponential|growth|two-regime")
        ->required()
        ->check(CLI::IsMember({"linear", "power", "exponential", "growth", "two-regime"}));
    fit_cmd->add_option("file", fit_file, "points CSV with header x,y")->required();
    fit_cmd->add_option("-o,--out", fit_out, "output file, '-' for stdout");

    // report <config>
    auto* report_cmd = app.add_subcommand("report", "batch report bundle from a config file");
    std::string report_config;
    std::string report_out_dir, report_format, report_binning, report_half;
    int report_workers = 0;
    bool report_no_timestamp = false;
    report_cmd->add_option("config", report_config, "key=value config file")->required();
    report_cmd->add_option("--out-dir", report_out_dir, "override out_dir");
    report_cmd->add_option("--format", report_format, "override format: csv|json");
    report_cmd->add_option("--binning", report_binning, "override binning: log|raw");
    report_cmd->add_option("--annual-half", report_half, "override annual_half: H1|H2");
    report_cmd->add_option("--workers", report_workers, "override worker threads");
    report_cmd->add_flag("--no-timestamp", report_no_timestamp,
                         "omit generated_at from summary.json");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*metrics_cmd) {
            std::optional<airnet::PeriodLabel> period;
            if (!metrics_period.empty()) period = airnet::PeriodLabel::parse(metrics_period);
            const auto g =
                airnet::parse_snapshot_file(metrics_snapshot, metrics_graph.build(), period);
            airnet::SnapshotReportOptions options;
            options.fit_binning = metrics_binning == "log"
                                      ? airnet::Binning::logarithmic(metrics_base)
                                      : airnet::Binning::raw();
            options.node.clustering.include_low_degree = !metrics_exclude_low;
            options.node.betweenness.normalized = metrics_normalized;
            options.node.betweenness.workers = metrics_workers;
            options.workers = metrics_workers;
            if (metrics_format == "csv") {
                write_output(airnet::node_metrics_csv(airnet::node_metrics(g, options.node),
                                                      g.period()),
                             metrics_out);
            } else {
                write_output(airnet::snapshot_report_json(g, options), metrics_out);
            }
        } else if (*evolve_cmd) {
            const auto snapshots =
                airnet::parse_snapshot_dir(evolve_dir, evolve_graph.build());
            airnet::EvolutionOptions options;
            options.binning = evolve_binning == "log" ? airnet::Binning::logarithmic(evolve_base)
                                                      : airnet::Binning::raw();
            options.clustering.include_low_degree = !evolve_exclude_low;
            options.workers = evolve_workers;
            const auto table = airnet::evolution_table(snapshots, options);
            write_output(evolve_format == "json" ? airnet::evolution_json(table)
                                                 : airnet::evolution_csv(table),
                         evolve_out);
        } else if (*diff_cmd) {
            const auto build = diff_graph.build();
            const auto earlier = airnet::parse_snapshot_file(diff_a, build);
            const auto later = airnet::parse_snapshot_file(diff_b, build);
            write_output(airnet::turnover_json(airnet::diff_snapshots(earlier, later)),
                         diff_out);
        } else if (*traffic_cmd) {
            const auto traffic = airnet::parse_traffic_csv(traffic_file);
            std::vector<airnet::GraphSnapshot> snapshots;
            if (!traffic_snapshots.empty()) {
                snapshots = airnet::parse_snapshot_dir(traffic_snapshots, traffic_graph.build());
            }
            airnet::TrafficReportOptions options;
            options.annual_half = traffic_half == "H2" ? airnet::Half::H2 : airnet::Half::H1;
            write_output(airnet::traffic_report_json(traffic, snapshots, options), traffic_out);
        } else if (*fit_cmd) {
            const auto points = airnet::parse_points_csv(fit_file);
            std::string doc;
            if (fit_kind == "linear") {
                doc = airnet::fit_json(airnet::fit_linear(points));
            } else if (fit_kind == "power") {
                doc = airnet::fit_json(airnet::fit_power(points));
            } else if (fit_kind == "exponential") {
                doc = airnet::fit_json(airnet::fit_exponential(points));
            } else if (fit_kind == "growth") {
                doc = airnet::fit_json(airnet::fit_exponential_growth(points));
            } else {
                doc = airnet::fit_json(airnet::fit_two_regime_power_law(points));
            }
            write_output(doc, fit_out);
        } else if (*report_cmd) {
            auto config = airnet::RunConfig::from_file(report_config);
            if (!report_out_dir.empty()) config.out_dir = report_out_dir;
            if (!report_format.empty()) config.format = report_format;
            if (!report_binning.empty()) config.binning = report_binning;
            if (!report_half.empty()) {
                if (report_half != "H1" && report_half != "H2") {
                    throw airnet::ConfigError("--annual-half must be H1 or H2");
                }
                config.annual_half = report_half == "H2" ? airnet::Half::H2 : airnet::Half::H1;
            }
            if (report_workers > 0) config.workers = report_workers;
            if (report_no_timestamp) config.emit_timestamp = false;
            const auto result = airnet::run_report(config);
            std::cerr << "wrote " << result.files.size() << " files to "
                      << config.out_dir.string() << "\n";
        }
    } catch (const airnet::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
