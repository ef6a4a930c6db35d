#include "airnet/report.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <set>

#include <json.hpp>

#include "airnet/error.hpp"

namespace airnet {
namespace {

using json = nlohmann::ordered_json;

std::string csv_escape(const std::string& cell) {
    if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
    std::string out = "\"";
    for (char c : cell) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

json json_number(double value) {
    if (std::isnan(value) || std::isinf(value)) return nullptr;
    return value;
}

json fit_block(const LinearFit& fit) {
    return {{"model", "linear"},
            {"parameters", {{"slope", fit.slope}, {"intercept", fit.intercept}}},
            {"goodness", {{"pearson_r", fit.pearson_r}}},
            {"points", fit.n}};
}

json fit_block(const PowerFit& fit) {
    return {{"model", "power"},
            {"parameters", {{"c", fit.c}, {"beta", fit.beta}}},
            {"goodness", {{"r2", fit.r2}}},
            {"points", fit.n}};
}

json fit_block(const TwoRegimeFit& fit) {
    return {{"model", "two_regime_power_law"},
            {"parameters",
             {{"lambda1", fit.lambda1}, {"lambda2", fit.lambda2}, {"k_break", fit.k_break}}},
            {"goodness", {{"sse", fit.sse}}},
            {"points", fit.n}};
}

json fit_block(const ExponentialFit& fit) {
    return {{"model", "exponential"},
            {"parameters", {{"amplitude", fit.amplitude}, {"t1", fit.t1}, {"y0", fit.y0}}},
            {"goodness", {{"rmse", fit.rmse}}},
            {"iterations", fit.iterations},
            {"points", fit.n}};
}

json fit_block(const GrowthFit& fit) {
    return {{"model", "exponential_growth"},
            {"parameters", {{"level0", fit.level0}, {"rate", fit.rate}}},
            {"goodness", {{"rmse", fit.rmse}}},
            {"points", fit.n}};
}

template <typename Fit>
std::string versioned_fit(const Fit& fit) {
    json doc = {{"schema_version", kReportSchemaVersion}};
    doc.update(fit_block(fit));
    return doc.dump(2) + "\n";
}

json distribution_block(const DistributionTable& table) {
    json entries = json::array();
    for (const auto& [x, p] : table.entries) entries.push_back({x, p});
    json doc = {{"kind", table.kind == DistributionTable::Kind::pdf ? "pdf" : "ccdf"}};
    if (table.binning.mode == Binning::Mode::raw) {
        doc["binning"] = "raw";
    } else {
        doc["binning"] = "logarithmic";
        doc["base"] = table.binning.base;
    }
    doc["entries"] = std::move(entries);
    return doc;
}

json arc_list(const std::vector<Arc>& arcs) {
    json list = json::array();
    for (const auto& [src, dst] : arcs) list.push_back({src, dst});
    return {{"count", arcs.size()}, {"arcs", std::move(list)}};
}

json path_stats_block(const PathStats& stats) {
    json hist = json::array();
    for (const auto& entry : stats.histogram) {
        hist.push_back({{"length", entry.length},
                        {"count", entry.count},
                        {"percentage", entry.percentage}});
    }
    return {{"avg_shortest_path", stats.avg_length},
            {"diameter", stats.diameter},
            {"pairs", stats.pair_count},
            {"components",
             {{"count", stats.component_count},
              {"largest_size", stats.largest_component_size}}},
            {"histogram", std::move(hist)}};
}

json node_metrics_block(std::span<const NodeMetrics> metrics) {
    json rows = json::array();
    for (const auto& m : metrics) {
        rows.push_back({{"node", m.node},
                        {"k", m.k},
                        {"k_in", m.k_in},
                        {"k_out", m.k_out},
                        {"c", m.c},
                        {"b", m.b},
                        {"knn", json_number(m.knn)}});
    }
    return rows;
}

json topology_block(const GraphSnapshot& g, const SnapshotReportOptions& options) {
    json doc;
    const DistributionTable raw_pdf = degree_distribution(g);
    doc["degree_pdf"] = distribution_block(raw_pdf);

    DistributionTable fit_input = raw_pdf;
    if (options.fit_binning.mode == Binning::Mode::logarithmic) {
        fit_input = log_bin(raw_pdf, options.fit_binning.base);
        doc["degree_pdf_binned"] = distribution_block(fit_input);
    }
    try {
        doc["two_regime_fit"] = fit_block(fit_two_regime_power_law(fit_input));
    } catch (const ComputationError& e) {
        doc["two_regime_fit"] = {{"error", e.what()}};
    }
    try {
        doc["in_out_correlation"] = fit_block(in_out_correlation(g));
    } catch (const ComputationError& e) {
        doc["in_out_correlation"] = {{"error", e.what()}};
    }
    try {
        const ReciprocityResult r = reciprocity(g);
        doc["reciprocity"] = {{"r", r.r}, {"arc_density", r.arc_density}};
    } catch (const ComputationError& e) {
        doc["reciprocity"] = {{"error", e.what()}};
    }
    doc["path_stats"] = path_stats_block(shortest_path_stats(g, options.workers));
    return doc;
}

json evolution_block(const EvolutionTable& table) {
    json rows = json::array();
    for (const auto& row : table.rows) {
        rows.push_back({{"period", row.period.str()},
                        {"nodes", row.nodes},
                        {"arcs", row.arcs},
                        {"mean_k", row.mean_k},
                        {"lambda1", row.lambda1 ? json(*row.lambda1) : json(nullptr)},
                        {"lambda2", row.lambda2 ? json(*row.lambda2) : json(nullptr)},
                        {"mean_k_in", row.mean_k_in},
                        {"mean_k_out", row.mean_k_out},
                        {"R", row.reciprocity_r ? json(*row.reciprocity_r) : json(nullptr)},
                        {"C", row.mean_clustering},
                        {"d", row.avg_path_length},
                        {"D", row.diameter},
                        {"note", row.note}});
    }
    return rows;
}


json growth_or_skip(const TrafficSeries& series, TrafficField field) {
    try {
        const TrafficGrowth growth = fit_traffic_growth(series, field);
        json block = fit_block(growth.fit);
        block["epoch"] = growth.epoch.str();
        return block;
    } catch (const ComputationError& e) {
        return {{"skipped", e.what()}};
    }
}

json seasonal_or_skip(const TrafficSeries& series, TrafficField field) {
    try {
        const SeasonalDecomposition d = seasonal_decompose(series, field);
        json indices = json::array();
        for (double idx : d.indices) indices.push_back(idx);
        json trend = json::array();
        for (size_t i = 0; i < d.dates.size(); ++i) {
            if (d.trend[i]) trend.push_back({{"date", d.dates[i].str()}, {"value", *d.trend[i]}});
        }
        json outliers = json::array();
        for (const auto& date : d.outliers) outliers.push_back(date.str());
        return {{"indices", std::move(indices)},
                {"trend", std::move(trend)},
                {"outliers", std::move(outliers)}};
    } catch (const ComputationError& e) {
        return {{"skipped", e.what()}};
    }
}

json correlation_or_skip(const TrafficSeries& series, TrafficField x_field,
                         TrafficField y_field) {
    const auto x = extract_series(series, x_field);
    const auto y = extract_series(series, y_field);
    if (x.empty() || y.empty()) {
        return {{"skipped", std::string("no ") +
                                std::string(x.empty() ? to_string(x_field) : to_string(y_field)) +
                                " data"}};
    }
    try {
        return fit_block(correlate_series(x, y));
    } catch (const ComputationError& e) {
        return {{"skipped", e.what()}};
    }
}

json per_topology_or_skip(const TrafficSeries& national, TrafficField field,
                          std::span<const GraphSnapshot> snapshots, Half annual_half) {
    if (snapshots.empty()) return {{"skipped", "no snapshots"}};
    std::set<PeriodLabel> periods;
    for (const auto& g : snapshots) periods.insert(g.period());

    // The bundle restricts the series to dates a snapshot actually covers;
    // the strict library call errors instead.
    TrafficSeries covered;
    covered.scope = national.scope;
    int outside = 0;
    for (const auto& obs : national.observations) {
        const Half half =
            obs.date.monthly() ? (obs.date.month <= 6 ? Half::H1 : Half::H2) : annual_half;
        if (periods.count(PeriodLabel{obs.date.year, half})) {
            covered.observations.push_back(obs);
        } else {
            ++outside;
        }
    }
    if (covered.observations.empty()) {
        return {{"skipped", "no traffic dates inside snapshot coverage"}};
    }
    const auto rows = per_link_per_node_traffic(covered, field, snapshots, annual_half);
    json list = json::array();
    for (const auto& row : rows) {
        list.push_back({{"date", row.date.str()},
                        {"period", row.period.str()},
                        {"per_link", row.per_link},
                        {"per_node", row.per_node}});
    }
    return {{"outside_coverage", outside}, {"series", std::move(list)}};
}

json strength_block(const StrengthTable& table) {
    json records = json::array();
    for (const auto& rec : table.records) {
        records.push_back({{"node", rec.node},
                           {"k", rec.k},
                           {"s_passenger", rec.s_passenger},
                           {"s_cargo", rec.s_cargo}});
    }
    json doc = {{"records", std::move(records)},
                {"ccdf_passenger", distribution_block(table.ccdf_passenger)},
                {"ccdf_cargo", distribution_block(table.ccdf_cargo)}};
    for (TrafficField field : {TrafficField::passengers, TrafficField::cargo}) {
        const std::string key =
            std::string("fit_") + std::string(to_string(field));
        try {
            const StrengthFitResult fit = strength_degree_fit(table.records, field);
            json block = fit_block(fit.fit);
            block["excluded"] = fit.excluded;
            doc[key] = std::move(block);
        } catch (const ComputationError& e) {
            doc[key] = {{"skipped", e.what()}};
        }
    }
    return doc;
}

json traffic_block(const std::map<std::string, TrafficSeries>& traffic,
                   std::span<const GraphSnapshot> snapshots,
                   const TrafficReportOptions& options) {
    json scopes;
    for (const auto& [scope, series] : traffic) {
        json block;
        block["growth"] = {{"passengers", growth_or_skip(series, TrafficField::passengers)},
                           {"cargo", growth_or_skip(series, TrafficField::cargo)}};
        block["seasonal"] = {{"passengers", seasonal_or_skip(series, TrafficField::passengers)},
                             {"cargo", seasonal_or_skip(series, TrafficField::cargo)}};
        block["cargo_vs_passengers"] =
            correlation_or_skip(series, TrafficField::passengers, TrafficField::cargo);
        block["passengers_vs_gdp"] =
            correlation_or_skip(series, TrafficField::gdp, TrafficField::passengers);
        scopes[scope] = std::move(block);
    }

    json doc = {{"scopes", std::move(scopes)}};

    auto national = traffic.find(kNationalScope);
    if (national != traffic.end() && !snapshots.empty()) {
        doc["per_topology"] = {
            {"passengers", per_topology_or_skip(national->second, TrafficField::passengers,
                                                snapshots, options.annual_half)},
            {"cargo", per_topology_or_skip(national->second, TrafficField::cargo, snapshots,
                                           options.annual_half)}};
    }

    // Strength analysis for each year with per-airport annual data and a
    // snapshot at the configured half.
    std::set<int> years;
    for (const auto& [scope, series] : traffic) {
        if (scope == kNationalScope) continue;
        for (const auto& obs : series.observations) {
            if (!obs.date.monthly()) years.insert(obs.date.year);
        }
    }
    if (!years.empty()) {
        json strength;
        std::map<PeriodLabel, const GraphSnapshot*> by_period;
        for (const auto& g : snapshots) by_period[g.period()] = &g;
        for (int year : years) {
            const PeriodLabel period{year, options.annual_half};
            auto it = by_period.find(period);
            if (it == by_period.end()) {
                strength[period.str()] = {{"skipped", "no snapshot " + period.str()}};
                continue;
            }
            const auto records = annual_strengths(traffic, year);
            strength[period.str()] = strength_block(strength_table(records, *it->second));
        }
        doc["strength"] = std::move(strength);
    }
    return doc;
}

std::string iso_utc_now() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

std::string fit_json(const LinearFit& fit) { return versioned_fit(fit); }
std::string fit_json(const PowerFit& fit) { return versioned_fit(fit); }
std::string fit_json(const TwoRegimeFit& fit) { return versioned_fit(fit); }
std::string fit_json(const ExponentialFit& fit) { return versioned_fit(fit); }
std::string fit_json(const GrowthFit& fit) { return versioned_fit(fit); }

std::string turnover_json(const TurnoverReport& report) {
    json doc = {{"schema_version", kReportSchemaVersion},
                {"from", report.from.str()},
                {"to", report.to.str()},
                {"nodes_added",
                 {{"count", report.nodes_added.size()}, {"ids", report.nodes_added}}},
                {"nodes_removed",
                 {{"count", report.nodes_removed.size()}, {"ids", report.nodes_removed}}},
                {"arcs_added",
                 {{"count", report.added_count()},
                  {"old_old", arc_list(report.added_old_old)},
                  {"old_new", arc_list(report.added_old_new)},
                  {"new_new", arc_list(report.added_new_new)}}},
                {"arcs_deleted",
                 {{"count", report.deleted_count()},
                  {"old_old", arc_list(report.deleted_old_old)},
                  {"old_removed", arc_list(report.deleted_old_removed)},
                  {"removed_removed", arc_list(report.deleted_removed_removed)}}},
                {"pct_changed", json_number(report.pct_changed)}};
    return doc.dump(2) + "\n";
}

std::string node_metrics_csv(std::span<const NodeMetrics> metrics, PeriodLabel period) {
    std::string out;
    out += "# period=" + period.str() + "\n";
    out += "# schema_version=" + std::to_string(kReportSchemaVersion) + "\n";
    out += "node,k,k_in,k_out,c,b,knn\n";
    for (const auto& m : metrics) {
        out += m.node + ',' + std::to_string(m.k) + ',' + std::to_string(m.k_in) + ',' +
               std::to_string(m.k_out) + ',' + format_double(m.c) + ',' + format_double(m.b) +
               ',' + (std::isnan(m.knn) ? std::string() : format_double(m.knn)) + '\n';
    }
    return out;
}

std::string node_metrics_json(std::span<const NodeMetrics> metrics, PeriodLabel period) {
    json doc = {{"schema_version", kReportSchemaVersion},
                {"period", period.str()},
                {"nodes", node_metrics_block(metrics)}};
    return doc.dump(2) + "\n";
}

std::string distribution_csv(const DistributionTable& table, PeriodLabel period) {
    std::string out;
    out += "# period=" + period.str() + "\n";
    out += "# schema_version=" + std::to_string(kReportSchemaVersion) + "\n";
    out += std::string("# kind=") +
           (table.kind == DistributionTable::Kind::pdf ? "pdf" : "ccdf") + "\n";
    if (table.binning.mode == Binning::Mode::raw) {
        out += "# binning=raw\n";
    } else {
        out += "# binning=logarithmic base=" + format_double(table.binning.base) + "\n";
    }
    out += "x,p\n";
    for (const auto& [x, p] : table.entries) {
        out += format_double(x) + ',' + format_double(p) + '\n';
    }
    return out;
}

std::string evolution_csv(const EvolutionTable& table) {
    std::string out;
    out += "# schema_version=" + std::to_string(kReportSchemaVersion) + "\n";
    out += "period,N,arcs,mean_k,lambda1,lambda2,mean_k_in,mean_k_out,R,C,d,D,note\n";
    for (const auto& row : table.rows) {
        out += row.period.str() + ',' + std::to_string(row.nodes) + ',' +
               std::to_string(row.arcs) + ',' + format_double(row.mean_k) + ',' +
               (row.lambda1 ? format_double(*row.lambda1) : std::string()) + ',' +
               (row.lambda2 ? format_double(*row.lambda2) : std::string()) + ',' +
               format_double(row.mean_k_in) + ',' + format_double(row.mean_k_out) + ',' +
               (row.reciprocity_r ? format_double(*row.reciprocity_r) : std::string()) + ',' +
               format_double(row.mean_clustering) + ',' + format_double(row.avg_path_length) +
               ',' + std::to_string(row.diameter) + ',' + csv_escape(row.note) + '\n';
    }
    return out;
}

std::string evolution_json(const EvolutionTable& table) {
    json doc = {{"schema_version", kReportSchemaVersion}, {"rows", evolution_block(table)}};
    return doc.dump(2) + "\n";
}

std::string snapshot_report_json(const GraphSnapshot& g, const SnapshotReportOptions& options) {
    json doc = {{"schema_version", kReportSchemaVersion},
                {"period", g.period().str()},
                {"nodes", g.node_count()},
                {"arcs", g.arc_count()},
                {"undirected_edges", g.undirected_edge_count()},
                {"mean_k", mean_degree(g)},
                {"node_metrics", node_metrics_block(node_metrics(g, options.node))},
                {"topology", topology_block(g, options)}};
    return doc.dump(2) + "\n";
}

std::string traffic_report_json(const std::map<std::string, TrafficSeries>& traffic,
                                std::span<const GraphSnapshot> snapshots,
                                const TrafficReportOptions& options) {
    json doc = {{"schema_version", kReportSchemaVersion}};
    doc.update(traffic_block(traffic, snapshots, options));
    return doc.dump(2) + "\n";
}

RunResult run_report(const RunConfig& config) {
    config.validate();
    const BuildOptions build = config.build_options();
    const std::vector<GraphSnapshot> snapshots =
        parse_snapshot_dir(config.snapshots_dir, build);

    std::map<std::string, TrafficSeries> traffic;
    if (!config.traffic_file.empty()) traffic = parse_traffic_csv(config.traffic_file);

    std::filesystem::create_directories(config.out_dir);
    RunResult result;
    auto emit = [&](const std::string& name, const std::string& content) {
        std::ofstream out(config.out_dir / name, std::ios::binary);
        if (!out) throw ConfigError("cannot write " + (config.out_dir / name).string());
        out << content;
        result.files.push_back(name);
    };

    SnapshotReportOptions sopt;
    sopt.fit_binning = config.fit_binning();
    sopt.node.clustering.include_low_degree = config.include_low_degree_clustering;
    sopt.node.betweenness.normalized = config.normalized_betweenness;
    sopt.node.betweenness.workers = config.workers;
    sopt.workers = config.workers;

    for (const auto& g : snapshots) {
        const std::string period = g.period().str();
        const auto metrics = node_metrics(g, sopt.node);
        if (config.format == "json") {
            emit("metrics_" + period + ".json", node_metrics_json(metrics, g.period()));
        } else {
            emit("metrics_" + period + ".csv", node_metrics_csv(metrics, g.period()));
        }
        emit("degree_pdf_" + period + ".csv",
             distribution_csv(degree_distribution(g), g.period()));

        json topo = {{"schema_version", kReportSchemaVersion}, {"period", period}};
        topo.update(topology_block(g, sopt));
        emit("topology_" + period + ".json", topo.dump(2) + "\n");
    }

    EvolutionOptions eopt;
    eopt.binning = config.fit_binning();
    eopt.clustering.include_low_degree = config.include_low_degree_clustering;
    eopt.workers = config.workers;
    const EvolutionTable table = evolution_table(snapshots, eopt);
    emit("evolution.csv", evolution_csv(table));
    if (config.format == "json") emit("evolution.json", evolution_json(table));

    for (size_t i = 1; i < snapshots.size(); ++i) {
        const TurnoverReport report = diff_snapshots(snapshots[i - 1], snapshots[i]);
        emit("turnover_" + report.from.str() + "_" + report.to.str() + ".json",
             turnover_json(report));
    }

    if (!traffic.empty()) {
        TrafficReportOptions topt;
        topt.annual_half = config.annual_half;
        emit("traffic.json", traffic_report_json(traffic, snapshots, topt));
    }

    std::sort(result.files.begin(), result.files.end());
    json periods = json::array();
    for (const auto& g : snapshots) periods.push_back(g.period().str());
    json summary = {{"schema_version", kReportSchemaVersion}};
    if (config.emit_timestamp) summary["generated_at"] = iso_utc_now();
    summary["config"] = {{"snapshots_dir", config.snapshots_dir.string()},
                         {"merge_map", config.merge_map.string()},
                         {"domestic_list", config.domestic_list.string()},
                         {"traffic", config.traffic_file.string()},
                         {"format", config.format},
                         {"binning", config.binning},
                         {"binning_base", config.binning_base},
                         {"normalized_betweenness", config.normalized_betweenness},
                         {"include_low_degree_clustering", config.include_low_degree_clustering},
                         {"strict_merge", config.strict_merge},
                         {"workers", config.workers},
                         {"annual_half", config.annual_half == Half::H1 ? "H1" : "H2"}};
    summary["periods"] = std::move(periods);
    summary["files"] = result.files;
    emit("summary.json", summary.dump(2) + "\n");

    std::sort(result.files.begin(), result.files.end());
    return result;
}

}  // namespace airnet
