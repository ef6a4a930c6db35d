#include "airnet/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>

#include "airnet/error.hpp"

namespace airnet {
namespace {

std::string trim(std::string_view s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_csv(std::string_view line) {
    std::vector<std::string> cells;
    size_t begin = 0;
    while (true) {
        size_t comma = line.find(',', begin);
        if (comma == std::string_view::npos) {
            cells.push_back(trim(line.substr(begin)));
            break;
        }
        cells.push_back(trim(line.substr(begin, comma - begin)));
        begin = comma + 1;
    }
    return cells;
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    return in;
}

// UTF-8 byte order mark on the first line, as written by common exporters.
void strip_bom(std::string& line, int line_no) {
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
}

double parse_number(const std::string& cell, const std::filesystem::path& path, int line) {
    double value = 0.0;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) {
        throw ParseError(path.string(), line, "not a number: '" + cell + "'");
    }
    return value;
}

bool parse_bool(const std::string& value, const std::string& key) {
    std::string v = trim(value);
    std::transform(v.begin(), v.end(), v.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("key '" + key + "': expected a boolean, got '" + value + "'");
}

}  // namespace

GraphSnapshot parse_snapshot_file(const std::filesystem::path& path, const BuildOptions& options,
                                  std::optional<PeriodLabel> period_override) {
    std::ifstream in = open_or_throw(path);

    std::optional<PeriodLabel> period = period_override;
    std::vector<Arc> records;
    BuildOptions local = options;

    std::string line;
    int line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        strip_bom(line, line_no);
        std::string text = trim(line);
        if (text.empty()) continue;
        if (text[0] == '#') {
            std::string body = trim(text.substr(1));
            if (body.starts_with("period=")) {
                if (!period) {
                    auto parsed = PeriodLabel::try_parse(trim(body.substr(7)));
                    if (!parsed) {
                        throw ParseError(path.string(), line_no,
                                         "bad period comment '" + body + "'");
                    }
                    period = *parsed;
                }
            } else if (body.starts_with("node=")) {
                local.isolated.push_back(trim(body.substr(5)));
            }
            continue;
        }
        auto cells = split_csv(text);
        if (!header_seen) {
            header_seen = true;
            if (cells.size() == 2 && canonical_code(cells[0]) == "SRC" &&
                canonical_code(cells[1]) == "DST") {
                continue;
            }
            throw ParseError(path.string(), line_no, "expected header 'src,dst'");
        }
        if (cells.size() != 2 || cells[0].empty() || cells[1].empty()) {
            throw ParseError(path.string(), line_no, "expected 'src,dst', got '" + text + "'");
        }
        records.emplace_back(cells[0], cells[1]);
    }

    if (!period) {
        period = PeriodLabel::try_parse(path.stem().string());
        if (!period) {
            throw ParseError("snapshot " + path.string() +
                             ": no '# period=' comment and file stem is not a period label");
        }
    }
    if (records.empty() && local.isolated.empty()) {
        throw ParseError(path.string() + ": no arc records");
    }
    try {
        if (records.empty()) {
            std::vector<AirportId> isolated;
            for (const auto& raw : local.isolated) {
                AirportId id = local.merge.canonical(raw);
                if (!local.domestic || local.domestic->count(id) > 0) {
                    isolated.push_back(std::move(id));
                }
            }
            return GraphSnapshot::from_arcs(*period, {}, std::move(isolated));
        }
        return GraphSnapshot::build(records, local, *period);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

std::vector<GraphSnapshot> parse_snapshot_dir(const std::filesystem::path& dir,
                                              const BuildOptions& options) {
    if (!std::filesystem::is_directory(dir)) {
        throw ParseError(dir.string() + " is not a directory");
    }
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".csv") {
            files.push_back(entry.path());
        }
    }
    if (files.empty()) throw ParseError("no snapshot .csv files in " + dir.string());
    std::sort(files.begin(), files.end());

    std::vector<GraphSnapshot> snapshots;
    snapshots.reserve(files.size());
    for (const auto& file : files) snapshots.push_back(parse_snapshot_file(file, options));
    std::sort(snapshots.begin(), snapshots.end(),
              [](const GraphSnapshot& a, const GraphSnapshot& b) {
                  return a.period() < b.period();
              });
    for (size_t i = 1; i < snapshots.size(); ++i) {
        if (snapshots[i - 1].period() == snapshots[i].period()) {
            throw ParseError("duplicate snapshot period " + snapshots[i].period().str() +
                             " in " + dir.string());
        }
    }
    return snapshots;
}

MergeMap parse_merge_map(const std::filesystem::path& path, bool strict) {
    std::ifstream in = open_or_throw(path);
    std::map<std::string, std::string> entries;
    std::string line;
    int line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        strip_bom(line, line_no);
        std::string text = trim(line);
        if (text.empty() || text[0] == '#') continue;
        auto cells = split_csv(text);
        if (!header_seen) {
            header_seen = true;
            if (cells.size() == 2 && canonical_code(cells[0]) == "RAW_CODE" &&
                canonical_code(cells[1]) == "CITY_CODE") {
                continue;
            }
            throw ParseError(path.string(), line_no, "expected header 'raw_code,city_code'");
        }
        if (cells.size() != 2 || cells[0].empty() || cells[1].empty()) {
            throw ParseError(path.string(), line_no, "expected 'raw_code,city_code'");
        }
        entries[canonical_code(cells[0])] = canonical_code(cells[1]);
    }
    return MergeMap(std::move(entries), strict);
}

std::set<AirportId> parse_domestic_list(const std::filesystem::path& path) {
    std::ifstream in = open_or_throw(path);
    std::set<AirportId> codes;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        strip_bom(line, line_no);
        std::string text = trim(line);
        if (text.empty() || text[0] == '#') continue;
        codes.insert(canonical_code(text));
    }
    if (codes.empty()) throw ParseError("domestic list " + path.string() + " is empty");
    return codes;
}

std::map<std::string, TrafficSeries> parse_traffic_csv(const std::filesystem::path& path) {
    std::ifstream in = open_or_throw(path);
    std::string line;
    int line_no = 0;

    bool header_seen = false;
    bool cargo_in_kg = false;
    bool has_gdp = false;
    std::map<std::string, TrafficSeries> series;

    while (std::getline(in, line)) {
        ++line_no;
        strip_bom(line, line_no);
        std::string text = trim(line);
        if (text.empty() || text[0] == '#') continue;
        auto cells = split_csv(text);
        if (!header_seen) {
            header_seen = true;
            if (cells.size() >= 4 && canonical_code(cells[0]) == "DATE" &&
                canonical_code(cells[1]) == "SCOPE" &&
                canonical_code(cells[2]) == "PASSENGERS") {
                const std::string cargo_col = canonical_code(cells[3]);
                if (cargo_col == "CARGO_TONNES") {
                    cargo_in_kg = false;
                } else if (cargo_col == "CARGO_KG") {
                    cargo_in_kg = true;
                } else {
                    throw ParseError(path.string(), line_no,
                                     "cargo column must be cargo_tonnes or cargo_kg");
                }
                if (cells.size() == 5 && canonical_code(cells[4]) == "GDP") {
                    has_gdp = true;
                } else if (cells.size() > 4) {
                    throw ParseError(path.string(), line_no, "unexpected extra columns");
                }
                continue;
            }
            throw ParseError(path.string(), line_no,
                             "expected header 'date,scope,passengers,cargo_tonnes[,gdp]'");
        }

        const size_t expected = has_gdp ? 5 : 4;
        if (cells.size() != expected) {
            throw ParseError(path.string(), line_no,
                             "expected " + std::to_string(expected) + " columns, got " +
                                 std::to_string(cells.size()));
        }
        TrafficObservation obs;
        try {
            obs.date = Date::parse(cells[0]);
        } catch (const ParseError& e) {
            throw ParseError(path.string(), line_no, e.what());
        }
        const std::string scope = canonical_code(cells[1]);
        if (scope.empty()) throw ParseError(path.string(), line_no, "empty scope");
        auto cell_value = [&](const std::string& cell) -> std::optional<double> {
            if (cell.empty()) return std::nullopt;
            const double v = parse_number(cell, path, line_no);
            if (v < 0.0) {
                throw ParseError(path.string(), line_no, "negative value '" + cell + "'");
            }
            return v;
        };
        obs.passengers = cell_value(cells[2]);
        obs.cargo_tonnes = cell_value(cells[3]);
        if (cargo_in_kg && obs.cargo_tonnes) *obs.cargo_tonnes /= 1000.0;
        if (has_gdp) obs.gdp = cell_value(cells[4]);

        auto& s = series[scope];
        s.scope = scope;
        if (!s.observations.empty() && !(s.observations.back().date < obs.date)) {
            throw ParseError(path.string(), line_no,
                             "dates for scope " + scope + " must be strictly increasing");
        }
        s.observations.push_back(obs);
    }
    if (series.empty()) throw ParseError("traffic file " + path.string() + " has no rows");
    return series;
}

std::vector<AirportAnnual> annual_strengths(const std::map<std::string, TrafficSeries>& traffic,
                                            int year) {
    std::vector<AirportAnnual> out;
    for (const auto& [scope, s] : traffic) {
        if (scope == kNationalScope) continue;
        for (const auto& obs : s.observations) {
            if (obs.date.year != year || obs.date.monthly()) continue;
            out.push_back({scope, obs.passengers.value_or(0.0), obs.cargo_tonnes.value_or(0.0)});
            break;
        }
    }
    return out;
}

std::vector<Point> parse_points_csv(const std::filesystem::path& path) {
    std::ifstream in = open_or_throw(path);
    std::vector<Point> points;
    std::string line;
    int line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        strip_bom(line, line_no);
        std::string text = trim(line);
        if (text.empty() || text[0] == '#') continue;
        auto cells = split_csv(text);
        if (!header_seen) {
            header_seen = true;
            if (cells.size() == 2 && canonical_code(cells[0]) == "X" &&
                canonical_code(cells[1]) == "Y") {
                continue;
            }
            throw ParseError(path.string(), line_no, "expected header 'x,y'");
        }
        if (cells.size() != 2) {
            throw ParseError(path.string(), line_no, "expected 'x,y', got '" + text + "'");
        }
        points.emplace_back(parse_number(cells[0], path, line_no),
                            parse_number(cells[1], path, line_no));
    }
    if (points.empty()) throw ParseError("points file " + path.string() + " has no rows");
    return points;
}

RunConfig RunConfig::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path.string());

    RunConfig config;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        strip_bom(line, line_no);
        std::string text = trim(line);
        if (text.empty() || text[0] == '#') continue;
        const size_t eq = text.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                              ": expected key=value, got '" + text + "'");
        }
        const std::string key = trim(text.substr(0, eq));
        const std::string value = trim(text.substr(eq + 1));

        if (key == "snapshots_dir") {
            config.snapshots_dir = value;
        } else if (key == "merge_map") {
            config.merge_map = value;
        } else if (key == "domestic_list") {
            config.domestic_list = value;
        } else if (key == "traffic") {
            config.traffic_file = value;
        } else if (key == "out_dir") {
            config.out_dir = value;
        } else if (key == "format") {
            config.format = value;
        } else if (key == "binning") {
            config.binning = value;
        } else if (key == "binning_base") {
            try {
                config.binning_base = std::stod(value);
            } catch (...) {
                throw ConfigError("binning_base: not a number: '" + value + "'");
            }
        } else if (key == "normalized_betweenness") {
            config.normalized_betweenness = parse_bool(value, key);
        } else if (key == "include_low_degree_clustering") {
            config.include_low_degree_clustering = parse_bool(value, key);
        } else if (key == "strict_merge") {
            config.strict_merge = parse_bool(value, key);
        } else if (key == "workers") {
            try {
                config.workers = std::stoi(value);
            } catch (...) {
                throw ConfigError("workers: not an integer: '" + value + "'");
            }
        } else if (key == "emit_timestamp") {
            config.emit_timestamp = parse_bool(value, key);
        } else if (key == "annual_half") {
            if (value == "H1" || value == "h1") {
                config.annual_half = Half::H1;
            } else if (value == "H2" || value == "h2") {
                config.annual_half = Half::H2;
            } else {
                throw ConfigError("annual_half must be H1 or H2, got '" + value + "'");
            }
        } else {
            throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                              ": unknown key '" + key + "'");
        }
    }
    return config;
}

void RunConfig::validate() const {
    if (snapshots_dir.empty()) throw ConfigError("snapshots_dir is required");
    if (!std::filesystem::is_directory(snapshots_dir)) {
        throw ConfigError("snapshots_dir " + snapshots_dir.string() + " is not a directory");
    }
    if (out_dir.empty()) throw ConfigError("out_dir is required");
    auto check_file = [](const std::filesystem::path& p, const char* what) {
        if (!p.empty() && !std::filesystem::is_regular_file(p)) {
            throw ConfigError(std::string(what) + " " + p.string() + " does not exist");
        }
    };
    check_file(merge_map, "merge_map");
    check_file(domestic_list, "domestic_list");
    check_file(traffic_file, "traffic file");
    if (format != "csv" && format != "json") {
        throw ConfigError("format must be csv or json, got '" + format + "'");
    }
    if (binning != "log" && binning != "raw") {
        throw ConfigError("binning must be log or raw, got '" + binning + "'");
    }
    if (binning == "log" && binning_base <= 1.0) {
        throw ConfigError("binning_base must exceed 1");
    }
    if (workers < 1) throw ConfigError("workers must be >= 1");
}

Binning RunConfig::fit_binning() const {
    return binning == "log" ? Binning::logarithmic(binning_base) : Binning::raw();
}

BuildOptions RunConfig::build_options() const {
    BuildOptions options;
    if (!merge_map.empty()) options.merge = parse_merge_map(merge_map, strict_merge);
    if (!domestic_list.empty()) options.domestic = parse_domestic_list(domestic_list);
    return options;
}

}  // namespace airnet
