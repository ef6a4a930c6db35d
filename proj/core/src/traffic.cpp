#include "airnet/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "airnet/error.hpp"

namespace airnet {

std::string Date::str() const {
    if (!monthly()) return std::to_string(year);
    std::string m = std::to_string(month);
    if (m.size() < 2) m.insert(m.begin(), '0');
    return std::to_string(year) + "-" + m;
}

Date Date::parse(std::string_view text) {
    auto fail = [&] {
        throw ParseError("invalid date '" + std::string(text) + "' (expected YYYY or YYYY-MM)");
    };
    auto digits = [&](std::string_view s) {
        int v = 0;
        for (char ch : s) {
            if (ch < '0' || ch > '9') fail();
            v = v * 10 + (ch - '0');
        }
        return v;
    };
    if (text.size() == 4) return Date{digits(text), 0};
    if (text.size() == 7 && text[4] == '-') {
        Date d{digits(text.substr(0, 4)), digits(text.substr(5))};
        if (d.month < 1 || d.month > 12) fail();
        return d;
    }
    fail();
    return {};
}

std::string_view to_string(TrafficField field) {
    switch (field) {
        case TrafficField::passengers: return "passengers";
        case TrafficField::cargo: return "cargo";
        case TrafficField::gdp: return "gdp";
    }
    return "?";
}

TrafficField traffic_field_from_string(std::string_view name) {
    if (name == "passengers") return TrafficField::passengers;
    if (name == "cargo") return TrafficField::cargo;
    if (name == "gdp") return TrafficField::gdp;
    throw ConfigError("unknown traffic field '" + std::string(name) + "'");
}

std::vector<DatedValue> extract_series(const TrafficSeries& series, TrafficField field) {
    std::vector<DatedValue> out;
    out.reserve(series.observations.size());
    for (const auto& obs : series.observations) {
        const std::optional<double>* value = nullptr;
        switch (field) {
            case TrafficField::passengers: value = &obs.passengers; break;
            case TrafficField::cargo: value = &obs.cargo_tonnes; break;
            case TrafficField::gdp: value = &obs.gdp; break;
        }
        if (value->has_value()) out.emplace_back(obs.date, **value);
    }
    return out;
}

StrengthTable strength_table(std::span<const AirportAnnual> traffic, const GraphSnapshot& g) {
    std::vector<std::string> unknown;
    StrengthTable table;
    std::map<int, const AirportAnnual*> by_index;
    for (const auto& rec : traffic) {
        const int idx = g.index_of(rec.code);
        if (idx < 0) {
            unknown.push_back(rec.code);
        } else if (!by_index.emplace(idx, &rec).second) {
            throw ComputationError("duplicate traffic record for airport " + rec.code);
        }
    }
    if (!unknown.empty()) {
        std::sort(unknown.begin(), unknown.end());
        std::string joined;
        for (const auto& code : unknown) {
            if (!joined.empty()) joined += ", ";
            joined += code;
        }
        throw ComputationError("traffic records for airports absent from snapshot " +
                               g.period().str() + ": " + joined);
    }

    std::vector<double> passengers, cargo;
    table.records.reserve(by_index.size());
    for (const auto& [idx, rec] : by_index) {
        table.records.push_back({g.node(idx), rec->passengers, rec->cargo_tonnes,
                                 static_cast<int>(g.neighbors(idx).size())});
        passengers.push_back(rec->passengers);
        cargo.push_back(rec->cargo_tonnes);
    }
    table.ccdf_passenger = ccdf_from_values(passengers);
    table.ccdf_cargo = ccdf_from_values(cargo);
    return table;
}

StrengthFitResult strength_degree_fit(std::span<const StrengthRecord> records,
                                      TrafficField field, StrengthFitOptions options) {
    if (field == TrafficField::gdp) throw DomainError("strength fit expects passengers or cargo");

    StrengthFitResult result;
    std::vector<Point> points;
    std::map<int, std::pair<double, int>> classes;  // k -> (sum s, count)
    for (const auto& rec : records) {
        const double s = field == TrafficField::passengers ? rec.s_passenger : rec.s_cargo;
        if (rec.k <= 0 || s <= 0.0) {
            ++result.excluded;
            continue;
        }
        if (options.bin_by_degree) {
            auto& [acc, cnt] = classes[rec.k];
            acc += s;
            ++cnt;
        } else {
            points.emplace_back(rec.k, s);
        }
    }
    if (options.bin_by_degree) {
        points.reserve(classes.size());
        for (const auto& [k, acc] : classes) {
            points.emplace_back(k, acc.first / acc.second);
        }
    }
    if (points.size() < 3) {
        throw InsufficientDataError("strength fit: only " + std::to_string(points.size()) +
                                    " usable degree points after exclusions");
    }
    result.fit = fit_power(points);
    return result;
}

SeasonalDecomposition seasonal_decompose(const TrafficSeries& series, TrafficField field) {
    const auto values = extract_series(series, field);
    if (values.size() < 24) {
        throw InsufficientDataError("seasonal decomposition needs >= 24 monthly observations");
    }
    for (size_t i = 0; i < values.size(); ++i) {
        const auto& [date, v] = values[i];
        if (!date.monthly()) {
            throw DomainError("seasonal decomposition needs monthly dates, got " + date.str());
        }
        if (v <= 0.0) {
            throw DomainError("seasonal decomposition needs positive values, got " +
                              std::to_string(v) + " at " + date.str());
        }
        if (i > 0) {
            const auto& prev = values[i - 1].first;
            const int gap = (date.year - prev.year) * 12 + (date.month - prev.month);
            if (gap != 1) {
                throw DomainError("seasonal decomposition needs consecutive months; gap between " +
                                  prev.str() + " and " + date.str());
            }
        }
    }

    const int n = static_cast<int>(values.size());
    SeasonalDecomposition out;
    out.dates.reserve(values.size());
    for (const auto& [date, v] : values) out.dates.push_back(date);
    out.trend.assign(values.size(), std::nullopt);
    out.residuals.assign(values.size(), std::nullopt);

    // 2x12 centered moving average: half weights on the two window ends.
    for (int t = 6; t + 6 < n; ++t) {
        double acc = 0.5 * values[static_cast<size_t>(t - 6)].second +
                     0.5 * values[static_cast<size_t>(t + 6)].second;
        for (int j = -5; j <= 5; ++j) acc += values[static_cast<size_t>(t + j)].second;
        out.trend[static_cast<size_t>(t)] = acc / 12.0;
    }

    std::array<double, 12> ratio_sum{};
    std::array<int, 12> ratio_count{};
    for (int t = 0; t < n; ++t) {
        if (!out.trend[static_cast<size_t>(t)]) continue;
        const int m = values[static_cast<size_t>(t)].first.month - 1;
        ratio_sum[static_cast<size_t>(m)] +=
            values[static_cast<size_t>(t)].second / *out.trend[static_cast<size_t>(t)];
        ++ratio_count[static_cast<size_t>(m)];
    }
    double index_mean = 0.0;
    for (int m = 0; m < 12; ++m) {
        if (ratio_count[static_cast<size_t>(m)] == 0) {
            throw InsufficientDataError("seasonal decomposition: no trend-covered sample of month " +
                                        std::to_string(m + 1));
        }
        out.indices[static_cast<size_t>(m)] =
            ratio_sum[static_cast<size_t>(m)] / ratio_count[static_cast<size_t>(m)];
        index_mean += out.indices[static_cast<size_t>(m)];
    }
    index_mean /= 12.0;
    for (double& idx : out.indices) idx /= index_mean;

    std::vector<double> log_residuals;
    std::vector<size_t> residual_pos;
    for (int t = 0; t < n; ++t) {
        if (!out.trend[static_cast<size_t>(t)]) continue;
        const int m = values[static_cast<size_t>(t)].first.month - 1;
        const double r = values[static_cast<size_t>(t)].second /
                         (*out.trend[static_cast<size_t>(t)] * out.indices[static_cast<size_t>(m)]);
        out.residuals[static_cast<size_t>(t)] = r;
        log_residuals.push_back(std::log(r));
        residual_pos.push_back(static_cast<size_t>(t));
    }

    auto median_of = [](std::vector<double> v) {
        std::sort(v.begin(), v.end());
        const size_t mid = v.size() / 2;
        return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
    };
    const double med = median_of(log_residuals);
    std::vector<double> deviations;
    deviations.reserve(log_residuals.size());
    for (double lr : log_residuals) deviations.push_back(std::abs(lr - med));
    const double mad = median_of(deviations);

    if (mad > 0.0) {
        for (size_t i = 0; i < log_residuals.size(); ++i) {
            if (std::abs(log_residuals[i] - med) > 3.0 * mad) {
                out.outliers.push_back(out.dates[residual_pos[i]]);
            }
        }
    }
    return out;
}

LinearFit correlate_series(std::span<const DatedValue> x, std::span<const DatedValue> y) {
    std::map<Date, double> by_date;
    for (const auto& [date, v] : x) by_date.emplace(date, v);
    std::vector<Point> points;
    for (const auto& [date, v] : y) {
        auto it = by_date.find(date);
        if (it != by_date.end()) points.emplace_back(it->second, v);
    }
    if (points.size() < 2) {
        throw ComputationError("series share " + std::to_string(points.size()) +
                               " dates, need >= 2 to correlate");
    }
    return fit_linear(points);
}

std::vector<PerTopologyTraffic> per_link_per_node_traffic(
    const TrafficSeries& series, TrafficField field, std::span<const GraphSnapshot> snapshots,
    Half annual_half) {
    std::map<PeriodLabel, const GraphSnapshot*> by_period;
    for (const auto& g : snapshots) by_period[g.period()] = &g;

    std::vector<PerTopologyTraffic> out;
    for (const auto& [date, value] : extract_series(series, field)) {
        const Half half = date.monthly() ? (date.month <= 6 ? Half::H1 : Half::H2) : annual_half;
        const PeriodLabel period{date.year, half};
        auto it = by_period.find(period);
        if (it == by_period.end()) {
            throw ComputationError("no snapshot " + period.str() + " covering traffic date " +
                                   date.str());
        }
        const GraphSnapshot& g = *it->second;
        out.push_back({date, period, value / g.undirected_edge_count(),
                       value / g.node_count()});
    }
    return out;
}

TrafficGrowth fit_traffic_growth(const TrafficSeries& series, TrafficField field) {
    const auto values = extract_series(series, field);
    if (values.empty()) {
        throw InsufficientDataError("no " + std::string(to_string(field)) + " observations");
    }
    const Date epoch = values.front().first;
    auto t_of = [&](const Date& d) {
        double t = static_cast<double>(d.year - epoch.year);
        if (d.monthly() || epoch.monthly()) {
            const double dm = d.monthly() ? d.month - 0.5 : 0.0;
            const double em = epoch.monthly() ? epoch.month - 0.5 : 0.0;
            t += (dm - em) / 12.0;
        }
        return t;
    };
    std::vector<Point> points;
    points.reserve(values.size());
    for (const auto& [date, v] : values) points.emplace_back(t_of(date), v);
    return {fit_exponential_growth(points), epoch};
}

}  // namespace airnet
