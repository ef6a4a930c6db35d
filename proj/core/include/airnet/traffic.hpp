#pragma once

#include <array>
#include <compare>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "airnet/distribution.hpp"
#include "airnet/fitting.hpp"
#include "airnet/snapshot.hpp"

namespace airnet {

/// Annual (month == 0) or monthly observation date.
struct Date {
    int year = 0;
    int month = 0;

    friend auto operator<=>(const Date&, const Date&) = default;

    bool monthly() const noexcept { return month != 0; }
    std::string str() const;  ///< "2008" or "2008-03"
    static Date parse(std::string_view text);
};

inline constexpr const char* kNationalScope = "NATIONAL";

enum class TrafficField { passengers, cargo, gdp };

std::string_view to_string(TrafficField field);
TrafficField traffic_field_from_string(std::string_view name);

struct TrafficObservation {
    Date date;
    std::optional<double> passengers;
    std::optional<double> cargo_tonnes;
    std::optional<double> gdp;
};

/// Dated observations for one scope (national total or a single airport),
/// dates strictly increasing, values nonnegative.
struct TrafficSeries {
    std::string scope = kNationalScope;
    std::vector<TrafficObservation> observations;
};

using DatedValue = std::pair<Date, double>;

/// Observations where the field is present, in date order.
std::vector<DatedValue> extract_series(const TrafficSeries& series, TrafficField field);

struct AirportAnnual {
    AirportId code;
    double passengers = 0.0;
    double cargo_tonnes = 0.0;
};

struct StrengthRecord {
    AirportId node;
    double s_passenger = 0.0;
    double s_cargo = 0.0;
    int k = 0;
};

struct StrengthTable {
    std::vector<StrengthRecord> records;  ///< node order of the snapshot
    DistributionTable ccdf_passenger;
    DistributionTable ccdf_cargo;
};

/// Joins per-airport annual throughput to snapshot degrees and builds the
/// cumulative strength distributions. Traffic codes must be snapshot nodes;
/// unknown codes are a join error listing them all.
StrengthTable strength_table(std::span<const AirportAnnual> traffic, const GraphSnapshot& g);

struct StrengthFitOptions {
    /// Fit mean strength per degree class (default) instead of the raw
    /// node scatter.
    bool bin_by_degree = true;
};
struct StrengthFitResult {
    PowerFit fit;
    int excluded = 0;  ///< records dropped for zero strength or degree
};

/// Power-law coupling s ~ c * k^beta for the chosen throughput field.
StrengthFitResult strength_degree_fit(std::span<const StrengthRecord> records,
                                      TrafficField field, StrengthFitOptions options = {});

/// Multiplicative decomposition of a monthly series: a 2x12 centered moving
/// average trend (half weights at the window ends), one seasonal index per
/// calendar month normalized to mean 1, and residuals obs/(trend*index).
/// Outliers are dates whose log residual sits more than 3 MADs from the
/// median log residual.
struct SeasonalDecomposition {
    std::vector<Date> dates;
    std::vector<std::optional<double>> trend;      ///< absent in the 6-month margins
    std::array<double, 12> indices{};              ///< index 0 = January
    std::vector<std::optional<double>> residuals;
    std::vector<Date> outliers;
};

/// Requires >= 24 consecutive monthly observations with positive values.
SeasonalDecomposition seasonal_decompose(const TrafficSeries& series, TrafficField field);

/// OLS of y against x over dates present in both series.
LinearFit correlate_series(std::span<const DatedValue> x, std::span<const DatedValue> y);

struct PerTopologyTraffic {
    Date date;
    PeriodLabel period;   ///< the snapshot that normalized this observation
    double per_link = 0.0;
    double per_node = 0.0;
};

/// Divides each observation by the matching snapshot's undirected edge and
/// node counts. Annual dates resolve to the given half; monthly dates to the
/// half containing the month. A date with no matching snapshot is an error.
std::vector<PerTopologyTraffic> per_link_per_node_traffic(
    const TrafficSeries& series, TrafficField field, std::span<const GraphSnapshot> snapshots,
    Half annual_half = Half::H1);

struct TrafficGrowth {
    GrowthFit fit;   ///< rate per year; level0 at the epoch date
    Date epoch;
};

/// Exponential growth fit with t measured in years since the first
/// observation (monthly dates use mid-month fractions).
TrafficGrowth fit_traffic_growth(const TrafficSeries& series, TrafficField field);

}  // namespace airnet
