#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>

#include "airnet/error.hpp"
#include "airnet/traffic.hpp"
#include "generators.hpp"

using namespace airnet;
using testsupport::Rng;

namespace {

// Gentle seasonal amplitude, mean exactly 1; at 5% monthly growth the 2x12
// moving average already sits ~1.5% above the raw exponential, so a strong
// seasonal pattern would push the trend check past its 2% budget.
const std::array<double, 12> kIndices = {0.95, 0.96, 0.98, 1.0,  1.02, 1.04,
                                         1.05, 1.04, 1.02, 1.0,  0.98, 0.96};

TrafficSeries monthly_series(int months, const std::function<double(int)>& value) {
    TrafficSeries series;
    for (int t = 0; t < months; ++t) {
        TrafficObservation obs;
        obs.date = Date{2001 + t / 12, 1 + t % 12};
        obs.passengers = value(t);
        series.observations.push_back(obs);
    }
    return series;
}

GraphSnapshot ring_with_chords(PeriodLabel period) {
    // 10 nodes, 20 undirected edges, symmetric arcs.
    std::vector<Arc> arcs;
    auto link = [&](int i, int j) {
        arcs.emplace_back(testsupport::node_label(i), testsupport::node_label(j));
        arcs.emplace_back(testsupport::node_label(j), testsupport::node_label(i));
    };
    for (int i = 0; i < 10; ++i) link(i, (i + 1) % 10);
    for (int i = 0; i < 10; ++i) link(i, (i + 2) % 10);
    return GraphSnapshot::from_arcs(period, std::move(arcs));
}

}  // namespace

TEST_CASE("date parsing and formatting") {
    CHECK(Date::parse("2008") == Date{2008, 0});
    CHECK(Date::parse("2008-03") == Date{2008, 3});
    CHECK(Date{2008, 3}.str() == "2008-03");
    CHECK(Date{2008, 0}.str() == "2008");
    CHECK_THROWS_AS(Date::parse("2008-13"), ParseError);
    CHECK_THROWS_AS(Date::parse("08-3"), ParseError);
    CHECK(Date{2008, 0} < Date{2008, 1});
}

TEST_CASE("strength table joins throughput to degree") {
    const auto g = ring_with_chords({2008, Half::H1});
    std::vector<AirportAnnual> traffic;
    for (int i = 0; i < 10; ++i) {
        traffic.push_back({testsupport::node_label(i), 100.0 * (i + 1), 10.0 * (i + 1)});
    }
    const auto table = strength_table(traffic, g);
    REQUIRE(table.records.size() == 10);
    for (const auto& rec : table.records) CHECK(rec.k == 4);
    CHECK(table.ccdf_passenger.entries.front().second == 1.0);

    SUBCASE("unknown airports are listed in the join error") {
        traffic.push_back({"XXX", 1.0, 1.0});
        traffic.push_back({"YYY", 1.0, 1.0});
        CHECK_THROWS_WITH_AS(strength_table(traffic, g), doctest::Contains("XXX, YYY"),
                             ComputationError);
    }
    SUBCASE("duplicate records for one airport are rejected") {
        traffic.push_back(traffic.front());
        CHECK_THROWS_WITH_AS(strength_table(traffic, g), doctest::Contains("duplicate"),
                             ComputationError);
    }
}

TEST_CASE("strength ccdf edge shapes") {
    const auto g = GraphSnapshot::from_arcs({2008, Half::H1}, {}, {"A"});
    const auto single = strength_table(std::vector<AirportAnnual>{{"A", 0.0, 0.0}}, g);
    REQUIRE(single.ccdf_passenger.entries.size() == 1);
    CHECK(single.ccdf_passenger.entries[0] == std::pair{0.0, 1.0});

    const auto g3 = GraphSnapshot::from_arcs({2008, Half::H1}, {}, {"A", "B", "C"});
    const auto spread = strength_table(
        std::vector<AirportAnnual>{{"A", 1, 0}, {"B", 10, 0}, {"C", 100, 0}}, g3);
    const auto& entries = spread.ccdf_passenger.entries;
    REQUIRE(entries.size() == 3);
    CHECK(entries[0] == std::pair{1.0, 1.0});
    CHECK(entries[1].second == doctest::Approx(2.0 / 3.0));
    CHECK(entries[2].second == doctest::Approx(1.0 / 3.0));
    for (size_t i = 1; i < entries.size(); ++i) {
        CHECK(entries[i].second <= entries[i - 1].second);
    }
}

TEST_CASE("strength ccdf spans the generator's five decades") {
    Rng rng(138);
    std::vector<AirportId> codes;
    std::vector<AirportAnnual> traffic;
    for (int i = 0; i < 138; ++i) {
        const auto code = testsupport::node_label(i);
        codes.push_back(code);
        // Throughputs spread over 1..1e5.
        const double s = std::pow(10.0, 5.0 * rng.uniform());
        traffic.push_back({code, s, s});
    }
    const auto g = GraphSnapshot::from_arcs({2008, Half::H1}, {}, codes);
    const auto table = strength_table(traffic, g);
    const auto& entries = table.ccdf_passenger.entries;
    REQUIRE(entries.size() > 1);
    CHECK(entries.back().first / entries.front().first > 1e4);
    CHECK(entries.front().second == 1.0);
    for (size_t i = 1; i < entries.size(); ++i) {
        CHECK(entries[i].second <= entries[i - 1].second);
    }
}

TEST_CASE("strength-degree coupling on exact power data") {
    std::vector<StrengthRecord> records;
    for (int k = 1; k <= 30; ++k) {
        records.push_back({"N", static_cast<double>(k) * k, 5.0 * std::pow(k, 2.79), k});
    }
    const auto passengers = strength_degree_fit(records, TrafficField::passengers);
    CHECK(passengers.fit.beta == doctest::Approx(2.0).epsilon(1e-9));
    const auto cargo = strength_degree_fit(records, TrafficField::cargo);
    CHECK(cargo.fit.beta == doctest::Approx(2.79).epsilon(1e-9));
    CHECK(cargo.fit.c == doctest::Approx(5.0).epsilon(1e-9));
}

TEST_CASE("strength fit bins degree classes and reports exclusions") {
    Rng rng(414);
    std::vector<StrengthRecord> records;
    for (int i = 0; i < 400; ++i) {
        const int k = 1 + rng.below(120);
        const double s = std::pow(k, 2.0) * std::exp(0.3 * rng.normal());
        records.push_back({"N", s, 0.0, k});
    }
    records.push_back({"Z", 0.0, 0.0, 5});   // zero strength
    records.push_back({"Z2", 10.0, 0.0, 0}); // zero degree
    const auto fit = strength_degree_fit(records, TrafficField::passengers);
    CHECK(fit.excluded == 2);
    CHECK(std::abs(fit.fit.beta - 2.0) <= 0.1);

    SUBCASE("all records excluded is an error") {
        std::vector<StrengthRecord> empty{{"A", 0.0, 0.0, 3}, {"B", 0.0, 0.0, 0}};
        CHECK_THROWS_AS(strength_degree_fit(empty, TrafficField::passengers),
                        InsufficientDataError);
    }
}

TEST_CASE("seasonal decomposition of a constant series") {
    const auto series = monthly_series(36, [](int) { return 250.0; });
    const auto d = seasonal_decompose(series, TrafficField::passengers);
    for (int t = 6; t + 6 < 36; ++t) {
        REQUIRE(d.trend[static_cast<size_t>(t)].has_value());
        CHECK(*d.trend[static_cast<size_t>(t)] == doctest::Approx(250.0).epsilon(1e-12));
    }
    double mean = 0.0;
    for (double idx : d.indices) {
        CHECK(idx == doctest::Approx(1.0).epsilon(1e-12));
        mean += idx;
    }
    CHECK(mean / 12.0 == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(d.outliers.empty());
}

TEST_CASE("seasonal decomposition recovers a known index vector") {
    const auto series = monthly_series(
        48, [](int t) { return 100.0 * std::exp(0.05 * t) * kIndices[static_cast<size_t>(t % 12)]; });
    const auto d = seasonal_decompose(series, TrafficField::passengers);

    for (int m = 0; m < 12; ++m) {
        CHECK(std::abs(d.indices[static_cast<size_t>(m)] - kIndices[static_cast<size_t>(m)]) /
                  kIndices[static_cast<size_t>(m)] <
              0.05);
    }
    for (int t = 6; t + 6 < 48; ++t) {
        REQUIRE(d.trend[static_cast<size_t>(t)].has_value());
        const double expected = 100.0 * std::exp(0.05 * t);
        CHECK(std::abs(*d.trend[static_cast<size_t>(t)] - expected) / expected < 0.02);
    }

    SUBCASE("observations reconstruct as trend * index * residual") {
        for (size_t t = 0; t < 48; ++t) {
            if (!d.trend[t]) continue;
            const double rebuilt = *d.trend[t] *
                                   d.indices[static_cast<size_t>(d.dates[t].month - 1)] *
                                   *d.residuals[t];
            CHECK(rebuilt ==
                  doctest::Approx(*series.observations[t].passengers).epsilon(1e-9));
        }
    }

    SUBCASE("deseasonalized growth rate lands within 2 percent") {
        TrafficSeries trend_series;
        for (size_t t = 0; t < 48; ++t) {
            if (!d.trend[t]) continue;
            TrafficObservation obs;
            obs.date = d.dates[t];
            obs.passengers = *d.trend[t];
            trend_series.observations.push_back(obs);
        }
        const auto growth = fit_traffic_growth(trend_series, TrafficField::passengers);
        CHECK(std::abs(growth.fit.rate * 1.0 / 12.0 - 0.05) / 0.05 < 0.02);
    }
}

TEST_CASE("a single-month collapse is flagged as an outlier") {
    auto series = monthly_series(
        48, [](int t) { return 100.0 * std::exp(0.05 * t) * kIndices[static_cast<size_t>(t % 12)]; });
    const Date dip{2003, 5};  // t = 28
    for (auto& obs : series.observations) {
        if (obs.date == dip) *obs.passengers *= 0.1;
    }
    const auto d = seasonal_decompose(series, TrafficField::passengers);
    CHECK(std::find(d.outliers.begin(), d.outliers.end(), dip) != d.outliers.end());
}

TEST_CASE("seasonal decomposition input checks") {
    CHECK_THROWS_AS(
        seasonal_decompose(monthly_series(20, [](int) { return 1.0; }), TrafficField::passengers),
        InsufficientDataError);

    auto gap = monthly_series(30, [](int) { return 1.0; });
    gap.observations.erase(gap.observations.begin() + 10);
    CHECK_THROWS_AS(seasonal_decompose(gap, TrafficField::passengers), DomainError);

    TrafficSeries annual;
    for (int y = 0; y < 30; ++y) {
        TrafficObservation obs;
        obs.date = Date{1980 + y, 0};
        obs.passengers = 1.0;
        annual.observations.push_back(obs);
    }
    CHECK_THROWS_AS(seasonal_decompose(annual, TrafficField::passengers), DomainError);
}

TEST_CASE("series correlation recovers exact generators") {
    std::vector<DatedValue> passengers, cargo, gdp;
    for (int y = 1991; y <= 2008; ++y) {
        const double p = 1000.0 + 37.0 * (y - 1991) * (y - 1990);
        passengers.emplace_back(Date{y, 0}, p);
        cargo.emplace_back(Date{y, 0}, 0.045 * p);
        gdp.emplace_back(Date{y, 0}, p / 7.0);
    }
    const auto cargo_fit = correlate_series(passengers, cargo);
    CHECK(cargo_fit.slope == doctest::Approx(0.045).epsilon(1e-9));
    CHECK(cargo_fit.pearson_r == doctest::Approx(1.0).epsilon(1e-9));

    const auto gdp_fit = correlate_series(gdp, passengers);
    CHECK(gdp_fit.slope == doctest::Approx(7.0).epsilon(1e-9));

    SUBCASE("a series against itself is the identity") {
        const auto self = correlate_series(passengers, passengers);
        CHECK(self.slope == 1.0);
        CHECK(self.intercept == 0.0);
    }
    SUBCASE("disjoint dates cannot be correlated") {
        std::vector<DatedValue> other{{Date{1950, 0}, 1.0}, {Date{1951, 0}, 2.0}};
        CHECK_THROWS_AS(correlate_series(passengers, other), ComputationError);
    }
}

TEST_CASE("per-link and per-node traffic normalization") {
    const auto g = ring_with_chords({2008, Half::H1});
    TrafficSeries series;
    TrafficObservation obs;
    obs.date = Date{2008, 0};
    obs.passengers = 1000.0;
    series.observations.push_back(obs);
    obs.date = Date{2009, 0};
    obs.passengers = 0.0;
    series.observations.push_back(obs);

    std::vector<GraphSnapshot> snapshots{g, ring_with_chords({2009, Half::H1})};
    const auto rows =
        per_link_per_node_traffic(series, TrafficField::passengers, snapshots, Half::H1);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].per_link == 50.0);
    CHECK(rows[0].per_node == 100.0);
    CHECK(rows[1].per_link == 0.0);
    CHECK(rows[1].per_node == 0.0);

    SUBCASE("a date without a snapshot is a mapping error") {
        obs.date = Date{2010, 0};
        obs.passengers = 5.0;
        series.observations.push_back(obs);
        CHECK_THROWS_WITH_AS(
            per_link_per_node_traffic(series, TrafficField::passengers, snapshots, Half::H1),
            doctest::Contains("2010"), ComputationError);
    }
}

TEST_CASE("per-node traffic triples over a fixed topology") {
    std::vector<GraphSnapshot> snapshots;
    TrafficSeries series;
    for (int y = 1992; y <= 2009; ++y) {
        snapshots.push_back(ring_with_chords({y, Half::H1}));
        TrafficObservation obs;
        obs.date = Date{y, 0};
        obs.passengers = 100.0 * std::pow(3.0, (y - 1992) / 17.0);
        series.observations.push_back(obs);
    }
    const auto rows =
        per_link_per_node_traffic(series, TrafficField::passengers, snapshots, Half::H1);
    REQUIRE(rows.size() == 18);
    CHECK(rows.back().per_node / rows.front().per_node == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("traffic growth fit measures time in years") {
    TrafficSeries series;
    for (int y = 0; y <= 17; ++y) {
        TrafficObservation obs;
        obs.date = Date{1991 + y, 0};
        obs.cargo_tonnes = 50.0 * std::exp(0.12 * y);
        series.observations.push_back(obs);
    }
    const auto growth = fit_traffic_growth(series, TrafficField::cargo);
    CHECK(growth.fit.rate == doctest::Approx(0.12).epsilon(1e-9));
    CHECK(growth.fit.level0 == doctest::Approx(50.0).epsilon(1e-9));
    CHECK(growth.epoch == Date{1991, 0});
}
