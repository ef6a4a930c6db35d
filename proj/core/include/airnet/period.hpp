#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace airnet {

/// Schedule half-year. H1 covers January-June, H2 July-December.
enum class Half { H1 = 1, H2 = 2 };

/// One timetable period, e.g. 2009H1. Totally ordered by (year, half).
struct PeriodLabel {
    int year = 0;
    Half half = Half::H1;

    friend auto operator<=>(const PeriodLabel&, const PeriodLabel&) = default;

    std::string str() const;

    /// Accepts "YYYYH1" / "YYYYH2" (case-insensitive). Throws ParseError.
    static PeriodLabel parse(std::string_view text);
    static std::optional<PeriodLabel> try_parse(std::string_view text);
};

}  // namespace airnet
