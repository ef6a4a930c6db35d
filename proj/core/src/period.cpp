#include "airnet/period.hpp"

#include <cctype>

#include "airnet/error.hpp"

namespace airnet {

std::string PeriodLabel::str() const {
    return std::to_string(year) + (half == Half::H1 ? "H1" : "H2");
}

std::optional<PeriodLabel> PeriodLabel::try_parse(std::string_view text) {
    if (text.size() < 6) return std::nullopt;
    int year = 0;
    size_t i = 0;
    for (; i < text.size(); ++i) {
        char ch = text[i];
        if (!std::isdigit(static_cast<unsigned char>(ch))) break;
        year = year * 10 + (ch - '0');
    }
    if (i != 4) return std::nullopt;
    if (i + 2 != text.size()) return std::nullopt;
    char h = text[i];
    if (h != 'H' && h != 'h') return std::nullopt;
    char digit = text[i + 1];
    if (digit == '1') return PeriodLabel{year, Half::H1};
    if (digit == '2') return PeriodLabel{year, Half::H2};
    return std::nullopt;
}

PeriodLabel PeriodLabel::parse(std::string_view text) {
    auto parsed = try_parse(text);
    if (!parsed) {
        throw ParseError("invalid period label '" + std::string(text) +
                         "' (expected YYYYH1 or YYYYH2)");
    }
    return *parsed;
}

}  // namespace airnet
