#include "airnet/distribution.hpp"

#include <algorithm>
#include <cmath>

#include "airnet/error.hpp"

namespace airnet {

DistributionTable pdf_from_counts(const std::map<int, long long>& counts) {
    long long total = 0;
    for (const auto& [value, count] : counts) total += count;
    if (total <= 0) throw InsufficientDataError("pdf over zero observations");

    DistributionTable table;
    table.kind = DistributionTable::Kind::pdf;
    table.binning = Binning::raw();
    table.entries.reserve(counts.size());
    for (const auto& [value, count] : counts) {
        if (count == 0) continue;
        table.entries.emplace_back(static_cast<double>(value),
                                   static_cast<double>(count) / static_cast<double>(total));
    }
    return table;
}

DistributionTable log_bin(const DistributionTable& raw_pdf, double base) {
    if (base <= 1.0) throw DomainError("log-binning base must exceed 1");
    if (raw_pdf.kind != DistributionTable::Kind::pdf ||
        raw_pdf.binning.mode != Binning::Mode::raw) {
        throw DomainError("log_bin expects a raw pdf");
    }

    std::map<int, double> density;  // integer value -> probability
    int max_value = 0;
    for (const auto& [x, p] : raw_pdf.entries) {
        int v = static_cast<int>(std::llround(x));
        if (v < 1) continue;
        density[v] += p;
        max_value = std::max(max_value, v);
    }

    DistributionTable table;
    table.kind = DistributionTable::Kind::pdf;
    table.binning = Binning::logarithmic(base);
    if (max_value == 0) return table;

    double lo = 1.0;
    while (static_cast<int>(std::ceil(lo)) <= max_value) {
        double hi = lo * base;
        int k_lo = static_cast<int>(std::ceil(lo));
        int k_hi = static_cast<int>(std::ceil(hi)) - 1;  // last integer strictly below hi
        if (k_hi >= k_lo) {
            k_hi = std::min(k_hi, max_value);
            double sum = 0.0;
            for (int k = k_lo; k <= k_hi; ++k) {
                auto it = density.find(k);
                if (it != density.end()) sum += it->second;
            }
            int width = k_hi - k_lo + 1;
            if (sum > 0.0) {
                double x = std::sqrt(static_cast<double>(k_lo) * static_cast<double>(k_hi));
                table.entries.emplace_back(x, sum / width);
            }
        }
        lo = hi;
    }
    return table;
}

DistributionTable ccdf_from_values(std::span<const double> values) {
    if (values.empty()) throw InsufficientDataError("ccdf over zero observations");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());

    DistributionTable table;
    table.kind = DistributionTable::Kind::ccdf;
    table.binning = Binning::raw();
    const double n = static_cast<double>(sorted.size());
    size_t i = 0;
    while (i < sorted.size()) {
        // all observations >= sorted[i] sit at indices i..n-1
        table.entries.emplace_back(sorted[i], (n - static_cast<double>(i)) / n);
        double v = sorted[i];
        while (i < sorted.size() && sorted[i] == v) ++i;
    }
    return table;
}

}  // namespace airnet
