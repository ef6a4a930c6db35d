#pragma once

#include <map>
#include <span>
#include <utility>
#include <vector>

namespace airnet {

struct Binning {
    enum class Mode { raw, logarithmic };
    Mode mode = Mode::raw;
    double base = 1.5;

    static Binning raw() { return {Mode::raw, 0.0}; }
    static Binning logarithmic(double base = 1.5) { return {Mode::logarithmic, base}; }
};

/// Empirical distribution, x strictly increasing.
///   pdf + raw binning:  p is a probability, sums to 1.
///   pdf + log binning:  p is the mean probability density over the integer
///                       values inside each geometric bin (empty bins dropped),
///                       which keeps power-law slopes fittable but no longer
///                       sums to 1.
///   ccdf: p = P(X >= x), starts at 1, non-increasing.
struct DistributionTable {
    enum class Kind { pdf, ccdf };
    Kind kind = Kind::pdf;
    Binning binning;
    std::vector<std::pair<double, double>> entries;
};

/// Raw pdf from integer value counts (counts keyed by value).
DistributionTable pdf_from_counts(const std::map<int, long long>& counts);

/// Merges a raw integer pdf into geometric bins [base^m, base^{m+1}) and
/// averages the per-integer densities inside each bin (unobserved integers
/// count as zero). Bin abscissa is the geometric mean of the integer range.
/// Values < 1 cannot be log-binned and are dropped.
DistributionTable log_bin(const DistributionTable& raw_pdf, double base);

/// Complementary cumulative distribution over observed values.
DistributionTable ccdf_from_values(std::span<const double> values);

}  // namespace airnet
