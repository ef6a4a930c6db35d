#include "airnet/fitting.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <string>
#include <vector>

namespace airnet {
namespace {

struct OlsResult {
    double slope = 0.0;
    double intercept = 0.0;
    double sse = 0.0;
    double pearson_r = 0.0;
    double r2 = 0.0;
};

// Closed-form simple regression. Caller guarantees n >= 2 and var(x) > 0.
OlsResult ols(std::span<const double> x, std::span<const double> y) {
    const size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);

    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }

    OlsResult r;
    r.slope = sxy / sxx;
    r.intercept = my - r.slope * mx;
    r.sse = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double e = y[i] - (r.intercept + r.slope * x[i]);
        r.sse += e * e;
    }
    if (syy > 0.0) {
        r.pearson_r = sxy / std::sqrt(sxx * syy);
        r.r2 = r.pearson_r * r.pearson_r;
    } else {
        r.pearson_r = 0.0;  // constant y: no correlation to speak of
        r.r2 = 0.0;
    }
    return r;
}

double x_variance(std::span<const double> x) {
    double mx = 0.0;
    for (double v : x) mx += v;
    mx /= static_cast<double>(x.size());
    double sxx = 0.0;
    for (double v : x) sxx += (v - mx) * (v - mx);
    return sxx;
}

// Solves the symmetric 3x3 system M d = b by Gaussian elimination with
// partial pivoting. Returns false when M is singular.
bool solve3(std::array<std::array<double, 3>, 3> m, std::array<double, 3> b,
            std::array<double, 3>& d) {
    for (int col = 0; col < 3; ++col) {
        int pivot = col;
        for (int row = col + 1; row < 3; ++row) {
            if (std::abs(m[row][col]) > std::abs(m[pivot][col])) pivot = row;
        }
        if (std::abs(m[pivot][col]) < 1e-300) return false;
        std::swap(m[col], m[pivot]);
        std::swap(b[col], b[pivot]);
        for (int row = col + 1; row < 3; ++row) {
            const double f = m[row][col] / m[col][col];
            for (int k = col; k < 3; ++k) m[row][k] -= f * m[col][k];
            b[row] -= f * b[col];
        }
    }
    for (int row = 2; row >= 0; --row) {
        double acc = b[row];
        for (int k = row + 1; k < 3; ++k) acc -= m[row][k] * d[k];
        d[row] = acc / m[row][row];
    }
    return true;
}

double exp_model(double x, double a, double t1, double y0) {
    return a * std::exp(x / t1) + y0;
}

double exp_sse(std::span<const Point> pts, double a, double t1, double y0) {
    double sse = 0.0;
    for (const auto& [x, y] : pts) {
        const double e = y - exp_model(x, a, t1, y0);
        sse += e * e;
    }
    return sse;
}

}  // namespace

LinearFit fit_linear(std::span<const Point> points) {
    if (points.size() < 2) throw InsufficientDataError("linear fit needs >= 2 points");
    std::vector<double> x, y;
    x.reserve(points.size());
    y.reserve(points.size());
    for (const auto& [px, py] : points) {
        x.push_back(px);
        y.push_back(py);
    }
    if (x_variance(x) <= 0.0) throw DegenerateError("linear fit: zero x variance");
    OlsResult r = ols(x, y);
    return {r.slope, r.intercept, r.pearson_r, static_cast<int>(points.size())};
}

PowerFit fit_power(std::span<const Point> points) {
    if (points.size() < 3) throw InsufficientDataError("power fit needs >= 3 points");
    std::vector<double> lx, ly;
    lx.reserve(points.size());
    ly.reserve(points.size());
    for (const auto& [x, y] : points) {
        if (x <= 0.0 || y <= 0.0) {
            throw DomainError("power fit requires positive x and y");
        }
        lx.push_back(std::log(x));
        ly.push_back(std::log(y));
    }
    if (x_variance(lx) <= 0.0) throw DegenerateError("power fit: zero x variance");
    OlsResult r = ols(lx, ly);
    return {std::exp(r.intercept), r.slope, r.r2, static_cast<int>(points.size())};
}

TwoRegimeFit fit_two_regime_power_law(const DistributionTable& dist) {
    return fit_two_regime_power_law(std::span<const Point>(dist.entries));
}

TwoRegimeFit fit_two_regime_power_law(std::span<const Point> points) {
    constexpr int kMinSegment = 3;
    std::vector<Point> sorted(points.begin(), points.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end(),
                             [](const Point& a, const Point& b) { return a.first == b.first; }),
                 sorted.end());

    const int n = static_cast<int>(sorted.size());
    if (n < 2 * kMinSegment) {
        throw InsufficientDataError("two-regime fit needs >= " +
                                    std::to_string(2 * kMinSegment) +
                                    " distinct points, got " + std::to_string(n));
    }
    std::vector<double> lx(sorted.size()), lp(sorted.size());
    for (int i = 0; i < n; ++i) {
        const auto& [x, p] = sorted[static_cast<size_t>(i)];
        if (x <= 0.0 || p <= 0.0) {
            throw DomainError("two-regime fit requires positive x and p");
        }
        lx[static_cast<size_t>(i)] = std::log(x);
        lp[static_cast<size_t>(i)] = std::log(p);
    }

    TwoRegimeFit best;
    best.n = n;
    bool have_best = false;
    // Breakpoint index b belongs to both segments: [0..b] and [b..n-1].
    for (int b = kMinSegment - 1; b <= n - kMinSegment; ++b) {
        std::span<const double> x1(lx.data(), static_cast<size_t>(b + 1));
        std::span<const double> p1(lp.data(), static_cast<size_t>(b + 1));
        std::span<const double> x2(lx.data() + b, static_cast<size_t>(n - b));
        std::span<const double> p2(lp.data() + b, static_cast<size_t>(n - b));
        OlsResult r1 = ols(x1, p1);
        OlsResult r2 = ols(x2, p2);
        const double sse = r1.sse + r2.sse;
        if (!have_best || sse < best.sse) {  // strict < keeps the smaller break on ties
            best.lambda1 = r1.slope;
            best.lambda2 = r2.slope;
            best.k_break = sorted[static_cast<size_t>(b)].first;
            best.sse = sse;
            have_best = true;
        }
    }
    return best;
}

ExponentialFit fit_exponential(std::span<const Point> points,
                               const ExponentialFitOptions& options) {
    if (points.size() < 4) throw InsufficientDataError("exponential fit needs >= 4 points");
    std::vector<Point> pts(points.begin(), points.end());
    std::sort(pts.begin(), pts.end());
    if (pts.front().first == pts.back().first) {
        throw DegenerateError("exponential fit: zero x spread");
    }

    std::vector<double> ys;
    ys.reserve(pts.size());
    for (const auto& [x, y] : pts) ys.push_back(y);
    std::sort(ys.begin(), ys.end());
    const double y_min = ys.front();
    const double y_max = ys.back();
    const double range = y_max - y_min;
    if (range == 0.0) throw DegenerateError("exponential fit: flat y");

    // Initialization: offset slightly below the data floor, e-folding scale
    // from the spread between the max and the first quartile.
    double y0 = y_min - 0.05 * range;
    const double y_q1 = ys[(ys.size() - 1) / 4];
    const double x_min = pts.front().first;
    const double x_max = pts.back().first;
    double t1 = (x_max - x_min) / std::log((y_max - y0) / (y_q1 - y0));
    if (!std::isfinite(t1) || t1 == 0.0) t1 = (x_max - x_min);
    double a = (y_max - y0) / std::exp(x_max / t1);

    double sse = exp_sse(pts, a, t1, y0);
    double damping = 1e-3;
    int iterations = 0;

    auto make_fit = [&](double final_sse) {
        ExponentialFit fit;
        fit.amplitude = a;
        fit.t1 = t1;
        fit.y0 = y0;
        fit.rmse = std::sqrt(final_sse / static_cast<double>(pts.size()));
        fit.n = static_cast<int>(pts.size());
        fit.iterations = iterations;
        return fit;
    };

    for (; iterations < options.max_iterations; ++iterations) {
        // Normal equations J^T J and J^T r for the current parameters.
        std::array<std::array<double, 3>, 3> jtj{};
        std::array<double, 3> jtr{};
        for (const auto& [x, y] : pts) {
            const double e = std::exp(x / t1);
            const std::array<double, 3> j = {e, a * e * (-x / (t1 * t1)), 1.0};
            const double r = y - (a * e + y0);
            for (int u = 0; u < 3; ++u) {
                jtr[u] += j[u] * r;
                for (int v = 0; v < 3; ++v) jtj[u][v] += j[u] * j[v];
            }
        }

        bool accepted = false;
        for (int attempt = 0; attempt < 32; ++attempt) {
            auto damped = jtj;
            for (int u = 0; u < 3; ++u) {
                damped[u][u] += damping * std::max(jtj[u][u], 1e-12);
            }
            std::array<double, 3> step{};
            if (solve3(damped, jtr, step)) {
                const double a2 = a + step[0];
                const double t2 = t1 + step[1];
                const double y2 = y0 + step[2];
                if (t2 != 0.0 && std::isfinite(t2)) {
                    const double sse2 = exp_sse(pts, a2, t2, y2);
                    if (std::isfinite(sse2) && sse2 <= sse) {
                        const double rel = (sse - sse2) / std::max(sse, 1e-300);
                        a = a2;
                        t1 = t2;
                        y0 = y2;
                        assert(sse2 <= sse);  // accepted steps never increase SSE
                        sse = sse2;
                        damping = std::max(damping * 0.25, 1e-12);
                        accepted = true;
                        if (rel < options.relative_sse_tolerance) {
                            ++iterations;
                            return make_fit(sse);
                        }
                        break;
                    }
                }
            }
            damping *= 4.0;
        }
        if (!accepted) {
            // No downhill step found at any damping: treat as converged.
            ++iterations;
            return make_fit(sse);
        }
    }
    throw FitFailedError("exponential fit did not converge in " +
                             std::to_string(options.max_iterations) + " iterations",
                         make_fit(sse));
}

GrowthFit fit_exponential_growth(std::span<const Point> t_value) {
    if (t_value.size() < 4) throw InsufficientDataError("growth fit needs >= 4 observations");
    std::vector<double> t, lv;
    t.reserve(t_value.size());
    lv.reserve(t_value.size());
    for (const auto& [ti, vi] : t_value) {
        if (vi <= 0.0) throw DomainError("growth fit requires positive values");
        t.push_back(ti);
        lv.push_back(std::log(vi));
    }
    if (x_variance(t) <= 0.0) throw DegenerateError("growth fit: zero time spread");
    OlsResult r = ols(t, lv);
    GrowthFit fit;
    fit.level0 = std::exp(r.intercept);
    fit.rate = r.slope;
    fit.rmse = std::sqrt(r.sse / static_cast<double>(t_value.size()));
    fit.n = static_cast<int>(t_value.size());
    return fit;
}

}  // namespace airnet
