#pragma once

#include <span>
#include <utility>

#include "airnet/distribution.hpp"
#include "airnet/error.hpp"

namespace airnet {

using Point = std::pair<double, double>;

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double pearson_r = 0.0;
    int n = 0;
};

struct PowerFit {
    double c = 0.0;     ///< prefactor, > 0
    double beta = 0.0;  ///< exponent
    double r2 = 0.0;    ///< of the log-log regression
    int n = 0;
};

struct TwoRegimeFit {
    double lambda1 = 0.0;  ///< log-log slope below the break
    double lambda2 = 0.0;  ///< log-log slope above the break
    double k_break = 0.0;
    double sse = 0.0;      ///< total squared error in log-log space
    int n = 0;
};

struct ExponentialFit {
    double amplitude = 0.0;  ///< A in A*exp(x/t1) + y0
    double t1 = 0.0;
    double y0 = 0.0;
    double rmse = 0.0;
    int n = 0;
    int iterations = 0;
};

struct GrowthFit {
    double level0 = 0.0;  ///< value at t = 0
    double rate = 0.0;    ///< continuous growth rate per t unit
    double rmse = 0.0;    ///< of log-space residuals
    int n = 0;
};

/// Exponential fit that exhausted its iteration budget; carries the best
/// parameters reached so far.
class FitFailedError : public ComputationError {
public:
    FitFailedError(const std::string& message, ExponentialFit best)
        : ComputationError(message), best_(best) {}
    const ExponentialFit& best() const noexcept { return best_; }

private:
    ExponentialFit best_;
};

/// Ordinary least squares with Pearson r. Zero x variance is degenerate;
/// zero y variance yields slope 0, r 0.
LinearFit fit_linear(std::span<const Point> points);

/// OLS on (log x, log y); beta is the slope, c = exp(intercept).
/// Requires >= 3 points, all positive.
PowerFit fit_power(std::span<const Point> points);

/// Scans every interior breakpoint candidate over the table's (x, p) entries
/// sorted by x; per candidate fits both segments by OLS in log-log space with
/// the breakpoint included in both, and keeps the candidate with minimal total
/// SSE (ties go to the smaller break). Each segment needs >= 3 points, so at
/// least 6 entries are required; nonpositive x or p is a domain error.
TwoRegimeFit fit_two_regime_power_law(const DistributionTable& dist);
TwoRegimeFit fit_two_regime_power_law(std::span<const Point> points);

struct ExponentialFitOptions {
    int max_iterations = 500;
    double relative_sse_tolerance = 1e-10;
};

/// Damped Gauss-Newton (Levenberg-Marquardt style) fit of y = A*exp(x/t1) + y0.
/// SSE never increases across accepted steps; converges when the relative SSE
/// change drops below the tolerance. Flat y is degenerate; hitting the
/// iteration cap throws FitFailedError with the best parameters so far.
ExponentialFit fit_exponential(std::span<const Point> points,
                               const ExponentialFitOptions& options = {});

/// OLS on (t, log value): level0 = exp(intercept), rate = slope.
/// Requires >= 4 observations, all positive.
GrowthFit fit_exponential_growth(std::span<const Point> t_value);

}  // namespace airnet
