#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "dsf/errors.hpp"

namespace dsf {

struct MeanSE {
    double mean = 0.0;
    double se = 0.0;
    std::int64_t n = 0;
};

MeanSE mean_se(const std::vector<double>& xs);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    std::int64_t n = 0;
};

/// Ordinary least squares of y on x. Throws FitUndefinedError when x is
/// degenerate or fewer than two points are given.
LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y);

/// Kaplan-Meier product-limit survival curve for right-censored samples.
/// eval(t) returns the estimated P(X > t).
struct KaplanMeier {
    std::vector<double> times;     // distinct event times, ascending
    std::vector<double> survival;  // S(t_i+)
    double eval(double t) const;
};

KaplanMeier km_survival(const std::vector<double>& values,
                        const std::vector<bool>& censored);

/// Two-sided two-sample Kolmogorov-Smirnov statistic.
double ks_two_sample(std::vector<double> a, std::vector<double> b);

/// Critical value for the two-sample KS test at significance alpha.
double ks_two_sample_critical(std::size_t n, std::size_t m, double alpha);

/// One-sided statistic max_m (F_ref(m) - Fhat(m)) over the integer support of
/// the samples. Large values mean the samples are stochastically larger than
/// the reference distribution.
double dominance_gap_integer(const std::function<double(std::int64_t)>& ref_cdf,
                             std::vector<std::int64_t> samples);

/// Critical value for the one-sample one-sided KS test at significance alpha.
double ks_one_sided_critical(std::size_t n, double alpha);

}  // namespace dsf
