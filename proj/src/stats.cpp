#include "dsf/stats.hpp"

#include <algorithm>
#include <cmath>

namespace dsf {

MeanSE mean_se(const std::vector<double>& xs) {
    MeanSE r;
    r.n = static_cast<std::int64_t>(xs.size());
    if (r.n == 0) return r;
    double s = 0.0;
    for (double x : xs) s += x;
    r.mean = s / double(r.n);
    if (r.n < 2) return r;
    double ss = 0.0;
    for (double x : xs) ss += (x - r.mean) * (x - r.mean);
    r.se = std::sqrt(ss / double(r.n - 1) / double(r.n));
    return r;
}

LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size())
        throw std::invalid_argument("least_squares: size mismatch");
    const std::size_t n = x.size();
    if (n < 2) throw FitUndefinedError("least_squares: need at least two points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= double(n);
    my /= double(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) throw FitUndefinedError("least_squares: x values are all equal");
    LinearFit f;
    f.n = static_cast<std::int64_t>(n);
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    if (syy == 0.0) {
        f.r2 = 1.0;  // a constant y is fit exactly
    } else {
        double ssres = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double e = y[i] - (f.intercept + f.slope * x[i]);
            ssres += e * e;
        }
        f.r2 = 1.0 - ssres / syy;
    }
    return f;
}

double KaplanMeier::eval(double t) const {
    // S(t) = P(X > t): product over event times <= t
    auto it = std::upper_bound(times.begin(), times.end(), t);
    if (it == times.begin()) return 1.0;
    return survival[static_cast<std::size_t>(it - times.begin()) - 1];
}

KaplanMeier km_survival(const std::vector<double>& values,
                        const std::vector<bool>& censored) {
    if (values.size() != censored.size())
        throw std::invalid_argument("km_survival: size mismatch");
    if (values.empty()) throw std::invalid_argument("km_survival: empty sample");

    std::vector<std::size_t> order(values.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return values[a] < values[b];
    });

    KaplanMeier km;
    double s = 1.0;
    double at_risk = double(values.size());
    std::size_t i = 0;
    while (i < order.size()) {
        const double t = values[order[i]];
        double deaths = 0.0, losses = 0.0;
        while (i < order.size() && values[order[i]] == t) {
            if (censored[order[i]])
                losses += 1.0;
            else
                deaths += 1.0;
            ++i;
        }
        if (deaths > 0.0) {
            s *= 1.0 - deaths / at_risk;
            km.times.push_back(t);
            km.survival.push_back(s);
        }
        at_risk -= deaths + losses;
    }
    return km;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty())
        throw std::invalid_argument("ks_two_sample: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        const double t = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= t) ++i;
        while (j < b.size() && b[j] <= t) ++j;
        d = std::max(d, std::abs(double(i) / double(a.size()) -
                                 double(j) / double(b.size())));
    }
    return d;
}

double ks_two_sample_critical(std::size_t n, std::size_t m, double alpha) {
    const double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
    return c * std::sqrt(double(n + m) / (double(n) * double(m)));
}

double dominance_gap_integer(const std::function<double(std::int64_t)>& ref_cdf,
                             std::vector<std::int64_t> samples) {
    if (samples.empty())
        throw std::invalid_argument("dominance_gap_integer: empty sample");
    std::sort(samples.begin(), samples.end());
    const double n = double(samples.size());
    double d = ref_cdf(samples.front() - 1);  // empirical CDF is 0 below the minimum
    std::size_t i = 0;
    while (i < samples.size()) {
        const std::int64_t m = samples[i];
        while (i < samples.size() && samples[i] == m) ++i;
        const double fhat = double(i) / n;
        d = std::max(d, ref_cdf(m) - fhat);
        // the empirical CDF stays flat up to the next sample value, so the gap
        // also peaks just below it
        if (i < samples.size()) d = std::max(d, ref_cdf(samples[i] - 1) - fhat);
    }
    return d;
}

double ks_one_sided_critical(std::size_t n, double alpha) {
    return std::sqrt(-std::log(alpha) / (2.0 * double(n)));
}

}  // namespace dsf
