#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <vector>

namespace thermalab::stats {

/// Streaming mean/variance accumulator (sum-based, deterministic for a fixed
/// feed order).
struct Accumulator {
    std::size_t n = 0;
    double sum = 0.0;
    double sum_sq = 0.0;

    void add(double x) {
        ++n;
        sum += x;
        sum_sq += x * x;
    }
    void merge(const Accumulator& o) {
        n += o.n;
        sum += o.sum;
        sum_sq += o.sum_sq;
    }
    double mean() const { return n ? sum / double(n) : 0.0; }
    /// Population variance (denominator n), clamped against cancellation.
    double variance() const {
        if (n == 0) return 0.0;
        const double m = mean();
        return std::max(0.0, sum_sq / double(n) - m * m);
    }
    /// Unbiased sample variance (denominator n-1).
    double sample_variance() const {
        if (n < 2) return 0.0;
        return variance() * double(n) / double(n - 1);
    }
    double stderr_of_mean() const;
};

double mean(const std::vector<double>& xs);
double variance(const std::vector<double>& xs);
double excess_kurtosis(const std::vector<double>& xs);

/// Standard normal CDF.
double normal_cdf(double x);

/// Kolmogorov-Smirnov statistic of samples against a reference CDF.
/// Sorts a copy of the samples.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

/// Ordinary least squares line y = intercept + slope * x.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);
LineFit fit_line_weighted(const std::vector<double>& x, const std::vector<double>& y,
                          const std::vector<double>& w);

/// Least-squares polynomial fit in a Chebyshev basis on the data's range.
/// Evaluate with PolyFit::operator(). Throws FitFailure when the system is
/// underdetermined or numerically singular.
class PolyFit {
public:
    PolyFit(const std::vector<double>& x, const std::vector<double>& y, int degree);
    double operator()(double x) const;
    double derivative(double x) const;
    double fit_lo() const { return lo_; }
    double fit_hi() const { return hi_; }

private:
    double lo_ = 0.0, hi_ = 1.0;
    std::vector<double> coef_;
};

} // namespace thermalab::stats
