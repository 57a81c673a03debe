#include "thermalab/stats.hpp"

#include "thermalab/errors.hpp"

#include <algorithm>
#include <cmath>

namespace thermalab::stats {

double Accumulator::stderr_of_mean() const {
    if (n < 2) return 0.0;
    return std::sqrt(sample_variance() / double(n));
}

double mean(const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return xs.empty() ? 0.0 : s / double(xs.size());
}

double variance(const std::vector<double>& xs) {
    if (xs.size() < 2) return 0.0;
    const double m = mean(xs);
    double s = 0.0;
    for (double x : xs) s += (x - m) * (x - m);
    return s / double(xs.size());
}

double excess_kurtosis(const std::vector<double>& xs) {
    const double m = mean(xs);
    double m2 = 0.0, m4 = 0.0;
    for (double x : xs) {
        const double d = x - m;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    m2 /= double(xs.size());
    m4 /= double(xs.size());
    if (m2 == 0.0) return 0.0;
    return m4 / (m2 * m2) - 3.0;
}

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
    std::sort(samples.begin(), samples.end());
    const double n = double(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        d = std::max(d, std::abs(f - double(i + 1) / n));
        d = std::max(d, std::abs(f - double(i) / n));
    }
    return d;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    return fit_line_weighted(x, y, std::vector<double>(x.size(), 1.0));
}

LineFit fit_line_weighted(const std::vector<double>& x, const std::vector<double>& y,
                          const std::vector<double>& w) {
    if (x.size() != y.size() || x.size() != w.size() || x.size() < 2)
        throw InvalidArgument("fit_line: need >= 2 points of equal length");
    double sw = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sw += w[i];
        sx += w[i] * x[i];
        sy += w[i] * y[i];
        sxx += w[i] * x[i] * x[i];
        sxy += w[i] * x[i] * y[i];
    }
    const double det = sw * sxx - sx * sx;
    if (det == 0.0) throw FitFailure("fit_line: degenerate abscissae");
    LineFit f;
    f.slope = (sw * sxy - sx * sy) / det;
    f.intercept = (sxx * sy - sx * sxy) / det;
    double chi2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (f.intercept + f.slope * x[i]);
        chi2 += w[i] * r * r;
    }
    const double dof = std::max<double>(1.0, double(x.size()) - 2.0);
    f.slope_stderr = std::sqrt(std::max(0.0, chi2 / dof * sw / det));
    return f;
}

namespace {
double cheb(int k, double t) {
    if (k == 0) return 1.0;
    if (k == 1) return t;
    double a = 1.0, b = t;
    for (int i = 2; i <= k; ++i) {
        const double c = 2.0 * t * b - a;
        a = b;
        b = c;
    }
    return b;
}

// d T_k / dt = k U_{k-1}
double cheb_deriv(int k, double t) {
    if (k == 0) return 0.0;
    if (k == 1) return 1.0;
    double u0 = 1.0, u1 = 2.0 * t; // U_0, U_1
    for (int i = 2; i < k; ++i) {
        const double u2 = 2.0 * t * u1 - u0;
        u0 = u1;
        u1 = u2;
    }
    return double(k) * u1;
}
} // namespace

PolyFit::PolyFit(const std::vector<double>& x, const std::vector<double>& y, int degree) {
    if (degree < 0) throw FitFailure("polyfit: negative degree");
    const std::size_t n = x.size();
    const std::size_t m = static_cast<std::size_t>(degree) + 1;
    if (n < m + 1) throw FitFailure("polyfit: underdetermined (need degree+2 points)");
    lo_ = *std::min_element(x.begin(), x.end());
    hi_ = *std::max_element(x.begin(), x.end());
    if (hi_ <= lo_) throw FitFailure("polyfit: degenerate abscissae");

    // Normal equations in a Chebyshev basis on [lo, hi], solved by Cholesky.
    std::vector<double> g(m * m, 0.0), rhs(m, 0.0), phi(m);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = 2.0 * (x[i] - lo_) / (hi_ - lo_) - 1.0;
        for (std::size_t k = 0; k < m; ++k) phi[k] = cheb(int(k), t);
        for (std::size_t a = 0; a < m; ++a) {
            rhs[a] += phi[a] * y[i];
            for (std::size_t b = a; b < m; ++b) g[a * m + b] += phi[a] * phi[b];
        }
    }
    std::vector<double> l(m * m, 0.0);
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = a; b < m; ++b) {
            double s = g[a * m + b];
            for (std::size_t k = 0; k < a; ++k) s -= l[a * m + k] * l[b * m + k];
            if (a == b) {
                if (s <= 1e-12 * g[0]) throw FitFailure("polyfit: ill-conditioned staircase fit");
                l[a * m + a] = std::sqrt(s);
            } else {
                l[b * m + a] = s / l[a * m + a];
            }
        }
    }
    std::vector<double> zv(m, 0.0);
    for (std::size_t a = 0; a < m; ++a) {
        double s = rhs[a];
        for (std::size_t k = 0; k < a; ++k) s -= l[a * m + k] * zv[k];
        zv[a] = s / l[a * m + a];
    }
    coef_.assign(m, 0.0);
    for (std::size_t ar = m; ar-- > 0;) {
        double s = zv[ar];
        for (std::size_t k = ar + 1; k < m; ++k) s -= l[k * m + ar] * coef_[k];
        coef_[ar] = s / l[ar * m + ar];
    }
}

double PolyFit::operator()(double x) const {
    const double t = 2.0 * (x - lo_) / (hi_ - lo_) - 1.0;
    double s = 0.0;
    for (std::size_t k = 0; k < coef_.size(); ++k) s += coef_[k] * cheb(int(k), t);
    return s;
}

double PolyFit::derivative(double x) const {
    const double scale = 2.0 / (hi_ - lo_);
    const double t = scale * (x - lo_) - 1.0;
    double s = 0.0;
    for (std::size_t k = 1; k < coef_.size(); ++k) s += coef_[k] * cheb_deriv(int(k), t);
    return s * scale;
}

} // namespace thermalab::stats
