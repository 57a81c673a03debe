#pragma once

#include <cstddef>
#include <vector>

namespace thermalab::spectral {

/// Nearest-neighbor spacing histogram of an unfolded spectrum. The raw
/// spacings are kept alongside the binned counts: all quantitative tests run
/// on the raw data, the histogram is presentation-only.
struct SpacingHistogram {
    std::vector<double> bin_edges; // size n_bins + 1
    std::vector<std::size_t> counts;
    std::size_t total = 0;
    std::vector<double> spacings; // raw consecutive differences

    /// Normalized density value of bin i.
    double density(std::size_t i) const;
};

enum class ReferenceDist { Wigner, Poisson };

/// Wigner surmise density (pi s / 2) exp(-pi s^2 / 4) and its CDF.
double wigner_pdf(double s);
double wigner_cdf(double s);
/// Poisson (integrable) spacing law exp(-s) and its CDF.
double poisson_pdf(double s);
double poisson_cdf(double s);

/// Histogram of consecutive spacings of an ascending unfolded spectrum.
/// Throws TooFewLevels below 50 eigenvalues.
SpacingHistogram spacing_distribution(const std::vector<double>& unfolded, std::size_t n_bins);

/// Kolmogorov-Smirnov distance between the raw spacings (normalized to unit
/// mean) and the reference law.
double ks_distance(const SpacingHistogram& hist, ReferenceDist reference);

} // namespace thermalab::spectral
