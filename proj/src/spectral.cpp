#include "thermalab/spectral.hpp"

#include "thermalab/errors.hpp"
#include "thermalab/stats.hpp"

#include <algorithm>
#include <cmath>

namespace thermalab::spectral {

double SpacingHistogram::density(std::size_t i) const {
    const double width = bin_edges[i + 1] - bin_edges[i];
    if (total == 0 || width <= 0.0) return 0.0;
    return double(counts[i]) / (double(total) * width);
}

double wigner_pdf(double s) {
    return 0.5 * M_PI * s * std::exp(-0.25 * M_PI * s * s);
}

double wigner_cdf(double s) {
    if (s <= 0.0) return 0.0;
    return 1.0 - std::exp(-0.25 * M_PI * s * s);
}

double poisson_pdf(double s) {
    return std::exp(-s);
}

double poisson_cdf(double s) {
    if (s <= 0.0) return 0.0;
    return 1.0 - std::exp(-s);
}

SpacingHistogram spacing_distribution(const std::vector<double>& unfolded, std::size_t n_bins) {
    if (unfolded.size() < 50) throw TooFewLevels("spacing_distribution: need >= 50 levels");
    if (n_bins == 0) throw InvalidArgument("spacing_distribution: need >= 1 bin");

    SpacingHistogram h;
    h.spacings.reserve(unfolded.size() - 1);
    for (std::size_t i = 1; i < unfolded.size(); ++i)
        h.spacings.push_back(unfolded[i] - unfolded[i - 1]);
    h.total = h.spacings.size();

    const double smax = std::max(1e-12, *std::max_element(h.spacings.begin(), h.spacings.end()));
    h.bin_edges.resize(n_bins + 1);
    for (std::size_t i = 0; i <= n_bins; ++i)
        h.bin_edges[i] = smax * double(i) / double(n_bins);
    h.counts.assign(n_bins, 0);
    for (double s : h.spacings) {
        auto idx = static_cast<std::size_t>(std::min<double>(
            double(n_bins - 1), std::floor(s / smax * double(n_bins))));
        ++h.counts[idx];
    }
    return h;
}

double ks_distance(const SpacingHistogram& hist, ReferenceDist reference) {
    if (hist.total < 50) throw TooFewLevels("ks_distance: need >= 50 spacings");
    const double m = stats::mean(hist.spacings);
    std::vector<double> normalized(hist.spacings);
    if (m > 0.0)
        for (double& s : normalized) s /= m;
    auto cdf = (reference == ReferenceDist::Wigner)
                   ? std::function<double(double)>(wigner_cdf)
                   : std::function<double(double)>(poisson_cdf);
    return stats::ks_statistic(std::move(normalized), cdf);
}

} // namespace thermalab::spectral
