#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace thermalab::ensemble {

enum class DensityModel { PicketFence, ExpGrowth };

/// The integrable scaffold: an ascending ladder of single-model levels plus
/// the smooth density it realizes. Levels sit at half-integer counts of the
/// cumulative level counter, so quantile(m + 1/2) reproduces level m.
struct HfModel {
    std::vector<double> levels;
    DensityModel model = DensityModel::PicketFence;
    double spacing = 1.0; // picket-fence d
    double rho0 = 1.0;    // exp growth rho(E) = rho0 exp(E / t0)
    double t0 = 1.0;
    double e_min = 0.0;

    std::size_t size() const { return levels.size(); }
    double min_level() const { return levels.front(); }
    double max_level() const { return levels.back(); }
    double span() const { return levels.back() - levels.front(); }

    /// Smooth model density rho(E) (analytic, not the kernel estimate).
    double model_density(double e) const;
    /// Smooth cumulative level counter C(E), with C(level m) = m + 1/2.
    double cumulative(double e) const;
    /// Inverse of cumulative().
    double quantile(double c) const;
    /// Ensemble-average position of eigenvalue alpha: quantile(alpha + 1/2).
    double ebar(std::size_t alpha) const { return quantile(double(alpha) + 0.5); }
};

/// Picket-fence ladder: levels at e_min + m d.
HfModel build_hf_picket_fence(double d, std::size_t n_levels, double e_min);

/// Exponentially growing density rho(E) = rho0 exp(E / t0); levels from the
/// inverted cumulative counter.
HfModel build_hf_exp_growth(double rho0, double t0, std::size_t n_levels, double e_min);

/// Gaussian-kernel estimate of the level density at e. Callers should pass
/// smoothing of at least the local mean spacing; the kernel limit for small
/// smoothing is spiky by construction.
double level_density(const HfModel& hf, double e, double smoothing);

/// N = rho(e) * delta, the number of levels inside one correlation width.
/// Appends to *warning when the GOE-limit condition N >> 1 is marginal
/// (N < 10).
double correlation_n(const HfModel& hf, double e, double delta, std::string* warning = nullptr);

} // namespace thermalab::ensemble
