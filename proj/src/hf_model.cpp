#include "thermalab/hf_model.hpp"

#include "thermalab/errors.hpp"

#include <cmath>

namespace thermalab::ensemble {

double HfModel::model_density(double e) const {
    if (model == DensityModel::PicketFence) return 1.0 / spacing;
    return rho0 * std::exp(e / t0);
}

double HfModel::cumulative(double e) const {
    if (model == DensityModel::PicketFence) return (e - e_min) / spacing + 0.5;
    return rho0 * t0 * (std::exp(e / t0) - std::exp(e_min / t0)) + 0.5;
}

double HfModel::quantile(double c) const {
    if (model == DensityModel::PicketFence) return e_min + (c - 0.5) * spacing;
    const double arg = std::exp(e_min / t0) + (c - 0.5) / (rho0 * t0);
    if (arg <= 0.0) throw OutOfRange("HfModel::quantile: count below spectrum support");
    return t0 * std::log(arg);
}

HfModel build_hf_picket_fence(double d, std::size_t n_levels, double e_min) {
    if (d <= 0.0) throw InvalidDensity("build_hf: picket-fence spacing must be > 0");
    if (n_levels < 2) throw InvalidArgument("build_hf: need >= 2 levels");
    HfModel hf;
    hf.model = DensityModel::PicketFence;
    hf.spacing = d;
    hf.e_min = e_min;
    hf.levels.resize(n_levels);
    for (std::size_t m = 0; m < n_levels; ++m) hf.levels[m] = e_min + double(m) * d;
    return hf;
}

HfModel build_hf_exp_growth(double rho0, double t0, std::size_t n_levels, double e_min) {
    if (rho0 <= 0.0 || t0 <= 0.0) throw InvalidDensity("build_hf: need rho0 > 0 and t0 > 0");
    if (n_levels < 2) throw InvalidArgument("build_hf: need >= 2 levels");
    HfModel hf;
    hf.model = DensityModel::ExpGrowth;
    hf.rho0 = rho0;
    hf.t0 = t0;
    hf.e_min = e_min;
    hf.levels.resize(n_levels);
    for (std::size_t m = 0; m < n_levels; ++m) hf.levels[m] = hf.quantile(double(m) + 0.5);
    return hf;
}

double level_density(const HfModel& hf, double e, double smoothing) {
    if (smoothing <= 0.0) throw InvalidArgument("level_density: smoothing must be > 0");
    if (e < hf.min_level() - smoothing || e > hf.max_level() + smoothing)
        throw OutOfRange("level_density: point outside spectrum support");
    const double norm = 1.0 / (std::sqrt(2.0 * M_PI) * smoothing);
    double rho = 0.0;
    for (double lv : hf.levels) {
        const double z = (e - lv) / smoothing;
        rho += norm * std::exp(-0.5 * z * z);
    }
    return rho;
}

double correlation_n(const HfModel& hf, double e, double delta, std::string* warning) {
    if (delta <= 0.0) throw InvalidArgument("correlation_n: delta must be > 0");
    const double smoothing = 3.0 / hf.model_density(e);
    const double n = level_density(hf, e, smoothing) * delta;
    if (n < 10.0 && warning)
        *warning += "N < 10: correlation interval holds too few levels for the GOE limit\n";
    return n;
}

} // namespace thermalab::ensemble
