#pragma once

#include "thermalab/dynamics.hpp"
#include "thermalab/matrix.hpp"
#include "thermalab/stats.hpp"

#include <cstddef>
#include <vector>

namespace thermalab::eth {

using dynamics::Observable;
using dynamics::StatisticalOperator;

/// Binning and window geometry for the matrix-element analysis.
struct FitOptions {
    double window = 1.0;           // moving-average half-width for the diagonal curve
    std::size_t n_e_bins = 12;     // bins in E over the central part of the spectrum
    std::size_t n_omega_bins = 40; // bins per sign of omega
    double omega_max = 1.0;        // analysis limit in |E_a - E_b|
    double e_fraction = 0.6;       // central fraction of the spectrum analysed
    std::size_t min_bin_count = 20;
    double delta = 1.0;  // correlation width (context for scaling checks)
    double corr_n = 0.0; // N = rho * delta; s_eff = ln N when > 0
};

/// Extracted matrix-element statistics: a smooth diagonal curve, the binned
/// off-diagonal second moments (the raw variance, i.e. exp(-s_eff) f^2), and
/// standardized residuals.
struct EthFit {
    FitOptions opt;
    double e_lo = 0.0, e_hi = 0.0; // analysed E range

    // diagonal curve sampled at the E bin centers
    std::vector<double> curve_e;
    std::vector<double> curve_a;

    // flattened bins [e_bin][omega_bin]; omega bins span [-omega_max, omega_max]
    std::vector<stats::Accumulator> bins;
    std::vector<char> bin_valid;

    std::vector<double> r_samples;

    double s_eff = 0.0;

    std::size_t n_omega_total() const { return 2 * opt.n_omega_bins; }
    double e_center(std::size_t i) const;
    double omega_center(std::size_t j) const;
    /// Second moment in the bin holding (e, omega); 0 for invalid bins.
    double f2_raw(double e, double omega) const;
    bool bin_ok(std::size_t e_bin, std::size_t omega_bin) const;
    /// Mean raw second moment over valid bins with |omega| <= omega_cut.
    double mean_f2_below(double omega_cut) const;
};

/// Streaming collector over realizations. Feed rotated off-diagonal elements
/// realization by realization (deterministic order), then finalize().
class EthAccumulator {
public:
    EthAccumulator(FitOptions opt, double spectrum_lo, double spectrum_hi);

    /// One diagonalized realization: selected off-diagonal elements of
    /// O^T A O inside the analysis windows plus the diagonal for the curve.
    void add_realization(const Observable& a, const std::vector<double>& eigvals,
                         const Matrix& vectors,
                         kernels::Exec exec = kernels::Exec::Parallel);

    /// Fold another collector (same options) into this one; call in
    /// realization order so the residual stream stays deterministic.
    void merge(const EthAccumulator& other);

    EthFit finalize() const;

private:
    FitOptions opt_;
    double e_lo_, e_hi_;
    std::vector<stats::Accumulator> bins_;
    // all in-window samples, for standardized residuals: (flat bin, value)
    std::vector<std::pair<std::uint32_t, float>> samples_;
    std::vector<std::pair<double, double>> diag_points_; // (E, A'_aa)
};

/// Single-realization convenience wrapper (matrix-element ansatz fit).
EthFit fit_eth(const Observable& a, const std::vector<double>& eigvals, const Matrix& vectors,
               FitOptions opt, kernels::Exec exec = kernels::Exec::Parallel);

struct GaussianityReport {
    double kurtosis = 0.0;    // excess kurtosis of the residuals
    double ks_distance = 0.0; // against the standard normal
    std::size_t count = 0;
};

/// Normality test of the standardized residuals. Throws TooFewSamples below
/// 1e4 residuals.
GaussianityReport gaussianity_test(const EthFit& fit);

struct ScalingReport {
    double slope = 0.0;
    double slope_stderr = 0.0;
    std::vector<double> log_n;
    std::vector<double> log_var;
};

/// Log-log slope of the small-omega off-diagonal second moment against the
/// correlation number N; -1 is the thermodynamic suppression exp(-s_eff).
/// Throws InsufficientSpan without >= 3 sizes spanning a factor >= 4.
ScalingReport scaling_check(const std::vector<EthFit>& fits);

/// Predicted variance of Tr(A rho(t)) from the fitted f^2 and the occupations
/// (real-symmetric form: sum over pairs of f2 * Pi'^2 * (1 + cos(2 omega t))).
std::vector<double> eth_variance_prediction(const EthFit& fit, const StatisticalOperator& pi,
                                            const std::vector<double>& eigvals,
                                            const Matrix& vectors,
                                            const std::vector<double>& times,
                                            kernels::Exec exec = kernels::Exec::Parallel);

/// Normalized cosine transform of the f^2 omega-profile at fixed E:
/// C(t) = sum_omega f2 cos(omega t) / sum_omega f2, C(0) = 1.
/// Throws EmptyBin when the row at e_center has no valid bins.
std::vector<double> c_of_t(const EthFit& fit, double e_center, const std::vector<double>& times);

struct FluctuationReport {
    double difference = 0.0; // <A^2>_w - <A>_w^2
    double delta_s_sq = 0.0;
    double curve_slope = 0.0; // d<A>/dE inside the window
    double ratio = 0.0;       // difference / (Delta_S^2 * slope^2)
};

/// Microcanonical-window fluctuation of A compared against the energy spread
/// of Pi (same Gaussian window machinery as the equilibrium average).
FluctuationReport thermal_fluctuation_bound(const Observable& a,
                                            const std::vector<double>& eigvals,
                                            const Matrix& vectors,
                                            const StatisticalOperator& pi, double delta,
                                            kernels::Exec exec = kernels::Exec::Parallel);

} // namespace thermalab::eth
