#pragma once

#include "thermalab/dynamics.hpp"
#include "thermalab/ensemble.hpp"
#include "thermalab/matrix.hpp"

#include <cstdint>
#include <vector>

namespace thermalab::bgs {

using dynamics::Observable;
using dynamics::StatisticalOperator;
using ensemble::BgsEnsembleSpec;
using ensemble::HfModel;

/// Normalization constant for the interval-sum equilibrium term. The two
/// candidates correspond to the two constants printed in different places of
/// the closed-form average; ConsistentGaussian is the one for which the
/// identity observable yields exactly 1.
enum class NormConvention { ConsistentGaussian, PrintedAlternative };
double norm_constant(NormConvention c);

/// Width-delta interval decomposition of the scaffold spectrum with partial
/// traces of Pi and A per interval.
struct IntervalDecomposition {
    double delta = 0.0;
    double e0 = 0.0; // left edge of interval 0
    std::vector<std::size_t> count;
    std::vector<double> rho;   // count / delta
    std::vector<double> p;     // sum of Pi_mm over the interval
    std::vector<double> trk_a; // sum of A_mm over the interval

    std::size_t n_intervals() const { return count.size(); }
    double center(std::size_t k) const { return e0 + (double(k) + 0.5) * delta; }
};

/// Contiguous delta-width intervals covering the scaffold spectrum. Throws
/// SpanTooSmall when the spectrum covers fewer than two intervals.
IntervalDecomposition decompose(const HfModel& hf, const Observable& a,
                                const StatisticalOperator& pi, double delta);

/// Equilibrium term: sqrt(2 pi) c_norm sum_k p_k Tr_k(A) / (rho_k delta).
double equilibrium_from_intervals(const IntervalDecomposition& dec,
                                  NormConvention c = NormConvention::ConsistentGaussian);

/// Closed-form relaxation curve equilibrium + coherent(t) exp(-a delta^2 t^2).
struct BgsPrediction {
    double equilibrium = 0.0;
    std::vector<double> coherent;
    double envelope_exponent = 1.0;
    std::vector<double> curve;
};

BgsPrediction predict(const IntervalDecomposition& dec, const std::vector<double>& coherent,
                      const std::vector<double>& times, double delta, double exponent_a,
                      NormConvention c = NormConvention::ConsistentGaussian);

struct EnvelopeFit {
    double a = 0.0;
    double a_stderr = 0.0;
    double chi2 = 0.0;
    std::size_t n_points = 0;
};

/// Weighted least-squares fit of the envelope exponent in
/// measured - equilibrium = coherent(t) exp(-a delta^2 t^2), over t <= 3/delta.
/// Throws DegenerateCoherent when the t=0 coherent term sits below the noise
/// floor of the measured series.
EnvelopeFit fit_envelope(const std::vector<double>& times, const std::vector<double>& measured,
                         const std::vector<double>& stderr_measured, double equilibrium,
                         const std::vector<double>& coherent, double delta);

/// Ensemble mean of rotated elements sum_{mn} O_{ma} A_{mn} O_{nb} against
/// the Gaussian-smoothed closed form (diagonal) and zero (off-diagonal).
struct MeanCheckReport {
    std::vector<double> bin_measured; // per alpha-bin, diagonal elements
    std::vector<double> bin_closed;
    std::vector<double> bin_sigma;
    double max_abs_z_diag = 0.0;
    double max_abs_z_offdiag = 0.0;
    std::size_t n_realizations = 0;
};

MeanCheckReport rotated_mean_check(const BgsEnsembleSpec& spec, const Observable& a,
                                   const std::vector<std::size_t>& alphas,
                                   std::size_t offdiag_offset, std::size_t n_realizations,
                                   std::uint64_t master_seed, std::uint64_t stream_base);

/// Gaussian-smoothed diagonal closed form at one eigenstate.
double rotated_mean_closed_form(const BgsEnsembleSpec& spec, const Observable& a,
                                std::size_t alpha);

/// Ensemble mean of the long-time (diagonal-ensemble) value:
/// sum_alpha <A'_aa> <Pi'_aa>, both factors Gaussian-smoothed over the
/// overlap profile. The interval sum above is its box-binned leading-order
/// approximation; this form is exact in the factorized ensemble average.
double asymptotic_value(const BgsEnsembleSpec& spec, const Observable& a,
                        const StatisticalOperator& pi);

/// Monte Carlo variance of rotated elements against the closed form
/// (1 + delta_ab) Tr(A G_a A G_b) / (2 pi Delta^2 rho_a rho_b), with the
/// Gaussian weights G carrying negative exponents.
struct VarianceCheckReport {
    double measured_diag = 0.0; // pooled over the alpha set
    double closed_diag = 0.0;
    double measured_offdiag = 0.0;
    double closed_offdiag = 0.0;
    std::size_t n_realizations = 0;
};

VarianceCheckReport rotated_variance_check(const BgsEnsembleSpec& spec, const Observable& a,
                                           const std::vector<std::size_t>& alphas,
                                           std::size_t offdiag_offset,
                                           std::size_t n_realizations,
                                           std::uint64_t master_seed,
                                           std::uint64_t stream_base);

double rotated_variance_closed_form(const BgsEnsembleSpec& spec, const Observable& a,
                                    std::size_t alpha, std::size_t beta);

/// Connected two-time correlator of Tr(A rho(t)) across realizations, per
/// ensemble size, and its log-log slope against the correlation number.
struct SelfAveragingInput {
    double corr_n = 0.0;
    std::vector<double> values_t1; // one entry per realization
    std::vector<double> values_t2;
};

struct SelfAveragingReport {
    std::vector<double> corr_n;
    std::vector<double> connected; // |covariance| per size
    double slope = 0.0;            // d log connected / d log N
    bool monotone_decreasing = false;
};

SelfAveragingReport self_averaging_check(const std::vector<SelfAveragingInput>& inputs);

} // namespace thermalab::bgs
