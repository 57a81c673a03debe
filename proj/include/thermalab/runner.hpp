#pragma once

#include "thermalab/bgs.hpp"
#include "thermalab/config.hpp"
#include "thermalab/dynamics.hpp"
#include "thermalab/ensemble.hpp"
#include "thermalab/eth.hpp"
#include "thermalab/spectral.hpp"

#include <functional>
#include <string>
#include <vector>

namespace thermalab::cli {

/// Stream-id layout under one master seed: low ids are reserved for the
/// fixed draws, realization k uses kRealizationStreamBase + k (plus a
/// per-size block offset in multi-size sweeps).
inline constexpr std::uint64_t kObservableStream = 1;
inline constexpr std::uint64_t kStateStream = 2;
inline constexpr std::uint64_t kRealizationStreamBase = 16;
inline constexpr std::uint64_t kSizeBlockStride = 1ull << 32;

/// Concrete experiment objects resolved from a config.
struct ResolvedModel {
    ensemble::HfModel hf;
    dynamics::Observable observable;
    dynamics::StatisticalOperator state;
    double center = 0.0; // resolved state center
    double delta = 0.0;
    double corr_n = 0.0;
    std::vector<double> times;
};

ResolvedModel resolve_model(const ExperimentConfig& cfg);

/// Deterministic worker-pool over realization indices: body(k) runs once per
/// k on some thread, results must be written to slot k only. Honors jobs=0
/// as "all cores".
void for_each_realization(std::size_t n, int jobs, const std::function<void(std::size_t)>& body);

// ----------------------------------------------------------------- spectrum

struct SpectrumResult {
    spectral::SpacingHistogram hist;
    double ks_wigner = 0.0;
    double ks_poisson = 0.0;
    double corr_n = 0.0;
    double lambda = 0.0;
};

SpectrumResult run_spectrum(const ExperimentConfig& cfg);
void cmd_spectrum(const ExperimentConfig& cfg); // writes spacing.csv, report.json

// ------------------------------------------------------------------- evolve

struct EvolveResult {
    std::vector<double> times;
    std::vector<double> mean_trace;
    std::vector<double> stderr_trace;
    std::vector<double> coherent;
    double equilibrium = 0.0;         // ensemble asymptote (smeared closed form)
    double equilibrium_intervals = 0.0; // interval-sum form
    double single_window_value = 0.0;  // Gaussian-window average at <E>
    double delta = 0.0;
    double delta_s = 0.0;
    bool thermalized = false;
    bool fit_ok = false;
    bgs::EnvelopeFit fit;
    std::vector<double> pred_a1;
    std::vector<double> pred_a_half;
};

EvolveResult run_evolve(const ExperimentConfig& cfg);
void cmd_evolve(const ExperimentConfig& cfg); // writes evolve.csv, fit.json

// ---------------------------------------------------------------------- eth

struct EthResult {
    eth::EthFit fit; // at the primary size
    eth::GaussianityReport gauss;
    bool has_scaling = false;
    eth::ScalingReport scaling;
    std::vector<double> c_times;
    std::vector<double> c_values;
};

EthResult run_eth(const ExperimentConfig& cfg);
void cmd_eth(const ExperimentConfig& cfg); // writes eth_f2.csv, eth_report.json

// ------------------------------------------------------------------- report

/// Assembles the four-panel SVG from prior command outputs; throws
/// MissingArtifacts naming every absent file.
void cmd_report(const std::string& output_dir);

} // namespace thermalab::cli
