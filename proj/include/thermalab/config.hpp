#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace thermalab::cli {

/// One experiment, fully specified. (config file, master_seed) pins every
/// output byte.
struct ExperimentConfig {
    std::uint64_t master_seed = 1;

    // [model]
    std::string model = "phenomenological"; // or "microscopic"
    std::string mode = "gaussian";          // overlap mode: gaussian | orthogonalized
    double lambda = 1.5;                    // microscopic residual coupling

    // [hf]
    std::string density = "picket-fence"; // or "exp-growth"
    std::size_t n_levels = 500;
    double spacing = 1.0;
    double rho0 = 1.0;
    double t0 = 10.0;
    double e_min = 0.0;

    // [run]
    double delta = 25.0;
    std::size_t n_realizations = 50;
    int jobs = 0; // 0 = all cores
    std::vector<std::size_t> scaling_n_levels; // optional multi-size sweep (eth)

    // [observable]
    std::string observable = "banded-random"; // banded-random | diagonal-linear |
                                              // diagonal-quadratic | identity |
                                              // projector-lower-half
    double bandwidth = 5.0;
    double strength = 1.0;

    // [state]
    double center_e = std::numeric_limits<double>::quiet_NaN(); // NaN = spectrum middle
    double width = 10.0;

    // [time]
    double t_max_over_invdelta = 6.0;
    std::size_t n_points = 200;

    // [output]
    std::string output_dir = "out";

    bool operator==(const ExperimentConfig& o) const;

    /// Thermalization-criterion knob.
    double width_over_delta() const { return width / delta; }
};

/// Parse a config file. Flat key=value with [section] headers, '#' comments;
/// a leading '{' switches to the JSON form written back by runs.
/// Throws ConfigError with a line number on malformed input.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text, const std::string& origin);
ExperimentConfig parse_config_json(const std::string& text);

std::string config_to_json(const ExperimentConfig& cfg);

/// CLI flag overrides (applied after loading; negative/empty = keep).
struct ConfigOverrides {
    bool has_seed = false;
    std::uint64_t seed = 0;
    std::string out_dir;
    int jobs = -1;
    long long n_levels = -1;
    double delta = -1.0;
    double lambda = -1.0;
};

void apply_overrides(ExperimentConfig& cfg, const ConfigOverrides& o);

/// Validate cross-field constraints; throws ConfigError.
void validate(const ExperimentConfig& cfg);

} // namespace thermalab::cli
