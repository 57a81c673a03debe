#pragma once

#include "thermalab/hf_model.hpp"
#include "thermalab/kernels.hpp"
#include "thermalab/linalg.hpp"
#include "thermalab/matrix.hpp"
#include "thermalab/rng.hpp"

#include <string>
#include <vector>

namespace thermalab::ensemble {

enum class OverlapMode { Gaussian, Orthogonalized };

/// Parameters of the phenomenological random-matrix ensemble: eigenvalues
/// with Wigner-Dyson fluctuations at the scaffold's mean density and overlap
/// entries with the Gaussian variance profile of width delta.
struct BgsEnsembleSpec {
    HfModel hf;
    double delta = 1.0;  // correlation width
    double center = 0.0; // energy at which N = rho * delta is quoted
    std::size_t n_realizations = 1;
    OverlapMode mode = OverlapMode::Gaussian;

    double correlation_number(std::string* warning = nullptr) const {
        return correlation_n(hf, center, delta, warning);
    }
};

/// One member of the ensemble.
struct Realization {
    std::vector<double> eigvals; // E_alpha, ascending
    Matrix overlap;              // O(m, alpha), n_levels x n_levels
    std::vector<double> ebar;    // ensemble-average eigenvalue positions
};

/// Microscopic chaotic Hamiltonian: diag(levels) + coupling * GOE draw.
/// coupling = 0 leaves the scaffold untouched (integrable control).
SymmetricMatrix build_microscopic(const HfModel& hf, double coupling, RngStream& rng);

/// Golden-rule coupling estimate: mixing width gamma ~ 2 pi lambda^2 rho,
/// inverted for lambda. A sizing aid, nothing downstream asserts it.
double coupling_for_mixing_width(double gamma, double rho);

/// Variance profile F of the overlap entries (normalized Gaussian of width
/// delta at the model density).
double overlap_variance_profile(const HfModel& hf, double ebar_alpha, double e_m, double delta);

/// Draw one phenomenological realization. Eigenvalues come from an auxiliary
/// GOE spectrum unfolded to unit mean spacing and mapped through the
/// scaffold's cumulative density; overlaps are i.i.d. Gaussians with the F
/// profile, optionally Loewdin-orthonormalized.
Realization sample_phenomenological(const BgsEnsembleSpec& spec, RngStream& rng);

/// Eigenvalues of one realization without the overlap matrix (same draw
/// prefix as sample_phenomenological, several times cheaper).
std::vector<double> sample_eigenvalues(const BgsEnsembleSpec& spec, RngStream& rng);

/// Overlap columns for selected eigenstates only (per-column draw order, so
/// large-dimension scaling studies can skip the full matrix). No
/// orthogonalization; this is the Gaussian-mode marginal.
Matrix sample_overlap_columns(const BgsEnsembleSpec& spec,
                              const std::vector<std::size_t>& alphas, RngStream& rng);

/// Map an ascending spectrum through a fitted smooth cumulative counting
/// function so the mean spacing is 1. The polynomial (Chebyshev basis) is
/// fitted on the central 80% of the staircase; edge eigenvalues are mapped
/// by extrapolation. Throws FitFailure when underdetermined or when the
/// mapped output fails to ascend.
std::vector<double> unfold(const std::vector<double>& eigvals, int poly_degree);

/// Symmetric (Loewdin) orthonormalization O (O^T O)^{-1/2}.
Matrix lowdin_orthonormalize(const Matrix& o, kernels::Exec exec = kernels::Exec::Parallel);

} // namespace thermalab::ensemble
