#pragma once

#include "thermalab/hf_model.hpp"
#include "thermalab/kernels.hpp"
#include "thermalab/matrix.hpp"
#include "thermalab/rng.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace thermalab::dynamics {

using ensemble::HfModel;

enum class ObservableKind { BandedRandom, DiagonalSmooth, Projector };

/// Observable in the scaffold basis. Storage is band-compact: entries vanish
/// exactly beyond |E_m - E_n| > bandwidth, diagonal kinds keep only the
/// diagonal, so large-dimension columns stay cheap.
class Observable {
public:
    /// Gaussian random entries under a Gaussian variance envelope
    /// exp(-(E_m - E_n)^2 / (2 w^2)), hard-cut to zero beyond |E_m - E_n| > w.
    /// Entries are drawn row by row along the band.
    static Observable banded_random(const HfModel& hf, double bandwidth, double strength,
                                    RngStream& rng);
    static Observable diagonal_smooth(const HfModel& hf, const std::function<double(double)>& g);
    static Observable projector(const HfModel& hf, const std::vector<std::size_t>& subset);

    ObservableKind kind() const { return kind_; }
    std::size_t dim() const { return dim_; }
    double bandwidth() const { return bandwidth_; }
    bool is_diagonal() const { return kind_ != ObservableKind::BandedRandom; }

    double value(std::size_t m, std::size_t n) const;
    double diag(std::size_t m) const { return value(m, m); }
    /// Number of stored entries in row m from the diagonal rightward (1 for
    /// diagonal kinds).
    std::size_t band_extent(std::size_t m) const {
        return is_diagonal() ? 1 : row_len_[m];
    }
    double trace() const;

    SymmetricMatrix to_dense() const;

    /// T = A * O (band-aware), O given column-block.
    Matrix apply(const Matrix& o, kernels::Exec exec = kernels::Exec::Parallel) const;

    /// O^T A O as a dense matrix in the rotated basis.
    Matrix rotate(const Matrix& o, kernels::Exec exec = kernels::Exec::Parallel) const;

    /// x^T A y for full-length vectors (band-aware).
    double quadratic_form(const std::vector<double>& x, const std::vector<double>& y) const;

private:
    ObservableKind kind_ = ObservableKind::DiagonalSmooth;
    std::size_t dim_ = 0;
    double bandwidth_ = 0.0;
    // band rows: row m covers columns m .. m + row_len_[m] - 1
    std::vector<std::size_t> row_start_;
    std::vector<std::size_t> row_len_;
    std::size_t max_band_ = 0;
    std::vector<double> vals_;
    std::vector<double> diag_; // diagonal kinds only
};

/// Unit-trace positive-semidefinite operator defining the occupations.
/// Rank-one instances carry their amplitudes so rotations cost O(n^2).
class StatisticalOperator {
public:
    static StatisticalOperator rank_one(std::vector<double> amplitudes);
    static StatisticalOperator projector_on(std::size_t dim, std::size_t index);
    /// General dense case; enforces symmetry and unit trace at 1e-12.
    static StatisticalOperator dense(SymmetricMatrix pi);

    std::size_t dim() const { return dim_; }
    bool is_rank_one() const { return rank_one_; }
    const std::vector<double>& amplitudes() const { return amps_; }

    double hf_diag(std::size_t m) const;
    double element(std::size_t m, std::size_t n) const;
    SymmetricMatrix to_dense() const;

    /// Occupations in a rotated basis: diag(O^T Pi O).
    std::vector<double> rotated_diagonal(const Matrix& o,
                                         kernels::Exec exec = kernels::Exec::Parallel) const;
    /// Full O^T Pi O.
    Matrix rotate(const Matrix& o, kernels::Exec exec = kernels::Exec::Parallel) const;

    /// Smallest eigenvalue, for positivity checks (O(n^3), test use).
    double min_eigenvalue() const;

private:
    std::size_t dim_ = 0;
    bool rank_one_ = false;
    std::vector<double> amps_;
    SymmetricMatrix mat_; // empty for rank-one
};

struct EnergyStats {
    double mean_e = 0.0;
    double delta_s = 0.0;
};

/// Sampled Tr(A rho(t)); times in units of 1/energy (hbar = 1).
struct TimeSeries {
    std::vector<double> times;
    std::vector<double> values;
    std::uint64_t realization_id = 0;
};

/// Rank-one wavepacket: amplitudes ~ random sign * exp(-(E_r - center)^2 /
/// (4 width^2)), normalized. Throws DegenerateSupport when fewer than 10
/// levels carry 99% of the weight (the width -> 0 projector limit is reached
/// through StatisticalOperator::projector_on instead).
StatisticalOperator make_wavepacket(const HfModel& hf, double center_e, double width,
                                    RngStream& rng);

/// <E> and Delta_S of Pi in the eigenbasis (E_alpha, O).
EnergyStats energy_stats(const StatisticalOperator& pi, const std::vector<double>& eigvals,
                         const Matrix& vectors, kernels::Exec exec = kernels::Exec::Parallel);

/// Tr(A rho(t)) over the time grid for one diagonalized realization:
/// sum_{ab} A'_{ab} Pi'_{ab} cos((E_a - E_b) t) with both operators rotated
/// once and cached.
TimeSeries evolve_trace(const Observable& a, const StatisticalOperator& pi,
                        const std::vector<double>& eigvals, const Matrix& vectors,
                        const std::vector<double>& times,
                        kernels::Exec exec = kernels::Exec::Parallel);

/// Direct scaffold-basis evaluation sum_{mn} A_{mn} Pi_{nm}; equals the t=0
/// trace by basis invariance.
double trace_hf(const Observable& a, const StatisticalOperator& pi);

/// Microcanonical average of the rotated diagonal under Gaussian weights
/// exp(-(E_a - center)^2 / (2 delta^2)), truncated at 4 widths and
/// self-normalized. Throws TooFewStates below 10 eigenvalues in the window.
double equilibrium_value(const Observable& a, const std::vector<double>& eigvals,
                         const Matrix& vectors, double center_e, double delta,
                         kernels::Exec exec = kernels::Exec::Parallel);

/// Same average given precomputed rotated diagonal elements.
double equilibrium_value_diag(const std::vector<double>& rotated_diag,
                              const std::vector<double>& eigvals, double center_e, double delta);

/// Scaffold-only dephasing term sum_{mn} A_{mn} Pi_{nm} cos((E_m - E_n) t):
/// the evolve_trace analogue with the scaffold spectrum and identity overlap.
std::vector<double> hf_coherent_term(const Observable& a, const StatisticalOperator& pi,
                                     const HfModel& hf, const std::vector<double>& times);

} // namespace thermalab::dynamics
