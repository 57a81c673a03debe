#include "thermalab/dynamics.hpp"

#include "thermalab/errors.hpp"
#include "thermalab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace thermalab::dynamics {

// ---------------------------------------------------------------- Observable

Observable Observable::banded_random(const HfModel& hf, double bandwidth, double strength,
                                     RngStream& rng) {
    if (bandwidth <= 0.0) throw InvalidArgument("banded_random: bandwidth must be > 0");
    if (strength <= 0.0) throw InvalidArgument("banded_random: strength must be > 0");
    const std::size_t n = hf.size();
    Observable a;
    a.kind_ = ObservableKind::BandedRandom;
    a.dim_ = n;
    a.bandwidth_ = bandwidth;
    a.row_start_.resize(n);
    a.row_len_.resize(n);
    const double two_w2 = 2.0 * bandwidth * bandwidth;
    for (std::size_t m = 0; m < n; ++m) {
        a.row_start_[m] = a.vals_.size();
        std::size_t len = 0;
        for (std::size_t c = m; c < n && hf.levels[c] - hf.levels[m] <= bandwidth; ++c) {
            const double de = hf.levels[c] - hf.levels[m];
            const double sd = strength * std::exp(-de * de / (2.0 * two_w2));
            a.vals_.push_back(rng.gaussian(0.0, sd));
            ++len;
        }
        a.row_len_[m] = len;
        a.max_band_ = std::max(a.max_band_, len);
    }
    return a;
}

Observable Observable::diagonal_smooth(const HfModel& hf, const std::function<double(double)>& g) {
    Observable a;
    a.kind_ = ObservableKind::DiagonalSmooth;
    a.dim_ = hf.size();
    a.diag_.resize(a.dim_);
    for (std::size_t m = 0; m < a.dim_; ++m) a.diag_[m] = g(hf.levels[m]);
    return a;
}

Observable Observable::projector(const HfModel& hf, const std::vector<std::size_t>& subset) {
    Observable a;
    a.kind_ = ObservableKind::Projector;
    a.dim_ = hf.size();
    a.diag_.assign(a.dim_, 0.0);
    for (std::size_t m : subset) {
        if (m >= a.dim_) throw DimensionMismatch("projector: index out of range");
        a.diag_[m] = 1.0;
    }
    return a;
}

double Observable::value(std::size_t m, std::size_t n) const {
    if (is_diagonal()) return (m == n) ? diag_[m] : 0.0;
    if (n < m) std::swap(m, n);
    const std::size_t off = n - m;
    if (off >= row_len_[m]) return 0.0;
    return vals_[row_start_[m] + off];
}

double Observable::trace() const {
    double t = 0.0;
    for (std::size_t m = 0; m < dim_; ++m) t += value(m, m);
    return t;
}

SymmetricMatrix Observable::to_dense() const {
    SymmetricMatrix s(dim_);
    for (std::size_t m = 0; m < dim_; ++m) {
        if (is_diagonal()) {
            s.set(m, m, diag_[m]);
        } else {
            for (std::size_t off = 0; off < row_len_[m]; ++off)
                s.set(m, m + off, vals_[row_start_[m] + off]);
        }
    }
    return s;
}

Matrix Observable::apply(const Matrix& o, kernels::Exec exec) const {
    if (o.rows() != dim_) throw DimensionMismatch("Observable::apply: size mismatch");
    const std::size_t cols = o.cols();
    Matrix t(dim_, cols);
    const bool par = exec == kernels::Exec::Parallel && dim_ * cols > 4096;
#pragma omp parallel for schedule(static) if (par)
    for (std::ptrdiff_t ms = 0; ms < static_cast<std::ptrdiff_t>(dim_); ++ms) {
        const auto m = static_cast<std::size_t>(ms);
        double* tm = t.row(m);
        if (is_diagonal()) {
            const double d = diag_[m];
            const double* om = o.row(m);
            for (std::size_t j = 0; j < cols; ++j) tm[j] = d * om[j];
            continue;
        }
        // row band [m, m+len) plus the mirrored column band below m
        for (std::size_t off = 0; off < row_len_[m]; ++off) {
            const double v = vals_[row_start_[m] + off];
            const double* orow = o.row(m + off);
            for (std::size_t j = 0; j < cols; ++j) tm[j] += v * orow[j];
        }
        const std::size_t lo = (m > max_band_) ? m - max_band_ : 0;
        for (std::size_t i = lo; i < m; ++i) {
            const std::size_t off = m - i;
            if (off < row_len_[i]) {
                const double v = vals_[row_start_[i] + off];
                const double* orow = o.row(i);
                for (std::size_t j = 0; j < cols; ++j) tm[j] += v * orow[j];
            }
        }
    }
    return t;
}

Matrix Observable::rotate(const Matrix& o, kernels::Exec exec) const {
    Matrix t = apply(o, exec);
    return kernels::matmul_at_b(o, t, exec);
}

double Observable::quadratic_form(const std::vector<double>& x, const std::vector<double>& y) const {
    if (x.size() != dim_ || y.size() != dim_)
        throw DimensionMismatch("Observable::quadratic_form: size mismatch");
    double s = 0.0;
    if (is_diagonal()) {
        for (std::size_t m = 0; m < dim_; ++m) s += x[m] * diag_[m] * y[m];
        return s;
    }
    for (std::size_t m = 0; m < dim_; ++m) {
        const double vm = vals_[row_start_[m]]; // diagonal entry
        s += x[m] * vm * y[m];
        for (std::size_t off = 1; off < row_len_[m]; ++off) {
            const double v = vals_[row_start_[m] + off];
            s += v * (x[m] * y[m + off] + x[m + off] * y[m]);
        }
    }
    return s;
}

// ------------------------------------------------------- StatisticalOperator

StatisticalOperator StatisticalOperator::rank_one(std::vector<double> amplitudes) {
    double norm2 = 0.0;
    for (double a : amplitudes) norm2 += a * a;
    if (norm2 <= 0.0) throw InvalidArgument("rank_one: zero amplitude vector");
    const double inv = 1.0 / std::sqrt(norm2);
    for (double& a : amplitudes) a *= inv;
    StatisticalOperator pi;
    pi.dim_ = amplitudes.size();
    pi.rank_one_ = true;
    pi.amps_ = std::move(amplitudes);
    return pi;
}

StatisticalOperator StatisticalOperator::projector_on(std::size_t dim, std::size_t index) {
    if (index >= dim) throw DimensionMismatch("projector_on: index out of range");
    std::vector<double> amps(dim, 0.0);
    amps[index] = 1.0;
    return rank_one(std::move(amps));
}

StatisticalOperator StatisticalOperator::dense(SymmetricMatrix pi) {
    const std::size_t n = pi.dim();
    if (n == 0) throw DimensionMismatch("StatisticalOperator::dense: empty");
    if (std::abs(pi.trace() - 1.0) > 1e-12)
        throw InvalidArgument("StatisticalOperator::dense: trace must be 1 to 1e-12");
    StatisticalOperator out;
    out.dim_ = n;
    out.rank_one_ = false;
    out.mat_ = std::move(pi);
    return out;
}

double StatisticalOperator::hf_diag(std::size_t m) const {
    return rank_one_ ? amps_[m] * amps_[m] : mat_(m, m);
}

double StatisticalOperator::element(std::size_t m, std::size_t n) const {
    return rank_one_ ? amps_[m] * amps_[n] : mat_(m, n);
}

SymmetricMatrix StatisticalOperator::to_dense() const {
    if (!rank_one_) return mat_;
    SymmetricMatrix s(dim_);
    for (std::size_t m = 0; m < dim_; ++m)
        for (std::size_t n = m; n < dim_; ++n) s.set(m, n, amps_[m] * amps_[n]);
    return s;
}

std::vector<double> StatisticalOperator::rotated_diagonal(const Matrix& o,
                                                          kernels::Exec exec) const {
    if (o.rows() != dim_) throw DimensionMismatch("rotated_diagonal: size mismatch");
    const std::size_t p = o.cols();
    std::vector<double> d(p, 0.0);
    if (rank_one_) {
        std::vector<double> c = kernels::matvec_at(o, amps_, exec);
        for (std::size_t a = 0; a < p; ++a) d[a] = c[a] * c[a];
        return d;
    }
    Matrix t = kernels::matmul(mat_.to_dense(), o, exec);
    for (std::size_t a = 0; a < p; ++a) {
        double s = 0.0;
        for (std::size_t m = 0; m < dim_; ++m) s += o(m, a) * t(m, a);
        d[a] = s;
    }
    return d;
}

Matrix StatisticalOperator::rotate(const Matrix& o, kernels::Exec exec) const {
    if (o.rows() != dim_) throw DimensionMismatch("StatisticalOperator::rotate: size mismatch");
    const std::size_t p = o.cols();
    if (rank_one_) {
        std::vector<double> c = kernels::matvec_at(o, amps_, exec);
        Matrix out(p, p);
        for (std::size_t a = 0; a < p; ++a)
            for (std::size_t b = 0; b < p; ++b) out(a, b) = c[a] * c[b];
        return out;
    }
    return kernels::rotate_congruence(o, mat_, exec);
}

double StatisticalOperator::min_eigenvalue() const {
    auto ev = eigenvalues_only(to_dense());
    return ev.front();
}

// ------------------------------------------------------------------- actions

StatisticalOperator make_wavepacket(const HfModel& hf, double center_e, double width,
                                    RngStream& rng) {
    if (width <= 0.0) throw InvalidArgument("make_wavepacket: width must be > 0");
    const std::size_t n = hf.size();
    std::vector<double> amps(n);
    for (std::size_t r = 0; r < n; ++r) {
        const double x = hf.levels[r] - center_e;
        const double sign = (rng.uniform() < 0.5) ? -1.0 : 1.0;
        amps[r] = sign * std::exp(-x * x / (4.0 * width * width));
    }
    double norm2 = 0.0;
    for (double a : amps) norm2 += a * a;
    if (norm2 <= 0.0) throw DegenerateSupport("make_wavepacket: no support on the spectrum");

    // Smallest set of levels carrying 99% of the weight must have >= 10
    // members, otherwise the packet is too narrow for the level grid.
    std::vector<double> weights(n);
    for (std::size_t r = 0; r < n; ++r) weights[r] = amps[r] * amps[r] / norm2;
    std::vector<double> sorted_w(weights);
    std::sort(sorted_w.begin(), sorted_w.end(), std::greater<>());
    double cum = 0.0;
    std::size_t needed = 0;
    while (needed < n && cum < 0.99) cum += sorted_w[needed++];
    if (needed < 10)
        throw DegenerateSupport("make_wavepacket: fewer than 10 levels carry 99% of the weight");

    return StatisticalOperator::rank_one(std::move(amps));
}

EnergyStats energy_stats(const StatisticalOperator& pi, const std::vector<double>& eigvals,
                         const Matrix& vectors, kernels::Exec exec) {
    if (vectors.rows() != pi.dim() || vectors.cols() != eigvals.size())
        throw DimensionMismatch("energy_stats: size mismatch");
    const std::vector<double> occ = pi.rotated_diagonal(vectors, exec);
    double mean = 0.0;
    for (std::size_t a = 0; a < occ.size(); ++a) mean += eigvals[a] * occ[a];
    double var = 0.0;
    for (std::size_t a = 0; a < occ.size(); ++a) {
        const double d = eigvals[a] - mean;
        var += d * d * occ[a];
    }
    return {mean, std::sqrt(std::max(0.0, var))};
}

TimeSeries evolve_trace(const Observable& a, const StatisticalOperator& pi,
                        const std::vector<double>& eigvals, const Matrix& vectors,
                        const std::vector<double>& times, kernels::Exec exec) {
    if (a.dim() != pi.dim() || vectors.rows() != a.dim() || vectors.cols() != eigvals.size())
        throw DimensionMismatch("evolve_trace: size mismatch");
    if (!std::is_sorted(times.begin(), times.end()))
        throw InvalidArgument("evolve_trace: times must ascend");
    TimeSeries ts;
    ts.times = times;

    if (pi.is_rank_one()) {
        // Pull the time dependence back to the band-compact scaffold basis:
        // T(t) = (O x)^T A (O x) + (O y)^T A (O y) with x_a = c_a cos(E_a t),
        // y_a = c_a sin(E_a t). Avoids forming O^T A O entirely.
        const std::size_t n = eigvals.size();
        std::vector<double> c = kernels::matvec_at(vectors, pi.amplitudes(), exec);
        std::vector<double> x(n), y(n);
        ts.values.resize(times.size());
        for (std::size_t j = 0; j < times.size(); ++j) {
            const double t = times[j];
            for (std::size_t al = 0; al < n; ++al) {
                x[al] = c[al] * std::cos(eigvals[al] * t);
                y[al] = c[al] * std::sin(eigvals[al] * t);
            }
            const std::vector<double> vx = kernels::matvec(vectors, x, exec);
            const std::vector<double> vy = kernels::matvec(vectors, y, exec);
            ts.values[j] = a.quadratic_form(vx, vx) + a.quadratic_form(vy, vy);
        }
        return ts;
    }

    Matrix a_rot = a.rotate(vectors, exec);
    Matrix pi_rot = pi.rotate(vectors, exec);
    ts.values = kernels::trace_cos_series(a_rot, pi_rot, eigvals, times, exec);
    return ts;
}

double trace_hf(const Observable& a, const StatisticalOperator& pi) {
    if (a.dim() != pi.dim()) throw DimensionMismatch("trace_hf: size mismatch");
    const std::size_t n = a.dim();
    double s = 0.0;
    if (a.is_diagonal()) {
        for (std::size_t m = 0; m < n; ++m) s += a.diag(m) * pi.hf_diag(m);
        return s;
    }
    for (std::size_t m = 0; m < n; ++m) {
        s += a.value(m, m) * pi.hf_diag(m);
        for (std::size_t off = 1; off < a.band_extent(m); ++off)
            s += 2.0 * a.value(m, m + off) * pi.element(m, m + off);
    }
    return s;
}

double equilibrium_value_diag(const std::vector<double>& rotated_diag,
                              const std::vector<double>& eigvals, double center_e, double delta) {
    if (rotated_diag.size() != eigvals.size())
        throw DimensionMismatch("equilibrium_value: size mismatch");
    if (delta <= 0.0) throw InvalidArgument("equilibrium_value: delta must be > 0");
    const double cut = 4.0 * delta;
    double num = 0.0, den = 0.0;
    std::size_t inside = 0;
    for (std::size_t alpha = 0; alpha < eigvals.size(); ++alpha) {
        const double x = eigvals[alpha] - center_e;
        if (std::abs(x) > cut) continue;
        const double w = std::exp(-x * x / (2.0 * delta * delta));
        num += w * rotated_diag[alpha];
        den += w;
        ++inside;
    }
    if (inside < 10) throw TooFewStates("equilibrium_value: fewer than 10 states in the window");
    return num / den;
}

double equilibrium_value(const Observable& a, const std::vector<double>& eigvals,
                         const Matrix& vectors, double center_e, double delta,
                         kernels::Exec exec) {
    if (vectors.rows() != a.dim() || vectors.cols() != eigvals.size())
        throw DimensionMismatch("equilibrium_value: size mismatch");
    // Only window columns contribute; compute their diagonal elements directly.
    const double cut = 4.0 * delta;
    std::vector<double> diag(eigvals.size(), 0.0);
    const std::size_t n = a.dim();
    std::vector<double> col(n);
    for (std::size_t alpha = 0; alpha < eigvals.size(); ++alpha) {
        if (std::abs(eigvals[alpha] - center_e) > cut) continue;
        for (std::size_t m = 0; m < n; ++m) col[m] = vectors(m, alpha);
        diag[alpha] = a.quadratic_form(col, col);
    }
    (void)exec;
    return equilibrium_value_diag(diag, eigvals, center_e, delta);
}

std::vector<double> hf_coherent_term(const Observable& a, const StatisticalOperator& pi,
                                     const HfModel& hf, const std::vector<double>& times) {
    const std::size_t n = hf.size();
    if (a.dim() != n || pi.dim() != n) throw DimensionMismatch("hf_coherent_term: size mismatch");
    std::vector<double> out(times.size(), 0.0);
    std::vector<double> u(n), v(n);
    for (std::size_t j = 0; j < times.size(); ++j) {
        const double t = times[j];
        for (std::size_t m = 0; m < n; ++m) {
            u[m] = std::cos(hf.levels[m] * t);
            v[m] = std::sin(hf.levels[m] * t);
        }
        // sum_{mn} A_{mn} Pi_{nm} cos((E_m - E_n) t) via the angle-difference
        // split; band-aware.
        double s = 0.0;
        for (std::size_t m = 0; m < n; ++m) {
            s += a.value(m, m) * pi.hf_diag(m);
            for (std::size_t off = 1; off < a.band_extent(m); ++off) {
                const std::size_t n2 = m + off;
                const double c = u[m] * u[n2] + v[m] * v[n2];
                s += 2.0 * a.value(m, n2) * pi.element(m, n2) * c;
            }
        }
        out[j] = s;
    }
    return out;
}

} // namespace thermalab::dynamics
