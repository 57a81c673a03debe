#include "thermalab/ensemble.hpp"

#include "thermalab/errors.hpp"
#include "thermalab/stats.hpp"

#include <algorithm>
#include <cmath>

namespace thermalab::ensemble {

SymmetricMatrix build_microscopic(const HfModel& hf, double coupling, RngStream& rng) {
    if (coupling < 0.0) throw InvalidArgument("build_microscopic: coupling must be >= 0");
    const std::size_t n = hf.size();
    // The GOE draw is consumed even at coupling = 0 so that scans over the
    // coupling reuse identical noise.
    SymmetricMatrix v = sample_goe(rng, n, 1.0);
    SymmetricMatrix h(n);
    for (std::size_t i = 0; i < n; ++i) {
        h.set(i, i, hf.levels[i] + coupling * v(i, i));
        for (std::size_t j = i + 1; j < n; ++j) h.set(i, j, coupling * v(i, j));
    }
    return h;
}

double coupling_for_mixing_width(double gamma, double rho) {
    if (gamma < 0.0 || rho <= 0.0)
        throw InvalidArgument("coupling_for_mixing_width: need gamma >= 0, rho > 0");
    return std::sqrt(gamma / (2.0 * M_PI * rho));
}

double overlap_variance_profile(const HfModel& hf, double ebar_alpha, double e_m, double delta) {
    const double x = ebar_alpha - e_m;
    return std::exp(-x * x / (2.0 * delta * delta)) /
           (std::sqrt(2.0 * M_PI) * hf.model_density(ebar_alpha) * delta);
}

namespace {

// Wigner semicircle CDF (in level counts) for a GOE with unit off-diagonal
// variance: exact-in-expectation unfolding for the auxiliary spectrum.
double semicircle_count(double lambda, std::size_t n) {
    const double r = 2.0 * std::sqrt(double(n));
    double x = lambda / r;
    x = std::clamp(x, -1.0, 1.0);
    return double(n) * (0.5 + (x * std::sqrt(1.0 - x * x) + std::asin(x)) / M_PI);
}

std::vector<double> wigner_dyson_eigvals(const HfModel& hf, std::size_t n, RngStream& rng) {
    SymmetricMatrix aux = sample_goe(rng, n, 1.0);
    std::vector<double> lam = eigenvalues_only(aux);
    std::vector<double> e(n);
    for (std::size_t a = 0; a < n; ++a) e[a] = hf.quantile(semicircle_count(lam[a], n));
    return e;
}

} // namespace

Realization sample_phenomenological(const BgsEnsembleSpec& spec, RngStream& rng) {
    const std::size_t n = spec.hf.size();
    if (n < 2) throw DimensionMismatch("sample_phenomenological: need >= 2 levels");
    if (spec.delta <= 0.0)
        throw InvalidArgument("sample_phenomenological: delta must be > 0");

    Realization r;
    r.ebar.resize(n);
    for (std::size_t a = 0; a < n; ++a) r.ebar[a] = spec.hf.ebar(a);

    r.eigvals = wigner_dyson_eigvals(spec.hf, n, rng);

    r.overlap = Matrix(n, n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t m = 0; m < n; ++m) {
            const double f = overlap_variance_profile(spec.hf, r.ebar[a], spec.hf.levels[m],
                                                      spec.delta);
            r.overlap(m, a) = rng.gaussian(0.0, std::sqrt(f));
        }

    if (spec.mode == OverlapMode::Orthogonalized)
        r.overlap = lowdin_orthonormalize(r.overlap);
    return r;
}

std::vector<double> sample_eigenvalues(const BgsEnsembleSpec& spec, RngStream& rng) {
    const std::size_t n = spec.hf.size();
    if (n < 2) throw DimensionMismatch("sample_eigenvalues: need >= 2 levels");
    return wigner_dyson_eigvals(spec.hf, n, rng);
}

Matrix sample_overlap_columns(const BgsEnsembleSpec& spec,
                              const std::vector<std::size_t>& alphas, RngStream& rng) {
    const std::size_t n = spec.hf.size();
    for (std::size_t a : alphas)
        if (a >= n) throw DimensionMismatch("sample_overlap_columns: state index out of range");
    Matrix o(n, alphas.size());
    for (std::size_t c = 0; c < alphas.size(); ++c) {
        const double eb = spec.hf.ebar(alphas[c]);
        for (std::size_t m = 0; m < n; ++m) {
            const double f = overlap_variance_profile(spec.hf, eb, spec.hf.levels[m], spec.delta);
            o(m, c) = rng.gaussian(0.0, std::sqrt(f));
        }
    }
    return o;
}

std::vector<double> unfold(const std::vector<double>& eigvals, int poly_degree) {
    const std::size_t n = eigvals.size();
    if (poly_degree < 1) throw InvalidArgument("unfold: degree must be >= 1");
    if (n < static_cast<std::size_t>(poly_degree) + 2)
        throw FitFailure("unfold: too few eigenvalues for the requested degree");
    if (!std::is_sorted(eigvals.begin(), eigvals.end()))
        throw InvalidArgument("unfold: eigenvalues must be ascending");

    // Staircase fit on the central 80%; edges violate constant density.
    const std::size_t skip = n / 10;
    std::vector<double> xs, ys;
    xs.reserve(n - 2 * skip);
    for (std::size_t i = skip; i < n - skip; ++i) {
        xs.push_back(eigvals[i]);
        ys.push_back(double(i) + 0.5);
    }
    if (xs.size() < static_cast<std::size_t>(poly_degree) + 2)
        throw FitFailure("unfold: central window too small for the requested degree");
    stats::PolyFit fit(xs, ys, poly_degree);

    // Inside the fitted window use the polynomial; outside continue linearly
    // with the window-edge slope so the tails cannot fold back.
    const double lo = fit.fit_lo(), hi = fit.fit_hi();
    const double slope_lo = fit.derivative(lo), slope_hi = fit.derivative(hi);
    if (slope_lo <= 0.0 || slope_hi <= 0.0)
        throw FitFailure("unfold: counting function has nonpositive density at the window edge");
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = eigvals[i];
        if (x < lo)
            out[i] = fit(lo) + slope_lo * (x - lo);
        else if (x > hi)
            out[i] = fit(hi) + slope_hi * (x - hi);
        else
            out[i] = fit(x);
    }
    for (std::size_t i = 1; i < n; ++i)
        if (out[i] < out[i - 1])
            throw FitFailure("unfold: fitted counting function is not monotone");
    return out;
}

Matrix lowdin_orthonormalize(const Matrix& o, kernels::Exec exec) {
    const std::size_t p = o.cols();
    Matrix gram = kernels::matmul_at_b(o, o, exec);
    SymmetricMatrix s(p);
    for (std::size_t a = 0; a < p; ++a)
        for (std::size_t b = a; b < p; ++b) s.set(a, b, 0.5 * (gram(a, b) + gram(b, a)));
    EigenSystem es = eigh(s, exec);
    if (es.eigenvalues.front() <= 0.0)
        throw NumericError("lowdin_orthonormalize: rank-deficient overlap matrix");
    // S^{-1/2} = W diag(1/sqrt(w)) W^T
    Matrix w = es.vectors;
    Matrix ws(p, p);
    for (std::size_t a = 0; a < p; ++a) {
        const double inv = 1.0 / std::sqrt(es.eigenvalues[a]);
        for (std::size_t k = 0; k < p; ++k) ws(k, a) = w(k, a) * inv;
    }
    Matrix s_inv_half(p, p);
    for (std::size_t a = 0; a < p; ++a)
        for (std::size_t b = 0; b < p; ++b) {
            double acc = 0.0;
            for (std::size_t k = 0; k < p; ++k) acc += ws(a, k) * w(b, k);
            s_inv_half(a, b) = acc;
        }
    return kernels::matmul(o, s_inv_half, exec);
}

} // namespace thermalab::ensemble
