#include "thermalab/bgs.hpp"

#include "thermalab/errors.hpp"
#include "thermalab/stats.hpp"

#include <algorithm>
#include <cmath>

namespace thermalab::bgs {

double norm_constant(NormConvention c) {
    switch (c) {
    case NormConvention::ConsistentGaussian:
        return 1.0 / std::sqrt(2.0 * M_PI);
    case NormConvention::PrintedAlternative:
        return 1.0 / (std::sqrt(2.0) * M_PI);
    }
    return 1.0 / std::sqrt(2.0 * M_PI);
}

IntervalDecomposition decompose(const HfModel& hf, const Observable& a,
                                const StatisticalOperator& pi, double delta) {
    if (delta <= 0.0) throw InvalidArgument("decompose: delta must be > 0");
    if (a.dim() != hf.size() || pi.dim() != hf.size())
        throw DimensionMismatch("decompose: size mismatch");
    const double span = hf.span();
    if (span < 2.0 * delta)
        throw SpanTooSmall("decompose: spectrum must cover at least two intervals");

    IntervalDecomposition dec;
    dec.delta = delta;
    dec.e0 = hf.min_level();
    const auto nk = static_cast<std::size_t>(std::ceil(span / delta + 1e-12)) + 1;
    dec.count.assign(nk, 0);
    dec.rho.assign(nk, 0.0);
    dec.p.assign(nk, 0.0);
    dec.trk_a.assign(nk, 0.0);
    for (std::size_t m = 0; m < hf.size(); ++m) {
        auto k = static_cast<std::size_t>(
            std::min(double(nk - 1), std::floor((hf.levels[m] - dec.e0) / delta)));
        ++dec.count[k];
        dec.p[k] += pi.hf_diag(m);
        dec.trk_a[k] += a.diag(m);
    }
    for (std::size_t k = 0; k < nk; ++k) dec.rho[k] = double(dec.count[k]) / delta;
    return dec;
}

double equilibrium_from_intervals(const IntervalDecomposition& dec, NormConvention c) {
    const double norm = std::sqrt(2.0 * M_PI) * norm_constant(c);
    double s = 0.0;
    for (std::size_t k = 0; k < dec.n_intervals(); ++k) {
        if (dec.count[k] == 0) continue;
        s += dec.p[k] * dec.trk_a[k] / (dec.rho[k] * dec.delta);
    }
    return norm * s;
}

BgsPrediction predict(const IntervalDecomposition& dec, const std::vector<double>& coherent,
                      const std::vector<double>& times, double delta, double exponent_a,
                      NormConvention c) {
    if (coherent.size() != times.size())
        throw DimensionMismatch("predict: coherent and times must align");
    if (exponent_a <= 0.0) throw InvalidArgument("predict: envelope exponent must be > 0");
    BgsPrediction p;
    p.equilibrium = equilibrium_from_intervals(dec, c);
    p.coherent = coherent;
    p.envelope_exponent = exponent_a;
    p.curve.resize(times.size());
    for (std::size_t j = 0; j < times.size(); ++j) {
        const double t = times[j];
        p.curve[j] = p.equilibrium +
                     coherent[j] * std::exp(-exponent_a * delta * delta * t * t);
    }
    return p;
}

EnvelopeFit fit_envelope(const std::vector<double>& times, const std::vector<double>& measured,
                         const std::vector<double>& stderr_measured, double equilibrium,
                         const std::vector<double>& coherent, double delta) {
    const std::size_t n = times.size();
    if (measured.size() != n || coherent.size() != n || stderr_measured.size() != n)
        throw DimensionMismatch("fit_envelope: input arrays must align");
    if (delta <= 0.0) throw InvalidArgument("fit_envelope: delta must be > 0");

    double noise_floor = stderr_measured[0];
    if (noise_floor <= 0.0) noise_floor = 1e-12;
    if (std::abs(coherent[0]) < 2.0 * noise_floor)
        throw DegenerateCoherent("fit_envelope: coherent term below the noise floor at t=0");

    const double t_max = 3.0 / delta;
    std::vector<double> t, r, c, w;
    for (std::size_t j = 0; j < n; ++j) {
        if (times[j] > t_max) break;
        const double se = stderr_measured[j] > 0.0 ? stderr_measured[j] : noise_floor;
        t.push_back(times[j]);
        r.push_back(measured[j] - equilibrium);
        c.push_back(coherent[j]);
        w.push_back(1.0 / (se * se));
    }
    if (t.size() < 4) throw FitFailure("fit_envelope: too few points below 3/delta");

    auto chi2 = [&](double a) {
        double s = 0.0;
        for (std::size_t j = 0; j < t.size(); ++j) {
            const double model = c[j] * std::exp(-a * delta * delta * t[j] * t[j]);
            const double d = r[j] - model;
            s += w[j] * d * d;
        }
        return s;
    };

    // golden-section minimization on a bracketed interval
    double lo = 1e-3, hi = 8.0;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = chi2(x1), f2 = chi2(x2);
    for (int it = 0; it < 200 && hi - lo > 1e-10; ++it) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = chi2(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = chi2(x2);
        }
    }
    EnvelopeFit fit;
    fit.a = 0.5 * (lo + hi);
    fit.n_points = t.size();
    fit.chi2 = chi2(fit.a);

    // Gauss-Newton error: Var(a) = [sum w (df/da)^2]^{-1}
    double info = 0.0;
    for (std::size_t j = 0; j < t.size(); ++j) {
        const double dt2 = delta * delta * t[j] * t[j];
        const double dfda = -c[j] * dt2 * std::exp(-fit.a * dt2);
        info += w[j] * dfda * dfda;
    }
    fit.a_stderr = info > 0.0 ? 1.0 / std::sqrt(info) : 0.0;
    return fit;
}

double rotated_mean_closed_form(const BgsEnsembleSpec& spec, const Observable& a,
                                std::size_t alpha) {
    const HfModel& hf = spec.hf;
    const double eb = hf.ebar(alpha);
    const double rho = hf.model_density(eb);
    const double delta = spec.delta;
    double s = 0.0;
    for (std::size_t m = 0; m < hf.size(); ++m) {
        const double x = eb - hf.levels[m];
        s += a.diag(m) * std::exp(-x * x / (2.0 * delta * delta));
    }
    return s / (std::sqrt(2.0 * M_PI) * rho * delta);
}

double asymptotic_value(const BgsEnsembleSpec& spec, const Observable& a,
                        const StatisticalOperator& pi) {
    const HfModel& hf = spec.hf;
    const std::size_t n = hf.size();
    if (a.dim() != n || pi.dim() != n) throw DimensionMismatch("asymptotic_value: size mismatch");
    const double delta = spec.delta;
    double total = 0.0;
    std::vector<double> g(n);
    for (std::size_t alpha = 0; alpha < n; ++alpha) {
        const double eb = hf.ebar(alpha);
        const double norm = 1.0 / (std::sqrt(2.0 * M_PI) * hf.model_density(eb) * delta);
        double ma = 0.0, mp = 0.0;
        for (std::size_t m = 0; m < n; ++m) {
            const double x = eb - hf.levels[m];
            g[m] = std::exp(-x * x / (2.0 * delta * delta));
            ma += a.diag(m) * g[m];
            mp += pi.hf_diag(m) * g[m];
        }
        total += (norm * ma) * (norm * mp);
        // same-column covariance of the two rotated diagonals:
        // 2 sum_{mn} A_{mn} Pi_{mn} F(m) F(n); the 1/N term that survives in
        // the diagonal ensemble
        double cov = 0.0;
        for (std::size_t m = 0; m < n; ++m) {
            cov += a.value(m, m) * pi.element(m, m) * g[m] * g[m];
            for (std::size_t off = 1; off < a.band_extent(m); ++off)
                cov += 2.0 * a.value(m, m + off) * pi.element(m, m + off) * g[m] * g[m + off];
        }
        total += 2.0 * norm * norm * cov;
    }
    return total;
}

double rotated_variance_closed_form(const BgsEnsembleSpec& spec, const Observable& a,
                                    std::size_t alpha, std::size_t beta) {
    const HfModel& hf = spec.hf;
    const std::size_t n = hf.size();
    const double delta = spec.delta;
    const double eba = hf.ebar(alpha);
    const double ebb = hf.ebar(beta);
    const double pref = (alpha == beta ? 2.0 : 1.0) /
                        (2.0 * M_PI * delta * delta * hf.model_density(eba) *
                         hf.model_density(ebb));
    // Tr(A G_a A G_b) = sum_{mn} A_{mn}^2 g_b(m) g_a(n), band-aware
    double s = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
        const double xm = ebb - hf.levels[m];
        const double gm = std::exp(-xm * xm / (2.0 * delta * delta));
        for (std::size_t off = 0; off < a.band_extent(m); ++off) {
            const std::size_t n2 = m + off;
            const double v = a.value(m, n2);
            if (v == 0.0) continue;
            const double xn = eba - hf.levels[n2];
            const double gn = std::exp(-xn * xn / (2.0 * delta * delta));
            s += v * v * gm * gn;
            if (off > 0) {
                // mirrored (n2, m) term
                const double xm2 = ebb - hf.levels[n2];
                const double xn2 = eba - hf.levels[m];
                s += v * v * std::exp(-xm2 * xm2 / (2.0 * delta * delta)) *
                     std::exp(-xn2 * xn2 / (2.0 * delta * delta));
            }
        }
    }
    return pref * s;
}

namespace {

// Rotated elements for the alpha set and their +offset partners, one
// realization: columns drawn in sorted-state order.
struct RotatedDraw {
    std::vector<double> diag;    // per alpha
    std::vector<double> offdiag; // per alpha (pair alpha, alpha+offset)
};

RotatedDraw draw_rotated(const BgsEnsembleSpec& spec, const Observable& a,
                         const std::vector<std::size_t>& alphas, std::size_t offset,
                         RngStream& rng) {
    std::vector<std::size_t> states(alphas);
    if (offset > 0)
        for (std::size_t al : alphas) states.push_back(al + offset);
    std::sort(states.begin(), states.end());
    states.erase(std::unique(states.begin(), states.end()), states.end());
    Matrix cols = ensemble::sample_overlap_columns(spec, states, rng);

    auto col_index = [&](std::size_t state) {
        return static_cast<std::size_t>(
            std::lower_bound(states.begin(), states.end(), state) - states.begin());
    };
    const std::size_t n = spec.hf.size();
    std::vector<double> x(n), y(n);
    RotatedDraw out;
    for (std::size_t al : alphas) {
        const std::size_t ca = col_index(al);
        for (std::size_t m = 0; m < n; ++m) x[m] = cols(m, ca);
        out.diag.push_back(a.quadratic_form(x, x));
        if (offset > 0) {
            const std::size_t cb = col_index(al + offset);
            for (std::size_t m = 0; m < n; ++m) y[m] = cols(m, cb);
            out.offdiag.push_back(a.quadratic_form(x, y));
        }
    }
    return out;
}

} // namespace

MeanCheckReport rotated_mean_check(const BgsEnsembleSpec& spec, const Observable& a,
                                   const std::vector<std::size_t>& alphas,
                                   std::size_t offdiag_offset, std::size_t n_realizations,
                                   std::uint64_t master_seed, std::uint64_t stream_base) {
    if (n_realizations < 50)
        throw TooFewRealizations("rotated_mean_check: need >= 50 realizations");
    std::vector<stats::Accumulator> diag(alphas.size()), off(alphas.size());
    for (std::size_t k = 0; k < n_realizations; ++k) {
        RngStream rng(master_seed, stream_base + k);
        auto d = draw_rotated(spec, a, alphas, offdiag_offset, rng);
        for (std::size_t i = 0; i < alphas.size(); ++i) {
            diag[i].add(d.diag[i]);
            if (offdiag_offset > 0) off[i].add(d.offdiag[i]);
        }
    }

    MeanCheckReport rep;
    rep.n_realizations = n_realizations;
    // group alphas into bins of ~8 for per-bin comparisons
    const std::size_t group = 8;
    for (std::size_t i0 = 0; i0 < alphas.size(); i0 += group) {
        const std::size_t i1 = std::min(alphas.size(), i0 + group);
        double meas = 0.0, closed = 0.0, var = 0.0;
        for (std::size_t i = i0; i < i1; ++i) {
            meas += diag[i].mean();
            closed += rotated_mean_closed_form(spec, a, alphas[i]);
            var += diag[i].sample_variance() / double(diag[i].n);
        }
        const double cnt = double(i1 - i0);
        rep.bin_measured.push_back(meas / cnt);
        rep.bin_closed.push_back(closed / cnt);
        rep.bin_sigma.push_back(std::sqrt(var) / cnt);
        const double z = (rep.bin_measured.back() - rep.bin_closed.back()) /
                         std::max(rep.bin_sigma.back(), 1e-300);
        rep.max_abs_z_diag = std::max(rep.max_abs_z_diag, std::abs(z));
    }
    if (offdiag_offset > 0) {
        for (std::size_t i = 0; i < alphas.size(); ++i) {
            const double se = std::sqrt(off[i].sample_variance() / double(off[i].n));
            const double z = off[i].mean() / std::max(se, 1e-300);
            rep.max_abs_z_offdiag = std::max(rep.max_abs_z_offdiag, std::abs(z));
        }
    }
    return rep;
}

VarianceCheckReport rotated_variance_check(const BgsEnsembleSpec& spec, const Observable& a,
                                           const std::vector<std::size_t>& alphas,
                                           std::size_t offdiag_offset,
                                           std::size_t n_realizations,
                                           std::uint64_t master_seed,
                                           std::uint64_t stream_base) {
    if (n_realizations < 100)
        throw TooFewRealizations("rotated_variance_check: need >= 100 realizations");
    std::vector<stats::Accumulator> diag(alphas.size()), off(alphas.size());
    for (std::size_t k = 0; k < n_realizations; ++k) {
        RngStream rng(master_seed, stream_base + k);
        auto d = draw_rotated(spec, a, alphas, offdiag_offset, rng);
        for (std::size_t i = 0; i < alphas.size(); ++i) {
            diag[i].add(d.diag[i]);
            if (offdiag_offset > 0) off[i].add(d.offdiag[i]);
        }
    }
    VarianceCheckReport rep;
    rep.n_realizations = n_realizations;
    double meas_d = 0.0, closed_d = 0.0, meas_o = 0.0, closed_o = 0.0;
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        meas_d += diag[i].sample_variance();
        closed_d += rotated_variance_closed_form(spec, a, alphas[i], alphas[i]);
        if (offdiag_offset > 0) {
            meas_o += off[i].sample_variance();
            closed_o += rotated_variance_closed_form(spec, a, alphas[i],
                                                     alphas[i] + offdiag_offset);
        }
    }
    const double cnt = double(alphas.size());
    rep.measured_diag = meas_d / cnt;
    rep.closed_diag = closed_d / cnt;
    if (offdiag_offset > 0) {
        rep.measured_offdiag = meas_o / cnt;
        rep.closed_offdiag = closed_o / cnt;
    }
    return rep;
}

SelfAveragingReport self_averaging_check(const std::vector<SelfAveragingInput>& inputs) {
    if (inputs.size() < 3) throw InsufficientSpan("self_averaging_check: need >= 3 sizes");
    SelfAveragingReport rep;
    for (const auto& in : inputs) {
        const std::size_t r = in.values_t1.size();
        if (r < 100 || in.values_t2.size() != r)
            throw TooFewRealizations("self_averaging_check: need >= 100 realizations per size");
        double sx = 0.0, sy = 0.0, sxy = 0.0;
        for (std::size_t i = 0; i < r; ++i) {
            sx += in.values_t1[i];
            sy += in.values_t2[i];
            sxy += in.values_t1[i] * in.values_t2[i];
        }
        const double cov = (sxy - sx * sy / double(r)) / double(r - 1);
        rep.corr_n.push_back(in.corr_n);
        rep.connected.push_back(std::abs(cov));
    }
    rep.monotone_decreasing = true;
    for (std::size_t i = 1; i < rep.connected.size(); ++i)
        if (rep.connected[i] >= rep.connected[i - 1]) rep.monotone_decreasing = false;
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < rep.connected.size(); ++i) {
        if (rep.connected[i] <= 0.0) continue;
        lx.push_back(std::log(rep.corr_n[i]));
        ly.push_back(std::log(rep.connected[i]));
    }
    if (lx.size() >= 2) rep.slope = stats::fit_line(lx, ly).slope;
    return rep;
}

} // namespace thermalab::bgs
