#include "thermalab/runner.hpp"

#include "thermalab/errors.hpp"
#include "thermalab/io.hpp"
#include "thermalab/linalg.hpp"
#include "thermalab/stats.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace thermalab::cli {

using nlohmann::json;
using namespace thermalab::dynamics;
using namespace thermalab::ensemble;

namespace {

HfModel build_hf_from(const ExperimentConfig& cfg, std::size_t n_levels) {
    if (cfg.density == "picket-fence")
        return build_hf_picket_fence(cfg.spacing, n_levels, cfg.e_min);
    return build_hf_exp_growth(cfg.rho0, cfg.t0, n_levels, cfg.e_min);
}

Observable build_observable_from(const ExperimentConfig& cfg, const HfModel& hf,
                                 std::uint64_t stream) {
    if (cfg.observable == "banded-random") {
        RngStream rng(cfg.master_seed, stream);
        return Observable::banded_random(hf, cfg.bandwidth, cfg.strength, rng);
    }
    if (cfg.observable == "diagonal-linear")
        return Observable::diagonal_smooth(hf, [](double e) { return e; });
    if (cfg.observable == "diagonal-quadratic")
        return Observable::diagonal_smooth(hf, [](double e) { return e * e; });
    if (cfg.observable == "identity")
        return Observable::diagonal_smooth(hf, [](double) { return 1.0; });
    if (cfg.observable == "projector-lower-half") {
        std::vector<std::size_t> subset;
        for (std::size_t m = 0; m < hf.size() / 2; ++m) subset.push_back(m);
        return Observable::projector(hf, subset);
    }
    throw ConfigError("unknown observable kind: " + cfg.observable);
}

BgsEnsembleSpec ensemble_spec_from(const ExperimentConfig& cfg, const HfModel& hf,
                                   double center) {
    BgsEnsembleSpec spec;
    spec.hf = hf;
    spec.delta = cfg.delta;
    spec.center = center;
    spec.n_realizations = cfg.n_realizations;
    spec.mode = cfg.mode == "orthogonalized" ? OverlapMode::Orthogonalized
                                             : OverlapMode::Gaussian;
    return spec;
}

struct DiagonalizedRealization {
    std::vector<double> eigvals;
    Matrix vectors;
};

DiagonalizedRealization realize(const ExperimentConfig& cfg, const HfModel& hf, double center,
                                std::uint64_t stream) {
    RngStream rng(cfg.master_seed, stream);
    if (cfg.model == "microscopic") {
        auto h = build_microscopic(hf, cfg.lambda, rng);
        auto es = eigh(h);
        return {std::move(es.eigenvalues), std::move(es.vectors)};
    }
    auto spec = ensemble_spec_from(cfg, hf, center);
    auto r = sample_phenomenological(spec, rng);
    return {std::move(r.eigvals), std::move(r.overlap)};
}

std::vector<double> realize_eigvals(const ExperimentConfig& cfg, const HfModel& hf,
                                    double center, std::uint64_t stream) {
    RngStream rng(cfg.master_seed, stream);
    if (cfg.model == "microscopic") {
        auto h = build_microscopic(hf, cfg.lambda, rng);
        return eigenvalues_only(h);
    }
    auto spec = ensemble_spec_from(cfg, hf, center);
    return sample_eigenvalues(spec, rng);
}

} // namespace

ResolvedModel resolve_model(const ExperimentConfig& cfg) {
    validate(cfg);
    ResolvedModel m;
    m.hf = build_hf_from(cfg, cfg.n_levels);
    m.center = std::isnan(cfg.center_e)
                   ? 0.5 * (m.hf.min_level() + m.hf.max_level())
                   : cfg.center_e;
    m.delta = cfg.delta;
    m.corr_n = correlation_n(m.hf, m.center, m.delta);
    m.observable = build_observable_from(cfg, m.hf, kObservableStream);
    {
        RngStream rng(cfg.master_seed, kStateStream);
        m.state = make_wavepacket(m.hf, m.center, cfg.width, rng);
    }
    m.times.resize(cfg.n_points);
    const double t_max = cfg.t_max_over_invdelta / cfg.delta;
    for (std::size_t i = 0; i < cfg.n_points; ++i)
        m.times[i] = t_max * double(i) / double(cfg.n_points - 1);
    return m;
}

void for_each_realization(std::size_t n, int jobs,
                          const std::function<void(std::size_t)>& body) {
#ifdef _OPENMP
    if (jobs > 0) {
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
        for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(n); ++k)
            body(static_cast<std::size_t>(k));
    } else {
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(n); ++k)
            body(static_cast<std::size_t>(k));
    }
#else
    (void)jobs;
    for (std::size_t k = 0; k < n; ++k) body(k);
#endif
}

// ------------------------------------------------------------------ spectrum

SpectrumResult run_spectrum(const ExperimentConfig& cfg) {
    ResolvedModel m = resolve_model(cfg);
    const std::size_t r = cfg.n_realizations;
    std::vector<std::vector<double>> spacings(r);
    for_each_realization(r, cfg.jobs, [&](std::size_t k) {
        auto ev = realize_eigvals(cfg, m.hf, m.center, kRealizationStreamBase + k);
        auto u = unfold(ev, 7);
        const std::size_t lo = u.size() / 4, hi = 3 * u.size() / 4;
        std::vector<double> s;
        s.reserve(hi - lo);
        for (std::size_t i = lo + 1; i < hi; ++i) s.push_back(u[i] - u[i - 1]);
        spacings[k] = std::move(s);
    });
    std::vector<double> pooled;
    for (const auto& s : spacings) pooled.insert(pooled.end(), s.begin(), s.end());

    // unit-mean normalized pooled spacings form the sample
    std::vector<double> levels(pooled.size() + 1, 0.0);
    for (std::size_t i = 0; i < pooled.size(); ++i) levels[i + 1] = levels[i] + pooled[i];

    SpectrumResult out;
    out.hist = spectral::spacing_distribution(levels, 24);
    out.ks_wigner = spectral::ks_distance(out.hist, spectral::ReferenceDist::Wigner);
    out.ks_poisson = spectral::ks_distance(out.hist, spectral::ReferenceDist::Poisson);
    out.corr_n = m.corr_n;
    out.lambda = cfg.model == "microscopic" ? cfg.lambda : 0.0;
    return out;
}

void cmd_spectrum(const ExperimentConfig& cfg) {
    SpectrumResult res = run_spectrum(cfg);
    io::ensure_dir(cfg.output_dir);

    const double mean_s = stats::mean(res.hist.spacings);
    io::CsvWriter csv({"s", "density_empirical", "density_wigner"});
    for (std::size_t i = 0; i < res.hist.counts.size(); ++i) {
        const double mid =
            0.5 * (res.hist.bin_edges[i] + res.hist.bin_edges[i + 1]) / mean_s;
        const double emp = res.hist.density(i) * mean_s;
        csv.add_row({mid, emp, spectral::wigner_pdf(mid)});
    }
    io::write_file(cfg.output_dir + "/spacing.csv", csv.str());

    json j;
    j["ks_wigner"] = res.ks_wigner;
    j["ks_poisson"] = res.ks_poisson;
    j["N"] = res.corr_n;
    j["delta"] = cfg.delta;
    j["lambda"] = res.lambda;
    j["n_realizations"] = cfg.n_realizations;
    io::write_file(cfg.output_dir + "/report.json", j.dump(2) + "\n");
    io::write_file(cfg.output_dir + "/run_config.json", config_to_json(cfg));
}

// -------------------------------------------------------------------- evolve

EvolveResult run_evolve(const ExperimentConfig& cfg) {
    ResolvedModel m = resolve_model(cfg);
    const std::size_t r = cfg.n_realizations;
    const std::size_t nt = m.times.size();

    EvolveResult out;
    out.times = m.times;
    out.delta = m.delta;
    out.coherent = hf_coherent_term(m.observable, m.state, m.hf, m.times);

    // Delta_S from the scaffold-basis moments of the wavepacket
    {
        double mean = 0.0, var = 0.0;
        for (std::size_t i = 0; i < m.hf.size(); ++i)
            mean += m.hf.levels[i] * m.state.hf_diag(i);
        for (std::size_t i = 0; i < m.hf.size(); ++i) {
            const double d = m.hf.levels[i] - mean;
            var += d * d * m.state.hf_diag(i);
        }
        out.delta_s = std::sqrt(var);
    }
    out.thermalized = out.delta_s < m.delta;

    auto dec = bgs::decompose(m.hf, m.observable, m.state, m.delta);
    out.equilibrium_intervals = bgs::equilibrium_from_intervals(dec);
    {
        auto spec = ensemble_spec_from(cfg, m.hf, m.center);
        out.equilibrium = bgs::asymptotic_value(spec, m.observable, m.state);
    }
    {
        // Gaussian-window closed form at the packet center
        auto spec = ensemble_spec_from(cfg, m.hf, m.center);
        const std::size_t alpha_c = static_cast<std::size_t>(
            std::min<double>(double(m.hf.size() - 1),
                             std::max(0.0, std::round(m.hf.cumulative(m.center) - 0.5))));
        out.single_window_value =
            bgs::rotated_mean_closed_form(spec, m.observable, alpha_c);
    }

    std::vector<std::vector<double>> values(r);
    for_each_realization(r, cfg.jobs, [&](std::size_t k) {
        auto dr = realize(cfg, m.hf, m.center, kRealizationStreamBase + k);
        auto ts = evolve_trace(m.observable, m.state, dr.eigvals, dr.vectors, m.times);
        values[k] = std::move(ts.values);
    });

    out.mean_trace.assign(nt, 0.0);
    out.stderr_trace.assign(nt, 0.0);
    for (std::size_t j = 0; j < nt; ++j) {
        stats::Accumulator acc;
        for (std::size_t k = 0; k < r; ++k) acc.add(values[k][j]);
        out.mean_trace[j] = acc.mean();
        out.stderr_trace[j] = acc.stderr_of_mean();
    }

    try {
        out.fit = bgs::fit_envelope(m.times, out.mean_trace, out.stderr_trace,
                                    out.equilibrium, out.coherent, m.delta);
        out.fit_ok = true;
    } catch (const DegenerateCoherent&) {
        out.fit_ok = false;
    }

    auto assemble = [&](double a_exp) {
        std::vector<double> curve(nt);
        for (std::size_t j = 0; j < nt; ++j)
            curve[j] = out.equilibrium +
                       out.coherent[j] *
                           std::exp(-a_exp * m.delta * m.delta * m.times[j] * m.times[j]);
        return curve;
    };
    out.pred_a1 = assemble(1.0);
    out.pred_a_half = assemble(0.5);
    return out;
}

void cmd_evolve(const ExperimentConfig& cfg) {
    EvolveResult res = run_evolve(cfg);
    io::ensure_dir(cfg.output_dir);

    io::CsvWriter csv({"t", "mean_trace", "stderr_trace", "bgs_prediction_a1",
                       "bgs_prediction_a_half", "coherent_term", "equilibrium"});
    for (std::size_t j = 0; j < res.times.size(); ++j)
        csv.add_row({res.times[j], res.mean_trace[j], res.stderr_trace[j], res.pred_a1[j],
                     res.pred_a_half[j], res.coherent[j], res.equilibrium});
    io::write_file(cfg.output_dir + "/evolve.csv", csv.str());

    json j;
    if (res.fit_ok) {
        j["fitted_a"] = res.fit.a;
        j["stderr_a"] = res.fit.a_stderr;
        j["favored_exponent"] = std::abs(res.fit.a - 1.0) <= std::abs(res.fit.a - 0.5)
                                    ? "1"
                                    : "1/2";
    } else {
        j["fitted_a"] = nullptr;
        j["stderr_a"] = nullptr;
        j["favored_exponent"] = nullptr;
    }
    j["equilibrium"] = res.equilibrium;
    j["equilibrium_intervals"] = res.equilibrium_intervals;
    j["single_window_value"] = res.single_window_value;
    j["delta"] = res.delta;
    j["delta_s"] = res.delta_s;
    j["delta_s_over_delta"] = res.delta_s / res.delta;
    j["thermalized"] = res.thermalized;
    j["n_realizations"] = cfg.n_realizations;
    io::write_file(cfg.output_dir + "/fit.json", j.dump(2) + "\n");
    io::write_file(cfg.output_dir + "/run_config.json", config_to_json(cfg));
}

// ----------------------------------------------------------------------- eth

namespace {

eth::EthFit eth_fit_for_size(const ExperimentConfig& cfg, std::size_t n_levels,
                             std::size_t size_index) {
    const std::uint64_t base = kSizeBlockStride * size_index;
    HfModel hf = build_hf_from(cfg, n_levels);
    const double center = std::isnan(cfg.center_e)
                              ? 0.5 * (hf.min_level() + hf.max_level())
                              : cfg.center_e;
    Observable a = build_observable_from(cfg, hf, base + kObservableStream);

    eth::FitOptions opt;
    opt.window = cfg.delta;
    opt.omega_max = 6.0 * cfg.bandwidth;
    opt.delta = cfg.delta;
    opt.corr_n = correlation_n(hf, center, cfg.delta);

    const std::size_t r = cfg.n_realizations;
    std::vector<eth::EthAccumulator> parts(
        r, eth::EthAccumulator(opt, hf.min_level(), hf.max_level()));
    ExperimentConfig sized = cfg;
    sized.n_levels = n_levels;
    for_each_realization(r, cfg.jobs, [&](std::size_t k) {
        auto dr = realize(sized, hf, center, base + kRealizationStreamBase + k);
        parts[k].add_realization(a, dr.eigvals, dr.vectors);
    });
    eth::EthAccumulator merged(opt, hf.min_level(), hf.max_level());
    for (const auto& p : parts) merged.merge(p);
    return merged.finalize();
}

} // namespace

EthResult run_eth(const ExperimentConfig& cfg) {
    validate(cfg);
    EthResult out;

    std::vector<std::size_t> sizes = cfg.scaling_n_levels;
    if (sizes.empty()) sizes = {cfg.n_levels};

    std::vector<eth::EthFit> fits;
    for (std::size_t s = 0; s < sizes.size(); ++s)
        fits.push_back(eth_fit_for_size(cfg, sizes[s], s));
    out.fit = fits.front();
    out.gauss = eth::gaussianity_test(out.fit);

    if (fits.size() >= 3) {
        out.scaling = eth::scaling_check(fits);
        out.has_scaling = true;
    }

    // normalized dephasing transform of the f^2 profile at the band center
    const double e_mid = 0.5 * (out.fit.e_lo + out.fit.e_hi);
    out.c_times.resize(60);
    for (std::size_t i = 0; i < out.c_times.size(); ++i)
        out.c_times[i] = 10.0 / cfg.bandwidth * double(i) / double(out.c_times.size() - 1);
    out.c_values = eth::c_of_t(out.fit, e_mid, out.c_times);
    return out;
}

void cmd_eth(const ExperimentConfig& cfg) {
    EthResult res = run_eth(cfg);
    io::ensure_dir(cfg.output_dir);

    io::CsvWriter csv({"E_bin", "omega_bin", "f2", "count"});
    const auto& fit = res.fit;
    for (std::size_t i = 0; i < fit.opt.n_e_bins; ++i)
        for (std::size_t j = 0; j < fit.n_omega_total(); ++j) {
            const auto& acc = fit.bins[i * fit.n_omega_total() + j];
            const double f2 = acc.n ? acc.sum_sq / double(acc.n) : 0.0;
            csv.add_row({fit.e_center(i), fit.omega_center(j),
                         fit.bin_ok(i, j) ? f2 : 0.0, double(acc.n)});
        }
    io::write_file(cfg.output_dir + "/eth_f2.csv", csv.str());

    json j;
    j["kurtosis"] = res.gauss.kurtosis;
    j["ks_gauss"] = res.gauss.ks_distance;
    j["r_sample_count"] = res.gauss.count;
    j["s_eff"] = res.fit.s_eff;
    j["corr_n"] = res.fit.opt.corr_n;
    if (res.has_scaling) {
        j["scaling_slope"] = res.scaling.slope;
        j["scaling_slope_stderr"] = res.scaling.slope_stderr;
        j["scaling_log_n"] = res.scaling.log_n;
        j["scaling_log_var"] = res.scaling.log_var;
    }
    j["c_of_t"] = {{"t", res.c_times}, {"value", res.c_values}};
    io::write_file(cfg.output_dir + "/eth_report.json", j.dump(2) + "\n");
    io::write_file(cfg.output_dir + "/run_config.json", config_to_json(cfg));
}

// -------------------------------------------------------------------- report

void cmd_report(const std::string& output_dir) {
    const std::vector<std::string> needed = {
        output_dir + "/spacing.csv", output_dir + "/evolve.csv", output_dir + "/fit.json",
        output_dir + "/eth_f2.csv", output_dir + "/eth_report.json"};
    std::string missing;
    for (const auto& p : needed)
        if (!io::file_exists(p)) missing += (missing.empty() ? "" : ", ") + p;
    if (!missing.empty()) throw MissingArtifacts("missing artifacts: " + missing);

    auto spacing = io::read_csv(needed[0]);
    auto evolve = io::read_csv(needed[1]);
    json fitj = json::parse(io::read_file(needed[2]));
    auto f2csv = io::read_csv(needed[3]);
    json ethj = json::parse(io::read_file(needed[4]));

    io::SvgCanvas svg(900, 680);
    svg.text(450, 22, "thermalab report", 16, "middle");

    // panel 1: spacing histogram vs Wigner surmise
    {
        io::Panel p{60, 50, 360, 240, 0.0, 3.2, 0.0, 1.1, "level spacings"};
        p.frame(svg);
        const std::size_t cs = spacing.col("s"), ce = spacing.col("density_empirical"),
                          cw = spacing.col("density_wigner");
        std::vector<double> xs, ye, yw;
        for (const auto& row : spacing.rows) {
            if (row[cs] > p.hi_x) continue;
            xs.push_back(p.px(row[cs]));
            ye.push_back(p.py(std::min(row[ce], p.hi_y)));
            yw.push_back(p.py(std::min(row[cw], p.hi_y)));
        }
        svg.polyline(xs, ye, "steelblue", 1.5);
        svg.polyline(xs, yw, "crimson", 1.5);
        svg.text(p.x0 + 8, p.y0 + 16, "empirical", 10);
        svg.text(p.x0 + 8, p.y0 + 30, "surmise", 10);
    }

    // panel 2: relaxation curve vs both envelope candidates
    {
        const std::size_t ct = evolve.col("t"), cm = evolve.col("mean_trace"),
                          c1 = evolve.col("bgs_prediction_a1"),
                          ch = evolve.col("bgs_prediction_a_half");
        double lo = 1e300, hi = -1e300, tmax = 0.0;
        for (const auto& row : evolve.rows) {
            lo = std::min({lo, row[cm], row[c1], row[ch]});
            hi = std::max({hi, row[cm], row[c1], row[ch]});
            tmax = std::max(tmax, row[ct]);
        }
        if (hi <= lo) hi = lo + 1.0;
        io::Panel p{510, 50, 360, 240, 0.0, tmax, lo, hi, "Tr(A rho(t)) vs predictions"};
        p.frame(svg);
        std::vector<double> xs, ym, y1, yh;
        for (const auto& row : evolve.rows) {
            xs.push_back(p.px(row[ct]));
            ym.push_back(p.py(row[cm]));
            y1.push_back(p.py(row[c1]));
            yh.push_back(p.py(row[ch]));
        }
        svg.polyline(xs, ym, "black", 1.5);
        svg.polyline(xs, y1, "crimson", 1.2);
        svg.polyline(xs, yh, "darkorange", 1.2);
        std::string fitted = fitj["fitted_a"].is_null()
                                 ? std::string("n/a")
                                 : io::fmt_double(fitj["fitted_a"].get<double>()).substr(0, 6);
        svg.text(p.x0 + 8, p.y0 + 16, "fitted a = " + fitted, 10);
    }

    // panel 3: f^2 heatmap
    {
        const std::size_t cE = f2csv.col("E_bin"), cO = f2csv.col("omega_bin"),
                          cf = f2csv.col("f2");
        double elo = 1e300, ehi = -1e300, olo = 1e300, ohi = -1e300, fmax = 0.0;
        for (const auto& row : f2csv.rows) {
            elo = std::min(elo, row[cE]);
            ehi = std::max(ehi, row[cE]);
            olo = std::min(olo, row[cO]);
            ohi = std::max(ohi, row[cO]);
            fmax = std::max(fmax, row[cf]);
        }
        io::Panel p{60, 370, 360, 240, olo, ohi, elo, ehi, "off-diagonal strength f2(E, omega)"};
        // cell size from the first two distinct coordinates
        double dE = (ehi - elo), dO = (ohi - olo);
        std::vector<double> es, os;
        for (const auto& row : f2csv.rows) {
            es.push_back(row[cE]);
            os.push_back(row[cO]);
        }
        std::sort(es.begin(), es.end());
        es.erase(std::unique(es.begin(), es.end()), es.end());
        std::sort(os.begin(), os.end());
        os.erase(std::unique(os.begin(), os.end()), os.end());
        if (es.size() > 1) dE = es[1] - es[0];
        if (os.size() > 1) dO = os[1] - os[0];
        for (const auto& row : f2csv.rows) {
            const double frac = fmax > 0.0 ? row[cf] / fmax : 0.0;
            const int shade = 255 - static_cast<int>(std::round(frac * 255.0));
            char color[16];
            std::snprintf(color, sizeof(color), "#%02x%02xff", shade, shade);
            const double x = p.px(row[cO] - 0.5 * dO);
            const double y = p.py(row[cE] + 0.5 * dE);
            svg.rect(x, y, p.px(row[cO] + 0.5 * dO) - x, p.py(row[cE] - 0.5 * dE) - y, color);
        }
        p.frame(svg);
    }

    // panel 4: suppression scaling
    {
        io::Panel p{510, 370, 360, 240, 0.0, 1.0, 0.0, 1.0, "off-diagonal variance vs N"};
        if (ethj.contains("scaling_log_n")) {
            std::vector<double> lx = ethj["scaling_log_n"].get<std::vector<double>>();
            std::vector<double> ly = ethj["scaling_log_var"].get<std::vector<double>>();
            p.lo_x = *std::min_element(lx.begin(), lx.end()) - 0.2;
            p.hi_x = *std::max_element(lx.begin(), lx.end()) + 0.2;
            p.lo_y = *std::min_element(ly.begin(), ly.end()) - 0.2;
            p.hi_y = *std::max_element(ly.begin(), ly.end()) + 0.2;
            p.frame(svg);
            for (std::size_t i = 0; i < lx.size(); ++i)
                svg.circle(p.px(lx[i]), p.py(ly[i]), 3.5, "steelblue");
            const double slope = ethj["scaling_slope"].get<double>();
            char label[64];
            std::snprintf(label, sizeof(label), "log-log slope = %.3f", slope);
            svg.text(p.x0 + 8, p.y0 + 16, label, 10);
        } else {
            p.frame(svg);
            svg.text(p.x0 + 0.5 * p.w, p.y0 + 0.5 * p.h, "single size: no scaling sweep", 11,
                     "middle");
        }
    }

    io::write_file(output_dir + "/report.svg", svg.finish());
}

} // namespace thermalab::cli
