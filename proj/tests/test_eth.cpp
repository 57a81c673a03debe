#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "thermalab/dynamics.hpp"
#include "thermalab/ensemble.hpp"
#include "thermalab/errors.hpp"
#include "thermalab/eth.hpp"
#include "thermalab/linalg.hpp"
#include "thermalab/stats.hpp"

#include <cmath>

using namespace thermalab;
using namespace thermalab::eth;
using dynamics::Observable;
using dynamics::StatisticalOperator;
using ensemble::build_hf_picket_fence;
using ensemble::build_microscopic;
using ensemble::coupling_for_mixing_width;

namespace {

// Synthetic fit with one E row and a prescribed f^2 profile over omega.
EthFit synthetic_profile(const std::vector<double>& f2_by_bin, double omega_max,
                         double corr_n = 100.0) {
    FitOptions opt;
    opt.n_e_bins = 1;
    opt.n_omega_bins = f2_by_bin.size() / 2;
    opt.omega_max = omega_max;
    opt.min_bin_count = 1;
    opt.corr_n = corr_n;
    EthFit fit;
    fit.opt = opt;
    fit.e_lo = -1.0;
    fit.e_hi = 1.0;
    fit.bins.resize(f2_by_bin.size());
    fit.bin_valid.assign(f2_by_bin.size(), 1);
    for (std::size_t j = 0; j < f2_by_bin.size(); ++j) {
        fit.bins[j].n = 1;
        fit.bins[j].sum_sq = f2_by_bin[j];
    }
    fit.s_eff = std::log(corr_n);
    return fit;
}

} // namespace

TEST_CASE("fit_eth: identity observable has unit curve and empty band") {
    auto hf = build_hf_picket_fence(1.0, 200, 0.0);
    RngStream rng(1, 0);
    auto h = build_microscopic(hf, 1.5, rng);
    auto es = eigh(h);
    auto one = Observable::diagonal_smooth(hf, [](double) { return 1.0; });

    FitOptions opt;
    opt.window = 10.0;
    opt.omega_max = 20.0;
    auto fit = fit_eth(one, es.eigenvalues, es.vectors, opt);
    for (double a : fit.curve_a) CHECK(a == doctest::Approx(1.0).epsilon(1e-10));
    for (std::size_t i = 0; i < fit.bins.size(); ++i)
        if (fit.bin_valid[i])
            CHECK(fit.bins[i].sum_sq / double(fit.bins[i].n) <= 1e-20);
}

TEST_CASE("fit_eth: commuting smooth observable reproduces g(E) with no band") {
    auto hf = build_hf_picket_fence(1.0, 300, 0.0);
    auto h = SymmetricMatrix::diagonal(hf.levels);
    auto es = eigh(h);
    auto lin = Observable::diagonal_smooth(hf, [](double e) { return e; });

    FitOptions opt;
    opt.window = 0.4; // below the spacing: the curve samples single levels
    opt.omega_max = 15.0;
    auto fit = fit_eth(lin, es.eigenvalues, es.vectors, opt);
    for (std::size_t i = 0; i < fit.curve_e.size(); ++i)
        CHECK(fit.curve_a[i] == doctest::Approx(fit.curve_e[i]).epsilon(0.01));
    for (std::size_t i = 0; i < fit.bins.size(); ++i)
        if (fit.bin_valid[i])
            CHECK(fit.bins[i].sum_sq / double(fit.bins[i].n) <= 1e-20);
}

TEST_CASE("fit_eth: banded observable in the chaotic regime") {
    auto hf = build_hf_picket_fence(1.0, 400, 0.0);
    const double w = 5.0;
    const double delta = 15.0;  // analysis window for the diagonal curve
    const double gamma = 3.5;   // mixing width: chaotic but inside the band
    RngStream rng_a(2, 1);
    auto a = Observable::banded_random(hf, w, 1.0, rng_a);

    FitOptions opt;
    opt.window = delta;
    opt.omega_max = 6.0 * w;
    opt.delta = delta;
    opt.corr_n = delta;

    EthAccumulator acc(opt, hf.min_level(), hf.max_level());
    for (int k = 0; k < 4; ++k) {
        RngStream rng(2, static_cast<std::uint64_t>(k + 10));
        auto h = build_microscopic(hf, coupling_for_mixing_width(gamma, 1.0), rng);
        auto es = eigh(h);
        acc.add_realization(a, es.eigenvalues, es.vectors);
    }
    auto fit = acc.finalize();

    // band profile: f2 falls by (much) more than 10x between omega ~ 0 and 3w
    const double e_mid = 0.5 * (fit.e_lo + fit.e_hi);
    const double f2_0 = fit.f2_raw(e_mid, 1.0);
    const double f2_3w = fit.f2_raw(e_mid, 3.0 * w);
    CHECK(f2_0 > 0.0);
    CHECK(f2_0 > 10.0 * f2_3w);

    // diagonal curve against the microcanonical window average of one
    // fresh realization
    RngStream rng(2, 10);
    auto h = build_microscopic(hf, coupling_for_mixing_width(gamma, 1.0), rng);
    auto es = eigh(h);
    auto a_rot = a.rotate(es.vectors);
    for (std::size_t i = 3; i < 9; ++i) {
        const double c = fit.curve_e[i];
        const double eq = dynamics::equilibrium_value(a, es.eigenvalues, es.vectors, c, delta);
        stats::Accumulator scatter;
        for (std::size_t al = 0; al < 400; ++al)
            if (std::abs(es.eigenvalues[al] - c) <= opt.window)
                scatter.add(a_rot(al, al));
        CHECK(std::abs(fit.curve_a[i] - eq) < 2.0 * scatter.stderr_of_mean() + 1e-9);
    }
}

TEST_CASE("gaussianity_test: synthetic normal residuals pass") {
    EthFit fit = synthetic_profile(std::vector<double>(4, 1.0), 1.0);
    RngStream rng(3, 0);
    fit.r_samples = sample_gaussian(rng, 0.0, 1.0, 1000000);
    auto rep = gaussianity_test(fit);
    CHECK(std::abs(rep.kurtosis) < 0.05);
    CHECK(rep.ks_distance < 0.01);
}

TEST_CASE("gaussianity_test: chaotic-regime residuals are normal") {
    auto hf = build_hf_picket_fence(1.0, 500, 0.0);
    const double w = 5.0, delta = 15.0;
    RngStream rng_a(4, 1);
    auto a = Observable::banded_random(hf, w, 1.0, rng_a);
    FitOptions opt;
    opt.window = delta;
    opt.omega_max = 4.0 * w;
    EthAccumulator acc(opt, hf.min_level(), hf.max_level());
    for (int k = 0; k < 4; ++k) {
        RngStream rng(4, static_cast<std::uint64_t>(k + 2));
        auto h = build_microscopic(hf, coupling_for_mixing_width(delta, 1.0), rng);
        auto es = eigh(h);
        acc.add_realization(a, es.eigenvalues, es.vectors);
    }
    auto fit = acc.finalize();
    REQUIRE(fit.r_samples.size() >= 10000);
    auto rep = gaussianity_test(fit);
    CHECK(rep.ks_distance < 0.05);
}

TEST_CASE("gaussianity_test: integrable control fails or degenerates") {
    // lambda = 0: the rotated matrix keeps its sparse scaffold band, nothing
    // resembling Gaussian residuals.
    auto hf = build_hf_picket_fence(1.0, 300, 0.0);
    auto h = SymmetricMatrix::diagonal(hf.levels);
    auto es = eigh(h);
    RngStream rng_a(5, 1);
    auto a = Observable::banded_random(hf, 5.0, 1.0, rng_a);
    FitOptions opt;
    opt.window = 10.0;
    opt.omega_max = 20.0;
    auto fit = fit_eth(a, es.eigenvalues, es.vectors, opt);
    if (fit.r_samples.size() >= 10000) {
        auto rep = gaussianity_test(fit);
        CHECK(rep.ks_distance > 0.05);
    } else {
        CHECK_THROWS_AS(gaussianity_test(fit), TooFewSamples);
    }
}

TEST_CASE("scaling_check: synthetic null cases") {
    auto make = [](double corr_n, double var) {
        auto fit = synthetic_profile(std::vector<double>(8, var), 2.0, corr_n);
        fit.opt.delta = 2.0;
        return fit;
    };
    std::vector<EthFit> flat = {make(100, 0.5), make(200, 0.5), make(400, 0.5)};
    CHECK(scaling_check(flat).slope == doctest::Approx(0.0).epsilon(1e-12));

    std::vector<EthFit> quad = {make(100, 1.0 / 1e4), make(200, 1.0 / 4e4),
                                make(400, 1.0 / 16e4)};
    CHECK(scaling_check(quad).slope == doctest::Approx(-2.0).epsilon(1e-10));

    std::vector<EthFit> narrow = {make(100, 0.5), make(150, 0.4), make(200, 0.3)};
    CHECK_THROWS_AS(scaling_check(narrow), InsufficientSpan);
    std::vector<EthFit> two = {make(100, 0.5), make(400, 0.2)};
    CHECK_THROWS_AS(scaling_check(two), InsufficientSpan);
}

TEST_CASE("scaling_check: phenomenological suppression is 1/N") {
    // correlation numbers 25, 50, 100 via delta at fixed unit density
    std::vector<EthFit> fits;
    for (double delta : {25.0, 50.0, 100.0}) {
        const auto n_levels = static_cast<std::size_t>(8 * delta);
        auto hf = build_hf_picket_fence(1.0, n_levels, 0.0);
        ensemble::BgsEnsembleSpec spec;
        spec.hf = hf;
        spec.delta = delta;
        spec.center = 0.5 * (hf.min_level() + hf.max_level());

        auto lin = Observable::diagonal_smooth(hf, [](double e) { return std::sin(e / 7.0); });
        FitOptions opt;
        opt.window = delta;
        opt.omega_max = delta;
        opt.delta = delta;
        opt.corr_n = delta;
        opt.min_bin_count = 10;
        EthAccumulator acc(opt, hf.min_level(), hf.max_level());
        for (int k = 0; k < 6; ++k) {
            RngStream rng(6, static_cast<std::uint64_t>(k));
            auto r = ensemble::sample_phenomenological(spec, rng);
            acc.add_realization(lin, r.eigvals, r.overlap);
        }
        fits.push_back(acc.finalize());
    }
    auto rep = scaling_check(fits);
    CHECK(rep.slope == doctest::Approx(-1.0).epsilon(0.12));
}

TEST_CASE("eth_variance_prediction: collapse cases") {
    auto hf = build_hf_picket_fence(1.0, 60, 0.0);
    RngStream rng(7, 0);
    auto h = build_microscopic(hf, 1.0, rng);
    auto es = eigh(h);
    std::vector<double> times = {0.0, 0.4, 1.3};

    // f == 0 -> zero prediction
    auto zero_fit = synthetic_profile(std::vector<double>(8, 0.0), 50.0);
    zero_fit.e_lo = es.eigenvalues.front();
    zero_fit.e_hi = es.eigenvalues.back();
    auto pi = StatisticalOperator::projector_on(60, 30);
    auto v0 = eth_variance_prediction(zero_fit, pi, es.eigenvalues, es.vectors, times);
    for (double v : v0) CHECK(v == 0.0);

    // projector on an eigenstate: only the diagonal term survives, giving
    // 2 f2(E, 0) at every time
    std::vector<double> amps(60);
    for (std::size_t m = 0; m < 60; ++m) amps[m] = es.vectors(m, 30);
    auto eig_proj = StatisticalOperator::rank_one(amps);
    auto flat_fit = synthetic_profile(std::vector<double>(8, 0.37), 200.0);
    flat_fit.e_lo = es.eigenvalues.front();
    flat_fit.e_hi = es.eigenvalues.back();
    auto vp = eth_variance_prediction(flat_fit, eig_proj, es.eigenvalues, es.vectors, times);
    for (double v : vp) CHECK(v == doctest::Approx(2.0 * 0.37).epsilon(1e-8));
}

TEST_CASE("eth_variance_prediction: matches the ensemble Monte Carlo within x2") {
    auto hf = build_hf_picket_fence(1.0, 300, 0.0);
    const double w = 5.0, delta = 15.0;
    const double center = 150.0;
    RngStream rng_a(8, 1);
    auto a = Observable::banded_random(hf, w, 1.0, rng_a);
    RngStream rng_s(8, 2);
    auto pi = dynamics::make_wavepacket(hf, center, 7.0, rng_s);

    ensemble::BgsEnsembleSpec spec;
    spec.hf = hf;
    spec.delta = delta;
    spec.center = center;

    FitOptions opt;
    opt.window = delta;
    opt.omega_max = 6.0 * w;
    opt.delta = delta;
    opt.corr_n = delta;
    EthAccumulator acc(opt, hf.min_level(), hf.max_level());
    std::vector<double> times = {0.0, 3.0 / delta, 5.0 / delta};
    std::vector<stats::Accumulator> mc(times.size());
    ensemble::Realization last;
    for (int k = 0; k < 80; ++k) {
        RngStream rng(8, static_cast<std::uint64_t>(k + 3));
        auto r = ensemble::sample_phenomenological(spec, rng);
        acc.add_realization(a, r.eigvals, r.overlap);
        auto ts = dynamics::evolve_trace(a, pi, r.eigvals, r.overlap, times);
        for (std::size_t j = 0; j < times.size(); ++j) mc[j].add(ts.values[j]);
        if (k == 79) last = std::move(r);
    }
    auto fit = acc.finalize();
    auto pred = eth_variance_prediction(fit, pi, last.eigvals, last.overlap, times);
    // dephased regime: prediction and Monte Carlo agree within a factor 2
    for (std::size_t j = 1; j < times.size(); ++j) {
        CHECK(pred[j] > 0.5 * mc[j].sample_variance());
        CHECK(pred[j] < 2.0 * mc[j].sample_variance());
    }
    // at t=0 the overlap-correlation channel, which the ansatz leaves out,
    // dominates; the measured variance sits well above the prediction
    CHECK(mc[0].sample_variance() > 2.0 * pred[0]);
}

TEST_CASE("c_of_t: box profile gives the sinc transform") {
    const std::size_t nb = 4000; // per side
    const double wband = 2.0;
    auto fit = synthetic_profile(std::vector<double>(2 * nb, 1.0), wband);
    std::vector<double> times = {0.0, 0.5, 1.0, 2.0, 5.0};
    auto c = c_of_t(fit, 0.0, times);
    CHECK(c[0] == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t j = 1; j < times.size(); ++j) {
        const double x = wband * times[j];
        CHECK(c[j] == doctest::Approx(std::sin(x) / x).epsilon(1e-3));
    }
}

TEST_CASE("c_of_t: gaussian profile gives the gaussian transform") {
    const std::size_t nb = 6000;
    const double omega_max = 10.0, sigma = 1.3;
    std::vector<double> prof(2 * nb);
    for (std::size_t j = 0; j < prof.size(); ++j) {
        const double omega =
            -omega_max + (double(j) + 0.5) * (2.0 * omega_max / double(prof.size()));
        prof[j] = std::exp(-omega * omega / (2.0 * sigma * sigma));
    }
    auto fit = synthetic_profile(prof, omega_max);
    std::vector<double> times;
    for (int i = 0; i <= 20; ++i) times.push_back(0.1 * i);
    auto c = c_of_t(fit, 0.0, times);
    for (std::size_t j = 0; j < times.size(); ++j) {
        const double expect = std::exp(-sigma * sigma * times[j] * times[j] / 2.0);
        CHECK(std::abs(c[j] - expect) < 1e-6);
    }
}

TEST_CASE("c_of_t: measured band profile decays with a shrinking envelope") {
    auto hf = build_hf_picket_fence(1.0, 400, 0.0);
    const double w = 5.0, gamma = 3.5;
    RngStream rng_a(9, 1);
    auto a = Observable::banded_random(hf, w, 1.0, rng_a);
    FitOptions opt;
    opt.window = 15.0;
    opt.omega_max = 3.0 * w;
    EthAccumulator acc(opt, hf.min_level(), hf.max_level());
    for (int k = 0; k < 4; ++k) {
        RngStream rng(9, static_cast<std::uint64_t>(k + 2));
        auto h = build_microscopic(hf, coupling_for_mixing_width(gamma, 1.0), rng);
        auto es = eigh(h);
        acc.add_realization(a, es.eigenvalues, es.vectors);
    }
    auto fit = acc.finalize();
    std::vector<double> times;
    for (int i = 0; i <= 40; ++i) times.push_back(double(i) * 0.1);
    auto c = c_of_t(fit, 200.0, times);
    CHECK(c[0] == doctest::Approx(1.0).epsilon(1e-12));
    // decay on the 1/w scale: well below 1 by t ~ 2/w = 0.4
    CHECK(std::abs(c[4]) < 0.5);
    // the oscillation envelope shrinks into a small residual floor (the
    // binned profile leaves some spectral leakage at late times)
    auto window_max = [&](std::size_t lo, std::size_t hi) {
        double m = 0.0;
        for (std::size_t i = lo; i < hi; ++i) m = std::max(m, std::abs(c[i]));
        return m;
    };
    const double m1 = window_max(4, 16), m2 = window_max(16, 28), m3 = window_max(28, 41);
    CHECK(m2 <= m1 + 1e-12);
    CHECK(m3 <= m1 + 1e-12);
    CHECK(m3 < 0.15);
}

TEST_CASE("c_of_t: invalid row throws") {
    auto fit = synthetic_profile(std::vector<double>(8, 1.0), 2.0);
    CHECK_THROWS_AS(c_of_t(fit, 5.0, {0.0}), EmptyBin);
}

TEST_CASE("thermal_fluctuation_bound: identity, linear, banded") {
    auto hf = build_hf_picket_fence(1.0, 301, 0.0);
    auto h = SymmetricMatrix::diagonal(hf.levels);
    auto es = eigh(h);
    RngStream rng_s(10, 2);
    auto pi = dynamics::make_wavepacket(hf, 150.0, 9.0, rng_s);
    const double delta = 20.0;

    auto one = Observable::diagonal_smooth(hf, [](double) { return 1.0; });
    auto rep1 = thermal_fluctuation_bound(one, es.eigenvalues, es.vectors, pi, delta);
    CHECK(std::abs(rep1.difference) < 1e-18);

    auto lin = Observable::diagonal_smooth(hf, [](double e) { return e; });
    auto rep2 = thermal_fluctuation_bound(lin, es.eigenvalues, es.vectors, pi, delta);
    // 4-sigma truncated gaussian window variance is delta^2 to ~0.2%
    CHECK(rep2.difference == doctest::Approx(delta * delta).epsilon(0.01));
    CHECK(rep2.curve_slope == doctest::Approx(1.0).epsilon(1e-6));

    RngStream rng_a(10, 1);
    auto banded = Observable::banded_random(hf, 5.0, 1.0, rng_a);
    RngStream rng_h(10, 3);
    auto hmix = build_microscopic(hf, coupling_for_mixing_width(delta, 1.0), rng_h);
    auto esm = eigh(hmix);
    auto rep3 = thermal_fluctuation_bound(banded, esm.eigenvalues, esm.vectors, pi, delta);
    CHECK(std::isfinite(rep3.difference));
    CHECK(rep3.difference > 0.0);
    CHECK(std::isfinite(rep3.ratio));
}
