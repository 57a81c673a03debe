#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "thermalab/ensemble.hpp"
#include "thermalab/errors.hpp"
#include "thermalab/linalg.hpp"
#include "thermalab/spectral.hpp"
#include "thermalab/stats.hpp"

#include <cmath>

using namespace thermalab;
using namespace thermalab::spectral;

TEST_CASE("spacing_distribution: uniform grid lands in the unit-spacing bin") {
    std::vector<double> grid(200);
    for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = double(i);
    auto h = spacing_distribution(grid, 20);
    CHECK(h.total == 199);
    std::size_t nonzero = 0, hot = 0;
    for (std::size_t i = 0; i < h.counts.size(); ++i) {
        if (h.counts[i]) {
            ++nonzero;
            hot = i;
        }
    }
    CHECK(nonzero == 1);
    CHECK(h.bin_edges[hot] <= 1.0);
    CHECK(1.0 <= h.bin_edges[hot + 1]);
}

TEST_CASE("spacing_distribution: Poisson spacings peak at zero") {
    RngStream rng(77, 0);
    std::vector<double> levels;
    double x = 0.0;
    for (int i = 0; i < 5000; ++i) {
        levels.push_back(x);
        x += -std::log(1.0 - rng.uniform());
    }
    auto h = spacing_distribution(levels, 30);
    double best = 0.0;
    std::size_t best_i = 0;
    for (std::size_t i = 0; i < h.counts.size(); ++i)
        if (h.density(i) > best) {
            best = h.density(i);
            best_i = i;
        }
    CHECK(best_i == 0);
}

TEST_CASE("spacing_distribution: too few levels") {
    std::vector<double> tiny(10, 0.0);
    for (std::size_t i = 0; i < tiny.size(); ++i) tiny[i] = double(i);
    CHECK_THROWS_AS(spacing_distribution(tiny, 10), TooFewLevels);
}

TEST_CASE("ks_distance: self-test against samples of the reference") {
    // Invert the Wigner CDF: s = sqrt(-4 ln(1-u) / pi)
    RngStream rng(5, 0);
    std::vector<double> levels(100001);
    double x = 0.0;
    for (std::size_t i = 0; i < levels.size(); ++i) {
        levels[i] = x;
        const double u = rng.uniform();
        x += std::sqrt(-4.0 * std::log(1.0 - u) / M_PI);
    }
    auto h = spacing_distribution(levels, 40);
    CHECK(ks_distance(h, ReferenceDist::Wigner) < 0.01);

    // Invariance under global rescaling (unit-mean normalization inside).
    for (double& lv : levels) lv *= 7.3;
    auto h2 = spacing_distribution(levels, 40);
    CHECK(ks_distance(h2, ReferenceDist::Wigner) ==
          doctest::Approx(ks_distance(h, ReferenceDist::Wigner)).epsilon(1e-12));
}

TEST_CASE("ks_distance: uniform spacings are far from Wigner") {
    std::vector<double> grid(400);
    for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = double(i);
    auto h = spacing_distribution(grid, 20);
    // step CDF at s=1 vs 1 - exp(-pi/4) = 0.544
    CHECK(ks_distance(h, ReferenceDist::Wigner) > 0.3);
}

TEST_CASE("ks_distance: GOE spacings are far from Poisson") {
    RngStream rng(6, 0);
    auto goe = sample_goe(rng, 400, 1.0);
    auto ev = eigenvalues_only(goe);
    auto unfolded = ensemble::unfold(ev, 7);
    std::vector<double> central(unfolded.begin() + 100, unfolded.end() - 100);
    auto h = spacing_distribution(central, 20);
    CHECK(ks_distance(h, ReferenceDist::Poisson) > 0.2);
}

TEST_CASE("GOE ensemble passes the Wigner surmise test") {
    std::vector<double> pooled;
    for (int k = 0; k < 10; ++k) {
        RngStream rng(42, static_cast<std::uint64_t>(k));
        auto goe = sample_goe(rng, 400, 1.0);
        auto unfolded = ensemble::unfold(eigenvalues_only(goe), 7);
        // central half only; edges violate constant density
        for (std::size_t i = 101; i < 300; ++i)
            pooled.push_back(unfolded[i] - unfolded[i - 1]);
    }
    const double m = stats::mean(pooled);
    for (double& s : pooled) s /= m;
    const double ks = stats::ks_statistic(pooled, wigner_cdf);
    CHECK(ks < 0.05);
}
