#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "thermalab/kernels.hpp"
#include "thermalab/linalg.hpp"
#include "thermalab/rng.hpp"

#include <cmath>

using namespace thermalab;
using kernels::Exec;

namespace {

Matrix random_matrix(std::uint64_t seed, std::size_t r, std::size_t c) {
    RngStream rng(seed, 0);
    Matrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = rng.gaussian();
    return m;
}

} // namespace

TEST_CASE("matmul against hand-rolled triple loop") {
    auto a = random_matrix(1, 7, 5);
    auto b = random_matrix(2, 5, 9);
    auto c = kernels::matmul(a, b, Exec::Serial);
    for (std::size_t i = 0; i < 7; ++i)
        for (std::size_t j = 0; j < 9; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < 5; ++k) s += a(i, k) * b(k, j);
            CHECK(c(i, j) == doctest::Approx(s).epsilon(1e-13));
        }
}

TEST_CASE("serial and parallel kernels are bitwise identical") {
    auto a = random_matrix(3, 130, 120);
    auto b = random_matrix(4, 130, 110);
    CHECK(kernels::matmul_at_b(a, b, Exec::Serial) == kernels::matmul_at_b(a, b, Exec::Parallel));

    auto sq = random_matrix(5, 120, 120);
    auto m = [&] {
        SymmetricMatrix s(130);
        RngStream rng(6, 0);
        for (std::size_t i = 0; i < 130; ++i)
            for (std::size_t j = i; j < 130; ++j) s.set(i, j, rng.gaussian());
        return s;
    }();
    auto o = random_matrix(7, 130, 130);
    CHECK(kernels::rotate_congruence(o, m, Exec::Serial) ==
          kernels::rotate_congruence(o, m, Exec::Parallel));

    std::vector<double> x(130);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::sin(double(i));
    CHECK(kernels::matvec_at(o, x, Exec::Serial) == kernels::matvec_at(o, x, Exec::Parallel));
    CHECK(kernels::matvec(o, x, Exec::Serial) == kernels::matvec(o, x, Exec::Parallel));
    (void)sq;
}

TEST_CASE("rotate_congruence with the eigenvector matrix diagonalizes H") {
    RngStream rng(21, 0);
    auto h = sample_goe(rng, 40, 1.0);
    auto es = eigh(h);
    auto d = kernels::rotate_congruence(es.vectors, h);
    for (std::size_t a = 0; a < 40; ++a)
        for (std::size_t b = 0; b < 40; ++b) {
            const double expect = (a == b) ? es.eigenvalues[a] : 0.0;
            CHECK(std::abs(d(a, b) - expect) < 1e-9);
        }
}

TEST_CASE("trace_cos_series: identity pair stays at the static trace") {
    const std::size_t n = 25;
    Matrix a = Matrix::identity(n);
    Matrix b(n, n);
    RngStream rng(31, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            const double v = rng.gaussian();
            b(i, j) = v;
            b(j, i) = v;
        }
    std::vector<double> evals(n);
    for (std::size_t i = 0; i < n; ++i) evals[i] = 0.1 * double(i);
    std::vector<double> times = {0.0, 0.3, 1.7, 9.0};
    auto s = kernels::trace_cos_series(a, b, evals, times);
    double tr = 0.0;
    for (std::size_t i = 0; i < n; ++i) tr += b(i, i);
    for (double v : s) CHECK(v == doctest::Approx(tr).epsilon(1e-12));
}

TEST_CASE("trace_cos_series serial/parallel bitwise equality") {
    const std::size_t n = 80;
    RngStream rng(33, 0);
    Matrix a(n, n), b(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            double v = rng.gaussian();
            a(i, j) = a(j, i) = v;
            v = rng.gaussian();
            b(i, j) = b(j, i) = v;
        }
    std::vector<double> evals(n), times(64);
    for (std::size_t i = 0; i < n; ++i) evals[i] = rng.gaussian();
    for (std::size_t i = 0; i < times.size(); ++i) times[i] = 0.05 * double(i);
    CHECK(kernels::trace_cos_series(a, b, evals, times, Exec::Serial) ==
          kernels::trace_cos_series(a, b, evals, times, Exec::Parallel));
}
