#pragma once

// Independent eigensolver oracle for tests: classical cyclic Jacobi
// rotations. Deliberately shares no code with the library's Householder/QL
// path so the two can check each other.

#include "thermalab/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace oracle {

struct JacobiResult {
    std::vector<double> eigenvalues; // ascending
    thermalab::Matrix vectors;       // column a belongs to eigenvalues[a]
};

inline JacobiResult jacobi_eigh(const thermalab::SymmetricMatrix& h) {
    const std::size_t n = h.dim();
    std::vector<double> a(h.data(), h.data() + n * n);
    auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };
    thermalab::Matrix v = thermalab::Matrix::identity(n);

    auto offdiag_norm = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) s += at(i, j) * at(i, j);
        return std::sqrt(s);
    };

    const double tol = 1e-15 * std::max(1.0, std::sqrt(std::inner_product(a.begin(), a.end(), a.begin(), 0.0)));
    for (int sweep = 0; sweep < 100 && offdiag_norm() > tol; ++sweep) {
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = at(p, q);
                if (apq == 0.0) continue;
                const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0)
                                     ? 1.0 / (theta + std::sqrt(theta * theta + 1.0))
                                     : 1.0 / (theta - std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = at(k, p), akq = at(k, q);
                    at(k, p) = c * akp - s * akq;
                    at(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = at(p, k), aqk = at(q, k);
                    at(p, k) = c * apk - s * aqk;
                    at(q, k) = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }
    if (offdiag_norm() > 1e-8) throw std::runtime_error("jacobi oracle did not converge");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return at(x, x) < at(y, y); });

    JacobiResult r;
    r.eigenvalues.resize(n);
    r.vectors = thermalab::Matrix(n, n);
    for (std::size_t col = 0; col < n; ++col) {
        r.eigenvalues[col] = at(order[col], order[col]);
        for (std::size_t k = 0; k < n; ++k) r.vectors(k, col) = v(k, order[col]);
    }
    return r;
}

} // namespace oracle
