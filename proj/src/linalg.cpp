#include "thermalab/linalg.hpp"

#include "thermalab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace thermalab {

namespace {

constexpr int kMaxSweepsPerEigenvalue = 50;

// Householder reduction of the symmetric matrix stored in z (row-major n*n)
// to tridiagonal form (d, e). With accumulate=true, z is overwritten with the
// accumulated orthogonal transform; otherwise only (d, e) are meaningful.
// The O(n^3) stages are parallel over independent rows/columns with a fixed
// summation order, so Serial and Parallel are bitwise identical.
void householder_tridiag(std::vector<double>& z, std::size_t n, std::vector<double>& d,
                         std::vector<double>& e, bool accumulate, bool par) {
    auto at = [&](std::size_t i, std::size_t j) -> double& { return z[i * n + j]; };

    for (std::size_t i = n - 1; i >= 1; --i) {
        const std::size_t l = i - 1;
        double h = 0.0;
        if (l > 0) {
            double scale = 0.0;
            for (std::size_t k = 0; k <= l; ++k) scale += std::abs(at(i, k));
            if (scale == 0.0) {
                e[i] = at(i, l);
            } else {
                for (std::size_t k = 0; k <= l; ++k) {
                    at(i, k) /= scale;
                    h += at(i, k) * at(i, k);
                }
                double f = at(i, l);
                double g = (f >= 0.0) ? -std::sqrt(h) : std::sqrt(h);
                e[i] = scale * g;
                h -= f * g;
                at(i, l) = f - g;

                // e[j] <- (A u)_j / h ; column i stores u/h for accumulation.
#pragma omp parallel for schedule(static) if (par && l > 384)
                for (std::ptrdiff_t js = 0; js <= static_cast<std::ptrdiff_t>(l); ++js) {
                    const auto j = static_cast<std::size_t>(js);
                    if (accumulate) at(j, i) = at(i, j) / h;
                    double gj = 0.0;
                    for (std::size_t k = 0; k <= j; ++k) gj += at(j, k) * at(i, k);
                    for (std::size_t k = j + 1; k <= l; ++k) gj += at(k, j) * at(i, k);
                    e[j] = gj / h;
                }
                f = 0.0;
                for (std::size_t j = 0; j <= l; ++j) f += e[j] * at(i, j);
                const double hh = f / (h + h);
                for (std::size_t j = 0; j <= l; ++j) e[j] -= hh * at(i, j);

                // Rank-2 update of the reduced block.
#pragma omp parallel for schedule(static) if (par && l > 384)
                for (std::ptrdiff_t js = 0; js <= static_cast<std::ptrdiff_t>(l); ++js) {
                    const auto j = static_cast<std::size_t>(js);
                    const double fj = at(i, j);
                    const double gj = e[j];
                    for (std::size_t k = 0; k <= j; ++k)
                        at(j, k) -= fj * e[k] + gj * at(i, k);
                }
            }
        } else {
            e[i] = at(i, l);
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;

    if (!accumulate) {
        for (std::size_t i = 0; i < n; ++i) d[i] = at(i, i);
        return;
    }

    // Back-accumulate the Householder transforms into z.
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0 && d[i] != 0.0) {
            const std::size_t l = i - 1;
#pragma omp parallel for schedule(static) if (par && l > 384)
            for (std::ptrdiff_t js = 0; js <= static_cast<std::ptrdiff_t>(l); ++js) {
                const auto j = static_cast<std::size_t>(js);
                double g = 0.0;
                for (std::size_t k = 0; k <= l; ++k) g += at(i, k) * at(k, j);
                for (std::size_t k = 0; k <= l; ++k) at(k, j) -= g * at(k, i);
            }
        }
        d[i] = at(i, i);
        at(i, i) = 1.0;
        if (i > 0) {
            for (std::size_t j = 0; j < i; ++j) {
                at(j, i) = 0.0;
                at(i, j) = 0.0;
            }
        }
    }
}

// Implicit-shift QL on the tridiagonal (d, e); rotations are accumulated into
// z when accumulate=true. An off-diagonal element counts as zero when
// |e| <= machine epsilon * (|d_i| + |d_{i+1}|).
//
// The rotation angles depend only on (d, e), so each sweep first records its
// rotation sequence and then applies it to z in one row-parallel pass: one
// OpenMP region per sweep and contiguous row access instead of a column
// stride per rotation.
void ql_implicit(std::vector<double>& d, std::vector<double>& e, std::vector<double>& z,
                 std::size_t n, bool accumulate, bool par) {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;

    std::vector<double> rot_s, rot_c;

    for (std::size_t l = 0; l < n; ++l) {
        int iter = 0;
        std::size_t m;
        do {
            for (m = l; m + 1 < n; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd) break;
            }
            if (m != l) {
                if (iter++ == kMaxSweepsPerEigenvalue)
                    throw NonConvergence("eigh: QL sweep cap exceeded");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                bool underflow = false;
                rot_s.clear();
                rot_c.clear();
                for (std::ptrdiff_t is = static_cast<std::ptrdiff_t>(m) - 1;
                     is >= static_cast<std::ptrdiff_t>(l); --is) {
                    const auto i = static_cast<std::size_t>(is);
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    if (accumulate) {
                        rot_s.push_back(s);
                        rot_c.push_back(c);
                    }
                }
                if (accumulate && !rot_s.empty()) {
                    // Rotation q acts on columns (i, i+1) with i = m-1-q.
                    const std::size_t nrot = rot_s.size();
                    double* zp = z.data();
#pragma omp parallel for schedule(static) if (par && n > 128)
                    for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(n); ++k) {
                        double* row = zp + k * n;
                        for (std::size_t q = 0; q < nrot; ++q) {
                            const std::size_t i = m - 1 - q;
                            const double sq = rot_s[q], cq = rot_c[q];
                            const double fk = row[i + 1];
                            row[i + 1] = sq * row[i] + cq * fk;
                            row[i] = cq * row[i] - sq * fk;
                        }
                    }
                }
                if (underflow) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

void fix_column_signs(Matrix& v) {
    const std::size_t n = v.rows();
    for (std::size_t col = 0; col < v.cols(); ++col) {
        double maxabs = 0.0;
        for (std::size_t k = 0; k < n; ++k) maxabs = std::max(maxabs, std::abs(v(k, col)));
        const double tol = 1e-12 * maxabs;
        for (std::size_t k = 0; k < n; ++k) {
            if (std::abs(v(k, col)) > tol) {
                if (v(k, col) < 0.0)
                    for (std::size_t r = 0; r < n; ++r) v(r, col) = -v(r, col);
                break;
            }
        }
    }
}

} // namespace

EigenSystem eigh(const SymmetricMatrix& h, kernels::Exec exec) {
    const std::size_t n = h.dim();
    if (n == 0) throw DimensionMismatch("eigh: empty matrix");
    const bool par = exec == kernels::Exec::Parallel;

    EigenSystem es;
    es.eigenvalues.assign(n, 0.0);
    if (n == 1) {
        es.eigenvalues[0] = h(0, 0);
        es.vectors = Matrix::identity(1);
        return es;
    }

    std::vector<double> z(h.data(), h.data() + n * n);
    std::vector<double> d(n, 0.0), e(n, 0.0);
    householder_tridiag(z, n, d, e, /*accumulate=*/true, par);
    ql_implicit(d, e, z, n, /*accumulate=*/true, par);

    // Sort ascending, permuting eigenvector columns along.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });

    es.vectors = Matrix(n, n);
    for (std::size_t col = 0; col < n; ++col) {
        es.eigenvalues[col] = d[order[col]];
        for (std::size_t k = 0; k < n; ++k) es.vectors(k, col) = z[k * n + order[col]];
    }
    fix_column_signs(es.vectors);
    return es;
}

std::vector<double> eigenvalues_only(const SymmetricMatrix& h, kernels::Exec exec) {
    const std::size_t n = h.dim();
    if (n == 0) throw DimensionMismatch("eigenvalues_only: empty matrix");
    if (n == 1) return {h(0, 0)};
    const bool par = exec == kernels::Exec::Parallel;

    std::vector<double> z(h.data(), h.data() + n * n);
    std::vector<double> d(n, 0.0), e(n, 0.0);
    householder_tridiag(z, n, d, e, /*accumulate=*/false, par);
    ql_implicit(d, e, z, n, /*accumulate=*/false, par);
    std::sort(d.begin(), d.end());
    return d;
}

SymmetricMatrix reconstruct(const EigenSystem& es) {
    const std::size_t n = es.dim();
    SymmetricMatrix h(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            double s = 0.0;
            for (std::size_t a = 0; a < n; ++a)
                s += es.vectors(i, a) * es.eigenvalues[a] * es.vectors(j, a);
            h.set(i, j, s);
        }
    }
    return h;
}

SymmetricMatrix sample_goe(RngStream& rng, std::size_t dim, double scale) {
    if (dim == 0) throw DimensionMismatch("sample_goe: dim must be >= 1");
    SymmetricMatrix m(dim);
    const double diag_sd = std::sqrt(2.0) * scale;
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = i; j < dim; ++j)
            m.set(i, j, (i == j) ? rng.gaussian(0.0, diag_sd) : rng.gaussian(0.0, scale));
    return m;
}

} // namespace thermalab
