#include "thermalab/kernels.hpp"

#include "thermalab/errors.hpp"

#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace thermalab::kernels {

namespace {
inline bool go_parallel(Exec exec, std::size_t work) {
    return exec == Exec::Parallel && work >= 64;
}
} // namespace

namespace {
Matrix transpose(const Matrix& a) {
    Matrix t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    return t;
}
} // namespace

Matrix matmul_at_b(const Matrix& a, const Matrix& b, Exec exec) {
    if (a.rows() != b.rows()) throw DimensionMismatch("matmul_at_b: row counts differ");
    // Same accumulation order as the direct loop, but cache-friendly.
    return matmul(transpose(a), b, exec);
}

Matrix matmul(const Matrix& a, const Matrix& b, Exec exec) {
    if (a.cols() != b.rows()) throw DimensionMismatch("matmul: inner dimensions differ");
    const std::size_t m = a.rows(), p = a.cols(), q = b.cols();
    Matrix c(m, q);
    const bool par = go_parallel(exec, m * q);
#pragma omp parallel for schedule(static) if (par)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(m); ++i) {
        double* ci = c.row(i);
        const double* ai = a.row(i);
        for (std::size_t k = 0; k < p; ++k) {
            const double aik = ai[k];
            if (aik == 0.0) continue;
            const double* bk = b.row(k);
            for (std::size_t j = 0; j < q; ++j) ci[j] += aik * bk[j];
        }
    }
    return c;
}

std::vector<double> matvec_at(const Matrix& a, const std::vector<double>& x, Exec exec) {
    if (a.rows() != x.size()) throw DimensionMismatch("matvec_at: size mismatch");
    const std::size_t m = a.rows(), p = a.cols();
    std::vector<double> y(p, 0.0);
    const bool par = go_parallel(exec, m * p);
#pragma omp parallel for schedule(static) if (par)
    for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(p); ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < m; ++k) s += a(k, j) * x[k];
        y[j] = s;
    }
    return y;
}

std::vector<double> matvec(const Matrix& a, const std::vector<double>& x, Exec exec) {
    if (a.cols() != x.size()) throw DimensionMismatch("matvec: size mismatch");
    const std::size_t m = a.rows(), p = a.cols();
    std::vector<double> y(m, 0.0);
    const bool par = go_parallel(exec, m * p);
#pragma omp parallel for schedule(static) if (par)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(m); ++i) {
        const double* ai = a.row(i);
        double s = 0.0;
        for (std::size_t k = 0; k < p; ++k) s += ai[k] * x[k];
        y[i] = s;
    }
    return y;
}

Matrix rotate_congruence(const Matrix& o, const SymmetricMatrix& m, Exec exec) {
    if (o.rows() != m.dim()) throw DimensionMismatch("rotate_congruence: size mismatch");
    const std::size_t n = m.dim(), p = o.cols();
    // T = M * O, then O^T * T.
    Matrix t(n, p);
    const bool par = go_parallel(exec, n * p);
#pragma omp parallel for schedule(static) if (par)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
        double* ti = t.row(i);
        const double* mi = m.row(i);
        for (std::size_t k = 0; k < n; ++k) {
            const double mik = mi[k];
            if (mik == 0.0) continue;
            const double* ok = o.row(k);
            for (std::size_t j = 0; j < p; ++j) ti[j] += mik * ok[j];
        }
    }
    return matmul_at_b(o, t, exec);
}

namespace {

// sum_{ab} M(a,b) cos((E_a - E_b) t) via the angle-difference identity:
// u^T M u + v^T M v with u_a = cos(E_a t), v_a = sin(E_a t). Two O(n^2)
// mat-vecs per time instead of a cos() per pair.
double dephasing_sum(const Matrix& m, const std::vector<double>& evals, double t, bool par) {
    const std::size_t n = evals.size();
    std::vector<double> u(n), v(n), rowterm(n);
    for (std::size_t a = 0; a < n; ++a) {
        u[a] = std::cos(evals[a] * t);
        v[a] = std::sin(evals[a] * t);
    }
#pragma omp parallel for schedule(static) if (par && n > 64)
    for (std::ptrdiff_t a = 0; a < static_cast<std::ptrdiff_t>(n); ++a) {
        const double* row = m.row(a);
        double su = 0.0, sv = 0.0;
        for (std::size_t b = 0; b < n; ++b) {
            su += row[b] * u[b];
            sv += row[b] * v[b];
        }
        rowterm[a] = u[a] * su + v[a] * sv;
    }
    double total = 0.0;
    for (std::size_t a = 0; a < n; ++a) total += rowterm[a];
    return total;
}

} // namespace

std::vector<double> trace_cos_series(const Matrix& a_sym, const Matrix& b_sym,
                                     const std::vector<double>& evals,
                                     const std::vector<double>& times, Exec exec) {
    const std::size_t n = evals.size();
    if (a_sym.rows() != n || a_sym.cols() != n || b_sym.rows() != n || b_sym.cols() != n)
        throw DimensionMismatch("trace_cos_series: size mismatch");
    Matrix m(n, n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) m(a, b) = a_sym(a, b) * b_sym(a, b);
    return cos_weighted_series(m, evals, times, exec);
}

std::vector<double> cos_weighted_series(const Matrix& m_sym, const std::vector<double>& evals,
                                        const std::vector<double>& times, Exec exec) {
    if (m_sym.rows() != evals.size() || m_sym.cols() != evals.size())
        throw DimensionMismatch("cos_weighted_series: size mismatch");
    std::vector<double> out(times.size(), 0.0);
    const bool par = exec == Exec::Parallel;
    for (std::size_t j = 0; j < times.size(); ++j)
        out[j] = dephasing_sum(m_sym, evals, times[j], par);
    return out;
}

double trace_cos_single(const Matrix& a_sym, const Matrix& b_sym,
                        const std::vector<double>& evals, double t) {
    const std::size_t n = evals.size();
    Matrix m(n, n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) m(a, b) = a_sym(a, b) * b_sym(a, b);
    return dephasing_sum(m, evals, t, false);
}

} // namespace thermalab::kernels
