#pragma once

#include "thermalab/matrix.hpp"

#include <cstddef>
#include <vector>

namespace thermalab::kernels {

/// Execution policy for the data-parallel kernels. Serial is the reference
/// implementation; Parallel uses OpenMP. Both orders every floating-point
/// reduction identically, so results are bitwise equal and output bytes do
/// not depend on the thread count.
enum class Exec { Serial, Parallel };

/// C = A^T * B.  A is (m x p), B is (m x q), C is (p x q).
Matrix matmul_at_b(const Matrix& a, const Matrix& b, Exec exec = Exec::Parallel);

/// C = A * B.
Matrix matmul(const Matrix& a, const Matrix& b, Exec exec = Exec::Parallel);

/// y = A^T x  (A is m x p, x has length m).
std::vector<double> matvec_at(const Matrix& a, const std::vector<double>& x,
                              Exec exec = Exec::Parallel);

/// y = A x.
std::vector<double> matvec(const Matrix& a, const std::vector<double>& x,
                           Exec exec = Exec::Parallel);

/// Congruence transform O^T M O for symmetric M; the workhorse behind every
/// change of basis. Returns a full (n_cols x n_cols) symmetric dense result.
Matrix rotate_congruence(const Matrix& o, const SymmetricMatrix& m, Exec exec = Exec::Parallel);

/// values[j] = sum_{ab} A(a,b) * B(a,b) * cos((E_a - E_b) * t_j) for symmetric
/// dense A, B given in the same basis as the eigenvalues. O(n^2) per time.
std::vector<double> trace_cos_series(const Matrix& a_sym, const Matrix& b_sym,
                                     const std::vector<double>& evals,
                                     const std::vector<double>& times,
                                     Exec exec = Exec::Parallel);

/// Same contraction at a single time.
double trace_cos_single(const Matrix& a_sym, const Matrix& b_sym,
                        const std::vector<double>& evals, double t);

/// values[j] = sum_{ab} M(a,b) cos((E_a - E_b) t_j) for one symmetric weight
/// matrix (the two-operator form above with the Hadamard product prebuilt).
std::vector<double> cos_weighted_series(const Matrix& m_sym, const std::vector<double>& evals,
                                        const std::vector<double>& times,
                                        Exec exec = Exec::Parallel);

} // namespace thermalab::kernels
