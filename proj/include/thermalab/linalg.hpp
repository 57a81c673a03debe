#pragma once

#include "thermalab/kernels.hpp"
#include "thermalab/matrix.hpp"
#include "thermalab/rng.hpp"

#include <vector>

namespace thermalab {

/// Full spectral decomposition of a dense real symmetric matrix.
///
/// Householder tridiagonalization followed by implicit-shift QL with
/// eigenvector accumulation. Eigenvalues come back ascending; each
/// eigenvector column is normalized with its first nonzero component
/// positive, so the output is deterministic for a fixed input.
///
/// Throws NonConvergence if any eigenvalue needs more than 50 QL sweeps.
EigenSystem eigh(const SymmetricMatrix& h, kernels::Exec exec = kernels::Exec::Parallel);

/// Eigenvalues only (ascending); skips all vector bookkeeping, which is
/// several times faster and the common case for spectral statistics.
std::vector<double> eigenvalues_only(const SymmetricMatrix& h,
                                     kernels::Exec exec = kernels::Exec::Parallel);

/// O diag(E) O^T, for testing the decomposition round trip.
SymmetricMatrix reconstruct(const EigenSystem& es);

/// GOE draw: off-diagonal entries N(0, scale^2), diagonal N(0, 2 scale^2).
/// Entries are drawn row by row, upper triangle, so the stream consumption
/// order is part of the contract.
SymmetricMatrix sample_goe(RngStream& rng, std::size_t dim, double scale);

} // namespace thermalab
