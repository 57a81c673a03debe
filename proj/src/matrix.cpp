#include "thermalab/matrix.hpp"

#include <cmath>

namespace thermalab {

SymmetricMatrix SymmetricMatrix::diagonal(const std::vector<double>& d) {
    SymmetricMatrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m.set(i, i, d[i]);
    return m;
}

double SymmetricMatrix::max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

Matrix SymmetricMatrix::to_dense() const {
    Matrix m(dim_, dim_);
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j) m(i, j) = (*this)(i, j);
    return m;
}

} // namespace thermalab
