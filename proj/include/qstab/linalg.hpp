#ifndef QSTAB_LINALG_HPP
#define QSTAB_LINALG_HPP

#include "qstab/types.hpp"

namespace qstab::linalg {

struct Spectrum {
    Vector eigenvalues;    // with algebraic multiplicity, solver order
    Matrix eigenvectors;   // columns; generalized basis only when semisimple
    bool is_semisimple = true;
    bool distinct_eigenvalues = true;  // all multiplicity-1 groups
    bool distinct_real_parts = true;   // among distinct-eigenvalue groups
    bool distinct_imag_parts = true;
    double eigenvector_condition = 0.0;
};

/// Eigendecomposition of a small dense complex matrix (n <= 64). Throws on
/// solver non-convergence. Eigenvalues are grouped by relative gap 1e-7 for
/// the multiplicity and distinctness flags.
Spectrum eigen_decompose(const Matrix& m);

/// exp(m) by scaling and squaring of the Taylor series. Exact (up to exact
/// zero products) for nilpotent input of order 2.
Matrix mat_exp(const Matrix& m);

/// t^m = exp(ln(t) m) for t > 0. Throws on overflow, naming the exponent.
Matrix mat_pow_t(const Matrix& m, double t);

/// Spectral (operator) norm.
double op_norm(const Matrix& m);

/// Numerical rank with a relative singular-value floor.
int rank_svd(const Matrix& m, double rel_floor = 1e-8);

}  // namespace qstab::linalg

#endif
