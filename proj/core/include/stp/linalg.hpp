#pragma once

#include "stp/types.hpp"

namespace stp::linalg {

/// Eigendecomposition of a symmetric matrix: eigenvalues sorted descending,
/// eigenvector columns orthonormal and paired with the eigenvalue of the
/// same index.
struct EigResult {
    Vector eigenvalues;
    Matrix eigenvectors;
};

struct SvdResult {
    Vector singular_values;
    Matrix left_vectors;
};

/// Flips each column so its entry of largest magnitude is positive, ties
/// broken by lowest index. Eigenvectors and singular vectors are only
/// defined up to sign; this pins them down for reproducible outputs.
void apply_sign_convention(Matrix& vectors);

/// Symmetric eigendecomposition. Input must be square and symmetric to a
/// relative tolerance of 1e-10. Equal eigenvalues keep the solver's
/// relative order after the descending sort.
EigResult eig_symmetric(const Matrix& c);

/// Thin SVD returning singular values (descending) and left singular
/// vectors. Serves as an independent cross-check of the correlation-matrix
/// eigenvalue path; not used by the fitting pipeline itself.
SvdResult svd_oracle(const Matrix& q);

/// Matrix product with explicit shape checking.
Matrix matmul(const Matrix& a, const Matrix& b);

} // namespace stp::linalg
