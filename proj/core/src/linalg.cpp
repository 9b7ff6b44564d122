#include "stp/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace stp::linalg {

namespace {

constexpr double kSymmetryTol = 1e-10;

} // namespace

void apply_sign_convention(Matrix& vectors) {
    for (Eigen::Index j = 0; j < vectors.cols(); ++j) {
        Eigen::Index arg_max = 0;
        double best = -1.0;
        for (Eigen::Index i = 0; i < vectors.rows(); ++i) {
            const double mag = std::abs(vectors(i, j));
            if (mag > best) {
                best = mag;
                arg_max = i;
            }
        }
        if (vectors(arg_max, j) < 0.0) {
            vectors.col(j) = -vectors.col(j);
        }
    }
}

EigResult eig_symmetric(const Matrix& c) {
    if (c.rows() != c.cols()) {
        std::ostringstream os;
        os << "eig_symmetric requires a square matrix, got " << c.rows() << "x" << c.cols();
        throw std::invalid_argument(os.str());
    }
    const double scale = std::max(1.0, c.cwiseAbs().maxCoeff());
    const double asym = (c - c.transpose()).cwiseAbs().maxCoeff();
    if (asym > kSymmetryTol * scale) {
        std::ostringstream os;
        os << "matrix is not symmetric: max|C - C^T| = " << asym
           << " exceeds " << kSymmetryTol << " * " << scale;
        throw std::invalid_argument(os.str());
    }

    Eigen::SelfAdjointEigenSolver<Matrix> solver(c);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("symmetric eigendecomposition failed to converge");
    }

    // Solver returns ascending order; re-sort descending, keeping the
    // solver's relative order for equal eigenvalues.
    const Eigen::Index k = c.rows();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(k));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        return solver.eigenvalues()(a) > solver.eigenvalues()(b);
    });

    EigResult result;
    result.eigenvalues.resize(k);
    result.eigenvectors.resize(k, k);
    for (Eigen::Index j = 0; j < k; ++j) {
        result.eigenvalues(j) = solver.eigenvalues()(order[static_cast<std::size_t>(j)]);
        result.eigenvectors.col(j) = solver.eigenvectors().col(order[static_cast<std::size_t>(j)]);
    }
    apply_sign_convention(result.eigenvectors);
    return result;
}

SvdResult svd_oracle(const Matrix& q) {
    Eigen::BDCSVD<Matrix> svd(q, Eigen::ComputeThinU);
    if (svd.info() != Eigen::Success) {
        throw std::runtime_error("SVD failed to converge");
    }
    SvdResult result{svd.singularValues(), svd.matrixU()};
    apply_sign_convention(result.left_vectors);
    return result;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) {
        std::ostringstream os;
        os << "matmul shape mismatch: " << a.rows() << "x" << a.cols()
           << " * " << b.rows() << "x" << b.cols();
        throw std::invalid_argument(os.str());
    }
    return a * b;
}

} // namespace stp::linalg
