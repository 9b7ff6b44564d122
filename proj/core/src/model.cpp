#include "stp/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace stp {

namespace {

[[noreturn]] void fail(const std::string& msg) {
    throw std::invalid_argument(msg);
}

void require_centered(const Ensemble& ensemble, const char* op) {
    validate_ensemble(ensemble);
    if (!ensemble.centered) {
        fail(std::string(op) + " requires a centered ensemble; subtract the mean first");
    }
}

// Scales each stacked row block by its per-snapshot weight: rows i*p+d get
// weights.values(d).
Matrix apply_weights(const Matrix& q, const WeightVector& weights) {
    const auto dof = static_cast<Eigen::Index>(weights.dof());
    if (q.rows() % dof != 0) {
        std::ostringstream os;
        os << "matrix with " << q.rows() << " rows is not a stack of snapshots with p = " << dof;
        fail(os.str());
    }
    Matrix out = q;
    const Eigen::Index steps = q.rows() / dof;
    for (Eigen::Index i = 0; i < steps; ++i) {
        out.middleRows(i * dof, dof).array().colwise() *= weights.values.array();
    }
    return out;
}

Vector mode_scaling(const linalg::EigResult& eig, std::size_t k, const char* op) {
    Vector scale(eig.eigenvalues.size());
    for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
        const double lambda = eig.eigenvalues(i);
        if (!(lambda > 0.0)) {
            std::ostringstream os;
            os << op << ": retained eigenvalue " << i << " is not positive (" << lambda
               << "); truncate below the numerical rank first";
            fail(os.str());
        }
        scale(i) = 1.0 / std::sqrt(lambda);
    }
    return scale / std::sqrt(static_cast<double>(k));
}

} // namespace

void STPModel::validate() const {
    horizon.validate();
    weights.validate();
    if (weights.dof() != horizon.dof) fail("model weights do not match horizon dof");
    if (rank < 1 || rank > k_train) fail("model rank must satisfy 1 <= r <= k_train");
    if (eigenvalues.size() != static_cast<Eigen::Index>(rank)) fail("model eigenvalue count does not match rank");
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
        if (!(eigenvalues(i) >= 0.0)) fail("model eigenvalues must be nonnegative");
        if (i > 0 && eigenvalues(i) > eigenvalues(i - 1)) fail("model eigenvalues must be descending");
    }
    if (modes.rows() != static_cast<Eigen::Index>(horizon.episode_size()) ||
        modes.cols() != static_cast<Eigen::Index>(rank)) {
        fail("model mode matrix shape does not match horizon and rank");
    }
    if (mean) {
        const auto expected = mean->kind == MeanKind::ensemble_mean ? horizon.episode_size() : horizon.dof;
        if (mean->values.size() != static_cast<Eigen::Index>(expected)) {
            fail("model mean length does not match horizon");
        }
    }

    // W-orthonormality of the hindcast block.
    const Matrix phi = hindcast_modes();
    const Matrix gram = apply_weights(phi, weights).transpose() * phi;
    const double err = (gram - Matrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
    if (err > 1e-10) {
        std::ostringstream os;
        os << "hindcast modes are not W-orthonormal: max deviation " << err;
        fail(os.str());
    }
}

Matrix build_hindcast_matrix(const Ensemble& ensemble) {
    require_centered(ensemble, "build_hindcast_matrix");
    const auto rows = static_cast<Eigen::Index>(ensemble.horizon.hindcast_size());
    Matrix q(rows, static_cast<Eigen::Index>(ensemble.size()));
    for (std::size_t j = 0; j < ensemble.size(); ++j) {
        q.col(static_cast<Eigen::Index>(j)) =
            Eigen::Map<const Vector>(ensemble.episodes[j].values.data(), rows);
    }
    return q;
}

Matrix build_prediction_matrix(const Ensemble& ensemble) {
    require_centered(ensemble, "build_prediction_matrix");
    const auto rows = static_cast<Eigen::Index>(ensemble.horizon.episode_size());
    Matrix q(rows, static_cast<Eigen::Index>(ensemble.size()));
    for (std::size_t j = 0; j < ensemble.size(); ++j) {
        q.col(static_cast<Eigen::Index>(j)) =
            Eigen::Map<const Vector>(ensemble.episodes[j].values.data(), rows);
    }
    return q;
}

Matrix hindcast_correlation(const Matrix& q_minus, const WeightVector& weights) {
    weights.validate();
    if (q_minus.rows() % static_cast<Eigen::Index>(weights.dof()) != 0) {
        std::ostringstream os;
        os << "matrix with " << q_minus.rows() << " rows is not a stack of snapshots with p = "
           << weights.dof();
        fail(os.str());
    }
    const double k = static_cast<double>(q_minus.cols());
    Matrix c;
    if (weights.is_uniform()) {
        c.noalias() = q_minus.transpose() * q_minus / k;
    } else {
        c.noalias() = q_minus.transpose() * apply_weights(q_minus, weights) / k;
    }
    // Symmetrize round-off so downstream symmetry checks are exact.
    c = ((c + c.transpose()) * 0.5).eval();
    return c;
}

linalg::EigResult solve_pod(const Matrix& c_minus) {
    linalg::EigResult eig = linalg::eig_symmetric(c_minus);
    // The sample correlation matrix is PSD in exact arithmetic; negative
    // eigenvalues beyond round-off scale mean the input is not a
    // correlation matrix.
    const double lead = eig.eigenvalues.size() > 0 ? std::max(1.0, eig.eigenvalues(0)) : 1.0;
    const double smallest = eig.eigenvalues(eig.eigenvalues.size() - 1);
    if (smallest < -1e-10 * lead) {
        std::ostringstream os;
        os << "matrix is not positive semidefinite: smallest eigenvalue " << smallest;
        fail(os.str());
    }
    eig.eigenvalues = eig.eigenvalues.cwiseMax(0.0);
    return eig;
}

TruncationResult truncate(const linalg::EigResult& eig, std::size_t rank) {
    const auto k = static_cast<std::size_t>(eig.eigenvalues.size());
    if (rank < 1 || rank > k) {
        std::ostringstream os;
        os << "rank " << rank << " out of range [1, " << k << "]";
        fail(os.str());
    }
    const double lead = eig.eigenvalues.size() > 0 ? eig.eigenvalues(0) : 0.0;
    std::size_t effective = 0;
    while (effective < rank && eig.eigenvalues(static_cast<Eigen::Index>(effective)) > kRankEpsilon * lead) {
        ++effective;
    }
    TruncationResult result;
    result.requested = rank;
    result.effective = effective;
    result.eig.eigenvalues = eig.eigenvalues.head(static_cast<Eigen::Index>(effective));
    result.eig.eigenvectors = eig.eigenvectors.leftCols(static_cast<Eigen::Index>(effective));
    return result;
}

Matrix hindcast_modes(const Matrix& q_minus, const linalg::EigResult& eig, std::size_t k) {
    if (q_minus.cols() != eig.eigenvectors.rows()) {
        fail("hindcast_modes: ensemble size does not match eigenvector rows");
    }
    const Vector scale = mode_scaling(eig, k, "hindcast_modes");
    return q_minus * (eig.eigenvectors * scale.asDiagonal());
}

Matrix expansion_coefficients(const Matrix& phi_minus, const WeightVector& weights, const Matrix& q_minus) {
    if (phi_minus.rows() != q_minus.rows()) {
        std::ostringstream os;
        os << "expansion_coefficients shape mismatch: modes have " << phi_minus.rows()
           << " rows, data has " << q_minus.rows();
        fail(os.str());
    }
    if (weights.is_uniform()) {
        return phi_minus.transpose() * q_minus;
    }
    return apply_weights(phi_minus, weights).transpose() * q_minus;
}

Matrix stp_modes(const Matrix& q_pm, const linalg::EigResult& eig, std::size_t k) {
    if (q_pm.cols() != eig.eigenvectors.rows()) {
        fail("stp_modes: ensemble size does not match eigenvector rows");
    }
    const Vector scale = mode_scaling(eig, k, "stp_modes");
    return q_pm * (eig.eigenvectors * scale.asDiagonal());
}

STPModel fit(const Ensemble& train, std::size_t rank, const WeightVector& weights,
             std::optional<MeanField> mean) {
    require_centered(train, "fit");
    weights.validate();
    if (weights.dof() != train.horizon.dof) {
        std::ostringstream os;
        os << "weight vector length " << weights.dof() << " does not match dof " << train.horizon.dof;
        fail(os.str());
    }
    const std::size_t k = train.size();
    if (rank < 1 || rank > k) {
        std::ostringstream os;
        os << "rank " << rank << " out of range: ensemble has k = " << k << " episodes";
        fail(os.str());
    }

    const Matrix q_pm = build_prediction_matrix(train);
    const auto np = static_cast<Eigen::Index>(train.horizon.hindcast_size());
    const Matrix c_minus = hindcast_correlation(q_pm.topRows(np), weights);
    const linalg::EigResult full = solve_pod(c_minus);
    const TruncationResult kept = truncate(full, rank);
    if (kept.effective == 0) {
        throw std::runtime_error("training ensemble has zero variance; nothing to fit");
    }

    STPModel model;
    model.horizon = train.horizon;
    model.rank = kept.effective;
    model.eigenvalues = kept.eig.eigenvalues;
    model.total_variance = full.eigenvalues.sum();
    model.modes = stp_modes(q_pm, kept.eig, k);
    model.weights = weights;
    model.mean = std::move(mean);
    model.k_train = k;
    return model;
}

STPModel truncate_model(const STPModel& model, std::size_t rank) {
    if (rank < 1 || rank > model.rank) {
        std::ostringstream os;
        os << "cannot truncate a rank-" << model.rank << " model to rank " << rank;
        fail(os.str());
    }
    STPModel out = model;
    out.rank = rank;
    out.eigenvalues = model.eigenvalues.head(static_cast<Eigen::Index>(rank)).eval();
    out.modes = model.modes.leftCols(static_cast<Eigen::Index>(rank)).eval();
    return out;
}

Vector project(const STPModel& model, const Vector& hindcast, bool raw_input) {
    const auto np = static_cast<Eigen::Index>(model.horizon.hindcast_size());
    if (hindcast.size() != np) {
        std::ostringstream os;
        os << "hindcast vector length " << hindcast.size() << " does not match n*p = " << np;
        fail(os.str());
    }
    Vector centered;
    if (raw_input) {
        if (!model.mean) {
            fail("model stores no mean field; cannot center raw input");
        }
        centered = hindcast - model.mean->hindcast_part(model.horizon);
    } else {
        centered = hindcast;
    }
    if (!model.weights.is_uniform()) {
        const Vector w = model.weights.replicated(model.horizon.hindcast_steps);
        centered.array() *= w.array();
    }
    return model.hindcast_modes().transpose() * centered;
}

Prediction predict(const STPModel& model, const Vector& hindcast, const PredictOptions& options) {
    Prediction prediction;
    prediction.coefficients = project(model, hindcast, options.raw_input);

    const Vector expanded = model.modes * prediction.coefficients;
    const auto np = static_cast<Eigen::Index>(model.horizon.hindcast_size());
    const auto mp = static_cast<Eigen::Index>(model.horizon.forecast_size());
    prediction.hindcast = expanded.head(np);
    prediction.forecast = expanded.tail(mp);

    if (options.add_mean) {
        if (!model.mean) {
            fail("model stores no mean field; cannot re-add the mean");
        }
        prediction.hindcast += model.mean->hindcast_part(model.horizon);
        prediction.forecast += model.mean->forecast_part(model.horizon);
        prediction.mean_added = true;
    }
    return prediction;
}

} // namespace stp
