#pragma once

#include "stp/linalg.hpp"
#include "stp/types.hpp"

namespace stp {

/// Eigenvalues at or below this fraction of the leading eigenvalue are
/// treated as numerically zero and dropped before any lambda^{-1/2}.
inline constexpr double kRankEpsilon = 1e-12;

/// Fitted space-time projection basis. The hindcast modes are the first
/// n*p rows of `modes`; the forecast extension is the remaining m*p rows.
struct STPModel {
    HorizonSpec horizon;
    std::size_t rank = 0;        // retained mode count r (after the rank guard)
    Vector eigenvalues;          // lambda_1..lambda_r, descending, nonnegative
    double total_variance = 0.0; // trace of the hindcast correlation matrix
    Matrix modes;                // (n+m)*p x r extended space-time modes
    WeightVector weights;
    std::optional<MeanField> mean;
    std::size_t k_train = 0;

    auto hindcast_modes() const {
        return modes.topRows(static_cast<Eigen::Index>(horizon.hindcast_size()));
    }
    auto forecast_modes() const {
        return modes.bottomRows(static_cast<Eigen::Index>(horizon.forecast_size()));
    }

    void validate() const;
};

/// One forecast: projection coefficients plus the reconstructed hindcast
/// and predicted forecast windows. Before mean re-addition,
/// [hindcast; forecast] = modes * coefficients.
struct Prediction {
    Vector coefficients;
    Vector hindcast;
    Vector forecast;
    bool mean_added = false;
};

struct PredictOptions {
    /// Input still contains the mean; subtract the model's stored mean
    /// before projecting. Requires the model to carry a mean.
    bool raw_input = false;
    /// Re-add the stored mean to the returned hindcast/forecast windows.
    bool add_mean = false;
};

struct TruncationResult {
    linalg::EigResult eig;
    std::size_t requested = 0;
    std::size_t effective = 0;
};

/// Hindcast data matrix: column j holds the first n*p values of episode j.
Matrix build_hindcast_matrix(const Ensemble& ensemble);

/// Prediction data matrix: column j holds the full stacked episode j.
Matrix build_prediction_matrix(const Ensemble& ensemble);

/// Ensemble sample correlation matrix (1/k) Q^T W Q, with the per-snapshot
/// weights replicated over the stacked snapshot blocks.
Matrix hindcast_correlation(const Matrix& q_minus, const WeightVector& weights);

/// Eigendecomposition of the correlation matrix with round-off-scale
/// negative eigenvalues clamped to zero.
linalg::EigResult solve_pod(const Matrix& c_minus);

/// Keeps the leading r eigenpairs, then drops any mode whose eigenvalue is
/// at or below kRankEpsilon times the leading one.
TruncationResult truncate(const linalg::EigResult& eig, std::size_t rank);

/// Hindcast modes (1/sqrt(k)) Q- Psi Lambda^{-1/2}; columns are W-orthonormal.
Matrix hindcast_modes(const Matrix& q_minus, const linalg::EigResult& eig, std::size_t k);

/// Expansion coefficients A = Phi^T W Q.
Matrix expansion_coefficients(const Matrix& phi_minus, const WeightVector& weights, const Matrix& q_minus);

/// Extended space-time modes (1/sqrt(k)) Q+- Psi Lambda^{-1/2}; the top n*p
/// rows coincide with the hindcast modes.
Matrix stp_modes(const Matrix& q_pm, const linalg::EigResult& eig, std::size_t k);

/// Full fitting pipeline on a centered training ensemble. The optional
/// mean is stored in the model and used when predicting from raw data.
STPModel fit(const Ensemble& train, std::size_t rank, const WeightVector& weights,
             std::optional<MeanField> mean = std::nullopt);

/// Reduces a fitted model to its leading r modes. Truncation only drops
/// trailing eigenpairs, so this equals refitting at the smaller rank.
STPModel truncate_model(const STPModel& model, std::size_t rank);

/// Projection coefficients of a new hindcast window onto the basis.
Vector project(const STPModel& model, const Vector& hindcast, bool raw_input = false);

/// Forecast by expanding the extended modes with the hindcast coefficients.
Prediction predict(const STPModel& model, const Vector& hindcast, const PredictOptions& options = {});

} // namespace stp
