#pragma once

#include "stp/model.hpp"
#include "stp/types.hpp"

#include <vector>

namespace stp {

/// Per-episode, per-time-step RMSE together with the columnwise mean and
/// (for two or more episodes) sample standard deviation. Rows index
/// episodes, columns index the n+m time steps; the forecast window begins
/// at column `forecast_start`.
struct ErrorReport {
    Matrix per_episode;
    Vector mean;
    std::optional<Vector> stddev;
    std::size_t forecast_start = 0;

    std::size_t episodes() const { return static_cast<std::size_t>(per_episode.rows()); }
    std::size_t steps() const { return static_cast<std::size_t>(per_episode.cols()); }
};

/// Eigenvalue spectrum with cumulative energy fractions relative to the
/// total variance of the training data. The final fraction reaches 1 only
/// for full-rank models.
struct SpectrumReport {
    Vector eigenvalues;
    Vector cumulative_fraction;
};

/// Root mean square error between two fields: ||u - v||_2 / sqrt(p).
double rmse_step(std::span<const double> u_true, std::span<const double> u_pred);

/// Builds the error report for one prediction per truth episode. Truth and
/// predictions must be in the same frame: either both centered or both
/// with the mean included.
ErrorReport error_report(const Ensemble& truth, const std::vector<Prediction>& predictions);

SpectrumReport spectrum_report(const STPModel& model);

} // namespace stp
