#include "stp/metrics.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace stp {

double rmse_step(std::span<const double> u_true, std::span<const double> u_pred) {
    if (u_true.size() != u_pred.size()) {
        std::ostringstream os;
        os << "rmse_step length mismatch: " << u_true.size() << " vs " << u_pred.size();
        throw std::invalid_argument(os.str());
    }
    if (u_true.empty()) throw std::invalid_argument("rmse_step on empty fields");
    double sum = 0.0;
    for (std::size_t i = 0; i < u_true.size(); ++i) {
        const double d = u_true[i] - u_pred[i];
        sum += d * d;
    }
    return std::sqrt(sum / static_cast<double>(u_true.size()));
}

ErrorReport error_report(const Ensemble& truth, const std::vector<Prediction>& predictions) {
    validate_ensemble(truth);
    if (truth.size() != predictions.size()) {
        std::ostringstream os;
        os << "episode count mismatch: " << truth.size() << " truth episodes vs "
           << predictions.size() << " predictions";
        throw std::invalid_argument(os.str());
    }
    const HorizonSpec& h = truth.horizon;
    const auto np = static_cast<Eigen::Index>(h.hindcast_size());
    const auto mp = static_cast<Eigen::Index>(h.forecast_size());
    for (std::size_t j = 0; j < predictions.size(); ++j) {
        const Prediction& pr = predictions[j];
        if (pr.hindcast.size() != np || pr.forecast.size() != mp) {
            std::ostringstream os;
            os << "prediction " << j << " does not match the truth horizon";
            throw std::invalid_argument(os.str());
        }
        // Centered truth must be compared against mean-free predictions and
        // raw truth against mean-restored ones; anything else silently
        // biases the hindcast/forecast errors.
        if (pr.mean_added == truth.centered) {
            throw std::invalid_argument(
                "truth and predictions are in different frames (centered vs mean-added)");
        }
    }

    const std::size_t k = truth.size();
    const std::size_t steps = h.total_steps();
    ErrorReport report;
    report.forecast_start = h.hindcast_steps;
    report.per_episode.resize(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(steps));

    for (std::size_t j = 0; j < k; ++j) {
        const Episode& ep = truth.episodes[j];
        const Prediction& pr = predictions[j];
        for (std::size_t i = 0; i < steps; ++i) {
            std::span<const double> truth_snap = ep.snapshot(i, h.dof);
            const double* pred_ptr = i < h.hindcast_steps
                ? pr.hindcast.data() + i * h.dof
                : pr.forecast.data() + (i - h.hindcast_steps) * h.dof;
            report.per_episode(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) =
                rmse_step(truth_snap, std::span<const double>(pred_ptr, h.dof));
        }
    }

    report.mean = report.per_episode.colwise().mean().transpose();
    if (k >= 2) {
        const Vector var = (report.per_episode.rowwise() - report.mean.transpose())
                               .colwise().squaredNorm().transpose() / static_cast<double>(k - 1);
        report.stddev = var.cwiseSqrt();
    }
    return report;
}

SpectrumReport spectrum_report(const STPModel& model) {
    SpectrumReport report;
    report.eigenvalues = model.eigenvalues;
    report.cumulative_fraction.resize(model.eigenvalues.size());
    double running = 0.0;
    for (Eigen::Index i = 0; i < model.eigenvalues.size(); ++i) {
        running += model.eigenvalues(i);
        report.cumulative_fraction(i) =
            model.total_variance > 0.0 ? running / model.total_variance : 0.0;
    }
    return report;
}

} // namespace stp
