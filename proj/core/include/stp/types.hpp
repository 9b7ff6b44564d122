#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace stp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Prediction-horizon geometry: every episode covers `hindcast_steps`
/// observed snapshots followed by `forecast_steps` snapshots to be
/// predicted, each snapshot holding `dof` degrees of freedom.
struct HorizonSpec {
    std::size_t hindcast_steps = 0;
    std::size_t forecast_steps = 0;
    std::size_t dof = 0;

    std::size_t total_steps() const { return hindcast_steps + forecast_steps; }
    std::size_t hindcast_size() const { return hindcast_steps * dof; }
    std::size_t forecast_size() const { return forecast_steps * dof; }
    std::size_t episode_size() const { return total_steps() * dof; }

    void validate() const;

    friend bool operator==(const HorizonSpec&, const HorizonSpec&) = default;
};

/// One trajectory of the process over the full prediction horizon.
/// Values are stored snapshot-major: snapshot i occupies elements
/// [i*dof, (i+1)*dof). Time stamps are optional metadata; algorithms
/// operate on snapshot indices only.
struct Episode {
    std::vector<double> values;
    std::optional<std::vector<double>> times;

    std::span<const double> snapshot(std::size_t step, std::size_t dof) const {
        return std::span<const double>(values).subspan(step * dof, dof);
    }
    std::span<const double> hindcast(const HorizonSpec& h) const {
        return std::span<const double>(values).first(h.hindcast_size());
    }
    std::span<const double> forecast(const HorizonSpec& h) const {
        return std::span<const double>(values).last(h.forecast_size());
    }
};

enum class DataKind { transient, stationary };

std::string to_string(DataKind kind);
DataKind data_kind_from_string(const std::string& name);

/// A collection of episodes sharing one horizon. `centered` records
/// whether a mean field has already been subtracted.
struct Ensemble {
    std::vector<Episode> episodes;
    HorizonSpec horizon;
    DataKind kind = DataKind::transient;
    bool centered = false;

    std::size_t size() const { return episodes.size(); }
};

/// Per-degree-of-freedom weights (the diagonal of W), specified once per
/// snapshot and logically replicated across time when applied to stacked
/// space-time vectors.
struct WeightVector {
    Vector values;

    static WeightVector uniform(std::size_t dof) {
        return WeightVector{Vector::Ones(static_cast<Eigen::Index>(dof))};
    }

    std::size_t dof() const { return static_cast<std::size_t>(values.size()); }
    bool is_uniform() const;
    void validate() const;

    /// Weights replicated over `steps` snapshots, length steps*dof.
    Vector replicated(std::size_t steps) const;
};

enum class MeanKind { ensemble_mean, temporal_mean };

std::string to_string(MeanKind kind);
MeanKind mean_kind_from_string(const std::string& name);

/// The subtracted mean: one value per stacked index for ensemble means
/// (length (n+m)*p), one value per degree of freedom for temporal means
/// (length p).
struct MeanField {
    MeanKind kind = MeanKind::ensemble_mean;
    Vector values;

    /// Mean over the hindcast window, stacked to length n*p.
    Vector hindcast_part(const HorizonSpec& h) const;
    /// Mean over the forecast window, stacked to length m*p.
    Vector forecast_part(const HorizonSpec& h) const;
};

/// Checks every Ensemble invariant (episode sizes, consistent time stamps,
/// at least one episode) and returns the input unchanged. Throws
/// std::invalid_argument with a descriptive message otherwise.
const Ensemble& validate_ensemble(const Ensemble& ensemble);

} // namespace stp
