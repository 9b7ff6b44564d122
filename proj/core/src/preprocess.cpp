#include "stp/preprocess.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace stp {

void SegmentationSpec::validate() const {
    HorizonSpec{hindcast_steps, forecast_steps, 1}.validate();
    if (stride < 1) throw std::invalid_argument("segmentation stride must be >= 1");
    if (!(split_fraction > 0.0) || !(split_fraction < 1.0)) {
        throw std::invalid_argument("split_fraction must lie strictly between 0 and 1");
    }
}

MeanField ensemble_mean(const Ensemble& ensemble) {
    validate_ensemble(ensemble);
    if (ensemble.kind != DataKind::transient) {
        throw std::invalid_argument("ensemble_mean expects transient data; stationary data uses the temporal mean");
    }
    const auto len = static_cast<Eigen::Index>(ensemble.horizon.episode_size());
    Vector mean = Vector::Zero(len);
    for (const Episode& ep : ensemble.episodes) {
        mean += Eigen::Map<const Vector>(ep.values.data(), len);
    }
    mean /= static_cast<double>(ensemble.size());
    return MeanField{MeanKind::ensemble_mean, std::move(mean)};
}

std::pair<Ensemble, MeanField> center_transient(const Ensemble& ensemble) {
    if (ensemble.centered) {
        throw std::invalid_argument("ensemble is already centered");
    }
    MeanField mean = ensemble_mean(ensemble);
    Ensemble centered = ensemble;
    const auto len = static_cast<Eigen::Index>(ensemble.horizon.episode_size());
    for (Episode& ep : centered.episodes) {
        Eigen::Map<Vector>(ep.values.data(), len) -= mean.values;
    }
    centered.centered = true;
    return {std::move(centered), std::move(mean)};
}

Ensemble uncenter_transient(const Ensemble& ensemble, const MeanField& mean) {
    validate_ensemble(ensemble);
    if (!ensemble.centered) throw std::invalid_argument("ensemble is not centered");
    if (mean.kind != MeanKind::ensemble_mean ||
        mean.values.size() != static_cast<Eigen::Index>(ensemble.horizon.episode_size())) {
        throw std::invalid_argument("mean field does not match the ensemble horizon");
    }
    Ensemble restored = ensemble;
    const auto len = mean.values.size();
    for (Episode& ep : restored.episodes) {
        Eigen::Map<Vector>(ep.values.data(), len) += mean.values;
    }
    restored.centered = false;
    return restored;
}

std::pair<SnapshotSeries, MeanField> center_stationary(const SnapshotSeries& series) {
    if (series.dof == 0 || series.values.empty()) {
        throw std::invalid_argument("cannot center an empty series");
    }
    if (series.values.size() % series.dof != 0) {
        throw std::invalid_argument("series length is not a multiple of dof");
    }
    const auto dof = static_cast<Eigen::Index>(series.dof);
    const std::size_t steps = series.size();

    Vector mean = Vector::Zero(dof);
    for (std::size_t i = 0; i < steps; ++i) {
        mean += Eigen::Map<const Vector>(series.values.data() + i * series.dof, dof);
    }
    mean /= static_cast<double>(steps);

    SnapshotSeries centered = series;
    for (std::size_t i = 0; i < steps; ++i) {
        Eigen::Map<Vector>(centered.values.data() + i * series.dof, dof) -= mean;
    }
    centered.centered = true;
    return {std::move(centered), MeanField{MeanKind::temporal_mean, std::move(mean)}};
}

std::size_t segment_count(std::size_t length, std::size_t episode_steps, std::size_t stride) {
    if (stride < 1 || episode_steps < 1 || length < episode_steps) return 0;
    return (length - episode_steps) / stride + 1;
}

SegmentationResult segment_stationary(const SnapshotSeries& series, const SegmentationSpec& spec) {
    spec.validate();
    if (series.dof == 0 || series.values.size() % series.dof != 0) {
        throw std::invalid_argument("series shape is inconsistent with its dof");
    }
    const std::size_t episode_steps = spec.hindcast_steps + spec.forecast_steps;
    const std::size_t length = series.size();
    if (length < episode_steps) {
        std::ostringstream os;
        os << "series of " << length << " snapshots is shorter than one episode of "
           << episode_steps << " snapshots";
        throw std::invalid_argument(os.str());
    }

    const std::size_t total = segment_count(length, episode_steps, spec.stride);
    const std::size_t train_count = static_cast<std::size_t>(
        std::floor(spec.split_fraction * static_cast<double>(total) + 0.5));
    if (train_count == 0) {
        throw std::invalid_argument("split fraction leaves no training episodes");
    }

    const HorizonSpec horizon{spec.hindcast_steps, spec.forecast_steps, series.dof};
    auto cut = [&](std::size_t start) {
        Episode ep;
        ep.values.assign(series.values.begin() + static_cast<std::ptrdiff_t>(start * series.dof),
                         series.values.begin() + static_cast<std::ptrdiff_t>((start + episode_steps) * series.dof));
        return ep;
    };

    SegmentationResult result;
    result.total_episodes = total;
    result.train.horizon = horizon;
    result.train.kind = DataKind::stationary;
    result.train.centered = series.centered;
    result.train.episodes.reserve(train_count);
    for (std::size_t e = 0; e < train_count; ++e) {
        result.train.episodes.push_back(cut(e * spec.stride));
    }

    // Testing episodes must not share snapshots with the training window;
    // episodes straddling the boundary are dropped.
    const std::size_t train_end = (train_count - 1) * spec.stride + episode_steps;
    Ensemble test;
    test.horizon = horizon;
    test.kind = DataKind::stationary;
    test.centered = series.centered;
    for (std::size_t e = train_count; e < total; ++e) {
        const std::size_t start = e * spec.stride;
        if (start < train_end) continue;
        test.episodes.push_back(cut(start));
    }
    if (!test.episodes.empty()) {
        result.test = std::move(test);
    }
    return result;
}

} // namespace stp
