#pragma once

#include "stp/types.hpp"

#include <utility>

namespace stp {

/// A stationary snapshot sequence prior to segmentation into episodes.
/// Values are snapshot-major like Episode; `centered` records temporal-mean
/// subtraction.
struct SnapshotSeries {
    std::size_t dof = 0;
    std::vector<double> values;
    std::optional<std::vector<double>> times;
    bool centered = false;

    std::size_t size() const { return dof == 0 ? 0 : values.size() / dof; }
    std::span<const double> snapshot(std::size_t step) const {
        return std::span<const double>(values).subspan(step * dof, dof);
    }
};

/// How a stationary series is cut into overlapping episodes and split into
/// training and testing ensembles. `stride` is the start-to-start offset
/// between consecutive episodes, in snapshots.
struct SegmentationSpec {
    std::size_t hindcast_steps = 0;
    std::size_t forecast_steps = 0;
    std::size_t stride = 10;
    double split_fraction = 0.8;

    void validate() const;
};

struct SegmentationResult {
    Ensemble train;
    std::optional<Ensemble> test;
    std::size_t total_episodes = 0;
};

/// Per-time-instance mean across episodes, length (n+m)*p.
MeanField ensemble_mean(const Ensemble& ensemble);

/// Subtracts the ensemble mean from transient data. Returns the centered
/// ensemble together with the mean, which predictions later re-add.
std::pair<Ensemble, MeanField> center_transient(const Ensemble& ensemble);

/// Adds a previously subtracted ensemble mean back.
Ensemble uncenter_transient(const Ensemble& ensemble, const MeanField& mean);

/// Subtracts the temporal mean (one value per degree of freedom) from a
/// stationary series.
std::pair<SnapshotSeries, MeanField> center_stationary(const SnapshotSeries& series);

/// Number of episode start positions: |{s : s = i*stride, s + len <= length}|.
std::size_t segment_count(std::size_t length, std::size_t episode_steps, std::size_t stride);

/// Cuts a series into overlapping episodes (starts at 0, stride, 2*stride,
/// ...) and splits them contiguously in time: the first
/// round(split_fraction * total) episodes train, and testing keeps only
/// episodes that share no snapshot with the training window. With the
/// baseline stride of 10 this reproduces 1278 training and 316 testing
/// episodes from a 16000-snapshot series at n=15, m=20.
SegmentationResult segment_stationary(const SnapshotSeries& series, const SegmentationSpec& spec);

} // namespace stp
