#pragma once

#include "stp/metrics.hpp"
#include "stp/model.hpp"
#include "stp/preprocess.hpp"
#include "stp/types.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace stp::io {

/// On-disk container, shared by all binary formats ("STP1" format family):
///
///   line 1:  "STP1 <TYPE> <header_bytes>\n"
///            TYPE is ENSEMBLE, SERIES, MODEL or PREDICTIONS
///   header:  exactly <header_bytes> bytes of JSON metadata
///   payload: raw little-endian IEEE-754 float64 array data
///
/// The header records the payload byte count and its CRC-32 (IEEE
/// polynomial 0xEDB88320, reflected, init and final xor 0xFFFFFFFF), so
/// truncation and corruption are detected on load. Ensemble payloads hold
/// the episodes concatenated in order, each snapshot-major. Model payloads
/// hold, in order: eigenvalues, the extended mode matrix (column-major by
/// mode), the mean values, and the per-dof weights. The hindcast modes are
/// not stored separately; they are the first n*p rows of the mode matrix.
inline constexpr const char* kFormatVersion = "STP1";

std::uint32_t crc32(const void* data, std::size_t bytes, std::uint32_t seed = 0);

void save_ensemble(const Ensemble& ensemble, const std::filesystem::path& path,
                   const std::string& provenance = "");
Ensemble load_ensemble(const std::filesystem::path& path);

void save_series(const SnapshotSeries& series, const std::filesystem::path& path,
                 const std::string& provenance = "");
SnapshotSeries load_series(const std::filesystem::path& path);

void save_model(const STPModel& model, const std::filesystem::path& path);
STPModel load_model(const std::filesystem::path& path);

struct PredictionSet {
    HorizonSpec horizon;
    std::size_t rank = 0;
    std::vector<Prediction> predictions;
};

void save_predictions(const PredictionSet& set, const std::filesystem::path& path);
PredictionSet load_predictions(const std::filesystem::path& path);

/// Peeks at the first line of an STP1 file and returns its TYPE token.
std::string probe_type(const std::filesystem::path& path);

/// One row per time step: index, mean, std, then the per-episode errors.
/// A comment line records where the forecast window starts; the std column
/// is omitted (with a warning comment) when the report holds one episode.
void export_csv(const ErrorReport& report, const std::filesystem::path& path);

/// One row per mode: index (1-based), eigenvalue, cumulative fraction.
void export_csv(const SpectrumReport& report, const std::filesystem::path& path);

/// Reads a plain-text series with one snapshot per row, comma-separated.
SnapshotSeries load_series_csv(const std::filesystem::path& path);

} // namespace stp::io
