#pragma once

#include "stp/preprocess.hpp"
#include "stp/types.hpp"

#include <cstdint>

namespace stp::synth {

enum class GeneratorKind { rank_limited, traveling_wave, linear_map, decaying_transient };

enum class MapKind { random, zero, persist };

std::string to_string(GeneratorKind kind);
GeneratorKind generator_kind_from_string(const std::string& name);
std::string to_string(MapKind kind);
MapKind map_kind_from_string(const std::string& name);

/// Parameters for the seeded synthetic generators. Generation is bit-
/// reproducible for a fixed spec: the same seed and parameters always
/// produce the same data (see stp/rng.hpp for the generator definition).
struct GeneratorSpec {
    GeneratorKind kind = GeneratorKind::rank_limited;
    std::size_t episodes = 1;        // k
    std::size_t hindcast_steps = 1;  // n
    std::size_t forecast_steps = 1;  // m
    std::size_t dof = 1;             // p
    std::uint64_t seed = 0;

    // rank_limited
    std::size_t true_rank = 1;

    // traveling_wave
    std::size_t series_length = 0;   // snapshots in the generated series
    std::size_t wave_count = 2;
    double phase_speed = 0.4;        // radians advanced per time step and unit wavenumber
    double noise_amplitude = 0.0;    // also used by decaying_transient
    double noise_correlation = 0.0;  // AR(1) coefficient of the noise in time; 0 = white

    // linear_map
    MapKind map_kind = MapKind::random;
    double map_scale = 1.0;

    // decaying_transient
    std::size_t multipole_count = 4;
    double perturbation_amplitude = 0.5;
    double decay_rate = 1.0;

    HorizonSpec horizon() const { return HorizonSpec{hindcast_steps, forecast_steps, dof}; }
};

struct RankLimitedData {
    Ensemble ensemble;
    Matrix basis; // (n+m)*p x true_rank, orthonormal columns
    /// Draws additional episodes from the same basis (continues the
    /// coefficient stream after `skip` prior episodes).
    static Episode draw_episode(const Matrix& basis, std::uint64_t seed, std::size_t index);
};

struct LinearMapData {
    Ensemble ensemble;
    Matrix map; // m*p x n*p, forecast = map * hindcast for every episode
};

struct TransientShellData {
    Ensemble ensemble;
    Vector profile; // (n+m)*p stacked baseline shell trajectory
};

/// Episodes are random combinations of `true_rank` fixed orthonormal
/// space-time vectors, so the sample correlation matrix has exactly that
/// rank (up to round-off) once k exceeds it.
RankLimitedData gen_rank_limited(const GeneratorSpec& spec);

/// Superposition of sinusoidal waves (1/w)*sin(w*x - phase_speed*w*t +
/// theta_w) on a periodic 1-D grid, plus an additive noise field. Snapshot
/// i is taken at t = i; wave w has period 2*pi/(phase_speed*w) time steps.
/// The noise at each grid point follows an AR(1) recursion in time,
/// z_t = rho*z_{t-1} + sqrt(1-rho^2)*xi_t with unit marginal variance, so
/// its predictability decays over roughly -1/ln(rho) steps; rho = 0 gives
/// white noise.
SnapshotSeries gen_traveling_wave(const GeneratorSpec& spec);

/// Random hindcasts with forecasts produced by a fixed linear map, so a
/// full-rank basis must forecast in-span inputs exactly.
LinearMapData gen_linear_map(const GeneratorSpec& spec);

/// Expanding, decaying shell profiles on a 1-D radial grid with random
/// per-episode amplitude and multipole perturbations; the ensemble mean is
/// nontrivial and time dependent.
TransientShellData gen_decaying_transient(const GeneratorSpec& spec);

} // namespace stp::synth
