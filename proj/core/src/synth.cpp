#include "stp/synth.hpp"

#include "stp/rng.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace stp::synth {

namespace {

[[noreturn]] void fail(const std::string& msg) {
    throw std::invalid_argument(msg);
}

// Multipole decay factor: perturbation l is scaled by kMultipoleDecay^l so
// the spherically symmetric amplitude mode dominates the variance.
constexpr double kMultipoleDecay = 0.6;

Vector draw_normal_vector(Rng& rng, Eigen::Index len) {
    Vector v(len);
    for (Eigen::Index i = 0; i < len; ++i) v(i) = rng.next_normal();
    return v;
}

// Modified Gram-Schmidt in column order; the input columns are random
// normal draws, so breakdown only occurs at negligible probability.
void orthonormalize(Matrix& basis) {
    for (Eigen::Index s = 0; s < basis.cols(); ++s) {
        for (Eigen::Index t = 0; t < s; ++t) {
            basis.col(s) -= basis.col(t).dot(basis.col(s)) * basis.col(t);
        }
        const double norm = basis.col(s).norm();
        if (!(norm > 0.0)) {
            throw std::runtime_error("degenerate random basis draw; change the seed");
        }
        basis.col(s) /= norm;
    }
}

} // namespace

std::string to_string(GeneratorKind kind) {
    switch (kind) {
        case GeneratorKind::rank_limited: return "rank_limited";
        case GeneratorKind::traveling_wave: return "traveling_wave";
        case GeneratorKind::linear_map: return "linear_map";
        case GeneratorKind::decaying_transient: return "decaying_transient";
    }
    return "unknown";
}

GeneratorKind generator_kind_from_string(const std::string& name) {
    if (name == "rank_limited") return GeneratorKind::rank_limited;
    if (name == "traveling_wave") return GeneratorKind::traveling_wave;
    if (name == "linear_map") return GeneratorKind::linear_map;
    if (name == "decaying_transient") return GeneratorKind::decaying_transient;
    fail("unknown generator kind '" + name + "'");
}

std::string to_string(MapKind kind) {
    switch (kind) {
        case MapKind::random: return "random";
        case MapKind::zero: return "zero";
        case MapKind::persist: return "persist";
    }
    return "unknown";
}

MapKind map_kind_from_string(const std::string& name) {
    if (name == "random") return MapKind::random;
    if (name == "zero") return MapKind::zero;
    if (name == "persist") return MapKind::persist;
    fail("unknown map kind '" + name + "'");
}

RankLimitedData gen_rank_limited(const GeneratorSpec& spec) {
    const HorizonSpec horizon = spec.horizon();
    horizon.validate();
    if (spec.episodes < 1) fail("gen_rank_limited requires at least one episode");
    const std::size_t len = horizon.episode_size();
    if (spec.true_rank < 1 || spec.true_rank > std::min(spec.episodes, len)) {
        std::ostringstream os;
        os << "true_rank " << spec.true_rank << " out of range [1, min(k, (n+m)*p) = "
           << std::min(spec.episodes, len) << "]";
        fail(os.str());
    }

    Rng rng(spec.seed);
    Matrix basis(static_cast<Eigen::Index>(len), static_cast<Eigen::Index>(spec.true_rank));
    for (Eigen::Index s = 0; s < basis.cols(); ++s) {
        basis.col(s) = draw_normal_vector(rng, basis.rows());
    }
    orthonormalize(basis);

    RankLimitedData data;
    data.basis = basis;
    data.ensemble.horizon = horizon;
    data.ensemble.kind = DataKind::transient;
    data.ensemble.episodes.reserve(spec.episodes);
    for (std::size_t j = 0; j < spec.episodes; ++j) {
        const Vector coeff = draw_normal_vector(rng, basis.cols());
        Episode ep;
        ep.values.resize(len);
        Eigen::Map<Vector>(ep.values.data(), static_cast<Eigen::Index>(len)) = basis * coeff;
        data.ensemble.episodes.push_back(std::move(ep));
    }
    return data;
}

Episode RankLimitedData::draw_episode(const Matrix& basis, std::uint64_t seed, std::size_t index) {
    Rng rng(seed);
    // Advance past the basis draws and `index` earlier episodes; every
    // normal consumes exactly two raw outputs.
    const std::size_t skip =
        static_cast<std::size_t>(basis.rows()) * static_cast<std::size_t>(basis.cols()) +
        index * static_cast<std::size_t>(basis.cols());
    for (std::size_t i = 0; i < 2 * skip; ++i) rng.next_u64();

    const Vector coeff = draw_normal_vector(rng, basis.cols());
    Episode ep;
    ep.values.resize(static_cast<std::size_t>(basis.rows()));
    Eigen::Map<Vector>(ep.values.data(), basis.rows()) = basis * coeff;
    return ep;
}

SnapshotSeries gen_traveling_wave(const GeneratorSpec& spec) {
    if (spec.dof < 2) fail("gen_traveling_wave needs dof >= 2 to form a 1-D grid");
    if (spec.series_length < 1) fail("gen_traveling_wave requires series_length >= 1");
    if (spec.wave_count < 1) fail("gen_traveling_wave requires wave_count >= 1");
    if (spec.noise_correlation < 0.0 || spec.noise_correlation >= 1.0) {
        fail("noise_correlation must lie in [0, 1)");
    }

    Rng rng(spec.seed);
    std::vector<double> phases(spec.wave_count);
    for (double& phase : phases) phase = 2.0 * std::numbers::pi * rng.next_unit();

    const double rho = spec.noise_correlation;
    const double innovation = std::sqrt(1.0 - rho * rho);
    std::vector<double> noise_state(spec.dof, 0.0);

    SnapshotSeries series;
    series.dof = spec.dof;
    series.values.resize(spec.series_length * spec.dof);
    for (std::size_t i = 0; i < spec.series_length; ++i) {
        const double t = static_cast<double>(i);
        for (std::size_t g = 0; g < spec.dof; ++g) {
            const double x = 2.0 * std::numbers::pi * static_cast<double>(g) / static_cast<double>(spec.dof);
            double value = 0.0;
            for (std::size_t w = 1; w <= spec.wave_count; ++w) {
                const double wd = static_cast<double>(w);
                // Wave w: amplitude 1/w, wavenumber w, angular frequency phase_speed*w.
                value += std::sin(wd * x - spec.phase_speed * wd * t + phases[w - 1]) / wd;
            }
            if (spec.noise_amplitude > 0.0) {
                // AR(1) in time with unit marginal variance per grid point.
                noise_state[g] = i == 0 ? rng.next_normal()
                                        : rho * noise_state[g] + innovation * rng.next_normal();
                value += spec.noise_amplitude * noise_state[g];
            }
            series.values[i * spec.dof + g] = value;
        }
    }
    return series;
}

LinearMapData gen_linear_map(const GeneratorSpec& spec) {
    const HorizonSpec horizon = spec.horizon();
    horizon.validate();
    if (spec.episodes < 1) fail("gen_linear_map requires at least one episode");
    if (!std::isfinite(spec.map_scale)) fail("map_scale must be finite");

    const auto np = static_cast<Eigen::Index>(horizon.hindcast_size());
    const auto mp = static_cast<Eigen::Index>(horizon.forecast_size());

    Rng rng(spec.seed);
    Matrix map = Matrix::Zero(mp, np);
    switch (spec.map_kind) {
        case MapKind::zero:
            break;
        case MapKind::persist:
            // Copy the last hindcast snapshot into every forecast snapshot.
            for (std::size_t i = 0; i < horizon.forecast_steps; ++i) {
                map.block(static_cast<Eigen::Index>(i * horizon.dof),
                          static_cast<Eigen::Index>((horizon.hindcast_steps - 1) * horizon.dof),
                          static_cast<Eigen::Index>(horizon.dof),
                          static_cast<Eigen::Index>(horizon.dof)) =
                    Matrix::Identity(static_cast<Eigen::Index>(horizon.dof),
                                     static_cast<Eigen::Index>(horizon.dof));
            }
            break;
        case MapKind::random: {
            const double scale = spec.map_scale / std::sqrt(static_cast<double>(np));
            for (Eigen::Index i = 0; i < mp; ++i) {
                for (Eigen::Index j = 0; j < np; ++j) {
                    map(i, j) = scale * rng.next_normal();
                }
            }
            break;
        }
    }

    LinearMapData data;
    data.map = map;
    data.ensemble.horizon = horizon;
    data.ensemble.kind = DataKind::transient;
    data.ensemble.episodes.reserve(spec.episodes);
    for (std::size_t j = 0; j < spec.episodes; ++j) {
        const Vector hind = draw_normal_vector(rng, np);
        Episode ep;
        ep.values.resize(horizon.episode_size());
        Eigen::Map<Vector>(ep.values.data(), np) = hind;
        Eigen::Map<Vector>(ep.values.data() + np, mp) = map * hind;
        data.ensemble.episodes.push_back(std::move(ep));
    }
    return data;
}

TransientShellData gen_decaying_transient(const GeneratorSpec& spec) {
    const HorizonSpec horizon = spec.horizon();
    horizon.validate();
    if (spec.episodes < 1) fail("gen_decaying_transient requires at least one episode");

    const std::size_t steps = horizon.total_steps();
    const std::size_t dof = horizon.dof;

    // Baseline trajectory: a Gaussian shell expanding outward on the unit
    // interval, widening and losing amplitude as it travels.
    Vector profile(static_cast<Eigen::Index>(horizon.episode_size()));
    for (std::size_t i = 0; i < steps; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(steps);
        const double radius = 0.1 + 0.8 * t;
        const double width = 0.08 + 0.04 * t;
        const double amplitude = std::exp(-spec.decay_rate * t);
        for (std::size_t g = 0; g < dof; ++g) {
            const double x = (static_cast<double>(g) + 0.5) / static_cast<double>(dof);
            const double arg = (x - radius) / width;
            profile(static_cast<Eigen::Index>(i * dof + g)) = amplitude * std::exp(-arg * arg);
        }
    }

    Rng rng(spec.seed);
    TransientShellData data;
    data.profile = profile;
    data.ensemble.horizon = horizon;
    data.ensemble.kind = DataKind::transient;
    data.ensemble.episodes.reserve(spec.episodes);

    for (std::size_t j = 0; j < spec.episodes; ++j) {
        const double amp = spec.perturbation_amplitude * rng.next_normal();
        std::vector<double> multipole(spec.multipole_count);
        double decay = kMultipoleDecay;
        for (std::size_t l = 0; l < spec.multipole_count; ++l) {
            multipole[l] = spec.perturbation_amplitude * decay * rng.next_normal();
            decay *= kMultipoleDecay;
        }

        Episode ep;
        ep.values.resize(horizon.episode_size());
        for (std::size_t i = 0; i < steps; ++i) {
            for (std::size_t g = 0; g < dof; ++g) {
                const double x = (static_cast<double>(g) + 0.5) / static_cast<double>(dof);
                double modulation = 1.0 + amp;
                for (std::size_t l = 0; l < spec.multipole_count; ++l) {
                    modulation += multipole[l] * std::cos(std::numbers::pi * static_cast<double>(l + 1) * x);
                }
                double value = profile(static_cast<Eigen::Index>(i * dof + g)) * modulation;
                if (spec.noise_amplitude > 0.0) {
                    value += spec.noise_amplitude * rng.next_normal();
                }
                ep.values[i * dof + g] = value;
            }
        }
        data.ensemble.episodes.push_back(std::move(ep));
    }
    return data;
}

} // namespace stp::synth
