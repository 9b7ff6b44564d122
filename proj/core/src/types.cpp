#include "stp/types.hpp"

#include <sstream>
#include <stdexcept>

namespace stp {

namespace {

[[noreturn]] void fail(const std::string& msg) {
    throw std::invalid_argument(msg);
}

} // namespace

void HorizonSpec::validate() const {
    if (hindcast_steps < 1 || forecast_steps < 1 || dof < 1) {
        std::ostringstream os;
        os << "horizon requires hindcast_steps, forecast_steps and dof >= 1, got ("
           << hindcast_steps << ", " << forecast_steps << ", " << dof << ")";
        fail(os.str());
    }
}

std::string to_string(DataKind kind) {
    return kind == DataKind::transient ? "transient" : "stationary";
}

DataKind data_kind_from_string(const std::string& name) {
    if (name == "transient") return DataKind::transient;
    if (name == "stationary") return DataKind::stationary;
    fail("unknown data kind '" + name + "' (expected 'transient' or 'stationary')");
}

std::string to_string(MeanKind kind) {
    return kind == MeanKind::ensemble_mean ? "ensemble_mean" : "temporal_mean";
}

MeanKind mean_kind_from_string(const std::string& name) {
    if (name == "ensemble_mean") return MeanKind::ensemble_mean;
    if (name == "temporal_mean") return MeanKind::temporal_mean;
    fail("unknown mean kind '" + name + "'");
}

bool WeightVector::is_uniform() const {
    return (values.array() == 1.0).all();
}

void WeightVector::validate() const {
    if (values.size() == 0) fail("weight vector is empty");
    if (!(values.array() > 0.0).all()) fail("weight vector entries must all be positive");
}

Vector WeightVector::replicated(std::size_t steps) const {
    const auto dof = values.size();
    Vector out(static_cast<Eigen::Index>(steps) * dof);
    for (std::size_t i = 0; i < steps; ++i) {
        out.segment(static_cast<Eigen::Index>(i) * dof, dof) = values;
    }
    return out;
}

Vector MeanField::hindcast_part(const HorizonSpec& h) const {
    const auto np = static_cast<Eigen::Index>(h.hindcast_size());
    if (kind == MeanKind::ensemble_mean) {
        if (values.size() != static_cast<Eigen::Index>(h.episode_size())) {
            fail("ensemble mean length does not match horizon");
        }
        return values.head(np);
    }
    if (values.size() != static_cast<Eigen::Index>(h.dof)) {
        fail("temporal mean length does not match dof");
    }
    Vector out(np);
    for (std::size_t i = 0; i < h.hindcast_steps; ++i) {
        out.segment(static_cast<Eigen::Index>(i * h.dof), static_cast<Eigen::Index>(h.dof)) = values;
    }
    return out;
}

Vector MeanField::forecast_part(const HorizonSpec& h) const {
    const auto mp = static_cast<Eigen::Index>(h.forecast_size());
    if (kind == MeanKind::ensemble_mean) {
        if (values.size() != static_cast<Eigen::Index>(h.episode_size())) {
            fail("ensemble mean length does not match horizon");
        }
        return values.tail(mp);
    }
    if (values.size() != static_cast<Eigen::Index>(h.dof)) {
        fail("temporal mean length does not match dof");
    }
    Vector out(mp);
    for (std::size_t i = 0; i < h.forecast_steps; ++i) {
        out.segment(static_cast<Eigen::Index>(i * h.dof), static_cast<Eigen::Index>(h.dof)) = values;
    }
    return out;
}

const Ensemble& validate_ensemble(const Ensemble& ensemble) {
    ensemble.horizon.validate();
    if (ensemble.episodes.empty()) fail("ensemble has no episodes");

    const std::size_t expected = ensemble.horizon.episode_size();
    const std::size_t steps = ensemble.horizon.total_steps();
    const bool expect_times = ensemble.episodes.front().times.has_value();

    for (std::size_t j = 0; j < ensemble.episodes.size(); ++j) {
        const Episode& ep = ensemble.episodes[j];
        if (ep.values.size() != expected) {
            std::ostringstream os;
            os << "episode " << j << " has " << ep.values.size()
               << " values, expected (n+m)*p = " << expected;
            fail(os.str());
        }
        if (ep.times.has_value() != expect_times) {
            std::ostringstream os;
            os << "episode " << j << (expect_times ? " is missing time stamps" : " has unexpected time stamps");
            fail(os.str());
        }
        if (!ep.times) continue;
        if (ep.times->size() != steps) {
            std::ostringstream os;
            os << "episode " << j << " has " << ep.times->size()
               << " time stamps, expected " << steps;
            fail(os.str());
        }
        for (std::size_t i = 1; i < ep.times->size(); ++i) {
            if (!((*ep.times)[i] > (*ep.times)[i - 1])) {
                std::ostringstream os;
                os << "episode " << j << " time stamps are not strictly increasing at index " << i;
                fail(os.str());
            }
        }
        if (*ep.times != *ensemble.episodes.front().times) {
            std::ostringstream os;
            os << "episode " << j << " time stamps differ across episodes";
            fail(os.str());
        }
    }
    return ensemble;
}

} // namespace stp
