#pragma once

#include "stp/rng.hpp"
#include "stp/types.hpp"

#include <filesystem>
#include <string>

#include <unistd.h>

namespace stp::test {

inline Ensemble random_centered_ensemble(std::uint64_t seed, std::size_t k, std::size_t n,
                                         std::size_t m, std::size_t p) {
    Rng rng(seed);
    Ensemble ensemble;
    ensemble.horizon = HorizonSpec{n, m, p};
    ensemble.kind = DataKind::transient;
    ensemble.centered = true;
    ensemble.episodes.resize(k);
    for (Episode& ep : ensemble.episodes) {
        ep.values.resize(ensemble.horizon.episode_size());
        for (double& v : ep.values) v = rng.next_normal();
    }
    return ensemble;
}

inline WeightVector random_weights(std::uint64_t seed, std::size_t p) {
    Rng rng(seed);
    WeightVector w{Vector(static_cast<Eigen::Index>(p))};
    for (Eigen::Index i = 0; i < w.values.size(); ++i) {
        w.values(i) = 0.5 + rng.next_unit();
    }
    return w;
}

inline Matrix random_matrix(std::uint64_t seed, Eigen::Index rows, Eigen::Index cols) {
    Rng rng(seed);
    Matrix a(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
        for (Eigen::Index i = 0; i < rows; ++i) {
            a(i, j) = rng.next_normal();
        }
    }
    return a;
}

inline Matrix random_symmetric(std::uint64_t seed, Eigen::Index size) {
    const Matrix a = random_matrix(seed, size, size);
    return 0.5 * (a + a.transpose());
}

inline double max_abs(const Matrix& a) { return a.cwiseAbs().maxCoeff(); }

inline double rel_err(const Vector& actual, const Vector& expected) {
    const double scale = std::max(1e-300, expected.norm());
    return (actual - expected).norm() / scale;
}

/// Unique scratch directory, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static std::uint64_t counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("stp_test_" + tag + "_" + std::to_string(++counter) + "_" +
                 std::to_string(static_cast<std::uint64_t>(::getpid())));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    std::filesystem::path path_;
};

} // namespace stp::test
