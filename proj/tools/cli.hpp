#pragma once

#include "stp/io.hpp"
#include "stp/metrics.hpp"
#include "stp/model.hpp"
#include "stp/synth.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace stp::cli {

enum class SweepAxis { rank, hindcast, episodes };
enum class SweepMode { automatic, fixed_total, fixed_forecast };

/// Flattened flag set shared by all subcommands; each subcommand binds the
/// subset it uses. Counts are validated by the parser, data-dependent
/// bounds (such as rank <= k) at execution time.
struct RunConfig {
    // data geometry / generation
    std::string kind = "rank_limited";
    std::size_t episodes = 50;
    std::size_t test_episodes = 0;
    std::size_t hindcast_steps = 15;
    std::size_t forecast_steps = 20;
    std::size_t dof = 32;
    std::uint64_t seed = 0;
    std::size_t true_rank = 1;
    std::size_t series_length = 2000;
    std::size_t wave_count = 2;
    double phase_speed = 0.4;
    double noise_amplitude = 0.0;
    double noise_correlation = 0.0;
    std::string map_kind = "random";
    double map_scale = 1.0;
    std::size_t multipole_count = 4;
    double perturbation_amplitude = 0.5;
    double decay_rate = 1.0;

    // fitting / evaluation
    std::string data_path;
    std::string test_path;
    std::string model_path;
    std::size_t rank = 100;
    std::size_t stride = 10;
    double split_fraction = 0.8;
    std::string weights_path;
    bool force_add_mean = false;    // --add-mean
    bool force_no_add_mean = false; // --no-add-mean; neither set = auto

    // sweeps
    SweepAxis axis = SweepAxis::rank;
    std::vector<std::size_t> values;
    SweepMode mode = SweepMode::automatic;
    std::size_t sweep_rank = 0; // 0 = full rank
    std::size_t jobs = 0;       // 0 = hardware concurrency

    // outputs
    std::string out_path;
    std::string test_out_path;
    std::string spectrum_path;
    std::string optima_path;
};

int cmd_synth(const RunConfig& config);
int cmd_fit(const RunConfig& config);
int cmd_predict(const RunConfig& config);
int cmd_evaluate(const RunConfig& config);
int cmd_sweep(const RunConfig& config);

/// Parses arguments (excluding argv[0]) and dispatches. Returns the
/// process exit code; failures print a single `error: ...` line on stderr.
int run(const std::vector<std::string>& args);
int run(int argc, char** argv);

} // namespace stp::cli
