#include "cli.hpp"

#include "stp/preprocess.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace stp::cli {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void fail(const std::string& msg) {
    throw std::runtime_error(msg);
}

void ensure_parent_dir(const std::string& path) {
    const fs::path parent = fs::path(path).parent_path();
    if (!parent.empty()) fs::create_directories(parent);
}

std::string format_g(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& body) {
    if (jobs == 0) {
        jobs = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    }
    jobs = std::min(jobs, count);
    if (jobs <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                body(i);
            } catch (...) {
                const std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (std::size_t t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

WeightVector load_weights(const std::string& path, std::size_t dof) {
    if (path.empty()) return WeightVector::uniform(dof);
    std::ifstream in(path);
    if (!in) fail(path + ": cannot open weights file");
    std::vector<double> values;
    std::string token;
    while (std::getline(in, token, ',')) {
        std::stringstream ss(token);
        double v = 0.0;
        while (ss >> v) values.push_back(v);
    }
    if (values.size() != dof) {
        std::ostringstream os;
        os << path << ": expected " << dof << " weights, found " << values.size();
        fail(os.str());
    }
    WeightVector w{Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()))};
    w.validate();
    return w;
}

synth::GeneratorSpec spec_from_config(const RunConfig& c) {
    synth::GeneratorSpec spec;
    spec.kind = synth::generator_kind_from_string(c.kind);
    spec.episodes = c.episodes;
    spec.hindcast_steps = c.hindcast_steps;
    spec.forecast_steps = c.forecast_steps;
    spec.dof = c.dof;
    spec.seed = c.seed;
    spec.true_rank = c.true_rank;
    spec.series_length = c.series_length;
    spec.wave_count = c.wave_count;
    spec.phase_speed = c.phase_speed;
    spec.noise_amplitude = c.noise_amplitude;
    spec.noise_correlation = c.noise_correlation;
    spec.map_kind = synth::map_kind_from_string(c.map_kind);
    spec.map_scale = c.map_scale;
    spec.multipole_count = c.multipole_count;
    spec.perturbation_amplitude = c.perturbation_amplitude;
    spec.decay_rate = c.decay_rate;
    return spec;
}

std::string synth_provenance(const synth::GeneratorSpec& spec) {
    std::ostringstream os;
    os << "stp synth --kind " << to_string(spec.kind) << " --seed " << spec.seed;
    if (spec.kind == synth::GeneratorKind::traveling_wave) {
        os << " --dof " << spec.dof << " --length " << spec.series_length
           << " --waves " << spec.wave_count << " --phase-speed " << format_g(spec.phase_speed)
           << " --noise " << format_g(spec.noise_amplitude)
           << " --noise-corr " << format_g(spec.noise_correlation);
        return os.str();
    }
    os << " --episodes " << spec.episodes << " --hindcast " << spec.hindcast_steps
       << " --forecast " << spec.forecast_steps << " --dof " << spec.dof;
    switch (spec.kind) {
        case synth::GeneratorKind::rank_limited:
            os << " --rank " << spec.true_rank;
            break;
        case synth::GeneratorKind::linear_map:
            os << " --map-kind " << to_string(spec.map_kind)
               << " --map-scale " << format_g(spec.map_scale);
            break;
        case synth::GeneratorKind::decaying_transient:
            os << " --multipoles " << spec.multipole_count
               << " --perturbation " << format_g(spec.perturbation_amplitude)
               << " --decay " << format_g(spec.decay_rate)
               << " --noise " << format_g(spec.noise_amplitude);
            break;
        default:
            break;
    }
    return os.str();
}

// Input files are STP1 containers or, as a fallback, plain-text series
// with one comma-separated snapshot per row.
std::string detect_input_type(const std::string& path) {
    try {
        return io::probe_type(path);
    } catch (const std::exception&) {
        return "CSV";
    }
}

SnapshotSeries load_series_input(const std::string& type, const std::string& path) {
    return type == "SERIES" ? io::load_series(path) : io::load_series_csv(path);
}

// Training inputs resolved from either an ensemble or a series file.
struct TrainingData {
    Ensemble train;
    std::optional<MeanField> mean;
    std::optional<Ensemble> test;
    bool from_series = false;
};

// Temporal mean over every snapshot of every episode; used when a
// stationary ensemble arrives uncentered.
std::pair<Ensemble, MeanField> center_stationary_ensemble(const Ensemble& ensemble) {
    const auto dof = static_cast<Eigen::Index>(ensemble.horizon.dof);
    const std::size_t steps = ensemble.horizon.total_steps();
    Vector mean = Vector::Zero(dof);
    for (const Episode& ep : ensemble.episodes) {
        for (std::size_t i = 0; i < steps; ++i) {
            mean += Eigen::Map<const Vector>(ep.values.data() + i * ensemble.horizon.dof, dof);
        }
    }
    mean /= static_cast<double>(ensemble.size() * steps);

    Ensemble centered = ensemble;
    for (Episode& ep : centered.episodes) {
        for (std::size_t i = 0; i < steps; ++i) {
            Eigen::Map<Vector>(ep.values.data() + i * ensemble.horizon.dof, dof) -= mean;
        }
    }
    centered.centered = true;
    return {std::move(centered), MeanField{MeanKind::temporal_mean, std::move(mean)}};
}

TrainingData prepare_training(const RunConfig& c, bool want_test) {
    if (c.data_path.empty()) fail("--data is required");
    TrainingData data;
    const std::string type = detect_input_type(c.data_path);
    if (type == "ENSEMBLE") {
        Ensemble raw = io::load_ensemble(c.data_path);
        if (raw.centered) {
            data.train = std::move(raw);
        } else if (raw.kind == DataKind::transient) {
            auto [centered, mean] = center_transient(raw);
            data.train = std::move(centered);
            data.mean = std::move(mean);
        } else {
            auto [centered, mean] = center_stationary_ensemble(raw);
            data.train = std::move(centered);
            data.mean = std::move(mean);
        }
    } else if (type == "SERIES" || type == "CSV") {
        SnapshotSeries series = load_series_input(type, c.data_path);
        if (!series.centered) {
            auto [centered, mean] = center_stationary(series);
            series = std::move(centered);
            data.mean = std::move(mean);
        }
        SegmentationSpec spec{c.hindcast_steps, c.forecast_steps, c.stride, c.split_fraction};
        SegmentationResult segmented = segment_stationary(series, spec);
        data.train = std::move(segmented.train);
        data.test = std::move(segmented.test);
        data.from_series = true;
        if (want_test && !data.test) {
            fail("series segmentation produced no test episodes; reduce --split or the stride");
        }
    } else {
        fail(c.data_path + ": expected an ENSEMBLE, SERIES, or snapshot CSV file, found " + type);
    }
    return data;
}

std::vector<Prediction> predict_ensemble(const STPModel& model, const Ensemble& input) {
    const bool raw = !input.centered;
    const auto np = static_cast<Eigen::Index>(model.horizon.hindcast_size());
    std::vector<Prediction> predictions;
    predictions.reserve(input.size());
    for (const Episode& ep : input.episodes) {
        const Eigen::Map<const Vector> hind(ep.values.data(), np);
        predictions.push_back(predict(model, hind, PredictOptions{raw, raw}));
    }
    return predictions;
}

void check_horizon_match(const HorizonSpec& model_h, const HorizonSpec& data_h) {
    if (!(model_h == data_h)) {
        std::ostringstream os;
        os << "horizon mismatch: model has (n=" << model_h.hindcast_steps
           << ", m=" << model_h.forecast_steps << ", p=" << model_h.dof
           << "), data has (n=" << data_h.hindcast_steps
           << ", m=" << data_h.forecast_steps << ", p=" << data_h.dof << ")";
        fail(os.str());
    }
}

// Keeps the last n+m steps of every episode under a relabeled horizon.
Ensemble reslice_last(const Ensemble& src, std::size_t hindcast_steps, std::size_t forecast_steps) {
    const std::size_t total_new = hindcast_steps + forecast_steps;
    const std::size_t total_old = src.horizon.total_steps();
    if (total_new > total_old) {
        std::ostringstream os;
        os << "cannot reslice episodes of " << total_old << " steps to n+m = " << total_new;
        fail(os.str());
    }
    const std::size_t skip = (total_old - total_new) * src.horizon.dof;
    Ensemble out;
    out.horizon = HorizonSpec{hindcast_steps, forecast_steps, src.horizon.dof};
    out.kind = src.kind;
    out.centered = src.centered;
    out.episodes.reserve(src.size());
    for (const Episode& ep : src.episodes) {
        Episode sliced;
        sliced.values.assign(ep.values.begin() + static_cast<std::ptrdiff_t>(skip), ep.values.end());
        if (ep.times) {
            sliced.times = std::vector<double>(ep.times->begin() + static_cast<std::ptrdiff_t>(total_old - total_new),
                                               ep.times->end());
        }
        out.episodes.push_back(std::move(sliced));
    }
    return out;
}

std::size_t resolve_rank(std::size_t requested, std::size_t k) {
    if (requested == 0) return k; // 0 = full rank
    if (requested > k) {
        std::ostringstream os;
        os << "rank " << requested << " exceeds the ensemble size k = " << k;
        fail(os.str());
    }
    return requested;
}

struct SweepRow {
    std::size_t value = 0;
    std::size_t forecast_start = 0;
    Vector mean_error;
};

void write_sweep_csv(const std::string& axis, const std::vector<SweepRow>& rows,
                     const std::string& path) {
    ensure_parent_dir(path);
    std::ofstream out(path, std::ios::trunc);
    if (!out) fail(path + ": cannot open for writing");
    out << "# axis," << axis << '\n';
    out << "value,step,forecast_start,mean_error\n";
    for (const SweepRow& row : rows) {
        for (Eigen::Index i = 0; i < row.mean_error.size(); ++i) {
            out << row.value << ',' << i << ',' << row.forecast_start << ','
                << format_g(row.mean_error(i)) << '\n';
        }
    }
    if (!out) fail(path + ": write failed");
}

void write_optima_csv(const std::vector<SweepRow>& rows, const std::string& path) {
    ensure_parent_dir(path);
    std::ofstream out(path, std::ios::trunc);
    if (!out) fail(path + ": cannot open for writing");
    out << "lead,min_mean_error,optimal_hindcast\n";
    std::size_t max_lead = 0;
    for (const SweepRow& row : rows) {
        max_lead = std::max(max_lead, static_cast<std::size_t>(row.mean_error.size()) - row.forecast_start);
    }
    for (std::size_t lead = 1; lead <= max_lead; ++lead) {
        double best = 0.0;
        std::size_t best_value = 0;
        bool found = false;
        for (const SweepRow& row : rows) {
            const std::size_t step = row.forecast_start + lead - 1;
            if (step >= static_cast<std::size_t>(row.mean_error.size())) continue;
            const double err = row.mean_error(static_cast<Eigen::Index>(step));
            if (!found || err < best) {
                best = err;
                best_value = row.value;
                found = true;
            }
        }
        if (!found) continue;
        out << lead << ',' << format_g(best) << ',' << best_value << '\n';
    }
    if (!out) fail(path + ": write failed");
}

} // namespace

int cmd_synth(const RunConfig& c) {
    if (c.out_path.empty()) fail("--out is required");
    synth::GeneratorSpec spec = spec_from_config(c);
    ensure_parent_dir(c.out_path);

    if (spec.kind == synth::GeneratorKind::traveling_wave) {
        if (c.test_episodes > 0 || !c.test_out_path.empty()) {
            fail("--test-episodes applies to episode generators; stationary series are split at fit time");
        }
        const SnapshotSeries series = gen_traveling_wave(spec);
        io::save_series(series, c.out_path, synth_provenance(spec));
        std::cout << "synth: wrote " << series.size() << "-snapshot series (p=" << series.dof
                  << ") to " << c.out_path << '\n';
        return 0;
    }

    if (c.test_episodes > 0 && c.test_out_path.empty()) {
        fail("--test-episodes requires --test-out");
    }
    spec.episodes = c.episodes + c.test_episodes;

    Ensemble full;
    switch (spec.kind) {
        case synth::GeneratorKind::rank_limited:
            full = gen_rank_limited(spec).ensemble;
            break;
        case synth::GeneratorKind::linear_map:
            full = gen_linear_map(spec).ensemble;
            break;
        case synth::GeneratorKind::decaying_transient:
            full = gen_decaying_transient(spec).ensemble;
            break;
        default:
            fail("unhandled generator kind");
    }

    Ensemble train = full;
    train.episodes.resize(c.episodes);
    io::save_ensemble(train, c.out_path, synth_provenance(spec));
    std::cout << "synth: wrote " << train.size() << " episodes to " << c.out_path << '\n';

    if (c.test_episodes > 0) {
        Ensemble test = full;
        test.episodes.erase(test.episodes.begin(),
                            test.episodes.begin() + static_cast<std::ptrdiff_t>(c.episodes));
        ensure_parent_dir(c.test_out_path);
        io::save_ensemble(test, c.test_out_path, synth_provenance(spec) + " [test split]");
        std::cout << "synth: wrote " << test.size() << " test episodes to " << c.test_out_path << '\n';
    }
    return 0;
}

int cmd_fit(const RunConfig& c) {
    if (c.model_path.empty()) fail("--model output path is required");
    TrainingData data = prepare_training(c, false);
    const std::size_t k = data.train.size();
    const std::size_t rank = resolve_rank(c.rank, k);
    const WeightVector weights = load_weights(c.weights_path, data.train.horizon.dof);

    const STPModel model = fit(data.train, rank, weights, data.mean);
    ensure_parent_dir(c.model_path);
    io::save_model(model, c.model_path);
    std::cout << "fit: k=" << k << " rank=" << rank << " effective=" << model.rank
              << " -> " << c.model_path << '\n';

    if (!c.spectrum_path.empty()) {
        ensure_parent_dir(c.spectrum_path);
        io::export_csv(spectrum_report(model), c.spectrum_path);
    }
    if (!c.test_out_path.empty()) {
        if (!data.test) {
            fail("--test-out requires a series input whose segmentation yields test episodes");
        }
        ensure_parent_dir(c.test_out_path);
        io::save_ensemble(*data.test, c.test_out_path, "stp fit [series test split]");
        std::cout << "fit: wrote " << data.test->size() << " test episodes to "
                  << c.test_out_path << '\n';
    }
    return 0;
}

int cmd_predict(const RunConfig& c) {
    if (c.out_path.empty()) fail("--out is required");
    const STPModel model = io::load_model(c.model_path);
    const Ensemble input = io::load_ensemble(c.data_path);
    if (input.horizon.hindcast_steps != model.horizon.hindcast_steps ||
        input.horizon.dof != model.horizon.dof) {
        std::ostringstream os;
        os << "horizon mismatch: model expects hindcasts with n=" << model.horizon.hindcast_steps
           << ", p=" << model.horizon.dof << "; data has n=" << input.horizon.hindcast_steps
           << ", p=" << input.horizon.dof;
        fail(os.str());
    }

    const bool raw = !input.centered;
    const bool add_mean = c.force_add_mean ? true : (c.force_no_add_mean ? false : raw);
    const auto np = static_cast<Eigen::Index>(model.horizon.hindcast_size());

    io::PredictionSet set;
    set.horizon = model.horizon;
    set.rank = model.rank;
    set.predictions.reserve(input.size());
    for (const Episode& ep : input.episodes) {
        const Eigen::Map<const Vector> hind(ep.values.data(), np);
        set.predictions.push_back(predict(model, hind, PredictOptions{raw, add_mean}));
    }
    ensure_parent_dir(c.out_path);
    io::save_predictions(set, c.out_path);
    std::cout << "predict: " << set.predictions.size() << " trajectories -> " << c.out_path << '\n';
    return 0;
}

int cmd_evaluate(const RunConfig& c) {
    if (c.out_path.empty()) fail("--out is required");
    const STPModel model = io::load_model(c.model_path);
    const Ensemble test = io::load_ensemble(c.data_path);
    if (test.size() == 0) fail("test ensemble is empty");
    check_horizon_match(model.horizon, test.horizon);

    const std::vector<Prediction> predictions = predict_ensemble(model, test);
    const ErrorReport report = error_report(test, predictions);
    ensure_parent_dir(c.out_path);
    io::export_csv(report, c.out_path);

    const auto n = static_cast<Eigen::Index>(report.forecast_start);
    const double hind_mean = report.mean.head(n).mean();
    const double fore_mean = report.mean.tail(report.mean.size() - n).mean();
    std::cout << "evaluate: k_test=" << test.size() << " mean_hindcast_error=" << format_g(hind_mean)
              << " mean_forecast_error=" << format_g(fore_mean) << " -> " << c.out_path << '\n';
    return 0;
}

int cmd_sweep(const RunConfig& c) {
    if (c.out_path.empty()) fail("--out is required");
    if (c.values.empty()) fail("--values must list at least one grid point");
    for (const std::size_t v : c.values) {
        if (v == 0) fail("sweep values must be positive");
    }

    std::vector<SweepRow> rows(c.values.size());
    std::string axis_name;

    if (c.axis == SweepAxis::rank) {
        axis_name = "rank";
        TrainingData data = prepare_training(c, c.test_path.empty());
        Ensemble test;
        if (!c.test_path.empty()) {
            test = io::load_ensemble(c.test_path);
        } else if (data.test) {
            test = std::move(*data.test);
        } else {
            fail("rank sweep needs --test or a series input with a test split");
        }
        const WeightVector weights = load_weights(c.weights_path, data.train.horizon.dof);
        check_horizon_match(data.train.horizon, test.horizon);
        // One full-rank fit; every grid point is a truncation of it.
        const STPModel full = fit(data.train, data.train.size(), weights, data.mean);
        parallel_for(c.values.size(), c.jobs, [&](std::size_t i) {
            const std::size_t rank = std::min(c.values[i], full.rank);
            const STPModel truncated = truncate_model(full, rank);
            const ErrorReport report = error_report(test, predict_ensemble(truncated, test));
            rows[i] = SweepRow{c.values[i], report.forecast_start, report.mean};
        });
    } else if (c.axis == SweepAxis::hindcast) {
        axis_name = "hindcast";
        const std::string type = detect_input_type(c.data_path);
        if (type == "SERIES" || type == "CSV") {
            SnapshotSeries series = load_series_input(type, c.data_path);
            std::optional<MeanField> mean;
            if (!series.centered) {
                auto [centered, temporal_mean] = center_stationary(series);
                series = std::move(centered);
                mean = std::move(temporal_mean);
            }
            parallel_for(c.values.size(), c.jobs, [&](std::size_t i) {
                SegmentationSpec spec{c.values[i], c.forecast_steps, c.stride, c.split_fraction};
                SegmentationResult segmented = segment_stationary(series, spec);
                if (!segmented.test) fail("segmentation produced no test episodes");
                const WeightVector weights = load_weights(c.weights_path, series.dof);
                const std::size_t rank = c.sweep_rank == 0
                    ? segmented.train.size()
                    : std::min(c.sweep_rank, segmented.train.size());
                const STPModel model = fit(segmented.train, rank, weights, mean);
                const ErrorReport report =
                    error_report(*segmented.test, predict_ensemble(model, *segmented.test));
                rows[i] = SweepRow{c.values[i], report.forecast_start, report.mean};
            });
        } else {
            const Ensemble train_raw = io::load_ensemble(c.data_path);
            if (c.test_path.empty()) fail("hindcast sweep on an ensemble needs --test");
            const Ensemble test_raw = io::load_ensemble(c.test_path);
            const std::size_t total = train_raw.horizon.total_steps();
            const SweepMode mode =
                c.mode == SweepMode::automatic ? SweepMode::fixed_total : c.mode;
            parallel_for(c.values.size(), c.jobs, [&](std::size_t i) {
                const std::size_t n_new = c.values[i];
                std::size_t m_new = 0;
                if (mode == SweepMode::fixed_total) {
                    if (n_new >= total) fail("hindcast length must leave at least one forecast step");
                    m_new = total - n_new;
                } else {
                    m_new = c.forecast_steps;
                }
                Ensemble train = reslice_last(train_raw, n_new, m_new);
                Ensemble test = reslice_last(test_raw, n_new, m_new);
                std::optional<MeanField> mean;
                if (!train.centered && train.kind == DataKind::transient) {
                    auto [centered, ensemble_mean_field] = center_transient(train);
                    train = std::move(centered);
                    mean = std::move(ensemble_mean_field);
                }
                const WeightVector weights = load_weights(c.weights_path, train.horizon.dof);
                const std::size_t rank =
                    c.sweep_rank == 0 ? train.size() : std::min(c.sweep_rank, train.size());
                const STPModel model = fit(train, rank, weights, mean);
                const ErrorReport report = error_report(test, predict_ensemble(model, test));
                rows[i] = SweepRow{n_new, report.forecast_start, report.mean};
            });
        }
    } else {
        axis_name = "episodes";
        // Keep the training episodes raw where possible: each subset
        // recomputes its own mean, matching a genuine refit on less data.
        Ensemble train_full;
        std::optional<MeanField> shared_mean;
        Ensemble test;
        const std::string type = detect_input_type(c.data_path);
        if (type == "SERIES" || type == "CSV") {
            TrainingData data = prepare_training(c, c.test_path.empty());
            train_full = std::move(data.train);
            shared_mean = std::move(data.mean);
            if (!c.test_path.empty()) {
                test = io::load_ensemble(c.test_path);
            } else {
                test = std::move(*data.test);
            }
        } else {
            train_full = io::load_ensemble(c.data_path);
            if (c.test_path.empty()) fail("episode sweep on an ensemble needs --test");
            test = io::load_ensemble(c.test_path);
        }
        check_horizon_match(train_full.horizon, test.horizon);
        parallel_for(c.values.size(), c.jobs, [&](std::size_t i) {
            const std::size_t k_sub = c.values[i];
            if (k_sub > train_full.size()) {
                std::ostringstream os;
                os << "sweep value k=" << k_sub << " exceeds the " << train_full.size()
                   << " available training episodes";
                fail(os.str());
            }
            Ensemble subset = train_full;
            subset.episodes.resize(k_sub);
            std::optional<MeanField> mean = shared_mean;
            if (!subset.centered) {
                if (subset.kind == DataKind::transient) {
                    auto [centered, subset_mean] = center_transient(subset);
                    subset = std::move(centered);
                    mean = std::move(subset_mean);
                } else {
                    auto [centered, subset_mean] = center_stationary_ensemble(subset);
                    subset = std::move(centered);
                    mean = std::move(subset_mean);
                }
            }
            const WeightVector weights = load_weights(c.weights_path, subset.horizon.dof);
            const std::size_t rank = c.sweep_rank == 0 ? k_sub : std::min(c.sweep_rank, k_sub);
            const STPModel model = fit(subset, rank, weights, mean);
            const ErrorReport report = error_report(test, predict_ensemble(model, test));
            rows[i] = SweepRow{k_sub, report.forecast_start, report.mean};
        });
    }

    write_sweep_csv(axis_name, rows, c.out_path);
    std::cout << "sweep: axis=" << axis_name << " points=" << c.values.size()
              << " -> " << c.out_path << '\n';
    if (c.axis == SweepAxis::hindcast) {
        std::string optima = c.optima_path;
        if (optima.empty()) {
            fs::path p(c.out_path);
            p.replace_extension();
            optima = p.string() + "_optima.csv";
        }
        write_optima_csv(rows, optima);
        std::cout << "sweep: per-lead optima -> " << optima << '\n';
    }
    return 0;
}

namespace {

void bind_synth(CLI::App& app, RunConfig& c) {
    app.add_option("--kind", c.kind, "Generator kind")
        ->required()
        ->check(CLI::IsMember({"rank_limited", "traveling_wave", "linear_map", "decaying_transient"}));
    app.add_option("--episodes,-k", c.episodes, "Episodes to generate")->capture_default_str();
    app.add_option("--test-episodes", c.test_episodes, "Extra episodes for a test file")
        ->capture_default_str();
    app.add_option("--hindcast,-n", c.hindcast_steps, "Hindcast steps per episode")->capture_default_str();
    app.add_option("--forecast,-m", c.forecast_steps, "Forecast steps per episode")->capture_default_str();
    app.add_option("--dof,-p", c.dof, "Degrees of freedom per snapshot")->capture_default_str();
    app.add_option("--seed", c.seed, "Generator seed")->capture_default_str();
    app.add_option("--rank", c.true_rank, "rank_limited: number of basis vectors")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--length", c.series_length, "traveling_wave: series length in snapshots")
        ->capture_default_str();
    app.add_option("--waves", c.wave_count, "traveling_wave: wave count")->capture_default_str();
    app.add_option("--phase-speed", c.phase_speed, "traveling_wave: phase speed")->capture_default_str();
    app.add_option("--noise", c.noise_amplitude, "Additive noise amplitude")->capture_default_str();
    app.add_option("--noise-corr", c.noise_correlation,
                   "traveling_wave: AR(1) time correlation of the noise")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    app.add_option("--map-kind", c.map_kind, "linear_map: map kind")
        ->check(CLI::IsMember({"random", "zero", "persist"}))
        ->capture_default_str();
    app.add_option("--map-scale", c.map_scale, "linear_map: map scale")->capture_default_str();
    app.add_option("--multipoles", c.multipole_count, "decaying_transient: multipole count")
        ->capture_default_str();
    app.add_option("--perturbation", c.perturbation_amplitude,
                   "decaying_transient: perturbation amplitude")->capture_default_str();
    app.add_option("--decay", c.decay_rate, "decaying_transient: decay rate")->capture_default_str();
    app.add_option("--out,-o", c.out_path, "Output file")->required();
    app.add_option("--test-out", c.test_out_path, "Output file for the test episodes");
}

void bind_fit(CLI::App& app, RunConfig& c) {
    app.add_option("--data", c.data_path, "Training data (ensemble or series file)")
        ->required()
        ->check(CLI::ExistingFile);
    app.add_option("--rank,-r", c.rank, "Retained modes (cavity-flow baseline: 100; 0 = full rank)")
        ->capture_default_str();
    app.add_option("--hindcast,-n", c.hindcast_steps, "Series input: hindcast steps")
        ->capture_default_str();
    app.add_option("--forecast,-m", c.forecast_steps, "Series input: forecast steps")
        ->capture_default_str();
    app.add_option("--stride", c.stride, "Series input: episode start-to-start offset")
        ->capture_default_str();
    app.add_option("--split", c.split_fraction, "Series input: training fraction of episodes")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    app.add_option("--weights", c.weights_path, "Per-dof weight file (defaults to uniform)")
        ->check(CLI::ExistingFile);
    app.add_option("--model,-o", c.model_path, "Output model file")->required();
    app.add_option("--spectrum", c.spectrum_path, "Optional eigenvalue spectrum CSV");
    app.add_option("--test-out", c.test_out_path, "Series input: write held-out test episodes here");
}

void bind_predict(CLI::App& app, RunConfig& c) {
    app.add_option("--model", c.model_path, "Fitted model file")->required()->check(CLI::ExistingFile);
    app.add_option("--data", c.data_path, "Ensemble file providing hindcast windows")
        ->required()
        ->check(CLI::ExistingFile);
    app.add_option("--out,-o", c.out_path, "Output predictions file")->required();
    auto* add = app.add_flag("--add-mean", c.force_add_mean,
                             "Re-add the stored mean to outputs (default: only for uncentered input)");
    app.add_flag("--no-add-mean", c.force_no_add_mean, "Never re-add the stored mean")
        ->excludes(add);
}

void bind_evaluate(CLI::App& app, RunConfig& c) {
    app.add_option("--model", c.model_path, "Fitted model file")->required()->check(CLI::ExistingFile);
    app.add_option("--data", c.data_path, "Test ensemble file")->required()->check(CLI::ExistingFile);
    app.add_option("--out,-o", c.out_path, "Output error CSV")->required();
}

void bind_sweep(CLI::App& app, RunConfig& c) {
    std::map<std::string, SweepAxis> axis_map{{"rank", SweepAxis::rank},
                                              {"hindcast", SweepAxis::hindcast},
                                              {"episodes", SweepAxis::episodes}};
    app.add_option("--axis", c.axis, "Sweep axis (exactly one)")
        ->required()
        ->transform(CLI::CheckedTransformer(axis_map, CLI::ignore_case));
    app.add_option("--values", c.values, "Grid values for the chosen axis")
        ->required()
        ->delimiter(',');
    app.add_option("--data", c.data_path, "Training data (ensemble or series file)")
        ->required()
        ->check(CLI::ExistingFile);
    app.add_option("--test", c.test_path, "Test ensemble (required for ensemble input)")
        ->check(CLI::ExistingFile);
    app.add_option("--rank,-r", c.sweep_rank, "Retained modes for non-rank sweeps (0 = full rank)")
        ->capture_default_str();
    app.add_option("--hindcast,-n", c.hindcast_steps, "Series input: hindcast steps")
        ->capture_default_str();
    app.add_option("--forecast,-m", c.forecast_steps,
                   "Forecast steps (fixed-forecast mode and series segmentation)")
        ->capture_default_str();
    app.add_option("--stride", c.stride, "Series input: segmentation stride")->capture_default_str();
    app.add_option("--split", c.split_fraction, "Series input: training fraction")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    std::map<std::string, SweepMode> mode_map{{"auto", SweepMode::automatic},
                                              {"fixed-total", SweepMode::fixed_total},
                                              {"fixed-forecast", SweepMode::fixed_forecast}};
    app.add_option("--mode", c.mode, "Hindcast sweep: keep n+m fixed or m fixed")
        ->transform(CLI::CheckedTransformer(mode_map, CLI::ignore_case));
    app.add_option("--weights", c.weights_path, "Per-dof weight file")->check(CLI::ExistingFile);
    app.add_option("--jobs", c.jobs, "Worker pool size (0 = hardware concurrency)")
        ->capture_default_str();
    app.add_option("--out,-o", c.out_path, "Output sweep CSV")->required();
    app.add_option("--optima", c.optima_path, "Hindcast sweep: per-lead optimum CSV");
}

} // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"Space-time projection forecasting toolkit"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read flags from a TOML/INI config file");
    app.set_version_flag("--version", std::string("stp 1.0.0"));

    RunConfig config;
    CLI::App* synth_cmd = app.add_subcommand("synth", "Generate a synthetic ensemble or series file");
    bind_synth(*synth_cmd, config);
    CLI::App* fit_cmd = app.add_subcommand("fit", "Fit a space-time projection basis");
    bind_fit(*fit_cmd, config);
    CLI::App* predict_cmd = app.add_subcommand("predict", "Forecast new trajectories with a model");
    bind_predict(*predict_cmd, config);
    CLI::App* evaluate_cmd = app.add_subcommand("evaluate", "Error statistics of a model on test data");
    bind_evaluate(*evaluate_cmd, config);
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "Parameter sweeps with CSV output");
    bind_sweep(*sweep_cmd, config);
    for (CLI::App* sub : {synth_cmd, fit_cmd, predict_cmd, evaluate_cmd, sweep_cmd}) {
        sub->fallthrough(); // lets `stp <cmd> --config file` reach the global option
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (synth_cmd->parsed()) return cmd_synth(config);
        if (fit_cmd->parsed()) return cmd_fit(config);
        if (predict_cmd->parsed()) return cmd_predict(config);
        if (evaluate_cmd->parsed()) return cmd_evaluate(config);
        if (sweep_cmd->parsed()) return cmd_sweep(config);
        std::cerr << "error: no subcommand given\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

int run(int argc, char** argv) {
    std::vector<std::string> args;
    args.reserve(static_cast<std::size_t>(argc > 0 ? argc - 1 : 0));
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args);
}

} // namespace stp::cli
