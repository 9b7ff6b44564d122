#include "stp/io.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace stp::io {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::filesystem::path& path, const std::string& msg) {
    throw std::runtime_error(path.string() + ": " + msg);
}

std::array<std::uint32_t, 256> make_crc_table() {
    std::array<std::uint32_t, 256> table{};
    for (std::uint32_t i = 0; i < 256; ++i) {
        std::uint32_t c = i;
        for (int bit = 0; bit < 8; ++bit) {
            c = (c & 1u) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
        }
        table[i] = c;
    }
    return table;
}

// A block of doubles destined for (or read from) the payload section.
struct Block {
    double* data = nullptr;
    std::size_t count = 0;
};

constexpr std::size_t kChunkDoubles = 8192;

void to_little_endian(const double* src, std::size_t count, unsigned char* dst) {
    std::memcpy(dst, src, count * sizeof(double));
    if constexpr (std::endian::native == std::endian::big) {
        for (std::size_t i = 0; i < count; ++i) {
            std::reverse(dst + i * 8, dst + (i + 1) * 8);
        }
    }
}

void from_little_endian(const unsigned char* src, std::size_t count, double* dst) {
    std::memcpy(dst, src, count * sizeof(double));
    if constexpr (std::endian::native == std::endian::big) {
        auto* bytes = reinterpret_cast<unsigned char*>(dst);
        for (std::size_t i = 0; i < count; ++i) {
            std::reverse(bytes + i * 8, bytes + (i + 1) * 8);
        }
    }
}

std::size_t payload_bytes(const std::vector<Block>& blocks) {
    std::size_t total = 0;
    for (const Block& b : blocks) total += b.count;
    return total * sizeof(double);
}

std::uint32_t payload_crc(const std::vector<Block>& blocks) {
    std::array<unsigned char, kChunkDoubles * sizeof(double)> buffer;
    std::uint32_t crc = 0;
    for (const Block& b : blocks) {
        std::size_t done = 0;
        while (done < b.count) {
            const std::size_t chunk = std::min(kChunkDoubles, b.count - done);
            to_little_endian(b.data + done, chunk, buffer.data());
            crc = crc32(buffer.data(), chunk * sizeof(double), crc);
            done += chunk;
        }
    }
    return crc;
}

void write_file(const std::filesystem::path& path, const std::string& type,
                json header, const std::vector<Block>& blocks) {
    header["payload_bytes"] = payload_bytes(blocks);
    header["payload_crc32"] = payload_crc(blocks);
    const std::string header_text = header.dump();

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(path, "cannot open for writing");
    out << kFormatVersion << ' ' << type << ' ' << header_text.size() << '\n';
    out.write(header_text.data(), static_cast<std::streamsize>(header_text.size()));

    std::array<unsigned char, kChunkDoubles * sizeof(double)> buffer;
    for (const Block& b : blocks) {
        std::size_t done = 0;
        while (done < b.count) {
            const std::size_t chunk = std::min(kChunkDoubles, b.count - done);
            to_little_endian(b.data + done, chunk, buffer.data());
            out.write(reinterpret_cast<const char*>(buffer.data()),
                      static_cast<std::streamsize>(chunk * sizeof(double)));
            done += chunk;
        }
    }
    if (!out) fail(path, "write failed");
}

json read_header(std::ifstream& in, const std::filesystem::path& path, const std::string& want_type) {
    std::string magic, type;
    std::size_t header_size = 0;
    if (!(in >> magic >> type >> header_size)) fail(path, "not an STP1 file (bad magic line)");
    if (magic != kFormatVersion) {
        fail(path, "unsupported format version '" + magic + "' (expected " + kFormatVersion + ")");
    }
    if (type != want_type) {
        fail(path, "file holds " + type + " data, expected " + want_type);
    }
    in.get(); // consume the newline after the magic line
    std::string header_text(header_size, '\0');
    in.read(header_text.data(), static_cast<std::streamsize>(header_size));
    if (!in) fail(path, "truncated header");
    try {
        return json::parse(header_text);
    } catch (const json::exception& e) {
        fail(path, std::string("invalid header: ") + e.what());
    }
}

void read_payload(std::ifstream& in, const std::filesystem::path& path,
                  const json& header, const std::vector<Block>& blocks) {
    const auto expected_bytes = header.at("payload_bytes").get<std::size_t>();
    const auto expected_crc = header.at("payload_crc32").get<std::uint32_t>();
    if (expected_bytes != payload_bytes(blocks)) {
        std::ostringstream os;
        os << "header payload size " << expected_bytes << " bytes does not match the "
           << payload_bytes(blocks) << " bytes implied by its metadata";
        fail(path, os.str());
    }

    std::array<unsigned char, kChunkDoubles * sizeof(double)> buffer;
    std::uint32_t crc = 0;
    std::size_t bytes_read = 0;
    for (const Block& b : blocks) {
        std::size_t done = 0;
        while (done < b.count) {
            const std::size_t chunk = std::min(kChunkDoubles, b.count - done);
            in.read(reinterpret_cast<char*>(buffer.data()),
                    static_cast<std::streamsize>(chunk * sizeof(double)));
            bytes_read += static_cast<std::size_t>(in.gcount());
            if (!in) {
                std::ostringstream os;
                os << "truncated payload: expected " << expected_bytes << " bytes, got " << bytes_read;
                fail(path, os.str());
            }
            crc = crc32(buffer.data(), chunk * sizeof(double), crc);
            from_little_endian(buffer.data(), chunk, b.data + done);
            done += chunk;
        }
    }
    if (in.peek() != std::ifstream::traits_type::eof()) {
        fail(path, "trailing bytes after payload");
    }
    if (crc != expected_crc) {
        std::ostringstream os;
        os << "payload checksum mismatch: header records " << expected_crc << ", payload has " << crc;
        fail(path, os.str());
    }
}

std::string format_double(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

} // namespace

std::uint32_t crc32(const void* data, std::size_t bytes, std::uint32_t seed) {
    static const std::array<std::uint32_t, 256> table = make_crc_table();
    std::uint32_t crc = seed ^ 0xFFFFFFFFu;
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < bytes; ++i) {
        crc = table[(crc ^ p[i]) & 0xFFu] ^ (crc >> 8);
    }
    return crc ^ 0xFFFFFFFFu;
}

void save_ensemble(const Ensemble& ensemble, const std::filesystem::path& path,
                   const std::string& provenance) {
    validate_ensemble(ensemble);
    json header;
    header["kind"] = to_string(ensemble.kind);
    header["centered"] = ensemble.centered;
    header["episodes"] = ensemble.size();
    header["hindcast_steps"] = ensemble.horizon.hindcast_steps;
    header["forecast_steps"] = ensemble.horizon.forecast_steps;
    header["dof"] = ensemble.horizon.dof;
    if (ensemble.episodes.front().times) {
        header["times"] = *ensemble.episodes.front().times;
    }
    if (!provenance.empty()) header["provenance"] = provenance;

    std::vector<Block> blocks;
    blocks.reserve(ensemble.size());
    for (const Episode& ep : ensemble.episodes) {
        blocks.push_back({const_cast<double*>(ep.values.data()), ep.values.size()});
    }
    write_file(path, "ENSEMBLE", std::move(header), blocks);
}

Ensemble load_ensemble(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(path, "cannot open for reading");
    const json header = read_header(in, path, "ENSEMBLE");

    Ensemble ensemble;
    try {
        ensemble.kind = data_kind_from_string(header.at("kind").get<std::string>());
        ensemble.centered = header.at("centered").get<bool>();
        ensemble.horizon = HorizonSpec{header.at("hindcast_steps").get<std::size_t>(),
                                       header.at("forecast_steps").get<std::size_t>(),
                                       header.at("dof").get<std::size_t>()};
        const auto k = header.at("episodes").get<std::size_t>();
        std::optional<std::vector<double>> times;
        if (header.contains("times")) {
            times = header.at("times").get<std::vector<double>>();
        }
        ensemble.episodes.resize(k);
        for (Episode& ep : ensemble.episodes) {
            ep.values.resize(ensemble.horizon.episode_size());
            ep.times = times;
        }
    } catch (const json::exception& e) {
        fail(path, std::string("invalid header field: ") + e.what());
    }

    std::vector<Block> blocks;
    blocks.reserve(ensemble.size());
    for (Episode& ep : ensemble.episodes) {
        blocks.push_back({ep.values.data(), ep.values.size()});
    }
    read_payload(in, path, header, blocks);
    validate_ensemble(ensemble);
    return ensemble;
}

void save_series(const SnapshotSeries& series, const std::filesystem::path& path,
                 const std::string& provenance) {
    if (series.dof == 0 || series.values.size() % series.dof != 0) {
        throw std::invalid_argument("series shape is inconsistent with its dof");
    }
    json header;
    header["dof"] = series.dof;
    header["length"] = series.size();
    header["centered"] = series.centered;
    if (series.times) header["times"] = *series.times;
    if (!provenance.empty()) header["provenance"] = provenance;

    std::vector<Block> blocks{{const_cast<double*>(series.values.data()), series.values.size()}};
    write_file(path, "SERIES", std::move(header), blocks);
}

SnapshotSeries load_series(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(path, "cannot open for reading");
    const json header = read_header(in, path, "SERIES");

    SnapshotSeries series;
    try {
        series.dof = header.at("dof").get<std::size_t>();
        series.centered = header.at("centered").get<bool>();
        const auto length = header.at("length").get<std::size_t>();
        series.values.resize(length * series.dof);
        if (header.contains("times")) {
            series.times = header.at("times").get<std::vector<double>>();
        }
    } catch (const json::exception& e) {
        fail(path, std::string("invalid header field: ") + e.what());
    }
    std::vector<Block> blocks{{series.values.data(), series.values.size()}};
    read_payload(in, path, header, blocks);
    return series;
}

void save_model(const STPModel& model, const std::filesystem::path& path) {
    model.validate();
    json header;
    header["hindcast_steps"] = model.horizon.hindcast_steps;
    header["forecast_steps"] = model.horizon.forecast_steps;
    header["dof"] = model.horizon.dof;
    header["rank"] = model.rank;
    header["k_train"] = model.k_train;
    header["total_variance"] = model.total_variance;
    header["mean_kind"] = model.mean ? to_string(model.mean->kind) : "none";
    header["weights_uniform"] = model.weights.is_uniform();

    std::vector<Block> blocks;
    blocks.push_back({const_cast<double*>(model.eigenvalues.data()),
                      static_cast<std::size_t>(model.eigenvalues.size())});
    blocks.push_back({const_cast<double*>(model.modes.data()),
                      static_cast<std::size_t>(model.modes.size())});
    if (model.mean) {
        blocks.push_back({const_cast<double*>(model.mean->values.data()),
                          static_cast<std::size_t>(model.mean->values.size())});
    }
    blocks.push_back({const_cast<double*>(model.weights.values.data()),
                      static_cast<std::size_t>(model.weights.values.size())});
    write_file(path, "MODEL", std::move(header), blocks);
}

STPModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(path, "cannot open for reading");
    const json header = read_header(in, path, "MODEL");

    STPModel model;
    try {
        model.horizon = HorizonSpec{header.at("hindcast_steps").get<std::size_t>(),
                                    header.at("forecast_steps").get<std::size_t>(),
                                    header.at("dof").get<std::size_t>()};
        model.rank = header.at("rank").get<std::size_t>();
        model.k_train = header.at("k_train").get<std::size_t>();
        model.total_variance = header.at("total_variance").get<double>();
        const auto mean_kind = header.at("mean_kind").get<std::string>();
        model.eigenvalues.resize(static_cast<Eigen::Index>(model.rank));
        model.modes.resize(static_cast<Eigen::Index>(model.horizon.episode_size()),
                           static_cast<Eigen::Index>(model.rank));
        model.weights.values.resize(static_cast<Eigen::Index>(model.horizon.dof));
        if (mean_kind != "none") {
            MeanField mean;
            mean.kind = mean_kind_from_string(mean_kind);
            mean.values.resize(static_cast<Eigen::Index>(
                mean.kind == MeanKind::ensemble_mean ? model.horizon.episode_size()
                                                     : model.horizon.dof));
            model.mean = std::move(mean);
        }
    } catch (const json::exception& e) {
        fail(path, std::string("invalid header field: ") + e.what());
    }

    std::vector<Block> blocks;
    blocks.push_back({model.eigenvalues.data(), static_cast<std::size_t>(model.eigenvalues.size())});
    blocks.push_back({model.modes.data(), static_cast<std::size_t>(model.modes.size())});
    if (model.mean) {
        blocks.push_back({model.mean->values.data(), static_cast<std::size_t>(model.mean->values.size())});
    }
    blocks.push_back({model.weights.values.data(), static_cast<std::size_t>(model.weights.values.size())});
    read_payload(in, path, header, blocks);

    try {
        model.validate();
    } catch (const std::exception& e) {
        fail(path, std::string("loaded model violates an invariant: ") + e.what());
    }
    return model;
}

void save_predictions(const PredictionSet& set, const std::filesystem::path& path) {
    set.horizon.validate();
    json header;
    header["episodes"] = set.predictions.size();
    header["hindcast_steps"] = set.horizon.hindcast_steps;
    header["forecast_steps"] = set.horizon.forecast_steps;
    header["dof"] = set.horizon.dof;
    header["rank"] = set.rank;
    bool mean_added = !set.predictions.empty() && set.predictions.front().mean_added;

    std::vector<Block> blocks;
    for (const Prediction& pr : set.predictions) {
        if (pr.coefficients.size() != static_cast<Eigen::Index>(set.rank) ||
            pr.hindcast.size() != static_cast<Eigen::Index>(set.horizon.hindcast_size()) ||
            pr.forecast.size() != static_cast<Eigen::Index>(set.horizon.forecast_size()) ||
            pr.mean_added != mean_added) {
            throw std::invalid_argument("prediction set is not homogeneous");
        }
        blocks.push_back({const_cast<double*>(pr.coefficients.data()),
                          static_cast<std::size_t>(pr.coefficients.size())});
        blocks.push_back({const_cast<double*>(pr.hindcast.data()),
                          static_cast<std::size_t>(pr.hindcast.size())});
        blocks.push_back({const_cast<double*>(pr.forecast.data()),
                          static_cast<std::size_t>(pr.forecast.size())});
    }
    header["mean_added"] = mean_added;
    write_file(path, "PREDICTIONS", std::move(header), blocks);
}

PredictionSet load_predictions(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(path, "cannot open for reading");
    const json header = read_header(in, path, "PREDICTIONS");

    PredictionSet set;
    bool mean_added = false;
    try {
        set.horizon = HorizonSpec{header.at("hindcast_steps").get<std::size_t>(),
                                  header.at("forecast_steps").get<std::size_t>(),
                                  header.at("dof").get<std::size_t>()};
        set.rank = header.at("rank").get<std::size_t>();
        mean_added = header.at("mean_added").get<bool>();
        set.predictions.resize(header.at("episodes").get<std::size_t>());
    } catch (const json::exception& e) {
        fail(path, std::string("invalid header field: ") + e.what());
    }

    std::vector<Block> blocks;
    for (Prediction& pr : set.predictions) {
        pr.mean_added = mean_added;
        pr.coefficients.resize(static_cast<Eigen::Index>(set.rank));
        pr.hindcast.resize(static_cast<Eigen::Index>(set.horizon.hindcast_size()));
        pr.forecast.resize(static_cast<Eigen::Index>(set.horizon.forecast_size()));
        blocks.push_back({pr.coefficients.data(), static_cast<std::size_t>(pr.coefficients.size())});
        blocks.push_back({pr.hindcast.data(), static_cast<std::size_t>(pr.hindcast.size())});
        blocks.push_back({pr.forecast.data(), static_cast<std::size_t>(pr.forecast.size())});
    }
    read_payload(in, path, header, blocks);
    return set;
}

std::string probe_type(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(path, "cannot open for reading");
    std::string magic, type;
    if (!(in >> magic >> type) || magic != kFormatVersion) {
        fail(path, "not an STP1 file");
    }
    return type;
}

void export_csv(const ErrorReport& report, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) fail(path, "cannot open for writing");

    out << "# forecast_start_index," << report.forecast_start << '\n';
    const bool with_std = report.stddev.has_value();
    if (!with_std) {
        out << "# warning,std omitted: fewer than two episodes\n";
    }
    out << "index,mean";
    if (with_std) out << ",std";
    for (std::size_t j = 0; j < report.episodes(); ++j) {
        char label[24];
        std::snprintf(label, sizeof(label), ",e_%03zu", j);
        out << label;
    }
    out << '\n';
    for (std::size_t i = 0; i < report.steps(); ++i) {
        out << i << ',' << format_double(report.mean(static_cast<Eigen::Index>(i)));
        if (with_std) {
            out << ',' << format_double((*report.stddev)(static_cast<Eigen::Index>(i)));
        }
        for (std::size_t j = 0; j < report.episodes(); ++j) {
            out << ',' << format_double(report.per_episode(static_cast<Eigen::Index>(j),
                                                           static_cast<Eigen::Index>(i)));
        }
        out << '\n';
    }
    if (!out) fail(path, "write failed");
}

void export_csv(const SpectrumReport& report, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) fail(path, "cannot open for writing");
    out << "index,eigenvalue,cumulative_fraction\n";
    for (Eigen::Index i = 0; i < report.eigenvalues.size(); ++i) {
        out << (i + 1) << ',' << format_double(report.eigenvalues(i)) << ','
            << format_double(report.cumulative_fraction(i)) << '\n';
    }
    if (!out) fail(path, "write failed");
}

SnapshotSeries load_series_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(path, "cannot open for reading");

    SnapshotSeries series;
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line[0] == '#') continue;
        std::vector<double> snapshot;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                snapshot.push_back(std::stod(cell));
            } catch (const std::exception&) {
                std::ostringstream os;
                os << "row " << row << ": cannot parse '" << cell << "' as a number";
                fail(path, os.str());
            }
        }
        if (snapshot.empty()) continue;
        if (series.dof == 0) {
            series.dof = snapshot.size();
        } else if (snapshot.size() != series.dof) {
            std::ostringstream os;
            os << "row " << row << " has " << snapshot.size() << " columns, expected " << series.dof;
            fail(path, os.str());
        }
        series.values.insert(series.values.end(), snapshot.begin(), snapshot.end());
    }
    if (series.values.empty()) fail(path, "no data rows");
    return series;
}

} // namespace stp::io
