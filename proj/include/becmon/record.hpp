// record.hpp — homodyne measurement record and its two file forms
//
// The record stores the raw signal increments dI = ⟨Jz⟩dt + γ^{-1/2}dW per
// integration step (the photo current is i(t) = γ·I'(t)/2, a fixed rescale).
// A full parameter snapshot rides along: replaying a record against the
// wrong N, γ or dt would silently break the slaving relationship, so any
// digest mismatch is a hard error at replay time.
//
// Two lossless forms: a CSV (`t,dI` plus a commented header) with shortest
// round-trip doubles, and a compact little-endian binary.

#pragma once

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "becmon/io.hpp"
#include "becmon/model.hpp"

namespace becmon {

struct MeasurementRecord {
    double dt = 0.0; // absolute step (units 1/K)
    std::vector<double> increments;
    std::uint64_t seed = 0;
    ModelParams params;

    double total_time() const { return dt * static_cast<double>(increments.size()); }

    bool compatible_with(const ModelParams& other) const { return params == other; }
};

inline void require_compatible(const MeasurementRecord& record, const ModelParams& params) {
    if (!record.compatible_with(params))
        throw std::invalid_argument(
            "measurement record parameter digest does not match the requested model "
            "(N, u, K, gamma_bar, bias must all agree)");
}

inline constexpr int kRecordFormatVersion = 1;

// --- CSV form ----------------------------------------------------------------

inline void write_record_csv(const MeasurementRecord& record, const std::filesystem::path& path) {
    std::string out;
    out.reserve(record.increments.size() * 28 + 256);
    out += "# becmon measurement record\n";
    out += "# format_version = 1\n";
    out += "# n_particles = " + std::to_string(record.params.n_particles) + "\n";
    out += "# interaction_u = " + io::fmt_double(record.params.interaction_u) + "\n";
    out += "# tunneling_k = " + io::fmt_double(record.params.tunneling_k) + "\n";
    out += "# gamma_bar = " + io::fmt_double(record.params.gamma_bar) + "\n";
    out += "# bias_epsilon = " + io::fmt_double(record.params.bias_epsilon) + "\n";
    out += "# dt = " + io::fmt_double(record.dt) + "\n";
    out += "# seed = " + std::to_string(record.seed) + "\n";
    out += "# length = " + std::to_string(record.increments.size()) + "\n";
    out += "t,dI\n";
    for (std::size_t i = 0; i < record.increments.size(); ++i) {
        out += io::fmt_double(static_cast<double>(i) * record.dt);
        out += ',';
        out += io::fmt_double(record.increments[i]);
        out += '\n';
    }
    io::write_text_file(path, out);
}

inline MeasurementRecord read_record_csv(const std::filesystem::path& path) {
    const std::string text = io::read_text_file(path);
    MeasurementRecord record;
    std::size_t declared_length = 0;
    bool saw_magic = false;
    io::for_each_line(text, [&](std::string_view line) {
        if (line.front() == '#') {
            const auto eq = line.find('=');
            if (eq == std::string_view::npos) {
                if (line.find("becmon measurement record") != std::string_view::npos) saw_magic = true;
                return;
            }
            std::string_view key = line.substr(1, eq - 1);
            std::string_view value = line.substr(eq + 1);
            auto trim = [](std::string_view s) {
                while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
                while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
                return s;
            };
            key = trim(key);
            value = trim(value);
            if (key == "format_version") {
                if (io::parse_u64(value) != kRecordFormatVersion)
                    throw std::runtime_error("read_record_csv: unsupported format version");
            } else if (key == "n_particles") {
                record.params.n_particles = static_cast<int>(io::parse_u64(value));
            } else if (key == "interaction_u") {
                record.params.interaction_u = io::parse_double(value);
            } else if (key == "tunneling_k") {
                record.params.tunneling_k = io::parse_double(value);
            } else if (key == "gamma_bar") {
                record.params.gamma_bar = io::parse_double(value);
            } else if (key == "bias_epsilon") {
                record.params.bias_epsilon = io::parse_double(value);
            } else if (key == "dt") {
                record.dt = io::parse_double(value);
            } else if (key == "seed") {
                record.seed = io::parse_u64(value);
            } else if (key == "length") {
                declared_length = io::parse_u64(value);
            }
            return;
        }
        if (line.substr(0, 2) == "t,") return; // column header
        const auto fields = io::split(line, ',');
        if (fields.size() != 2)
            throw std::runtime_error("read_record_csv: malformed row: " + std::string(line));
        record.increments.push_back(io::parse_double(fields[1]));
    });
    if (!saw_magic) throw std::runtime_error("read_record_csv: not a becmon record: " + path.string());
    if (declared_length != record.increments.size())
        throw std::runtime_error("read_record_csv: declared length does not match row count");
    return record;
}

// --- binary form ---------------------------------------------------------------

namespace detail {
inline constexpr char kRecordMagic[8] = {'B', 'M', 'R', 'E', 'C', 'v', '1', '\0'};

struct RecordBinaryHeader {
    char magic[8];
    std::uint32_t format_version;
    std::uint32_t n_particles;
    double interaction_u;
    double tunneling_k;
    double gamma_bar;
    double bias_epsilon;
    double dt;
    std::uint64_t seed;
    std::uint64_t length;
};
static_assert(sizeof(RecordBinaryHeader) == 8 + 4 + 4 + 5 * 8 + 8 + 8);
} // namespace detail

inline void write_record_binary(const MeasurementRecord& record, const std::filesystem::path& path) {
    detail::RecordBinaryHeader header{};
    std::memcpy(header.magic, detail::kRecordMagic, sizeof(header.magic));
    header.format_version = kRecordFormatVersion;
    header.n_particles = static_cast<std::uint32_t>(record.params.n_particles);
    header.interaction_u = record.params.interaction_u;
    header.tunneling_k = record.params.tunneling_k;
    header.gamma_bar = record.params.gamma_bar;
    header.bias_epsilon = record.params.bias_epsilon;
    header.dt = record.dt;
    header.seed = record.seed;
    header.length = record.increments.size();

    std::vector<char> blob(sizeof(header) + record.increments.size() * sizeof(double));
    std::memcpy(blob.data(), &header, sizeof(header));
    std::memcpy(blob.data() + sizeof(header), record.increments.data(),
                record.increments.size() * sizeof(double));
    io::write_binary_file(path, blob.data(), blob.size());
}

inline MeasurementRecord read_record_binary(const std::filesystem::path& path) {
    const auto blob = io::read_binary_file(path);
    detail::RecordBinaryHeader header{};
    if (blob.size() < sizeof(header))
        throw std::runtime_error("read_record_binary: truncated file: " + path.string());
    std::memcpy(&header, blob.data(), sizeof(header));
    if (std::memcmp(header.magic, detail::kRecordMagic, sizeof(header.magic)) != 0)
        throw std::runtime_error("read_record_binary: not a becmon record: " + path.string());
    if (header.format_version != kRecordFormatVersion)
        throw std::runtime_error("read_record_binary: unsupported format version");
    if (blob.size() != sizeof(header) + header.length * sizeof(double))
        throw std::runtime_error("read_record_binary: length does not match file size");

    MeasurementRecord record;
    record.params.n_particles = static_cast<int>(header.n_particles);
    record.params.interaction_u = header.interaction_u;
    record.params.tunneling_k = header.tunneling_k;
    record.params.gamma_bar = header.gamma_bar;
    record.params.bias_epsilon = header.bias_epsilon;
    record.dt = header.dt;
    record.seed = header.seed;
    record.increments.resize(header.length);
    std::memcpy(record.increments.data(), blob.data() + sizeof(header),
                header.length * sizeof(double));
    return record;
}

// dispatch on extension: .bin/.rec → binary, anything else → CSV
inline MeasurementRecord read_record(const std::filesystem::path& path) {
    const auto ext = path.extension().string();
    if (ext == ".bin" || ext == ".rec") return read_record_binary(path);
    return read_record_csv(path);
}

} // namespace becmon
