// state_io.hpp — CSV form of a pure state (m, re, im), lossless round-trip

#pragma once

#include <filesystem>
#include <string>

#include "becmon/io.hpp"
#include "becmon/state.hpp"

namespace becmon {

inline void write_state_csv(const QuantumState& state, const std::filesystem::path& path) {
    std::string out;
    out += "# becmon quantum state\n";
    out += "# format_version = 1\n";
    out += "# n_particles = " + std::to_string(state.n_particles()) + "\n";
    out += "m,re,im\n";
    const double j = state.j();
    for (Eigen::Index i = 0; i < state.dim(); ++i) {
        out += io::fmt_double(static_cast<double>(i) - j);
        out += ',';
        out += io::fmt_double(state.amplitudes(i).real());
        out += ',';
        out += io::fmt_double(state.amplitudes(i).imag());
        out += '\n';
    }
    io::write_text_file(path, out);
}

inline QuantumState read_state_csv(const std::filesystem::path& path) {
    const std::string text = io::read_text_file(path);
    int n_particles = -1;
    std::vector<Complex> amplitudes;
    bool saw_magic = false;
    io::for_each_line(text, [&](std::string_view line) {
        if (line.front() == '#') {
            if (line.find("becmon quantum state") != std::string_view::npos) saw_magic = true;
            const auto eq = line.find('=');
            if (eq != std::string_view::npos &&
                line.substr(0, eq).find("n_particles") != std::string_view::npos)
                n_particles = static_cast<int>(io::parse_u64(line.substr(eq + 1)));
            return;
        }
        if (line.substr(0, 2) == "m,") return;
        const auto fields = io::split(line, ',');
        if (fields.size() != 3)
            throw std::runtime_error("read_state_csv: malformed row: " + std::string(line));
        amplitudes.emplace_back(io::parse_double(fields[1]), io::parse_double(fields[2]));
    });
    if (!saw_magic) throw std::runtime_error("read_state_csv: not a becmon state: " + path.string());
    if (n_particles < 0 || amplitudes.size() != static_cast<std::size_t>(n_particles) + 1)
        throw std::runtime_error("read_state_csv: header/row-count mismatch");
    QuantumState state;
    state.amplitudes = Eigen::Map<const Vector>(amplitudes.data(),
                                                static_cast<Eigen::Index>(amplitudes.size()));
    return state;
}

} // namespace becmon
