// trajectory.hpp — time series of tracked observables along a run

#pragma once

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "becmon/io.hpp"

namespace becmon {

// per-state series; all vectors share the length of TrajectoryLog::times_tr
struct StateSeries {
    std::vector<double> jx, jy, jz;
    std::vector<double> var_jx, var_jy, var_jz;
    std::vector<double> purity;

    bool empty() const { return jz.empty(); }
    std::size_t size() const { return jz.size(); }

    void reserve(std::size_t n) {
        jx.reserve(n); jy.reserve(n); jz.reserve(n);
        var_jx.reserve(n); var_jy.reserve(n); var_jz.reserve(n);
        purity.reserve(n);
    }
};

struct TrajectoryLog {
    std::vector<double> times_tr;   // sample times in Rabi periods
    StateSeries conditioned;        // empty in an estimate-only replay
    StateSeries estimated;          // empty unless an estimator ran
    std::vector<double> fidelity;   // |⟨ψ_e|ψ_c⟩|²; empty without a reference
    std::vector<double> norm_drift; // mean per-step |‖ψ‖-1| before renormalization

    bool has_conditioned() const { return !conditioned.empty(); }
    bool has_estimated() const { return !estimated.empty(); }
    bool has_fidelity() const { return !fidelity.empty(); }
};

namespace detail {
inline void append_series_columns(std::string& header, const char* suffix) {
    for (const char* name : {"jx", "jy", "jz", "var_jx", "var_jy", "var_jz", "purity"}) {
        header += ',';
        header += name;
        header += suffix;
    }
}
} // namespace detail

inline void write_trajectory_csv(const TrajectoryLog& log, const std::filesystem::path& path) {
    std::string out = "t";
    if (log.has_conditioned()) detail::append_series_columns(out, "_c");
    if (log.has_estimated()) detail::append_series_columns(out, "_e");
    if (log.has_fidelity()) out += ",fidelity";
    out += ",norm_drift\n";

    auto append_series_row = [&out](const StateSeries& s, std::size_t i) {
        for (const std::vector<double>* col :
             {&s.jx, &s.jy, &s.jz, &s.var_jx, &s.var_jy, &s.var_jz, &s.purity}) {
            out += ',';
            out += io::fmt_double((*col)[i]);
        }
    };
    for (std::size_t i = 0; i < log.times_tr.size(); ++i) {
        out += io::fmt_double(log.times_tr[i]);
        if (log.has_conditioned()) append_series_row(log.conditioned, i);
        if (log.has_estimated()) append_series_row(log.estimated, i);
        if (log.has_fidelity()) {
            out += ',';
            out += io::fmt_double(log.fidelity[i]);
        }
        out += ',';
        out += io::fmt_double(log.norm_drift[i]);
        out += '\n';
    }
    io::write_text_file(path, out);
}

inline TrajectoryLog read_trajectory_csv(const std::filesystem::path& path) {
    const std::string text = io::read_text_file(path);
    TrajectoryLog log;
    std::vector<std::string> columns;
    io::for_each_line(text, [&](std::string_view line) {
        const auto fields = io::split(line, ',');
        if (columns.empty()) {
            for (const auto f : fields) columns.emplace_back(f);
            if (columns.empty() || columns.front() != "t")
                throw std::runtime_error("read_trajectory_csv: missing 't' column");
            return;
        }
        if (fields.size() != columns.size())
            throw std::runtime_error("read_trajectory_csv: ragged row");
        for (std::size_t c = 0; c < columns.size(); ++c) {
            const double v = io::parse_double(fields[c]);
            const std::string& name = columns[c];
            if (name == "t") log.times_tr.push_back(v);
            else if (name == "jx_c") log.conditioned.jx.push_back(v);
            else if (name == "jy_c") log.conditioned.jy.push_back(v);
            else if (name == "jz_c") log.conditioned.jz.push_back(v);
            else if (name == "var_jx_c") log.conditioned.var_jx.push_back(v);
            else if (name == "var_jy_c") log.conditioned.var_jy.push_back(v);
            else if (name == "var_jz_c") log.conditioned.var_jz.push_back(v);
            else if (name == "purity_c") log.conditioned.purity.push_back(v);
            else if (name == "jx_e") log.estimated.jx.push_back(v);
            else if (name == "jy_e") log.estimated.jy.push_back(v);
            else if (name == "jz_e") log.estimated.jz.push_back(v);
            else if (name == "var_jx_e") log.estimated.var_jx.push_back(v);
            else if (name == "var_jy_e") log.estimated.var_jy.push_back(v);
            else if (name == "var_jz_e") log.estimated.var_jz.push_back(v);
            else if (name == "purity_e") log.estimated.purity.push_back(v);
            else if (name == "fidelity") log.fidelity.push_back(v);
            else if (name == "norm_drift") log.norm_drift.push_back(v);
            else throw std::runtime_error("read_trajectory_csv: unknown column " + name);
        }
    });
    return log;
}

} // namespace becmon
