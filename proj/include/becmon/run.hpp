// run.hpp — single-experiment orchestration: run directory, manifest, plot data
//
// A run directory is a self-contained audit trail: config snapshot, the full
// measurement record in both forms, the observable log, any Wigner snapshots
// with the states they were computed from, and a manifest. Reruns of the same
// config and seed regenerate every artifact byte-identically (no timestamps,
// shortest round-trip number formatting).

#pragma once

#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "becmon/config.hpp"
#include "becmon/gpe.hpp"
#include "becmon/io.hpp"
#include "becmon/record.hpp"
#include "becmon/sse.hpp"
#include "becmon/state_io.hpp"
#include "becmon/trajectory.hpp"
#include "becmon/version.hpp"
#include "becmon/wigner.hpp"

namespace becmon::harness {

// output root: $BECMON_OUTPUT_ROOT (if set) anchors relative directories
inline std::filesystem::path resolve_output_dir(const std::string& dir) {
    std::filesystem::path p(dir);
    if (p.is_absolute()) return p;
    if (const char* root = std::getenv("BECMON_OUTPUT_ROOT"); root && *root)
        return std::filesystem::path(root) / p;
    return p;
}

struct RunResult {
    TrajectoryLog log;
    MeasurementRecord record;
    std::vector<double> wigner_times_tr;
    std::vector<QuantumState> wigner_states;   // conditioned states at those times
    std::vector<WignerGrid> wigner_grids;
    std::filesystem::path run_dir;             // empty when not persisted
};

namespace detail {

inline std::string time_tag(double t_tr) { return io::fmt_double(t_tr); }

inline void write_manifest(const std::filesystem::path& dir, const ExperimentConfig& config,
                           const std::vector<std::uint64_t>& seeds,
                           const std::vector<std::string>& artifacts) {
    nlohmann::ordered_json m;
    m["format"] = "becmon-manifest";
    m["format_version"] = kManifestFormatVersion;
    m["code_version"] = kVersion;
    m["seeds"] = seeds;
    m["config_file"] = "config.json";
    m["format_versions"] = {{"config", kConfigFormatVersion},
                            {"record", kRecordFormatVersion},
                            {"trajectory", kTrajectoryFormatVersion},
                            {"wigner", kWignerFormatVersion}};
    m["artifacts"] = artifacts;
    (void)config;
    io::write_text_file(dir / "manifest.json", m.dump(2) + "\n");
}

} // namespace detail

inline RunResult run_experiment(const ExperimentConfig& config) {
    config.validate();
    const int n = config.model.n_particles;
    const QuantumState initial = make_initial_state(config.initial_state, n, config.seed);
    std::optional<QuantumState> estimate;
    if (config.estimator_enabled)
        estimate = make_initial_state(config.estimator_initial, n, config.seed);

    SseOptions opts;
    opts.t_final_tr = config.t_final_tr;
    opts.dt_tr = config.dt_tr;
    opts.sample_interval_tr = config.sample_interval_tr;
    opts.seed = config.seed;
    opts.store_snapshots = !config.wigner_times_tr.empty();

    JointRun joint = propagate_with_estimator(initial, estimate ? &*estimate : nullptr,
                                              config.model, opts);

    RunResult result;
    result.log = std::move(joint.log);
    result.record = std::move(joint.record);
    for (double t : config.wigner_times_tr) {
        const auto idx = static_cast<std::size_t>(std::llround(t / config.sample_interval_tr));
        const QuantumState& state = joint.snapshots_conditioned.at(idx);
        result.wigner_times_tr.push_back(t);
        result.wigner_states.push_back(state);
        result.wigner_grids.push_back(
            wigner_function(state, WignerGridSpec{config.wigner_n_theta, config.wigner_n_phi}));
    }

    if (!config.output_dir.empty()) {
        const auto dir = resolve_output_dir(config.output_dir);
        std::filesystem::create_directories(dir);
        std::vector<std::string> artifacts;
        config.save(dir / "config.json");
        artifacts.push_back("config.json");
        write_record_csv(result.record, dir / "record.csv");
        write_record_binary(result.record, dir / "record.bin");
        artifacts.push_back("record.csv");
        artifacts.push_back("record.bin");
        write_trajectory_csv(result.log, dir / "trajectory.csv");
        artifacts.push_back("trajectory.csv");
        for (std::size_t i = 0; i < result.wigner_times_tr.size(); ++i) {
            const std::string tag = detail::time_tag(result.wigner_times_tr[i]);
            write_state_csv(result.wigner_states[i], dir / ("state_t" + tag + ".csv"));
            write_wigner_csv(result.wigner_grids[i], dir / ("wigner_t" + tag + ".csv"));
            write_wigner_binary(result.wigner_grids[i], dir / ("wigner_t" + tag + ".json"),
                                dir / ("wigner_t" + tag + ".f64"));
            artifacts.push_back("state_t" + tag + ".csv");
            artifacts.push_back("wigner_t" + tag + ".csv");
            artifacts.push_back("wigner_t" + tag + ".json");
            artifacts.push_back("wigner_t" + tag + ".f64");
        }
        detail::write_manifest(dir, config, {config.seed}, artifacts);
        result.run_dir = dir;
    }
    return result;
}

// --- plot-ready exports ----------------------------------------------------------

// Flattens a completed run directory into plotdata/: a timeseries CSV, Bloch
// polylines for the quantum paths, a mean-field phase portrait for the run's
// u, and a schema sidecar describing every column.
inline void emit_plot_data(const std::filesystem::path& run_dir) {
    if (!std::filesystem::exists(run_dir / "config.json") ||
        !std::filesystem::exists(run_dir / "trajectory.csv"))
        throw std::runtime_error("emit_plot_data: " + run_dir.string() +
                                 " is not a completed run directory");
    const ExperimentConfig config = ExperimentConfig::load(run_dir / "config.json");
    const TrajectoryLog log = read_trajectory_csv(run_dir / "trajectory.csv");
    const auto out = run_dir / "plotdata";
    std::filesystem::create_directories(out);

    nlohmann::ordered_json schema;
    schema["format"] = "becmon-plotdata-schema";
    schema["format_version"] = 1;
    schema["time_unit"] = "Rabi periods t_R = 2*pi/K";

    // time series
    {
        const bool est = log.has_estimated();
        std::string csv = est ? "t,jz_c,jz_e,fidelity,purity,purity_e\n" : "t,jz_c,purity\n";
        for (std::size_t i = 0; i < log.times_tr.size(); ++i) {
            csv += io::fmt_double(log.times_tr[i]);
            csv += ',' + io::fmt_double(log.conditioned.jz[i]);
            if (est) {
                csv += ',' + io::fmt_double(log.estimated.jz[i]);
                csv += ',' + io::fmt_double(log.fidelity[i]);
            }
            csv += ',' + io::fmt_double(log.conditioned.purity[i]);
            if (est) csv += ',' + io::fmt_double(log.estimated.purity[i]);
            csv += '\n';
        }
        io::write_text_file(out / "timeseries.csv", csv);
        schema["files"]["timeseries.csv"] = {
            {"t", "sample time"},
            {"jz_c", "population imbalance of the conditioned state"},
            {"jz_e", "population imbalance of the estimate (if present)"},
            {"fidelity", "|<psi_e|psi_c>|^2 (if present)"},
            {"purity", "one-body purity of the conditioned state"},
            {"purity_e", "one-body purity of the estimate (if present)"}};
    }

    // Bloch-sphere polylines s = (2/N)<J>
    const double scale = 2.0 / static_cast<double>(config.model.n_particles);
    auto write_path = [&](const StateSeries& series, const std::string& name) {
        std::string csv = "t,sx,sy,sz\n";
        for (std::size_t i = 0; i < log.times_tr.size(); ++i) {
            csv += io::fmt_double(log.times_tr[i]);
            csv += ',' + io::fmt_double(scale * series.jx[i]);
            csv += ',' + io::fmt_double(scale * series.jy[i]);
            csv += ',' + io::fmt_double(scale * series.jz[i]);
            csv += '\n';
        }
        io::write_text_file(out / name, csv);
        schema["files"][name] = {{"t", "sample time"},
                                 {"sx,sy,sz", "single-particle Bloch vector components"}};
    };
    write_path(log.conditioned, "bloch_path_conditioned.csv");
    if (log.has_estimated()) write_path(log.estimated, "bloch_path_estimated.csv");

    // mean-field phase portrait behind the Bloch paths
    {
        std::vector<BlochState> initials;
        for (int i = 0; i < 12; ++i) {
            const double theta = kPi * (static_cast<double>(i) + 0.5) / 12.0;
            initials.push_back(BlochState{std::sin(theta), 0.0, std::cos(theta)});
        }
        const auto portrait = gpe_phase_portrait(config.model.interaction_u, initials,
                                                 3.0 * 2.0 * kPi, 1e-3 * 2.0 * kPi, 10);
        std::string csv = "trajectory_id,t,sx,sy,sz\n";
        for (std::size_t id = 0; id < portrait.size(); ++id)
            for (std::size_t i = 0; i < portrait[id].times.size(); ++i) {
                csv += std::to_string(id);
                csv += ',' + io::fmt_double(portrait[id].times[i] / (2.0 * kPi)); // → t_R
                csv += ',' + io::fmt_double(portrait[id].states[i].sx);
                csv += ',' + io::fmt_double(portrait[id].states[i].sy);
                csv += ',' + io::fmt_double(portrait[id].states[i].sz);
                csv += '\n';
            }
        io::write_text_file(out / "gpe_portrait.csv", csv);
        schema["files"]["gpe_portrait.csv"] = {
            {"trajectory_id", "mean-field orbit index"},
            {"t", "sample time"},
            {"sx,sy,sz", "mean-field Bloch vector on the unit sphere"}};
    }

    // reference the Wigner grids already written at run time
    std::vector<std::string> wigner_files;
    for (const auto& entry : std::filesystem::directory_iterator(run_dir)) {
        const auto name = entry.path().filename().string();
        if (name.rfind("wigner_t", 0) == 0 && entry.path().extension() == ".csv")
            wigner_files.push_back("../" + name);
    }
    std::sort(wigner_files.begin(), wigner_files.end());
    schema["files"]["wigner"] = {{"paths", wigner_files},
                                 {"columns", "theta,phi,value (quasi-probability, sphere integral 1)"}};

    io::write_text_file(out / "schema.json", schema.dump(2) + "\n");
}

} // namespace becmon::harness
