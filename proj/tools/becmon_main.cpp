// becmon_main.cpp — command-line front end
//
// Subcommands:
//   run       integrate a monitored trajectory (+ slaved estimate) from a config/flags
//   preset    canned experiments fig2 (u=0) and fig4 (u=1) at N=100, gamma_bar=1
//   estimate  replay a stored measurement record against a fresh estimate
//   ensemble  many seeds in parallel with aggregates
//   gpe       mean-field phase portrait
//   wigner    Wigner grid of a stored or freshly prepared state
//   plot-data flatten a completed run directory into plot-ready CSVs

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "becmon/becmon.hpp"

namespace {

using becmon::harness::ExperimentConfig;
using becmon::harness::InitialStateKind;
using becmon::harness::InitialStateSpec;

InitialStateSpec parse_initial(const std::string& text) {
    InitialStateSpec spec;
    if (text.rfind("fock:", 0) == 0) {
        spec.kind = InitialStateKind::Fock;
        spec.fock_m = std::stod(text.substr(5));
    } else if (text == "fock") {
        spec.kind = InitialStateKind::Fock; // m = +j
    } else if (text.rfind("coherent:", 0) == 0) {
        spec.kind = InitialStateKind::Coherent;
        const auto rest = text.substr(9);
        const auto colon = rest.find(':');
        if (colon == std::string::npos)
            throw CLI::ValidationError("--initial", "coherent needs theta:phi");
        spec.theta = std::stod(rest.substr(0, colon));
        spec.phi = std::stod(rest.substr(colon + 1));
    } else if (text == "uniform") {
        spec.kind = InitialStateKind::UniformRandomPhase;
    } else {
        throw CLI::ValidationError("--initial",
                                   "expected fock[:m], coherent:theta:phi, or uniform");
    }
    return spec;
}

// flags shared by run/ensemble; applied over a base config (file or default)
struct ConfigFlags {
    std::optional<int> n;
    std::optional<double> u, k, gamma_bar, bias;
    std::optional<double> t_final, dt, sample_interval;
    std::optional<std::uint64_t> seed;
    std::optional<int> seed_count;
    std::vector<std::uint64_t> seeds;
    std::optional<std::string> initial, out;
    bool no_estimator = false;
    std::vector<double> wigner_times;
    std::optional<int> wigner_n_theta, wigner_n_phi;
    std::vector<double> density_times;

    void add_to(CLI::App& cmd) {
        cmd.add_option("--n", n, "boson number N");
        cmd.add_option("--u", u, "interaction u = UN/K");
        cmd.add_option("--k", k, "tunneling rate K (time unit)");
        cmd.add_option("--gamma-bar", gamma_bar, "measurement strength gamma*N/K");
        cmd.add_option("--bias-epsilon", bias, "n1 bias coefficient (0 disables)");
        cmd.add_option("--t-final", t_final, "horizon in Rabi periods");
        cmd.add_option("--dt", dt, "step in Rabi periods");
        cmd.add_option("--sample-interval", sample_interval, "observable cadence in Rabi periods");
        cmd.add_option("--seed", seed, "noise/estimate seed");
        cmd.add_option("--seed-count", seed_count, "ensemble size (seeds seed..seed+count-1)");
        cmd.add_option("--seeds", seeds, "explicit ensemble seed list")->delimiter(',');
        cmd.add_option("--initial", initial, "initial state: fock[:m] | coherent:theta:phi | uniform");
        cmd.add_flag("--no-estimator", no_estimator, "disable the slaved estimate");
        cmd.add_option("--wigner-times", wigner_times, "Wigner snapshot times (Rabi periods)")
            ->delimiter(',');
        cmd.add_option("--wigner-n-theta", wigner_n_theta, "theta nodes (0 = minimal exact grid)");
        cmd.add_option("--wigner-n-phi", wigner_n_phi, "phi nodes (0 = minimal exact grid)");
        cmd.add_option("--density-times", density_times,
                       "ensemble mean-projector checkpoint times (Rabi periods)")
            ->delimiter(',');
        cmd.add_option("--out", out, "output directory (under $BECMON_OUTPUT_ROOT if relative)");
    }

    void apply(ExperimentConfig& c) const {
        if (n) c.model.n_particles = *n;
        if (u) c.model.interaction_u = *u;
        if (k) c.model.tunneling_k = *k;
        if (gamma_bar) c.model.gamma_bar = *gamma_bar;
        if (bias) c.model.bias_epsilon = *bias;
        if (t_final) c.t_final_tr = *t_final;
        if (dt) c.dt_tr = *dt;
        if (sample_interval) c.sample_interval_tr = *sample_interval;
        if (seed) c.seed = *seed;
        if (seed_count) c.seed_count = *seed_count;
        if (!seeds.empty()) c.seeds = seeds;
        if (initial) c.initial_state = parse_initial(*initial);
        if (no_estimator) c.estimator_enabled = false;
        if (!wigner_times.empty()) c.wigner_times_tr = wigner_times;
        if (wigner_n_theta) c.wigner_n_theta = *wigner_n_theta;
        if (wigner_n_phi) c.wigner_n_phi = *wigner_n_phi;
        if (!density_times.empty()) c.density_checkpoint_times_tr = density_times;
        if (out) c.output_dir = *out;
    }
};

ExperimentConfig base_config(const std::optional<std::string>& config_path) {
    if (config_path) return ExperimentConfig::load(*config_path);
    ExperimentConfig c;
    c.output_dir = "run";
    return c;
}

int cmd_run(const std::optional<std::string>& config_path, const ConfigFlags& flags,
            bool plot_data) {
    ExperimentConfig config = base_config(config_path);
    flags.apply(config);
    const auto result = becmon::harness::run_experiment(config);
    std::printf("run complete: %zu samples over %s Rabi periods\n",
                result.log.times_tr.size(), becmon::io::fmt_double(config.t_final_tr).c_str());
    if (!result.run_dir.empty()) {
        std::printf("artifacts in %s\n", result.run_dir.string().c_str());
        if (plot_data) {
            becmon::harness::emit_plot_data(result.run_dir);
            std::printf("plot data in %s\n", (result.run_dir / "plotdata").string().c_str());
        }
    }
    if (result.log.has_fidelity())
        std::printf("final fidelity: %s\n",
                    becmon::io::fmt_double(result.log.fidelity.back()).c_str());
    return 0;
}

int cmd_estimate(const std::string& record_path, std::uint64_t seed,
                 const std::optional<std::string>& initial,
                 const std::optional<std::string>& out_dir, double sample_interval) {
    const auto record = becmon::read_record(record_path);
    InitialStateSpec spec;
    spec.kind = InitialStateKind::UniformRandomPhase;
    if (initial) spec = parse_initial(*initial);
    const auto estimate0 =
        becmon::harness::make_initial_state(spec, record.params.n_particles, seed);
    becmon::EstimateOptions opts;
    opts.sample_interval_tr = sample_interval;
    const auto run = becmon::propagate_estimate(estimate0, record, record.params, opts);
    std::printf("replayed %zu increments (%zu samples); final <Jz>_e = %s\n",
                record.increments.size(), run.log.times_tr.size(),
                becmon::io::fmt_double(run.log.estimated.jz.back()).c_str());
    if (out_dir) {
        const auto dir = becmon::harness::resolve_output_dir(*out_dir);
        std::filesystem::create_directories(dir);
        becmon::write_trajectory_csv(run.log, dir / "estimate_trajectory.csv");
        std::printf("estimate log in %s\n", (dir / "estimate_trajectory.csv").string().c_str());
    }
    return 0;
}

int cmd_ensemble(const std::optional<std::string>& config_path, const ConfigFlags& flags) {
    ExperimentConfig config = base_config(config_path);
    if (!config_path) config.output_dir = "ensemble";
    if (config.seed_count == 1 && flags.seeds.empty() && !flags.seed_count) config.seed_count = 10;
    flags.apply(config);
    const auto result = becmon::harness::run_ensemble(config);
    std::printf("ensemble of %zu seeds complete; converged fraction %s\n", result.seeds.size(),
                becmon::io::fmt_double(result.converged_fraction).c_str());
    if (!result.run_dir.empty())
        std::printf("artifacts in %s\n", result.run_dir.string().c_str());
    return 0;
}

int cmd_gpe(double u, double t_final_tr, double dt_tr, int rings, const std::string& out_path) {
    std::vector<becmon::BlochState> initials;
    for (int i = 0; i < rings; ++i) {
        const double theta = becmon::kPi * (static_cast<double>(i) + 0.5) / rings;
        initials.push_back(becmon::BlochState{std::sin(theta), 0.0, std::cos(theta)});
    }
    const double two_pi = 2.0 * becmon::kPi;
    const auto portrait =
        becmon::gpe_phase_portrait(u, initials, t_final_tr * two_pi, dt_tr * two_pi, 10);
    std::string csv = "trajectory_id,t,sx,sy,sz\n";
    for (std::size_t id = 0; id < portrait.size(); ++id)
        for (std::size_t i = 0; i < portrait[id].times.size(); ++i) {
            csv += std::to_string(id);
            csv += ',' + becmon::io::fmt_double(portrait[id].times[i] / two_pi);
            csv += ',' + becmon::io::fmt_double(portrait[id].states[i].sx);
            csv += ',' + becmon::io::fmt_double(portrait[id].states[i].sy);
            csv += ',' + becmon::io::fmt_double(portrait[id].states[i].sz);
            csv += '\n';
        }
    becmon::io::write_text_file(out_path, csv);
    std::printf("gpe portrait (%d orbits) written to %s\n", rings, out_path.c_str());
    return 0;
}

int cmd_wigner(const std::optional<std::string>& state_path, std::optional<int> n,
               const std::optional<std::string>& initial, int n_theta, int n_phi,
               const std::string& out_prefix) {
    becmon::QuantumState state;
    if (state_path) {
        state = becmon::read_state_csv(*state_path);
    } else {
        if (!n || !initial)
            throw CLI::ValidationError("wigner", "need either --state or --n with --initial");
        state = becmon::harness::make_initial_state(parse_initial(*initial), *n, 0);
    }
    const auto grid = becmon::wigner_function(state, becmon::WignerGridSpec{n_theta, n_phi});
    becmon::write_wigner_csv(grid, out_prefix + ".csv");
    becmon::write_wigner_binary(grid, out_prefix + ".json", out_prefix + ".f64");
    std::printf("wigner grid %zux%zu written to %s.{csv,json,f64}; integral %s, min %s\n",
                grid.theta_nodes.size(), grid.phi_nodes.size(), out_prefix.c_str(),
                becmon::io::fmt_double(grid.sphere_integral()).c_str(),
                becmon::io::fmt_double(grid.min_value()).c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"becmon — continuously monitored two-mode condensate simulator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", becmon::kVersion);

    // run
    auto* run = app.add_subcommand("run", "integrate a monitored trajectory");
    std::optional<std::string> run_config;
    run->add_option("--config", run_config, "config JSON file");
    ConfigFlags run_flags;
    run_flags.add_to(*run);
    bool run_plot = false;
    run->add_flag("--plot-data", run_plot, "emit plotdata/ after the run");

    // preset
    auto* preset = app.add_subcommand("preset", "canned fig2/fig4 experiments");
    std::string preset_name;
    preset->add_option("name", preset_name, "fig2 | fig4")->required();
    ConfigFlags preset_flags;
    preset_flags.add_to(*preset);
    bool preset_plot = false;
    preset->add_flag("--plot-data", preset_plot, "emit plotdata/ after the run");

    // estimate
    auto* estimate = app.add_subcommand("estimate", "replay a record against a fresh estimate");
    std::string est_record;
    estimate->add_option("--record", est_record, "record file (.csv or .bin)")->required();
    std::uint64_t est_seed = 1;
    estimate->add_option("--seed", est_seed, "seed for the estimate's random phases");
    std::optional<std::string> est_initial, est_out;
    estimate->add_option("--initial", est_initial, "estimate preparation (default uniform)");
    estimate->add_option("--out", est_out, "output directory");
    double est_sample = 1e-2;
    estimate->add_option("--sample-interval", est_sample, "observable cadence in Rabi periods");

    // ensemble
    auto* ensemble = app.add_subcommand("ensemble", "parallel trajectories over seeds");
    std::optional<std::string> ens_config;
    ensemble->add_option("--config", ens_config, "config JSON file");
    ConfigFlags ens_flags;
    ens_flags.add_to(*ensemble);

    // gpe
    auto* gpe = app.add_subcommand("gpe", "mean-field phase portrait");
    double gpe_u = 0.0, gpe_t = 3.0, gpe_dt = 1e-3;
    int gpe_rings = 12;
    std::string gpe_out = "gpe_portrait.csv";
    gpe->add_option("--u", gpe_u, "interaction u");
    gpe->add_option("--t-final", gpe_t, "orbit length in Rabi periods");
    gpe->add_option("--dt", gpe_dt, "step in Rabi periods");
    gpe->add_option("--rings", gpe_rings, "number of initial conditions");
    gpe->add_option("--out", gpe_out, "output CSV");

    // wigner
    auto* wigner = app.add_subcommand("wigner", "Wigner grid of a state");
    std::optional<std::string> wig_state, wig_initial;
    std::optional<int> wig_n;
    int wig_ntheta = 0, wig_nphi = 0;
    std::string wig_out = "wigner";
    wigner->add_option("--state", wig_state, "state CSV (from a run directory)");
    wigner->add_option("--n", wig_n, "boson number for --initial");
    wigner->add_option("--initial", wig_initial, "fock[:m] | coherent:theta:phi | uniform");
    wigner->add_option("--n-theta", wig_ntheta, "theta nodes (0 = minimal exact grid)");
    wigner->add_option("--n-phi", wig_nphi, "phi nodes (0 = minimal exact grid)");
    wigner->add_option("--out", wig_out, "output prefix");

    // plot-data
    auto* plot = app.add_subcommand("plot-data", "flatten a run directory for plotting");
    std::string plot_dir;
    plot->add_option("run_dir", plot_dir, "completed run directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(run_config, run_flags, run_plot);
        if (preset->parsed()) {
            ExperimentConfig config;
            if (preset_name == "fig2")
                config = ExperimentConfig::preset_fig2();
            else if (preset_name == "fig4")
                config = ExperimentConfig::preset_fig4();
            else
                throw CLI::ValidationError("preset", "expected fig2 or fig4");
            preset_flags.apply(config);
            const auto result = becmon::harness::run_experiment(config);
            std::printf("preset %s complete; artifacts in %s\n", preset_name.c_str(),
                        result.run_dir.string().c_str());
            if (preset_plot) becmon::harness::emit_plot_data(result.run_dir);
            return 0;
        }
        if (estimate->parsed())
            return cmd_estimate(est_record, est_seed, est_initial, est_out, est_sample);
        if (ensemble->parsed()) return cmd_ensemble(ens_config, ens_flags);
        if (gpe->parsed()) return cmd_gpe(gpe_u, gpe_t, gpe_dt, gpe_rings, gpe_out);
        if (wigner->parsed())
            return cmd_wigner(wig_state, wig_n, wig_initial, wig_ntheta, wig_nphi, wig_out);
        if (plot->parsed()) {
            becmon::harness::emit_plot_data(plot_dir);
            std::printf("plot data in %s\n",
                        (std::filesystem::path(plot_dir) / "plotdata").string().c_str());
            return 0;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
