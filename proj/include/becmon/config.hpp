// config.hpp — experiment configuration, its JSON file form, and the figure presets

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "becmon/io.hpp"
#include "becmon/model.hpp"
#include "becmon/state.hpp"
#include "becmon/version.hpp"

namespace becmon::harness {

enum class InitialStateKind { Fock, Coherent, UniformRandomPhase };

struct InitialStateSpec {
    InitialStateKind kind = InitialStateKind::Fock;
    // fock: m (NaN → +j); coherent: (theta, phi); uniform: seeded phases
    double fock_m = std::numeric_limits<double>::quiet_NaN();
    double theta = 0.0;
    double phi = 0.0;

    double resolved_fock_m(int n_particles) const {
        return std::isnan(fock_m) ? 0.5 * static_cast<double>(n_particles) : fock_m;
    }
};

inline QuantumState make_initial_state(const InitialStateSpec& spec, int n_particles,
                                       std::uint64_t seed) {
    switch (spec.kind) {
        case InitialStateKind::Fock:
            return fock_state(n_particles, spec.resolved_fock_m(n_particles));
        case InitialStateKind::Coherent:
            return coherent_state(n_particles, spec.theta, spec.phi);
        case InitialStateKind::UniformRandomPhase:
            return maximally_uncertain_estimate(n_particles, seed);
    }
    throw std::logic_error("make_initial_state: unknown kind");
}

struct ExperimentConfig {
    ModelParams model;

    double t_final_tr = 60.0;
    double dt_tr = 1e-3;
    double sample_interval_tr = 1e-2;
    std::uint64_t seed = 1;
    int seed_count = 1;                 // ensemble size when seeds is empty
    std::vector<std::uint64_t> seeds;   // explicit ensemble seeds (optional)

    InitialStateSpec initial_state;     // default: Fock |+j⟩
    bool estimator_enabled = true;
    InitialStateSpec estimator_initial{InitialStateKind::UniformRandomPhase};

    std::vector<double> wigner_times_tr;
    int wigner_n_theta = 0; // 0 → minimal exact grid
    int wigner_n_phi = 0;

    std::vector<double> density_checkpoint_times_tr; // ensemble mean-projector times

    std::string output_dir; // empty → in-memory only

    std::vector<std::uint64_t> ensemble_seeds() const {
        if (!seeds.empty()) return seeds;
        std::vector<std::uint64_t> out;
        out.reserve(static_cast<std::size_t>(seed_count));
        for (int i = 0; i < seed_count; ++i) out.push_back(seed + static_cast<std::uint64_t>(i));
        return out;
    }

    void validate() const {
        model.validate();
        if (!(model.tunneling_k > 0.0))
            throw std::invalid_argument("config: tunneling_k must be positive");
        if (!(t_final_tr > 0.0)) throw std::invalid_argument("config: t_final must be positive");
        if (!(dt_tr > 0.0)) throw std::invalid_argument("config: dt must be positive");
        if (!(sample_interval_tr > 0.0))
            throw std::invalid_argument("config: sample interval must be positive");
        if (model.gamma_bar > 0.0 && !(dt_tr < 1e-2))
            throw std::invalid_argument(
                "config: dt must be below 1e-2 Rabi periods when the measurement is on "
                "(stability guard)");
        const auto check_divides = [](double small, double big, const char* what) {
            const auto n = std::llround(big / small);
            if (n < 1 || std::abs(static_cast<double>(n) * small - big) > 1e-9 * big)
                throw std::invalid_argument(std::string("config: ") + what);
        };
        check_divides(dt_tr, sample_interval_tr, "dt must divide the sampling interval");
        check_divides(sample_interval_tr, t_final_tr, "sampling interval must divide t_final");
        if (seed_count < 1) throw std::invalid_argument("config: seed_count must be >= 1");
        if (!seeds.empty()) {
            std::set<std::uint64_t> unique(seeds.begin(), seeds.end());
            if (unique.size() != seeds.size())
                throw std::invalid_argument("config: ensemble seeds must be distinct");
        }
        for (double t : wigner_times_tr) {
            if (t < 0.0 || t > t_final_tr)
                throw std::invalid_argument("config: wigner snapshot time outside the run horizon");
            check_divides(sample_interval_tr, std::max(t, sample_interval_tr),
                          "wigner snapshot times must lie on the sampling grid");
        }
        for (double t : density_checkpoint_times_tr)
            if (t < 0.0 || t > t_final_tr)
                throw std::invalid_argument("config: density checkpoint outside the run horizon");
        if (initial_state.kind == InitialStateKind::Fock) {
            // range/parity errors surface early rather than at run time
            fock_index(model.n_particles, initial_state.resolved_fock_m(model.n_particles));
        }
    }

    // --- JSON form --------------------------------------------------------------

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["format"] = "becmon-config";
        j["format_version"] = kConfigFormatVersion;
        j["model"] = {{"n_particles", model.n_particles},
                      {"interaction_u", model.interaction_u},
                      {"tunneling_k", model.tunneling_k},
                      {"gamma_bar", model.gamma_bar},
                      {"bias_epsilon", model.bias_epsilon}};
        j["run"] = {{"t_final_tr", t_final_tr},
                    {"dt_tr", dt_tr},
                    {"sample_interval_tr", sample_interval_tr},
                    {"seed", seed},
                    {"seed_count", seed_count}};
        if (!seeds.empty()) j["run"]["seeds"] = seeds;
        j["initial_state"] = state_to_json(initial_state);
        j["estimator"] = {{"enabled", estimator_enabled},
                          {"initial", state_to_json(estimator_initial)}};
        j["wigner"] = {{"times_tr", wigner_times_tr},
                       {"n_theta", wigner_n_theta},
                       {"n_phi", wigner_n_phi}};
        j["ensemble"] = {{"density_checkpoint_times_tr", density_checkpoint_times_tr}};
        j["output"] = {{"directory", output_dir}};
        return j;
    }

    static ExperimentConfig from_json(const nlohmann::json& j) {
        if (j.value("format", "") != "becmon-config")
            throw std::runtime_error("config: missing 'format: becmon-config' header");
        if (j.at("format_version").get<int>() != kConfigFormatVersion)
            throw std::runtime_error("config: unsupported format version");
        for (const auto& [key, _] : j.items()) {
            static const std::set<std::string> known{"format",    "format_version", "model",
                                                     "run",       "initial_state",  "estimator",
                                                     "wigner",    "ensemble",       "output"};
            if (!known.count(key)) throw std::runtime_error("config: unknown key '" + key + "'");
        }
        ExperimentConfig c;
        const auto& m = j.at("model");
        c.model.n_particles = m.at("n_particles").get<int>();
        c.model.interaction_u = m.at("interaction_u").get<double>();
        c.model.tunneling_k = m.at("tunneling_k").get<double>();
        c.model.gamma_bar = m.at("gamma_bar").get<double>();
        c.model.bias_epsilon = m.at("bias_epsilon").get<double>();
        const auto& r = j.at("run");
        c.t_final_tr = r.at("t_final_tr").get<double>();
        c.dt_tr = r.at("dt_tr").get<double>();
        c.sample_interval_tr = r.at("sample_interval_tr").get<double>();
        c.seed = r.at("seed").get<std::uint64_t>();
        c.seed_count = r.at("seed_count").get<int>();
        if (r.contains("seeds")) c.seeds = r.at("seeds").get<std::vector<std::uint64_t>>();
        c.initial_state = state_from_json(j.at("initial_state"));
        c.estimator_enabled = j.at("estimator").at("enabled").get<bool>();
        c.estimator_initial = state_from_json(j.at("estimator").at("initial"));
        const auto& w = j.at("wigner");
        c.wigner_times_tr = w.at("times_tr").get<std::vector<double>>();
        c.wigner_n_theta = w.at("n_theta").get<int>();
        c.wigner_n_phi = w.at("n_phi").get<int>();
        c.density_checkpoint_times_tr =
            j.at("ensemble").at("density_checkpoint_times_tr").get<std::vector<double>>();
        c.output_dir = j.at("output").at("directory").get<std::string>();
        return c;
    }

    void save(const std::filesystem::path& path) const {
        io::write_text_file(path, to_json().dump(2) + "\n");
    }

    static ExperimentConfig load(const std::filesystem::path& path) {
        return from_json(nlohmann::json::parse(io::read_text_file(path)));
    }

    // --- presets reproducing the two headline experiments -------------------------

    // non-interacting monitored condensate: u=0, γ̄=1, |+j⟩ start, random
    // maximally-uncertain estimate, Wigner snapshot near the purity dip
    static ExperimentConfig preset_fig2(std::uint64_t seed = 1) {
        ExperimentConfig c;
        c.model.n_particles = 100;
        c.model.interaction_u = 0.0;
        c.model.tunneling_k = 1.0;
        c.model.gamma_bar = 1.0;
        c.seed = seed;
        c.wigner_times_tr = {25.0};
        c.output_dir = "fig2";
        return c;
    }

    // weakly interacting monitored condensate: u=1, γ̄=1, late coherent snapshot
    static ExperimentConfig preset_fig4(std::uint64_t seed = 1) {
        ExperimentConfig c = preset_fig2(seed);
        c.model.interaction_u = 1.0;
        c.wigner_times_tr = {48.0};
        c.output_dir = "fig4";
        return c;
    }

  private:
    static nlohmann::ordered_json state_to_json(const InitialStateSpec& s) {
        switch (s.kind) {
            case InitialStateKind::Fock:
                return {{"kind", "fock"}, {"m", s.fock_m}}; // NaN resolved below
            case InitialStateKind::Coherent:
                return {{"kind", "coherent"}, {"theta", s.theta}, {"phi", s.phi}};
            case InitialStateKind::UniformRandomPhase:
                return {{"kind", "uniform_random_phase"}};
        }
        throw std::logic_error("state_to_json: unknown kind");
    }

    static InitialStateSpec state_from_json(const nlohmann::json& j) {
        InitialStateSpec s;
        const std::string kind = j.at("kind").get<std::string>();
        if (kind == "fock") {
            s.kind = InitialStateKind::Fock;
            s.fock_m = j.at("m").is_null() ? std::numeric_limits<double>::quiet_NaN()
                                           : j.at("m").get<double>();
        } else if (kind == "coherent") {
            s.kind = InitialStateKind::Coherent;
            s.theta = j.at("theta").get<double>();
            s.phi = j.at("phi").get<double>();
        } else if (kind == "uniform_random_phase") {
            s.kind = InitialStateKind::UniformRandomPhase;
        } else {
            throw std::runtime_error("config: unknown initial state kind '" + kind + "'");
        }
        return s;
    }
};

} // namespace becmon::harness
