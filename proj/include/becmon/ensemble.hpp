// ensemble.hpp — parallel trajectory ensembles over independent seeds
//
// Trajectories run on a small worker pool with one counter-based noise
// stream per seed; aggregation is a deterministic reduction in seed order,
// so results do not depend on scheduling. Aggregates: mean/stderr of the
// conditioned ⟨Jz⟩(t), mean fidelity/purity, the per-seed fidelity
// convergence-time distribution, and (on request) seed-averaged projectors
// |ψ_c⟩⟨ψ_c| at checkpoint times for master-equation comparisons.

#pragma once

#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <limits>
#include <optional>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "becmon/config.hpp"
#include "becmon/run.hpp"
#include "becmon/sse.hpp"

namespace becmon::harness {

struct SeedSummary {
    std::uint64_t seed = 0;
    // first sample time with F > 0.99; NaN when never crossed
    double convergence_time_tr = std::numeric_limits<double>::quiet_NaN();
    // F stayed above 0.99 on average over the 10 t_R following the crossing
    bool sustained = false;
};

struct EnsembleResult {
    std::vector<std::uint64_t> seeds;
    std::vector<double> times_tr;
    std::vector<double> mean_jz, stderr_jz;
    std::vector<double> mean_purity;
    std::vector<double> mean_fidelity; // empty without an estimator
    std::vector<SeedSummary> seed_summaries;
    double converged_fraction = 0.0; // crossed and sustained
    std::vector<double> density_times_tr;
    std::vector<Matrix> mean_density; // seed-averaged projectors at those times
    std::vector<TrajectoryLog> per_seed_logs;
    std::filesystem::path run_dir;
};

inline constexpr double kConvergenceFidelity = 0.99;
inline constexpr double kConvergenceWindowTr = 10.0;

namespace detail {

inline SeedSummary summarize_convergence(std::uint64_t seed, const TrajectoryLog& log) {
    SeedSummary s;
    s.seed = seed;
    if (!log.has_fidelity()) return s;
    for (std::size_t i = 0; i < log.times_tr.size(); ++i) {
        if (log.fidelity[i] > kConvergenceFidelity) {
            s.convergence_time_tr = log.times_tr[i];
            const double t_end = log.times_tr[i] + kConvergenceWindowTr;
            double acc = 0.0;
            std::size_t count = 0;
            for (std::size_t k = i; k < log.times_tr.size() && log.times_tr[k] <= t_end; ++k) {
                acc += log.fidelity[k];
                ++count;
            }
            s.sustained = count > 0 && acc / static_cast<double>(count) > kConvergenceFidelity;
            break;
        }
    }
    return s;
}

} // namespace detail

inline EnsembleResult run_ensemble(const ExperimentConfig& config) {
    config.validate();
    const auto seeds = config.ensemble_seeds();
    if (seeds.size() < 2)
        throw std::invalid_argument("run_ensemble: need at least 2 distinct seeds");

    const int n = config.model.n_particles;
    const bool want_density = !config.density_checkpoint_times_tr.empty();
    std::vector<std::size_t> density_indices;
    for (double t : config.density_checkpoint_times_tr)
        density_indices.push_back(static_cast<std::size_t>(std::llround(t / config.sample_interval_tr)));

    struct PerSeed {
        TrajectoryLog log;
        std::vector<Matrix> projectors;
    };
    std::vector<PerSeed> results(seeds.size());

    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= seeds.size()) return;
            try {
                SseOptions opts;
                opts.t_final_tr = config.t_final_tr;
                opts.dt_tr = config.dt_tr;
                opts.sample_interval_tr = config.sample_interval_tr;
                opts.seed = seeds[i];
                opts.store_snapshots = want_density;
                const QuantumState initial =
                    make_initial_state(config.initial_state, n, seeds[i]);
                std::optional<QuantumState> estimate;
                if (config.estimator_enabled)
                    estimate = make_initial_state(config.estimator_initial, n, seeds[i]);
                JointRun run = propagate_with_estimator(initial, estimate ? &*estimate : nullptr,
                                                        config.model, opts);
                results[i].log = std::move(run.log);
                for (std::size_t idx : density_indices) {
                    const Vector& psi = run.snapshots_conditioned.at(idx).amplitudes;
                    results[i].projectors.push_back(psi * psi.adjoint());
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t n_workers = std::min<std::size_t>(hw, seeds.size());
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < n_workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);

    // deterministic seed-ordered reduction
    EnsembleResult out;
    out.seeds = seeds;
    out.times_tr = results.front().log.times_tr;
    const std::size_t n_samples = out.times_tr.size();
    const double count = static_cast<double>(seeds.size());
    out.mean_jz.assign(n_samples, 0.0);
    out.stderr_jz.assign(n_samples, 0.0);
    out.mean_purity.assign(n_samples, 0.0);
    if (config.estimator_enabled) out.mean_fidelity.assign(n_samples, 0.0);
    for (const auto& r : results) {
        for (std::size_t i = 0; i < n_samples; ++i) {
            out.mean_jz[i] += r.log.conditioned.jz[i];
            out.mean_purity[i] += r.log.conditioned.purity[i];
            if (config.estimator_enabled) out.mean_fidelity[i] += r.log.fidelity[i];
        }
    }
    for (std::size_t i = 0; i < n_samples; ++i) {
        out.mean_jz[i] /= count;
        out.mean_purity[i] /= count;
        if (config.estimator_enabled) out.mean_fidelity[i] /= count;
    }
    for (const auto& r : results)
        for (std::size_t i = 0; i < n_samples; ++i) {
            const double d = r.log.conditioned.jz[i] - out.mean_jz[i];
            out.stderr_jz[i] += d * d;
        }
    for (std::size_t i = 0; i < n_samples; ++i)
        out.stderr_jz[i] = seeds.size() > 1
                               ? std::sqrt(out.stderr_jz[i] / (count - 1.0) / count)
                               : 0.0;

    std::size_t converged = 0;
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        auto s = detail::summarize_convergence(seeds[i], results[i].log);
        if (s.sustained) ++converged;
        out.seed_summaries.push_back(s);
    }
    out.converged_fraction = static_cast<double>(converged) / count;

    if (want_density) {
        out.density_times_tr = config.density_checkpoint_times_tr;
        for (std::size_t k = 0; k < density_indices.size(); ++k) {
            Matrix mean = Matrix::Zero(n + 1, n + 1);
            for (const auto& r : results) mean += r.projectors[k];
            out.mean_density.push_back(mean / count);
        }
    }
    for (auto& r : results) out.per_seed_logs.push_back(std::move(r.log));

    // --- persistence -------------------------------------------------------------
    if (!config.output_dir.empty()) {
        const auto dir = resolve_output_dir(config.output_dir);
        std::filesystem::create_directories(dir);
        std::vector<std::string> artifacts;
        config.save(dir / "config.json");
        artifacts.push_back("config.json");

        for (std::size_t i = 0; i < seeds.size(); ++i) {
            const auto seed_dir = dir / ("seed_" + std::to_string(seeds[i]));
            std::filesystem::create_directories(seed_dir);
            write_trajectory_csv(out.per_seed_logs[i], seed_dir / "trajectory.csv");
            artifacts.push_back("seed_" + std::to_string(seeds[i]) + "/trajectory.csv");
        }

        std::string agg = config.estimator_enabled
                              ? "t,mean_jz_c,stderr_jz_c,mean_purity_c,mean_fidelity\n"
                              : "t,mean_jz_c,stderr_jz_c,mean_purity_c\n";
        for (std::size_t i = 0; i < n_samples; ++i) {
            agg += io::fmt_double(out.times_tr[i]);
            agg += ',' + io::fmt_double(out.mean_jz[i]);
            agg += ',' + io::fmt_double(out.stderr_jz[i]);
            agg += ',' + io::fmt_double(out.mean_purity[i]);
            if (config.estimator_enabled) agg += ',' + io::fmt_double(out.mean_fidelity[i]);
            agg += '\n';
        }
        io::write_text_file(dir / "aggregates.csv", agg);
        artifacts.push_back("aggregates.csv");

        nlohmann::ordered_json summary;
        summary["format"] = "becmon-ensemble-summary";
        summary["format_version"] = 1;
        summary["seeds"] = seeds;
        summary["convergence_fidelity_threshold"] = kConvergenceFidelity;
        summary["convergence_window_tr"] = kConvergenceWindowTr;
        summary["converged_fraction"] = out.converged_fraction;
        auto& per_seed = summary["per_seed"];
        per_seed = nlohmann::ordered_json::array();
        for (const auto& s : out.seed_summaries) {
            nlohmann::ordered_json row;
            row["seed"] = s.seed;
            if (std::isnan(s.convergence_time_tr))
                row["convergence_time_tr"] = nullptr;
            else
                row["convergence_time_tr"] = s.convergence_time_tr;
            row["sustained"] = s.sustained;
            per_seed.push_back(row);
        }
        io::write_text_file(dir / "summary.json", summary.dump(2) + "\n");
        artifacts.push_back("summary.json");

        for (std::size_t k = 0; k < out.mean_density.size(); ++k) {
            const std::string tag = detail::time_tag(out.density_times_tr[k]);
            const Matrix& rho = out.mean_density[k];
            std::vector<double> flat;
            flat.reserve(static_cast<std::size_t>(2 * rho.size()));
            for (Eigen::Index r = 0; r < rho.rows(); ++r)
                for (Eigen::Index c = 0; c < rho.cols(); ++c) {
                    flat.push_back(rho(r, c).real());
                    flat.push_back(rho(r, c).imag());
                }
            nlohmann::ordered_json header;
            header["format"] = "becmon-density";
            header["format_version"] = 1;
            header["dim"] = rho.rows();
            header["layout"] = "row-major float64-le interleaved re,im";
            header["data_file"] = "mean_rho_t" + tag + ".f64";
            io::write_text_file(dir / ("mean_rho_t" + tag + ".json"), header.dump(2) + "\n");
            io::write_binary_file(dir / ("mean_rho_t" + tag + ".f64"), flat.data(),
                                  flat.size() * sizeof(double));
            artifacts.push_back("mean_rho_t" + tag + ".json");
            artifacts.push_back("mean_rho_t" + tag + ".f64");
        }

        detail::write_manifest(dir, config, seeds, artifacts);
        out.run_dir = dir;
    }
    return out;
}

} // namespace becmon::harness
