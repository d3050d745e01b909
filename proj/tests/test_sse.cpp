#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numeric>

#include "becmon/observables.hpp"
#include "becmon/rng.hpp"
#include "becmon/sse.hpp"
#include "becmon/state.hpp"
#include "becmon/unitary.hpp"

using namespace becmon;

TEST_CASE("deterministic limit: gamma=0, dW=0 step equals the exact unitary step") {
    const auto ops = angular_momentum_operators(20);
    ModelParams p;
    p.n_particles = 20;
    p.interaction_u = 0.8;
    p.bias_epsilon = 0.0;
    const Matrix h = build_hamiltonian(p, ops);
    const auto state = coherent_state(20, 1.0, 0.4);
    const double dt = 1e-3;

    const auto [stepped, dI] = sse_step(state, h, ops, 0.0, dt, 0.0);
    const auto exact = unitary_propagate(state, h, dt);
    CHECK((stepped.amplitudes - exact.amplitudes).cwiseAbs().maxCoeff() < 1e-12);
    CHECK_THAT(dI, Catch::Matchers::WithinAbs(expectation(state, ops.jz) * dt, 1e-12));
}

TEST_CASE("pure measurement (H=0) projects onto a Jz eigenstate identified by the record") {
    const int n = 10;
    const auto ops = angular_momentum_operators(n);
    const Matrix h = Matrix::Zero(n + 1, n + 1);
    const double gamma = 1.0, dt = 1e-3;
    const SsePropagator prop(h, ops, gamma, dt);

    CounterRng rng(11, kNoiseStream);
    QuantumState state = coherent_state(n, kPi / 2.0, 0.0);
    double signal_tail = 0.0;
    const int steps = 120000, tail = 20000;
    for (int i = 0; i < steps; ++i) {
        const auto r = prop.step_conditioned(state.amplitudes, rng.wiener_increment(dt));
        if (i >= steps - tail) signal_tail += r.dI;
    }
    CHECK(variance(state, ops.jz) < 1e-8);
    const double m_final = expectation(state, ops.jz);
    CHECK(std::abs(m_final - std::round(m_final)) < 1e-6);
    // time-averaged signal rate ≈ the eigenvalue the state collapsed onto;
    // its own noise floor is sqrt(dt/gamma/steps)/dt ≈ 0.22, so allow 4 sigma
    CHECK_THAT(signal_tail / (tail * dt), Catch::Matchers::WithinAbs(m_final, 0.9));
}

TEST_CASE("returned dI is unbiased: ensemble mean matches <Jz>dt") {
    const int n = 6;
    const auto ops = angular_momentum_operators(n);
    const Matrix h = Matrix::Zero(n + 1, n + 1);
    const double gamma = 0.5, dt = 1e-3;
    const SsePropagator prop(h, ops, gamma, dt);
    const auto state = coherent_state(n, 0.9, 0.0);
    const double expect = expectation(state, ops.jz);

    CounterRng rng(5, kNoiseStream);
    const int draws = 200000;
    double mean = 0.0;
    for (int i = 0; i < draws; ++i) {
        Vector psi = state.amplitudes;
        mean += prop.step_conditioned(psi, rng.wiener_increment(dt)).dI;
    }
    mean /= draws;
    // stderr of dI is dt/sqrt(gamma*dt)/sqrt(draws)
    const double stderr_di = std::sqrt(dt / gamma) / std::sqrt(static_cast<double>(draws));
    CHECK_THAT(mean, Catch::Matchers::WithinAbs(expect * dt, 4.0 * stderr_di));
}

TEST_CASE("rabi oscillation through the conditioned engine at gamma=0") {
    ModelParams p;
    p.n_particles = 100;
    p.bias_epsilon = 0.0;
    const auto run = propagate_conditioned(fock_state(100, 50.0), p, 2.0, 1e-3, 1);
    REQUIRE(run.log.times_tr.size() == 201);
    double worst = 0.0;
    for (std::size_t i = 0; i < run.log.times_tr.size(); ++i) {
        const double t = run.log.times_tr[i] * p.rabi_period();
        worst = std::max(worst, std::abs(run.log.conditioned.jz[i] - 50.0 * std::cos(t)));
    }
    CHECK(worst < 1e-8);
    CHECK(run.record.increments.size() == 2000);
    // purity stays 1 under coherent rotation
    for (double purity : run.log.conditioned.purity)
        CHECK_THAT(purity, Catch::Matchers::WithinAbs(1.0, 1e-8));
}

TEST_CASE("monitored non-interacting condensate loses one-body purity") {
    ModelParams p;
    p.n_particles = 100;
    p.interaction_u = 0.0;
    p.gamma_bar = 1.0;
    // typical realization: the dip depth varies seed to seed
    const auto run = propagate_conditioned(fock_state(100, 50.0), p, 40.0, 1e-3, 2);
    const double min_purity =
        *std::min_element(run.log.conditioned.purity.begin(), run.log.conditioned.purity.end());
    CHECK(min_purity < 0.9);
    for (double f : run.log.conditioned.purity) {
        CHECK(f <= 1.0 + 1e-9);
        CHECK(f >= 0.5 - 1e-9);
    }
}

TEST_CASE("record replay from the true initial state is bit-for-bit") {
    ModelParams p;
    p.n_particles = 40;
    p.interaction_u = 1.0;
    p.gamma_bar = 1.0;
    SseOptions opts;
    opts.t_final_tr = 5.0;
    opts.dt_tr = 1e-3;
    opts.seed = 3;
    opts.store_snapshots = true;
    const auto initial = fock_state(40, 20.0);
    const auto run = propagate_conditioned(initial, p, opts);

    EstimateOptions eopts;
    eopts.reference_snapshots = &run.snapshots;
    const auto replay = propagate_estimate(initial, run.record, p, eopts);

    REQUIRE(replay.log.times_tr.size() == run.log.times_tr.size());
    for (std::size_t i = 0; i < run.log.times_tr.size(); ++i) {
        CHECK(replay.log.estimated.jz[i] == run.log.conditioned.jz[i]);
        CHECK(replay.log.estimated.jx[i] == run.log.conditioned.jx[i]);
        CHECK(replay.log.estimated.purity[i] == run.log.conditioned.purity[i]);
        CHECK(replay.log.fidelity[i] >= 1.0 - 1e-10); // clamped at 1
    }
}

TEST_CASE("estimator slaved to a foreign record stays a valid state") {
    ModelParams p;
    p.n_particles = 30;
    p.interaction_u = 1.0;
    p.gamma_bar = 1.0;
    const auto run = propagate_conditioned(fock_state(30, 15.0), p, 3.0, 1e-3, 21);
    const auto estimate0 = maximally_uncertain_estimate(30, 77);
    const auto replay = propagate_estimate(estimate0, run.record, p);
    CHECK(replay.log.has_estimated());
    CHECK_FALSE(replay.log.has_fidelity());
    for (double purity : replay.log.estimated.purity) {
        CHECK(purity >= 0.5 - 1e-9);
        CHECK(purity <= 1.0 + 1e-9);
    }
}

TEST_CASE("record/params digest mismatch is a hard error") {
    ModelParams p;
    p.n_particles = 10;
    p.interaction_u = 1.0;
    p.gamma_bar = 1.0;
    const auto run = propagate_conditioned(fock_state(10, 5.0), p, 1.0, 1e-3, 2);
    const auto estimate0 = maximally_uncertain_estimate(10, 5);

    ModelParams wrong_gamma = p;
    wrong_gamma.gamma_bar = 0.5;
    CHECK_THROWS_AS(propagate_estimate(estimate0, run.record, wrong_gamma),
                    std::invalid_argument);
    ModelParams wrong_u = p;
    wrong_u.interaction_u = 0.0;
    CHECK_THROWS_AS(propagate_estimate(estimate0, run.record, wrong_u), std::invalid_argument);
    ModelParams wrong_n = p;
    wrong_n.n_particles = 12;
    CHECK_THROWS_AS(propagate_estimate(estimate0, run.record, wrong_n), std::invalid_argument);
}

TEST_CASE("joint propagation equals conditioned + replay composition") {
    ModelParams p;
    p.n_particles = 20;
    p.interaction_u = 1.0;
    p.gamma_bar = 1.0;
    SseOptions opts;
    opts.t_final_tr = 2.0;
    opts.dt_tr = 1e-3;
    opts.seed = 9;
    opts.store_snapshots = true;
    const auto initial = fock_state(20, 10.0);
    const auto estimate0 = maximally_uncertain_estimate(20, 9);

    const auto joint = propagate_with_estimator(initial, estimate0, p, opts);
    const auto conditioned = propagate_conditioned(initial, p, opts);
    EstimateOptions eopts;
    eopts.reference_snapshots = &conditioned.snapshots;
    const auto replay = propagate_estimate(estimate0, conditioned.record, p, eopts);

    REQUIRE(joint.record.increments.size() == conditioned.record.increments.size());
    CHECK(joint.record.increments == conditioned.record.increments);
    for (std::size_t i = 0; i < joint.log.times_tr.size(); ++i) {
        CHECK(joint.log.estimated.jz[i] == replay.log.estimated.jz[i]);
        CHECK(joint.log.fidelity[i] == replay.log.fidelity[i]);
    }
}

TEST_CASE("pre-renormalization norm drift shrinks linearly with dt") {
    ModelParams p;
    p.n_particles = 20;
    p.interaction_u = 1.0;
    p.gamma_bar = 1.0;
    auto mean_drift = [&](double dt_tr) {
        SseOptions opts;
        opts.t_final_tr = 1.0;
        opts.dt_tr = dt_tr;
        opts.seed = 4;
        const auto run = propagate_conditioned(fock_state(20, 10.0), p, opts);
        return std::accumulate(run.log.norm_drift.begin() + 1, run.log.norm_drift.end(), 0.0) /
               static_cast<double>(run.log.norm_drift.size() - 1);
    };
    const double coarse = mean_drift(2e-3);
    const double fine = mean_drift(1e-3);
    CHECK(coarse / fine > 1.5);
    CHECK(coarse / fine < 2.8);
}

TEST_CASE("non-finite amplitudes are detected rather than propagated") {
    const int n = 10;
    const auto ops = angular_momentum_operators(n);
    const Matrix h = Matrix::Zero(n + 1, n + 1);
    const SsePropagator prop(h, ops, 1.0, 1e-3);
    QuantumState state = coherent_state(n, kPi / 2.0, 0.0);
    // a corrupt record entry must surface as an error, not silent garbage
    CHECK_THROWS_AS(prop.step_replay(state.amplitudes,
                                     std::numeric_limits<double>::infinity()),
                    std::runtime_error);
    QuantumState nan_state = coherent_state(n, kPi / 2.0, 0.0);
    nan_state.amplitudes(0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(prop.step_replay(nan_state.amplitudes, 0.0), std::runtime_error);
}

TEST_CASE("sampling grid validation") {
    ModelParams p;
    p.n_particles = 4;
    const auto initial = fock_state(4, 2.0);
    SseOptions opts;
    opts.t_final_tr = 1.0;
    opts.dt_tr = 3e-3; // does not divide 1e-2
    CHECK_THROWS_AS(propagate_conditioned(initial, p, opts), std::invalid_argument);
    opts.dt_tr = 1e-3;
    opts.sample_interval_tr = 0.3; // does not divide 1.0... it does; use 0.7
    opts.sample_interval_tr = 0.7;
    CHECK_THROWS_AS(propagate_conditioned(initial, p, opts), std::invalid_argument);
    opts.sample_interval_tr = 1e-2;
    opts.t_final_tr = -1.0;
    CHECK_THROWS_AS(propagate_conditioned(initial, p, opts), std::invalid_argument);
}
