// gpe.hpp — discrete Gross-Pitaevskii (mean-field) dynamics on the Bloch sphere
//
//   ṡx = -u·sy·sz,  ṡy = sz + u·sx·sz,  ṡz = -sy
//
// Time is rescaled by K (one Rabi period = 2π). Both |s| and the mean-field
// energy E = (u/2)·sz² - sx are conserved by the flow.

#pragma once

#include <atomic>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <vector>

#include "becmon/bloch.hpp"

namespace becmon {

inline double gpe_energy(const BlochState& s, double u) {
    return 0.5 * u * s.sz * s.sz - s.sx;
}

namespace detail {

inline BlochState gpe_rhs(const BlochState& s, double u) {
    return BlochState{-u * s.sy * s.sz, s.sz + u * s.sx * s.sz, -s.sy};
}

inline BlochState axpy(const BlochState& s, const BlochState& d, double a) {
    return BlochState{s.sx + a * d.sx, s.sy + a * d.sy, s.sz + a * d.sz};
}

inline void warn_norm_drift(double norm) {
    static std::atomic<bool> warned{false};
    if (!warned.exchange(true))
        std::fprintf(stderr, "gpe_step: |s| = %.12g has drifted off the unit sphere\n", norm);
}

} // namespace detail

// one classical 4th-order Runge-Kutta step
inline BlochState gpe_step(const BlochState& s, double u, double dt) {
    if (std::abs(s.norm() - 1.0) > 1e-6) detail::warn_norm_drift(s.norm());
    const BlochState k1 = detail::gpe_rhs(s, u);
    const BlochState k2 = detail::gpe_rhs(detail::axpy(s, k1, 0.5 * dt), u);
    const BlochState k3 = detail::gpe_rhs(detail::axpy(s, k2, 0.5 * dt), u);
    const BlochState k4 = detail::gpe_rhs(detail::axpy(s, k3, dt), u);
    return BlochState{s.sx + dt / 6.0 * (k1.sx + 2.0 * k2.sx + 2.0 * k3.sx + k4.sx),
                      s.sy + dt / 6.0 * (k1.sy + 2.0 * k2.sy + 2.0 * k3.sy + k4.sy),
                      s.sz + dt / 6.0 * (k1.sz + 2.0 * k2.sz + 2.0 * k3.sz + k4.sz)};
}

struct GpeTrajectory {
    std::vector<double> times; // rescaled units (t·K)
    std::vector<BlochState> states;
};

inline GpeTrajectory gpe_trajectory(BlochState s, double u, double t_final, double dt,
                                    int sample_every = 1) {
    if (!(t_final > 0.0) || !(dt > 0.0))
        throw std::invalid_argument("gpe_trajectory: t_final and dt must be positive");
    if (sample_every < 1) throw std::invalid_argument("gpe_trajectory: sample_every must be >= 1");
    const auto steps = static_cast<long>(std::llround(t_final / dt));
    GpeTrajectory traj;
    traj.times.push_back(0.0);
    traj.states.push_back(s);
    for (long i = 1; i <= steps; ++i) {
        s = gpe_step(s, u, dt);
        if (i % sample_every == 0 || i == steps) {
            traj.times.push_back(static_cast<double>(i) * dt);
            traj.states.push_back(s);
        }
    }
    return traj;
}

// batch of mean-field orbits, e.g. for the phase portraits behind the
// Bloch-sphere figures
inline std::vector<GpeTrajectory> gpe_phase_portrait(double u,
                                                     const std::vector<BlochState>& initial_conditions,
                                                     double t_final, double dt = 1e-3,
                                                     int sample_every = 10) {
    std::vector<GpeTrajectory> portrait;
    portrait.reserve(initial_conditions.size());
    for (const BlochState& s0 : initial_conditions)
        portrait.push_back(gpe_trajectory(s0, u, t_final, dt, sample_every));
    return portrait;
}

} // namespace becmon
