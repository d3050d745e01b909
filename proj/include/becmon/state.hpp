// state.hpp — pure states on the Dicke manifold and the standard preparations

#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "becmon/rng.hpp"
#include "becmon/spin_space.hpp"
#include "becmon/types.hpp"

namespace becmon {

// Amplitudes c_m over m = -j…+j ascending; unit norm after every public
// operation (factories normalize, propagators renormalize).
struct QuantumState {
    Vector amplitudes;

    Eigen::Index dim() const { return amplitudes.size(); }
    int n_particles() const { return static_cast<int>(amplitudes.size()) - 1; }
    double j() const { return 0.5 * static_cast<double>(n_particles()); }

    double norm() const { return amplitudes.norm(); }

    void normalize() {
        const double n = amplitudes.norm();
        if (!(n > 0.0)) throw std::runtime_error("QuantumState: cannot normalize zero state");
        amplitudes /= n;
    }
};

// index of |m⟩ in the amplitude vector, validating range and half-integer parity
inline Eigen::Index fock_index(int n_particles, double m) {
    const double j = 0.5 * static_cast<double>(n_particles);
    const double offset = m + j;
    const double rounded = std::round(offset);
    if (std::abs(offset - rounded) > 1e-9 || rounded < 0.0 || rounded > n_particles)
        throw std::invalid_argument("fock_state: m must lie in -j…j on the integer ladder");
    return static_cast<Eigen::Index>(rounded);
}

// |m⟩; m = +j is the north-pole preparation with all bosons in the first well
inline QuantumState fock_state(int n_particles, double m) {
    if (n_particles < 1) throw std::invalid_argument("fock_state: n_particles must be >= 1");
    QuantumState state;
    state.amplitudes = Vector::Zero(n_particles + 1);
    state.amplitudes(fock_index(n_particles, m)) = 1.0;
    return state;
}

// SU(2) coherent state at Bloch angles (θ, φ):
//   c_m ∝ sqrt(C(N, j+m)) cos(θ/2)^{j+m} sin(θ/2)^{j-m} e^{+i(j-m)φ}
// so that the Bloch vector is (sinθ cosφ, sinθ sinφ, cosθ).
inline QuantumState coherent_state(int n_particles, double theta, double phi) {
    if (n_particles < 1) throw std::invalid_argument("coherent_state: n_particles must be >= 1");
    if (theta < 0.0 || theta > kPi)
        throw std::invalid_argument("coherent_state: theta must lie in [0, pi]");
    const int n = n_particles;
    const double c = std::cos(0.5 * theta);
    const double s = std::sin(0.5 * theta);
    QuantumState state;
    state.amplitudes = Vector::Zero(n + 1);
    double binom = 1.0; // C(N, k), updated recursively
    for (int k = 0; k <= n; ++k) {
        const double mag = std::sqrt(binom) * std::pow(c, k) * std::pow(s, n - k);
        state.amplitudes(k) = mag * std::polar(1.0, static_cast<double>(n - k) * phi);
        binom *= static_cast<double>(n - k) / static_cast<double>(k + 1);
    }
    state.normalize();
    return state;
}

// "Maximally uncertain" estimate: |c_m|² = 1/(N+1) with independent random
// phases drawn from the seeded generator. Deterministic given the seed.
inline QuantumState maximally_uncertain_estimate(int n_particles, std::uint64_t seed) {
    if (n_particles < 1)
        throw std::invalid_argument("maximally_uncertain_estimate: n_particles must be >= 1");
    CounterRng rng(seed, kPhaseStream);
    const double mag = 1.0 / std::sqrt(static_cast<double>(n_particles + 1));
    QuantumState state;
    state.amplitudes = Vector(n_particles + 1);
    for (int k = 0; k <= n_particles; ++k)
        state.amplitudes(k) = mag * std::polar(1.0, 2.0 * kPi * rng.uniform());
    return state;
}

} // namespace becmon
