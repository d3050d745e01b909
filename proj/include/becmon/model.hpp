// model.hpp — physical parameters of the monitored double-well condensate
//
// The two-mode system is parametrized by the dimensionless interaction
// u = U·N/K and the dimensionless measurement strength gamma_bar = γ·N/K;
// K sets the time unit and t_R = 2π/K is the Rabi period used for
// reporting. Interaction and measurement terms grow ~N² against the ~N
// tunneling term, which is why u and gamma_bar are the natural controls.

#pragma once

#include <cmath>
#include <stdexcept>

#include "becmon/types.hpp"

namespace becmon {

struct ModelParams {
    int n_particles = 100;       // N, conserved boson number
    double interaction_u = 0.0;  // u = U·N/K
    double tunneling_k = 1.0;    // K
    double gamma_bar = 0.0;      // γ̄ = γ·N/K
    double bias_epsilon = 1e-2;  // small ε·K·n̂₁ bias; 0 disables

    // U = u·K/N
    double interaction_strength() const {
        return interaction_u * tunneling_k / static_cast<double>(n_particles);
    }

    // γ = γ̄·K/N
    double measurement_gamma() const {
        return gamma_bar * tunneling_k / static_cast<double>(n_particles);
    }

    // t_R = 2π/K
    double rabi_period() const { return 2.0 * kPi / tunneling_k; }

    double spin_j() const { return 0.5 * static_cast<double>(n_particles); }
    int dim() const { return n_particles + 1; }

    void validate() const {
        if (n_particles < 1) throw std::invalid_argument("ModelParams: n_particles must be >= 1");
        if (tunneling_k < 0.0) throw std::invalid_argument("ModelParams: tunneling_k must be >= 0");
        if (interaction_u < 0.0) throw std::invalid_argument("ModelParams: interaction_u must be >= 0");
        if (gamma_bar < 0.0) throw std::invalid_argument("ModelParams: gamma_bar must be >= 0");
        if (bias_epsilon < 0.0) throw std::invalid_argument("ModelParams: bias_epsilon must be >= 0");
    }

    bool operator==(const ModelParams&) const = default;
};

// Measurement strength of the dispersive cavity readout,
// γ = 64·χ²·ε²/Γ³ (atom-light coupling χ, pump amplitude ε, cavity damping Γ).
inline double cavity_gamma(double chi, double epsilon_pump, double cavity_damping) {
    if (cavity_damping <= 0.0)
        throw std::invalid_argument("cavity_gamma: cavity damping rate must be positive");
    const double g = cavity_damping;
    return 64.0 * chi * chi * epsilon_pump * epsilon_pump / (g * g * g);
}

} // namespace becmon
