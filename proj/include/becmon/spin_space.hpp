// spin_space.hpp — collective angular-momentum operators and the two-mode Hamiltonian
//
// N bosons in two modes span the (N+1)-dimensional Dicke manifold j = N/2.
// Basis ordering throughout: |m⟩ with m = -j, -j+1, …, +j ascending, so jz is
// diagonal with ascending entries and amplitude index i maps to m = i - j.

#pragma once

#include <cmath>
#include <stdexcept>

#include "becmon/model.hpp"
#include "becmon/types.hpp"

namespace becmon {

struct SpinOperators {
    int n_particles = 0;
    Eigen::Index dim = 0; // N + 1
    double j = 0.0;       // N / 2
    Matrix jx, jy, jz, jz_sq, jplus;

    Matrix jminus() const { return jplus.adjoint(); }

    // m value of basis index i
    double m_value(Eigen::Index i) const { return static_cast<double>(i) - j; }

    // diagonal of jz as a real vector
    RealVector jz_diagonal() const {
        RealVector m(dim);
        for (Eigen::Index i = 0; i < dim; ++i) m(i) = m_value(i);
        return m;
    }
};

// ⟨m+1|J₊|m⟩ = sqrt(j(j+1) - m(m+1)) = sqrt((j-m)(j+m+1))
inline double ladder_element(double j, double m) {
    return std::sqrt((j - m) * (j + m + 1.0));
}

inline SpinOperators angular_momentum_operators(int n_particles) {
    if (n_particles < 1)
        throw std::invalid_argument("angular_momentum_operators: n_particles must be >= 1");
    SpinOperators ops;
    ops.n_particles = n_particles;
    ops.dim = n_particles + 1;
    ops.j = 0.5 * static_cast<double>(n_particles);

    ops.jplus = Matrix::Zero(ops.dim, ops.dim);
    ops.jz = Matrix::Zero(ops.dim, ops.dim);
    ops.jz_sq = Matrix::Zero(ops.dim, ops.dim);
    for (Eigen::Index i = 0; i < ops.dim; ++i) {
        const double m = ops.m_value(i);
        ops.jz(i, i) = m;
        ops.jz_sq(i, i) = m * m;
        if (i + 1 < ops.dim) ops.jplus(i + 1, i) = ladder_element(ops.j, m);
    }
    const Matrix jminus = ops.jplus.adjoint();
    ops.jx = 0.5 * (ops.jplus + jminus);
    ops.jy = (ops.jplus - jminus) / (2.0 * kI);
    return ops;
}

// H = U·Jz² - K·Jx + ε·K·(Jz + N/2) — the last term is the ε·K·n̂₁ bias,
// since n̂₁ = Jz + N/2. Hermitian by construction.
inline Matrix build_hamiltonian(const ModelParams& params, const SpinOperators& ops) {
    if (ops.n_particles != params.n_particles)
        throw std::invalid_argument("build_hamiltonian: operator dimension does not match params");
    const double u_strength = params.interaction_strength();
    const double k = params.tunneling_k;
    Matrix h = u_strength * ops.jz_sq - k * ops.jx;
    if (params.bias_epsilon != 0.0) {
        const double shift = 0.5 * static_cast<double>(params.n_particles);
        h += params.bias_epsilon * k *
             (ops.jz + shift * Matrix::Identity(ops.dim, ops.dim));
    }
    return h;
}

} // namespace becmon
