// observables.hpp — expectation values, variances, Bloch vector, purity, fidelity

#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "becmon/bloch.hpp"
#include "becmon/spin_space.hpp"
#include "becmon/state.hpp"
#include "becmon/types.hpp"

namespace becmon {

namespace detail {
inline void check_dim(const QuantumState& state, const Matrix& op, const char* what) {
    if (op.rows() != op.cols() || op.rows() != state.dim())
        throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}
} // namespace detail

// ⟨ψ|A|ψ⟩ for Hermitian A; the (sub-1e-10) imaginary residue is discarded
inline double expectation(const QuantumState& state, const Matrix& op) {
    detail::check_dim(state, op, "expectation");
    return state.amplitudes.dot(op * state.amplitudes).real();
}

// ⟨A²⟩ - ⟨A⟩², computed as ‖Aψ‖² - ⟨A⟩² so it cannot go below round-off;
// clamped at zero for excursions above -1e-12
inline double variance(const QuantumState& state, const Matrix& op) {
    detail::check_dim(state, op, "variance");
    const Vector w = op * state.amplitudes;
    const double mean = state.amplitudes.dot(w).real();
    const double var = w.squaredNorm() - mean * mean;
    return std::max(var, 0.0);
}

// s = (2/N)(⟨Jx⟩, ⟨Jy⟩, ⟨Jz⟩)
inline BlochState bloch_vector(const QuantumState& state, const SpinOperators& ops) {
    if (state.dim() != ops.dim)
        throw std::invalid_argument("bloch_vector: dimension mismatch");
    const double scale = 2.0 / static_cast<double>(ops.n_particles);
    return BlochState{scale * expectation(state, ops.jx),
                      scale * expectation(state, ops.jy),
                      scale * expectation(state, ops.jz)};
}

// p = (1 + |s|²)/2 ∈ [1/2, 1]; equals 1 exactly on coherent states
inline double one_body_purity(const QuantumState& state, const SpinOperators& ops) {
    return 0.5 * (1.0 + bloch_vector(state, ops).norm_sq());
}

inline double one_body_purity(const BlochState& s) { return 0.5 * (1.0 + s.norm_sq()); }

// F = |⟨a|b⟩|², symmetric, global-phase invariant
inline double fidelity(const QuantumState& a, const QuantumState& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("fidelity: dimension mismatch");
    const double f = std::norm(a.amplitudes.dot(b.amplitudes));
    return std::clamp(f, 0.0, 1.0);
}

} // namespace becmon
