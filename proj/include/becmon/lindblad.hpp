// lindblad.hpp — master-equation oracle for the unselective (ensemble) dynamics
//
//   dρ/dt = -i[H,ρ] + (γ/4)(Jz ρ Jz - ½{Jz²,ρ})  ≡  -i[H,ρ] - (γ/8)[Jz,[Jz,ρ]]
//
// This dissipator is the Itô average of the conditioned trajectory equation:
// with X = Jz - ⟨Jz⟩, E[d(|ψ⟩⟨ψ|)] picks up (√γ/2)²·XρX from the noise term
// and -(γ/8){X²,ρ} from the drift, which assemble to (γ/4)·D[Jz]ρ. Since Jz
// is diagonal, the dissipator acts elementwise: ρ_mm' is damped at the rate
// (γ/8)(m-m')². Integration is classical RK4; the RHS is traceless, so trace
// is preserved to round-off and monitored against a hard tolerance.

#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "becmon/model.hpp"
#include "becmon/spin_space.hpp"
#include "becmon/types.hpp"

namespace becmon {

struct DensitySeries {
    std::vector<double> times; // absolute units (1/K when K = 1)
    std::vector<Matrix> states;
};

namespace detail {

inline void check_density(const Matrix& rho) {
    if (rho.rows() != rho.cols() || rho.rows() < 1)
        throw std::invalid_argument("lindblad_solve: density matrix must be square");
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-9)
        throw std::invalid_argument("lindblad_solve: density matrix must be Hermitian");
    if (std::abs(rho.trace().real() - 1.0) > 1e-9 || std::abs(rho.trace().imag()) > 1e-9)
        throw std::invalid_argument("lindblad_solve: density matrix must have unit trace");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(rho);
    if (solver.eigenvalues().minCoeff() < -1e-9)
        throw std::invalid_argument("lindblad_solve: density matrix must be positive semidefinite");
}

struct LindbladRhs {
    const Matrix& h;
    RealMatrix damping; // (γ/8)(m_r - m_c)²

    LindbladRhs(const Matrix& h_in, double gamma) : h(h_in) {
        const Eigen::Index dim = h.rows();
        const double j = 0.5 * static_cast<double>(dim - 1);
        damping.resize(dim, dim);
        for (Eigen::Index r = 0; r < dim; ++r)
            for (Eigen::Index c = 0; c < dim; ++c) {
                const double diff = (static_cast<double>(r) - j) - (static_cast<double>(c) - j);
                damping(r, c) = 0.125 * gamma * diff * diff;
            }
    }

    Matrix operator()(const Matrix& rho) const {
        Matrix d = -kI * (h * rho - rho * h);
        d -= damping.cwiseProduct(rho.real()).cast<Complex>() +
             kI * damping.cwiseProduct(rho.imag()).cast<Complex>();
        return d;
    }
};

} // namespace detail

// Generic engine: H and γ given directly, times absolute. Covers H = 0, where
// the parametrization through (u, K, γ̄) cannot reach γ > 0.
inline DensitySeries lindblad_solve(const Matrix& initial_density, const Matrix& h, double gamma,
                                    double t_final, double dt, int sample_every = 1) {
    detail::check_density(initial_density);
    if (h.rows() != initial_density.rows() || h.cols() != initial_density.cols())
        throw std::invalid_argument("lindblad_solve: Hamiltonian dimension mismatch");
    if (!(t_final > 0.0) || !(dt > 0.0))
        throw std::invalid_argument("lindblad_solve: t_final and dt must be positive");
    if (sample_every < 1) throw std::invalid_argument("lindblad_solve: sample_every must be >= 1");
    if (gamma < 0.0) throw std::invalid_argument("lindblad_solve: gamma must be >= 0");

    const detail::LindbladRhs rhs(h, gamma);
    const auto steps = static_cast<long>(std::llround(t_final / dt));
    Matrix rho = initial_density;
    DensitySeries series;
    series.times.push_back(0.0);
    series.states.push_back(rho);
    for (long i = 1; i <= steps; ++i) {
        const Matrix k1 = rhs(rho);
        const Matrix k2 = rhs(rho + 0.5 * dt * k1);
        const Matrix k3 = rhs(rho + 0.5 * dt * k2);
        const Matrix k4 = rhs(rho + dt * k3);
        rho += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (i % sample_every == 0 || i == steps) {
            const double trace_drift = std::abs(rho.trace().real() - 1.0);
            if (!(trace_drift < 1e-9) || !std::isfinite(trace_drift))
                throw std::runtime_error("lindblad_solve: trace drift beyond tolerance (dt too large)");
            series.times.push_back(static_cast<double>(i) * dt);
            series.states.push_back(rho);
        }
    }
    return series;
}

// Model-level wrapper; horizons in Rabi periods (requires K > 0).
inline DensitySeries lindblad_solve(const Matrix& initial_density, const ModelParams& params,
                                    double t_final_tr, double dt_tr,
                                    double sample_interval_tr = 1e-2) {
    params.validate();
    if (!(params.tunneling_k > 0.0))
        throw std::invalid_argument("lindblad_solve: K must be positive for Rabi-period horizons");
    const auto ops = angular_momentum_operators(params.n_particles);
    const Matrix h = build_hamiltonian(params, ops);
    const double tr = params.rabi_period();
    const int sample_every = std::max(1, static_cast<int>(std::llround(sample_interval_tr / dt_tr)));
    return lindblad_solve(initial_density, h, params.measurement_gamma(), t_final_tr * tr,
                          dt_tr * tr, sample_every);
}

// trace distance ½‖ρ₁-ρ₂‖₁ via the spectrum of the Hermitian difference
inline double trace_distance(const Matrix& rho_a, const Matrix& rho_b) {
    if (rho_a.rows() != rho_b.rows() || rho_a.cols() != rho_b.cols())
        throw std::invalid_argument("trace_distance: dimension mismatch");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (rho_a - rho_b) +
                                                 0.5 * (rho_a - rho_b).adjoint());
    return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

inline double density_purity(const Matrix& rho) { return (rho * rho).trace().real(); }

} // namespace becmon
