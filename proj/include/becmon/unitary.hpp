// unitary.hpp — exact reference propagation exp(-iHt) via eigendecomposition

#pragma once

#include <stdexcept>

#include "becmon/state.hpp"
#include "becmon/types.hpp"

namespace becmon {

class UnitaryPropagator {
  public:
    explicit UnitaryPropagator(const Matrix& h, double hermiticity_tol = 1e-9) {
        if (h.rows() != h.cols())
            throw std::invalid_argument("UnitaryPropagator: Hamiltonian must be square");
        if ((h - h.adjoint()).cwiseAbs().maxCoeff() > hermiticity_tol)
            throw std::invalid_argument("UnitaryPropagator: Hamiltonian must be Hermitian");
        Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
        if (solver.info() != Eigen::Success)
            throw std::runtime_error("UnitaryPropagator: eigendecomposition failed");
        eigenvalues_ = solver.eigenvalues();
        eigenvectors_ = solver.eigenvectors();
    }

    Vector evolve(const Vector& psi, double t) const {
        Vector coeffs = eigenvectors_.adjoint() * psi;
        for (Eigen::Index i = 0; i < coeffs.size(); ++i)
            coeffs(i) *= std::polar(1.0, -eigenvalues_(i) * t);
        return eigenvectors_ * coeffs;
    }

    // dense exp(-iHt)
    Matrix propagator(double t) const {
        Vector phases(eigenvalues_.size());
        for (Eigen::Index i = 0; i < phases.size(); ++i)
            phases(i) = std::polar(1.0, -eigenvalues_(i) * t);
        return eigenvectors_ * phases.asDiagonal() * eigenvectors_.adjoint();
    }

    const RealVector& eigenvalues() const { return eigenvalues_; }

  private:
    RealVector eigenvalues_;
    Matrix eigenvectors_;
};

inline QuantumState unitary_propagate(const QuantumState& initial, const Matrix& h, double t) {
    UnitaryPropagator propagator(h);
    QuantumState state{propagator.evolve(initial.amplitudes, t)};
    state.normalize();
    return state;
}

} // namespace becmon
