// wigner.hpp — spin Wigner quasi-probability on the Bloch sphere
//
// Multipole construction: ρ_W(θ,φ) = c·Σ_{k=0..2j} Σ_{q=-k..k} ρ_kq Y_kq(θ,φ)
// with ρ_kq = Tr(ρ T†_kq) over the orthonormal tensor basis and c chosen so
// the sphere integral equals 1. The grid is Gauss–Legendre in cosθ times a
// uniform φ grid, which integrates every degree-2j mode exactly — the
// normalization check is exact, not tolerance-fudged.

#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "becmon/io.hpp"
#include "becmon/quadrature.hpp"
#include "becmon/state.hpp"
#include "becmon/tensor_ops.hpp"
#include "becmon/types.hpp"

#include <nlohmann/json.hpp>

namespace becmon {

struct WignerGridSpec {
    int n_theta = 0; // 0 → 2j+1 (minimum; fewer θ nodes alias degree-2j structure)
    int n_phi = 0;   // 0 → 2(2j+1)
};

struct WignerGrid {
    std::vector<double> theta_nodes;   // ascending in (0, π)
    std::vector<double> theta_weights; // Gauss–Legendre weights in cosθ
    std::vector<double> phi_nodes;     // uniform on [0, 2π)
    RealMatrix values;                 // n_theta × n_phi

    double sphere_integral() const {
        const double dphi = 2.0 * kPi / static_cast<double>(phi_nodes.size());
        double total = 0.0;
        for (std::size_t i = 0; i < theta_nodes.size(); ++i)
            total += theta_weights[i] * values.row(static_cast<Eigen::Index>(i)).sum();
        return total * dphi;
    }

    double min_value() const { return values.minCoeff(); }
    double max_value() const { return values.maxCoeff(); }
};

namespace detail {

// multipole moments ρ_kq = Tr(ρ T†_kq) for q >= 0, from the banded ρ elements
inline std::vector<std::vector<Complex>> wigner_moments(const SphericalTensorBasis& basis,
                                                        const Matrix& rho) {
    const int dim = basis.dim();
    std::vector<std::vector<Complex>> moments(dim);
    for (int k = 0; k < dim; ++k) {
        moments[k].resize(k + 1);
        for (int q = 0; q <= k; ++q) {
            const RealVector& band = basis.band(k, q);
            Complex acc = 0.0;
            for (int c = 0; c < band.size(); ++c) acc += band(c) * rho(c + q, c);
            moments[k][q] = acc;
        }
    }
    return moments;
}

inline WignerGrid wigner_from_moments(int dim,
                                      const std::vector<std::vector<Complex>>& moments,
                                      WignerGridSpec spec) {
    const int k_max = dim - 1;
    int n_theta = spec.n_theta == 0 ? dim : spec.n_theta;
    int n_phi = spec.n_phi == 0 ? 2 * dim : spec.n_phi;
    if (n_theta < dim)
        throw std::invalid_argument(
            "wigner_function: fewer than 2j+1 theta nodes alias the multipole expansion");
    if (n_phi < 2 * dim)
        throw std::invalid_argument(
            "wigner_function: fewer than 2(2j+1) phi nodes alias the azimuthal modes");

    const GaussLegendre gl = gauss_legendre(n_theta);
    WignerGrid grid;
    grid.theta_nodes.resize(n_theta);
    grid.theta_weights.resize(n_theta);
    for (int i = 0; i < n_theta; ++i) {
        grid.theta_nodes[i] = std::acos(gl.nodes[n_theta - 1 - i]); // θ ascending
        grid.theta_weights[i] = gl.weights[n_theta - 1 - i];
    }
    grid.phi_nodes.resize(n_phi);
    for (int p = 0; p < n_phi; ++p)
        grid.phi_nodes[p] = 2.0 * kPi * static_cast<double>(p) / static_cast<double>(n_phi);

    const double scale = std::sqrt(static_cast<double>(dim) / (4.0 * kPi));
    grid.values.resize(n_theta, n_phi);

    std::vector<double> legendre;
    std::vector<Complex> g(k_max + 1); // g_q(θ) = Σ_k ρ_kq P̃_kq(cosθ)
    for (int i = 0; i < n_theta; ++i) {
        const double x = std::cos(grid.theta_nodes[i]);
        for (int q = 0; q <= k_max; ++q) {
            normalized_assoc_legendre(k_max, q, x, legendre);
            Complex acc = 0.0;
            for (int k = q; k <= k_max; ++k) acc += moments[k][q] * legendre[k - q];
            g[q] = acc;
        }
        for (int p = 0; p < n_phi; ++p) {
            const Complex e1 = std::polar(1.0, grid.phi_nodes[p]);
            Complex eq = e1;
            double val = g[0].real(); // ±q pairs are conjugate: the sum is real
            for (int q = 1; q <= k_max; ++q) {
                val += 2.0 * (g[q] * eq).real();
                eq *= e1;
            }
            grid.values(i, p) = scale * val;
        }
    }
    return grid;
}

} // namespace detail

inline WignerGrid wigner_function(const Matrix& rho, WignerGridSpec spec = {}) {
    if (rho.rows() != rho.cols() || rho.rows() < 1)
        throw std::invalid_argument("wigner_function: density matrix must be square");
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-9)
        throw std::invalid_argument("wigner_function: density matrix must be Hermitian");
    const int dim = static_cast<int>(rho.rows());
    const auto& basis = SphericalTensorBasis::cached(dim);
    return detail::wigner_from_moments(dim, detail::wigner_moments(basis, rho), spec);
}

inline WignerGrid wigner_function(const QuantumState& state, WignerGridSpec spec = {}) {
    const int dim = static_cast<int>(state.dim());
    const auto& basis = SphericalTensorBasis::cached(dim);
    // pure-state moments without forming |ψ⟩⟨ψ|
    std::vector<std::vector<Complex>> moments(dim);
    for (int k = 0; k < dim; ++k) {
        moments[k].resize(k + 1);
        for (int q = 0; q <= k; ++q) {
            const RealVector& band = basis.band(k, q);
            Complex acc = 0.0;
            for (int c = 0; c < band.size(); ++c)
                acc += band(c) * state.amplitudes(c + q) * std::conj(state.amplitudes(c));
            moments[k][q] = acc;
        }
    }
    return detail::wigner_from_moments(dim, moments, spec);
}

// --- serialization -----------------------------------------------------------

// flat CSV: theta,phi,value
inline void write_wigner_csv(const WignerGrid& grid, const std::filesystem::path& path) {
    std::string out = "theta,phi,value\n";
    for (std::size_t i = 0; i < grid.theta_nodes.size(); ++i)
        for (std::size_t p = 0; p < grid.phi_nodes.size(); ++p) {
            out += io::fmt_double(grid.theta_nodes[i]);
            out += ',';
            out += io::fmt_double(grid.phi_nodes[p]);
            out += ',';
            out += io::fmt_double(grid.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(p)));
            out += '\n';
        }
    io::write_text_file(path, out);
}

// JSON header + raw little-endian float64 matrix (row-major, θ rows)
inline void write_wigner_binary(const WignerGrid& grid,
                                const std::filesystem::path& json_path,
                                const std::filesystem::path& data_path) {
    nlohmann::ordered_json header;
    header["format"] = "becmon-wigner";
    header["format_version"] = 1;
    header["n_theta"] = grid.theta_nodes.size();
    header["n_phi"] = grid.phi_nodes.size();
    header["theta"] = grid.theta_nodes;
    header["theta_weights"] = grid.theta_weights;
    header["phi"] = grid.phi_nodes;
    header["layout"] = "row-major float64-le, theta rows";
    header["data_file"] = data_path.filename().string();
    io::write_text_file(json_path, header.dump(2) + "\n");

    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(grid.values.size()));
    for (Eigen::Index i = 0; i < grid.values.rows(); ++i)
        for (Eigen::Index p = 0; p < grid.values.cols(); ++p) flat.push_back(grid.values(i, p));
    io::write_binary_file(data_path, flat.data(), flat.size() * sizeof(double));
}

inline WignerGrid read_wigner_binary(const std::filesystem::path& json_path) {
    const auto header = nlohmann::json::parse(io::read_text_file(json_path));
    if (header.at("format") != "becmon-wigner")
        throw std::runtime_error("read_wigner_binary: not a wigner header: " + json_path.string());
    WignerGrid grid;
    grid.theta_nodes = header.at("theta").get<std::vector<double>>();
    grid.theta_weights = header.at("theta_weights").get<std::vector<double>>();
    grid.phi_nodes = header.at("phi").get<std::vector<double>>();
    const auto n_theta = header.at("n_theta").get<std::size_t>();
    const auto n_phi = header.at("n_phi").get<std::size_t>();
    const auto blob = io::read_binary_file(json_path.parent_path() / header.at("data_file").get<std::string>());
    if (blob.size() != n_theta * n_phi * sizeof(double))
        throw std::runtime_error("read_wigner_binary: data size mismatch");
    grid.values.resize(static_cast<Eigen::Index>(n_theta), static_cast<Eigen::Index>(n_phi));
    const double* src = reinterpret_cast<const double*>(blob.data());
    for (std::size_t i = 0; i < n_theta; ++i)
        for (std::size_t p = 0; p < n_phi; ++p)
            grid.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(p)) = src[i * n_phi + p];
    return grid;
}

} // namespace becmon
