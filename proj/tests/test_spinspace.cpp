#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "becmon/observables.hpp"
#include "becmon/spin_space.hpp"
#include "becmon/state.hpp"

using namespace becmon;

namespace {

// independent oracle: ⟨J±, Jz⟩ of a coherent state by direct summation over
// binomial amplitudes (no library state/operator code involved)
struct CoherentMoments {
    double jx, jy, jz;
};

CoherentMoments coherent_moments_direct(int n, double theta, double phi) {
    const double c = std::cos(0.5 * theta);
    const double s = std::sin(0.5 * theta);
    std::vector<double> mag(n + 1);
    double binom = 1.0;
    for (int k = 0; k <= n; ++k) {
        mag[k] = std::sqrt(binom) * std::pow(c, k) * std::pow(s, n - k);
        binom *= static_cast<double>(n - k) / static_cast<double>(k + 1);
    }
    double norm2 = 0.0;
    for (double v : mag) norm2 += v * v;
    const double j = 0.5 * n;
    double jz = 0.0;
    std::complex<double> jplus = 0.0;
    for (int k = 0; k <= n; ++k) {
        const double m = k - j;
        jz += m * mag[k] * mag[k];
        if (k + 1 <= n) {
            // ⟨J+⟩ = Σ conj(c_{m+1}) f(m) c_m ; amplitude phases e^{i(j-m)φ}
            const double f = std::sqrt((j - m) * (j + m + 1.0));
            jplus += mag[k + 1] * f * mag[k] * std::polar(1.0, phi);
        }
    }
    jz /= norm2;
    jplus /= norm2;
    return {jplus.real(), jplus.imag(), jz};
}

} // namespace

TEST_CASE("jz is diagonal with ascending m and ladder elements match the closed form") {
    const auto ops = angular_momentum_operators(2); // j = 1
    REQUIRE(ops.dim == 3);
    CHECK(ops.jz(0, 0).real() == -1.0);
    CHECK(ops.jz(1, 1).real() == 0.0);
    CHECK(ops.jz(2, 2).real() == 1.0);
    // ⟨m=1|J+|m=0⟩ = sqrt(2)
    CHECK_THAT(ops.jplus(2, 1).real(), Catch::Matchers::WithinAbs(std::sqrt(2.0), 1e-15));
    CHECK(ops.jplus.adjoint().isApprox(ops.jminus(), 1e-15));
}

TEST_CASE("su(2) commutators, Casimir and Hermiticity across sizes") {
    for (int n : {1, 2, 10, 100}) {
        const auto ops = angular_momentum_operators(n);
        const Matrix id = Matrix::Identity(ops.dim, ops.dim);
        const double casimir = ops.j * (ops.j + 1.0);
        CHECK((ops.jx * ops.jy - ops.jy * ops.jx - kI * ops.jz).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((ops.jy * ops.jz - ops.jz * ops.jy - kI * ops.jx).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((ops.jz * ops.jx - ops.jx * ops.jz - kI * ops.jy).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((ops.jx * ops.jx + ops.jy * ops.jy + ops.jz * ops.jz - casimir * id)
                  .cwiseAbs()
                  .maxCoeff() < 1e-10);
        CHECK((ops.jx - ops.jx.adjoint()).cwiseAbs().maxCoeff() == 0.0);
        CHECK((ops.jy - ops.jy.adjoint()).cwiseAbs().maxCoeff() == 0.0);
        CHECK((ops.jz_sq - ops.jz * ops.jz).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("operator construction rejects invalid sizes") {
    CHECK_THROWS_AS(angular_momentum_operators(0), std::invalid_argument);
    CHECK_THROWS_AS(angular_momentum_operators(-3), std::invalid_argument);
}

TEST_CASE("hamiltonian: u=0 tridiagonal, K=0 diagonal, bias term") {
    const auto ops = angular_momentum_operators(2);

    SECTION("N=2, u=0, K=1, no bias: H = -jx with off-diagonals -1/sqrt(2)") {
        ModelParams p;
        p.n_particles = 2;
        p.interaction_u = 0.0;
        p.tunneling_k = 1.0;
        p.bias_epsilon = 0.0;
        const Matrix h = build_hamiltonian(p, ops);
        CHECK((h + ops.jx).cwiseAbs().maxCoeff() == 0.0);
        CHECK_THAT(h(0, 1).real(), Catch::Matchers::WithinAbs(-1.0 / std::sqrt(2.0), 1e-15));
        CHECK_THAT(h(1, 2).real(), Catch::Matchers::WithinAbs(-1.0 / std::sqrt(2.0), 1e-15));
    }

    SECTION("K=0: H diagonal with entries U m^2") {
        ModelParams p;
        p.n_particles = 2;
        p.interaction_u = 3.0;
        p.tunneling_k = 0.0; // U = uK/N = 0 — diagonal limit is the zero matrix
        p.bias_epsilon = 0.0;
        const Matrix h = build_hamiltonian(p, ops);
        CHECK(h.cwiseAbs().maxCoeff() == 0.0);
    }

    SECTION("N=100, u=1, K=1 gives U = 0.01") {
        ModelParams p;
        p.n_particles = 100;
        p.interaction_u = 1.0;
        p.tunneling_k = 1.0;
        CHECK_THAT(p.interaction_strength(), Catch::Matchers::WithinAbs(0.01, 1e-18));
        const auto ops100 = angular_momentum_operators(100);
        const Matrix h = build_hamiltonian(p, ops100);
        // diagonal entry at m: U m^2 + eps*K*(m + N/2)
        const double m0 = -50.0;
        CHECK_THAT(h(0, 0).real(),
                   Catch::Matchers::WithinAbs(0.01 * m0 * m0 + 1e-2 * (m0 + 50.0), 1e-12));
    }

    SECTION("bias term equals eps*K*(jz + N/2)") {
        ModelParams with_bias;
        with_bias.n_particles = 2;
        with_bias.interaction_u = 0.7;
        with_bias.tunneling_k = 2.0;
        with_bias.bias_epsilon = 1e-2;
        ModelParams without_bias = with_bias;
        without_bias.bias_epsilon = 0.0;
        const Matrix diff =
            build_hamiltonian(with_bias, ops) - build_hamiltonian(without_bias, ops);
        const Matrix expected =
            1e-2 * 2.0 * (ops.jz + Matrix::Identity(3, 3)); // N/2 = 1
        CHECK((diff - expected).cwiseAbs().maxCoeff() < 1e-15);
    }

    SECTION("Hermitian by construction, exactly") {
        ModelParams p;
        p.n_particles = 100;
        p.interaction_u = 1.0;
        p.gamma_bar = 1.0;
        const auto ops100 = angular_momentum_operators(100);
        const Matrix h = build_hamiltonian(p, ops100);
        CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() == 0.0);
    }

    SECTION("dimension mismatch rejected") {
        ModelParams p;
        p.n_particles = 5;
        CHECK_THROWS_AS(build_hamiltonian(p, ops), std::invalid_argument);
    }
}

TEST_CASE("cavity gamma conversion") {
    CHECK(cavity_gamma(1.0, 1.0, 4.0) == 1.0);
    CHECK(cavity_gamma(0.0, 3.0, 2.0) == 0.0);
    CHECK(cavity_gamma(1.0, 2.0, 2.0) == 32.0);
    CHECK_THROWS_AS(cavity_gamma(1.0, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(cavity_gamma(1.0, 1.0, -1.0), std::invalid_argument);
}

TEST_CASE("fock states: poles, Bloch vector, range checks") {
    const auto ops = angular_momentum_operators(100);
    const auto north = fock_state(100, 50.0);
    CHECK_THAT(expectation(north, ops.jz), Catch::Matchers::WithinAbs(50.0, 1e-12));
    const auto s = bloch_vector(north, ops);
    CHECK_THAT(s.sx, Catch::Matchers::WithinAbs(0.0, 1e-12));
    CHECK_THAT(s.sy, Catch::Matchers::WithinAbs(0.0, 1e-12));
    CHECK_THAT(s.sz, Catch::Matchers::WithinAbs(1.0, 1e-12));
    CHECK_THAT(one_body_purity(north, ops), Catch::Matchers::WithinAbs(1.0, 1e-12));

    const auto south = fock_state(100, -50.0);
    CHECK_THAT(bloch_vector(south, ops).sz, Catch::Matchers::WithinAbs(-1.0, 1e-12));
    CHECK_THAT(one_body_purity(south, ops), Catch::Matchers::WithinAbs(1.0, 1e-12));

    CHECK_THROWS_AS(fock_state(100, 51.0), std::invalid_argument);
    CHECK_THROWS_AS(fock_state(100, 0.5), std::invalid_argument);  // wrong parity
    CHECK_NOTHROW(fock_state(3, 0.5));                             // half-integer j
}

TEST_CASE("coherent states: pole limits and Bloch vector oracle") {
    SECTION("theta=0 equals |+j>") {
        const auto cs = coherent_state(100, 0.0, 0.3);
        const auto pole = fock_state(100, 50.0);
        CHECK_THAT(fidelity(cs, pole), Catch::Matchers::WithinAbs(1.0, 1e-14));
    }
    SECTION("theta=pi equals |-j> up to global phase") {
        const auto cs = coherent_state(100, kPi, 1.2);
        const auto pole = fock_state(100, -50.0);
        CHECK_THAT(fidelity(cs, pole), Catch::Matchers::WithinAbs(1.0, 1e-14));
    }
    SECTION("equator states") {
        const auto ops = angular_momentum_operators(100);
        const auto cs = coherent_state(100, kPi / 2.0, 0.0);
        const auto s = bloch_vector(cs, ops);
        CHECK_THAT(s.sx, Catch::Matchers::WithinAbs(1.0, 1e-10));
        CHECK_THAT(s.sy, Catch::Matchers::WithinAbs(0.0, 1e-10));
        CHECK_THAT(s.sz, Catch::Matchers::WithinAbs(0.0, 1e-10));
        CHECK_THAT(one_body_purity(cs, ops), Catch::Matchers::WithinAbs(1.0, 1e-12));
    }
    SECTION("Bloch vector equals (sin t cos p, sin t sin p, cos t) on a 20-point grid") {
        const auto ops = angular_momentum_operators(100);
        const double scale = 2.0 / 100.0;
        for (int it = 0; it < 4; ++it)
            for (int ip = 0; ip < 5; ++ip) {
                const double theta = kPi * (it + 0.5) / 4.0;
                const double phi = 2.0 * kPi * ip / 5.0;
                const auto cs = coherent_state(100, theta, phi);
                const auto s = bloch_vector(cs, ops);
                CHECK_THAT(s.sx, Catch::Matchers::WithinAbs(std::sin(theta) * std::cos(phi), 1e-10));
                CHECK_THAT(s.sy, Catch::Matchers::WithinAbs(std::sin(theta) * std::sin(phi), 1e-10));
                CHECK_THAT(s.sz, Catch::Matchers::WithinAbs(std::cos(theta), 1e-10));
                // cross-check against the independent direct-summation oracle
                const auto direct = coherent_moments_direct(100, theta, phi);
                CHECK_THAT(s.sx, Catch::Matchers::WithinAbs(scale * direct.jx, 1e-12));
                CHECK_THAT(s.sy, Catch::Matchers::WithinAbs(scale * direct.jy, 1e-12));
                CHECK_THAT(s.sz, Catch::Matchers::WithinAbs(scale * direct.jz, 1e-12));
                CHECK_THAT(cs.norm(), Catch::Matchers::WithinAbs(1.0, 1e-12));
            }
    }
    SECTION("range checks") {
        CHECK_THROWS_AS(coherent_state(100, -0.1, 0.0), std::invalid_argument);
        CHECK_THROWS_AS(coherent_state(100, kPi + 0.1, 0.0), std::invalid_argument);
    }
}

TEST_CASE("maximally uncertain estimate: flat magnitudes, seeded determinism") {
    const auto a = maximally_uncertain_estimate(100, 7);
    for (Eigen::Index i = 0; i < a.dim(); ++i)
        CHECK_THAT(std::norm(a.amplitudes(i)), Catch::Matchers::WithinAbs(1.0 / 101.0, 1e-14));

    const auto b = maximally_uncertain_estimate(100, 7);
    CHECK(a.amplitudes == b.amplitudes); // bit-for-bit

    const auto c = maximally_uncertain_estimate(100, 8);
    const double f = fidelity(a, c);
    CHECK(f < 0.1); // overlap magnitude ~ 1/sqrt(N+1)
    CHECK(f > 0.0);
}

TEST_CASE("model parameter normalization") {
    ModelParams p;
    p.n_particles = 100;
    p.tunneling_k = 1.0;
    p.gamma_bar = 1.0;
    CHECK_THAT(p.measurement_gamma(), Catch::Matchers::WithinAbs(0.01, 1e-18));
    p.n_particles = 50;
    CHECK_THAT(p.measurement_gamma(), Catch::Matchers::WithinAbs(0.02, 1e-18));
    CHECK_THAT(p.rabi_period(), Catch::Matchers::WithinAbs(2.0 * kPi, 1e-15));
    p.gamma_bar = -1.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}
