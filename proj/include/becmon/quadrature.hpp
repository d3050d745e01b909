// quadrature.hpp — Gauss–Legendre nodes/weights and normalized associated Legendre functions

#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "becmon/types.hpp"

namespace becmon {

struct GaussLegendre {
    std::vector<double> nodes;   // ascending on (-1, 1)
    std::vector<double> weights; // sum to 2
};

// Newton iteration on P_n; exact for polynomials of degree <= 2n-1.
inline GaussLegendre gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
    GaussLegendre q;
    q.nodes.resize(n);
    q.weights.resize(n);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(kPi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            // P_n(x) and P_{n-1}(x) by upward recurrence
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        q.nodes[i] = -x; // fill ascending from the left
        q.nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        q.weights[i] = w;
        q.weights[n - 1 - i] = w;
    }
    return q;
}

// Fully normalized associated Legendre functions P̃_{kq}(x) with the
// Condon–Shortley phase, so that Y_{kq}(θ,φ) = P̃_{kq}(cosθ)·e^{iqφ} and
// ∫|Y_{kq}|² dΩ = 1. For fixed q, fills values for k = q..k_max.
inline void normalized_assoc_legendre(int k_max, int q, double x, std::vector<double>& out) {
    if (q < 0 || q > k_max) throw std::invalid_argument("normalized_assoc_legendre: bad q");
    out.assign(k_max - q + 1, 0.0);
    const double sx = std::sqrt(std::max(0.0, 1.0 - x * x));
    // seed P̃_{qq}
    double pqq = std::sqrt(1.0 / (4.0 * kPi));
    for (int i = 1; i <= q; ++i)
        pqq *= -std::sqrt((2.0 * i + 1.0) / (2.0 * i)) * sx;
    out[0] = pqq;
    if (q == k_max) return;
    out[1] = std::sqrt(2.0 * q + 3.0) * x * pqq;
    for (int k = q + 2; k <= k_max; ++k) {
        const double kk = static_cast<double>(k);
        const double qq = static_cast<double>(q);
        const double a = std::sqrt((4.0 * kk * kk - 1.0) / (kk * kk - qq * qq));
        const double b = std::sqrt(((kk - 1.0) * (kk - 1.0) - qq * qq) / (4.0 * (kk - 1.0) * (kk - 1.0) - 1.0));
        out[k - q] = a * (x * out[k - q - 1] - b * out[k - q - 2]);
    }
}

} // namespace becmon
