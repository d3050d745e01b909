// tensor_ops.hpp — irreducible spherical tensor operators T_kq on the spin-j space
//
// T_kq is a single off-diagonal band: ⟨m+q|T_kq|m⟩ ≠ 0 only. For fixed q the
// band entries are weight·polynomial(m) with the polynomial degree k-q, so the
// whole family is generated without Clebsch–Gordan sums:
//
//   T_qq  = (-1)^q (J₊)^q / ‖(J₊)^q‖_F          (cancellation-free product)
//   T_k+1,q ∝ orthogonal complement of m·T_kq   (Stieltjes/Lanczos on diag(m))
//
// with full reorthogonalization, which keeps Tr(T†_kq T_k'q') = δ_kk' δ_qq' at
// machine precision even at j = 50. (Naive repeated [J₋,·] lowering amplifies
// round-off by ~2j/√(k(k+1)-q(q-1)) per step and fails badly there.) Signs
// follow the ladder/Condon–Shortley convention — T_10 is a positive multiple
// of Jz, [J₋,T_kq] = √(k(k+1)-q(q-1))·T_k,q-1 — which the test suite pins
// against an independent small-j evaluator. Negative q are never stored:
// T_k,-q = (-1)^q T†_kq.

#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "becmon/spin_space.hpp"
#include "becmon/types.hpp"

namespace becmon {

class SphericalTensorBasis {
  public:
    // band(k, q), 0 <= q <= k <= 2j: entry c is the (real) matrix element at
    // (row c+q, col c), i.e. ⟨m_c+q|T_kq|m_c⟩ with m_c = c - j.
    const RealVector& band(int k, int q) const { return bands_[k][q]; }
    int dim() const { return dim_; }
    int k_max() const { return dim_ - 1; }

    static SphericalTensorBasis build(int dim) {
        if (dim < 1) throw std::invalid_argument("SphericalTensorBasis: dim must be >= 1");
        SphericalTensorBasis basis;
        basis.dim_ = dim;
        const double j = 0.5 * (dim - 1);
        basis.bands_.resize(dim);
        for (int k = 0; k < dim; ++k) basis.bands_[k].resize(k + 1);

        // raising factors f[c] = ⟨m_{c+1}|J₊|m_c⟩
        RealVector f(std::max(dim - 1, 0));
        for (int c = 0; c + 1 < dim; ++c) f(c) = ladder_element(j, c - j);

        // (J₊)^q band, grown in q and renormalized each time — the raw products
        // reach ~1e155 at dim ~ 100 and would overflow the norm accumulation
        RealVector stretched = RealVector::Ones(dim) / std::sqrt(static_cast<double>(dim));
        for (int q = 0; q < dim; ++q) {
            if (q > 0) {
                RealVector next(dim - q);
                for (int c = 0; c + q < dim; ++c) next(c) = f(c + q - 1) * stretched(c);
                stretched = next / next.norm();
            }
            const int len = dim - q; // band length; polynomial degrees 0..len-1
            std::vector<RealVector> v(len);
            v[0] = ((q % 2 == 0) ? 1.0 : -1.0) * stretched;
            for (int d = 1; d < len; ++d) {
                RealVector w(len);
                for (int c = 0; c < len; ++c) w(c) = (c - j) * v[d - 1](c); // multiply by m_c
                for (int r = 0; r < d; ++r) w -= v[r].dot(w) * v[r];
                for (int r = 0; r < d; ++r) w -= v[r].dot(w) * v[r]; // second pass
                const double n = w.norm();
                if (!(n > 0.0))
                    throw std::runtime_error("SphericalTensorBasis: degenerate recursion");
                v[d] = w / n;
            }
            for (int d = 0; d < len; ++d) basis.bands_[q + d][q] = std::move(v[d]);
        }
        return basis;
    }

    // process-wide cache keyed by dimension; safe for concurrent use
    static const SphericalTensorBasis& cached(int dim) {
        static std::mutex mutex;
        static std::map<int, std::unique_ptr<SphericalTensorBasis>> cache;
        std::lock_guard<std::mutex> lock(mutex);
        auto& slot = cache[dim];
        if (!slot) slot = std::make_unique<SphericalTensorBasis>(build(dim));
        return *slot;
    }

    // dense T_kq for q >= 0 (tests and small-scale work)
    Matrix dense(int k, int q) const {
        Matrix t = Matrix::Zero(dim_, dim_);
        const RealVector& b = band(k, q);
        for (int c = 0; c < b.size(); ++c) t(c + q, c) = b(c);
        return t;
    }

  private:
    int dim_ = 0;
    std::vector<std::vector<RealVector>> bands_;
};

} // namespace becmon
