// bloch.hpp — the single-particle Bloch vector s = (2/N)·⟨J⟩

#pragma once

#include <cmath>

namespace becmon {

struct BlochState {
    double sx = 0.0;
    double sy = 0.0;
    double sz = 0.0;

    double norm_sq() const { return sx * sx + sy * sy + sz * sz; }
    double norm() const { return std::sqrt(norm_sq()); }
};

} // namespace becmon
