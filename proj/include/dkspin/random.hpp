#pragma once

// Deterministic sampling. Uniform variates are built directly from the
// 64-bit engine output so that identical seeds give bit-identical draws on
// every standard library.

#include <cstdint>
#include <random>

#include "dkspin/decomposition.hpp"

namespace dk {

class Sampler
{
public:
    explicit Sampler(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [-1, 1).
    double uniform() { return 2.0 * unit() - 1.0; }

    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

    /// Real and imaginary parts independently uniform on [-scale, scale).
    Complex complex(double scale = 1.0) { return {scale * uniform(), scale * uniform()}; }

    Spinor4 spinor(double scale = 1.0) { return {complex(scale), complex(scale), complex(scale), complex(scale)}; }

    /// Unit 3-vector, uniform on the sphere.
    std::array<double, 3> direction()
    {
        const double z = uniform();
        const double phi = uniform(0.0, 2.0 * 3.14159265358979323846);
        const double r = std::sqrt(1.0 - z * z);
        return {r * std::cos(phi), r * std::sin(phi), z};
    }

    std::uint64_t next() { return engine_(); }

private:
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    std::mt19937_64 engine_;
};

}  // namespace dk
