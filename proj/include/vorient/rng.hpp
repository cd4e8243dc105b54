#pragma once

#include <cstdint>
#include <random>

#include "vorient/vec3.hpp"

namespace vorient {

// Seedable generator with portable distributions. std::mt19937_64 is fully
// specified by the standard; the distribution transforms below are our own so
// that streams are identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform in [0, 1), 53-bit resolution.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal via Box-Muller; one cached deviate.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1, u2;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    Vec3 normal3() {
        double a = normal(), b = normal(), c = normal();
        return {a, b, c};
    }

    // Uniform direction on the unit sphere.
    Vec3 unit_vector() {
        double z = 1.0 - 2.0 * uniform();
        double phi = 2.0 * 3.14159265358979323846 * uniform();
        double s = std::sqrt(std::max(0.0, 1.0 - z * z));
        return {s * std::cos(phi), s * std::sin(phi), z};
    }

    std::uint64_t raw() { return engine_(); }

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace vorient
