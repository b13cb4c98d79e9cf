#pragma once

#include <cstdint>
#include <random>

#include "spiky/core.hpp"

namespace testing {

// Seeded property-test generator; the draws depend only on the seed.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) {
        const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
        return lo + (hi - lo) * u;
    }
    spiky::PhasePoint point(double r) { return {uniform(-r, r), uniform(-r, r)}; }
    spiky::Chord chord(double r) { return {uniform(-r, r), uniform(-r, r)}; }
    // Uniform in the disc of radius r.
    spiky::PhasePoint point_in_disc(double r) {
        const double rho = r * std::sqrt(uniform(0.0, 1.0));
        const double th = uniform(0.0, 2.0 * spiky::kPi);
        return {rho * std::cos(th), rho * std::sin(th)};
    }
    spiky::Chord chord_in_disc(double r) { return spiky::as_chord(point_in_disc(r)); }
    int integer(int lo, int hi) { return lo + static_cast<int>(rng_() % static_cast<std::uint64_t>(hi - lo + 1)); }

private:
    std::mt19937_64 rng_;
};

inline double max_abs_diff(const spiky::RealMatrix& a, const spiky::RealMatrix& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace testing
