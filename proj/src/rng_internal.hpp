#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace cbnorm::detail {

// Deterministic across platforms: raw 64-bit draws are mapped to doubles by
// hand (std::uniform_real_distribution and friends vary by standard library).
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }  // [0, 1)

    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        constexpr double kTwoPi = 6.283185307179586476925286766559;
        spare_ = r * std::sin(kTwoPi * u2);
        have_spare_ = true;
        return r * std::cos(kTwoPi * u2);
    }

    std::complex<double> complex_gaussian() {
        const double re = gaussian();
        const double im = gaussian();
        return {re, im};
    }

  private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// Splits one user seed into independent streams (per restart, per sample).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace cbnorm::detail
