#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace lossagent {

// Minimal splitmix64 stream. We roll our own instead of <random> engines so
// that every stochastic path (data synthesis, random policy, noise) produces
// the same bytes on every platform and standard library.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in [lo, hi); degenerates to lo when hi == lo.
    double next_range(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

    int next_int(int lo, int hi_inclusive) {
        return lo + static_cast<int>(next_u64() % static_cast<std::uint64_t>(hi_inclusive - lo + 1));
    }

    // Standard normal via Box-Muller.
    double next_gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = next_unit();
        double u2 = next_unit();
        if (u1 < 1e-300) u1 = 1e-300;
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    std::uint64_t state() const { return state_; }

  private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

std::uint64_t fnv1a64(std::string_view text);

// One master seed fans out into independent streams, one per purpose tag, so
// consumers can be added or reordered without disturbing each other.
std::uint64_t derive_seed(std::uint64_t master, std::string_view purpose);

}  // namespace lossagent
