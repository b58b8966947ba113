#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace subriem {

/// Stateless 64-bit mixer, used to derive independent stream seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

/// Deterministic normal/uniform source. mt19937_64 is fully specified by the
/// standard and the Box-Muller transform below avoids the implementation-defined
/// std::normal_distribution, so identical seeds give identical streams everywhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    /// Stream `k` derived from a base seed; used for per-chunk Monte Carlo streams.
    static Rng stream(std::uint64_t seed, std::uint64_t k) {
        return Rng(splitmix64(seed ^ (0x9e3779b97f4a7c15ull * (k + 1))));
    }

    double uniform() {  // (0, 1)
        const std::uint64_t r = gen_() >> 11;
        double u = static_cast<double>(r) * 0x1.0p-53;
        if (u <= 0.0) u = 0x1.0p-53;
        return u;
    }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    std::uint64_t bits() { return gen_(); }

    /// Integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return gen_() % n; }

private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace subriem
