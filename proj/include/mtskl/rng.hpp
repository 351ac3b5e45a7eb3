#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace mtskl {

// All randomness in the toolkit flows from one user-supplied master seed.
// Component streams are derived as
//   derive_seed(master, component_name, i, j)
// where the name is FNV-1a hashed and folded with the indices through
// splitmix64. The derived value seeds a std::mt19937_64. Draws below avoid
// std::uniform_*_distribution so that sequences do not depend on the
// standard library implementation.

inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::uint64_t derive_seed(std::uint64_t master, std::string_view component,
                                 std::uint64_t i = 0, std::uint64_t j = 0) {
    std::uint64_t s = splitmix64(master ^ fnv1a64(component));
    s = splitmix64(s ^ i);
    s = splitmix64(s ^ j);
    return s;
}

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // uniform in [0, 1)
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform in [lo, hi], inclusive
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const std::uint64_t range = static_cast<std::uint64_t>(hi - lo) + 1;
        // Lemire's multiply-shift; unbiased via rejection on the low word.
        std::uint64_t x = next_u64();
        unsigned __int128 m = static_cast<unsigned __int128>(x) * range;
        auto low = static_cast<std::uint64_t>(m);
        if (low < range) {
            const std::uint64_t threshold = (0ULL - range) % range;
            while (low < threshold) {
                x = next_u64();
                m = static_cast<unsigned __int128>(x) * range;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return lo + static_cast<std::int64_t>(m >> 64);
    }

    double uniform_real(double lo, double hi) { return lo + uniform01() * (hi - lo); }

    double log_uniform(double lo, double hi) {
        return std::exp(uniform_real(std::log(lo), std::log(hi)));
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(i) - 1));
            std::swap(v[i - 1], v[j]);
        }
    }

    // k distinct indices from [0, n), in draw order
    std::vector<int> sample_without_replacement(int n, int k) {
        std::vector<int> pool(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) pool[static_cast<std::size_t>(i)] = i;
        shuffle(pool);
        pool.resize(static_cast<std::size_t>(k));
        return pool;
    }

    // standard normal via Box-Muller (deterministic draw count: 2 per call)
    double normal() {
        const double u1 = 1.0 - uniform01();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.28318530717958647692 * u2);
    }

  private:
    std::mt19937_64 engine_;
};

} // namespace mtskl
