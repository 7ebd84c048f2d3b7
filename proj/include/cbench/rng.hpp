#pragma once

#include <cmath>
#include <cstdint>

namespace cbench {

/// Counter-based 64-bit generator. Output i is the splitmix64 finalizer
/// applied to seed + (i+1)*phi64, so any index can be sampled in any order
/// without sequential state. Streams with different seeds are independent
/// for practical purposes; reproducibility is bit-exact within this
/// implementation.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t bits(std::uint64_t index) const {
        std::uint64_t z = seed_ + (index + 1) * 0x9E3779B97F4A7C15ull;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1), 53-bit resolution.
    double uniform(std::uint64_t index) const {
        return static_cast<double>(bits(index) >> 11) * 0x1.0p-53;
    }

    /// Uniform in (0, 1]; safe as a log() argument.
    double uniform_open(std::uint64_t index) const {
        return static_cast<double>((bits(index) >> 11) + 1) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller, consuming indices 2i and 2i+1.
    double normal(std::uint64_t index) const {
        double u1 = uniform_open(2 * index);
        double u2 = uniform(2 * index + 1);
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
    }

    /// Uniform integer in [0, bound). bound must be > 0.
    std::uint64_t below(std::uint64_t index, std::uint64_t bound) const {
        return static_cast<std::uint64_t>(uniform(index) * static_cast<double>(bound));
    }

private:
    std::uint64_t seed_;
};

/// FNV-1a over an arbitrary byte string; also used to derive per-tensor and
/// per-item seeds from human-readable keys.
inline std::uint64_t fnv1a64(const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

} // namespace cbench
