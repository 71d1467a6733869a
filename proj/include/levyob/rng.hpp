#pragma once

#include <cmath>
#include <cstdint>

namespace levyob {

/// Counter-based splittable random generator.
///
/// Each (seed, stream) pair owns an independent sequence; draws are a strong
/// 64-bit mix of (key, counter), so parallel and serial path simulations
/// produce identical numbers for identical (seed, path_id).
class StreamRng {
public:
    StreamRng(std::uint64_t seed, std::uint64_t stream) noexcept
        : key_(derive_key(seed, stream)), counter_(0) {}

    std::uint64_t next_u64() noexcept {
        return mix64(key_ + (++counter_) * 0x9E3779B97F4A7C15ULL);
    }

    /// Uniform draw in the open interval (0, 1).
    double uniform01() noexcept {
        // 53-bit mantissa, shifted off zero
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Exponential with the given rate (mean 1/rate).
    double exponential(double rate) noexcept {
        return -std::log(uniform01()) / rate;
    }

    std::uint64_t counter() const noexcept { return counter_; }

private:
    static std::uint64_t mix64(std::uint64_t z) noexcept {
        // splitmix64 finalizer
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ULL;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBULL;
        z ^= z >> 31;
        return z;
    }

    static std::uint64_t derive_key(std::uint64_t seed, std::uint64_t stream) noexcept {
        std::uint64_t k = mix64(seed ^ 0xA0761D6478BD642FULL);
        k = mix64(k + 0x9E3779B97F4A7C15ULL * (stream + 1));
        return k;
    }

    std::uint64_t key_;
    std::uint64_t counter_;
};

}  // namespace levyob
