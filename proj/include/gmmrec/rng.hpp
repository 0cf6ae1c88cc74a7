#pragma once

#include <cstdint>
#include <span>

namespace gmmrec {

/// 64-bit finalizer from SplitMix64 (Steele, Lea, Flood 2014). Bijective on uint64.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Counter-based generator.
///
/// The i-th 64-bit output (i = 1, 2, ...) of a stream with seed s is
///
///     mix64(key + i * 0x9E3779B97F4A7C15),   key = mix64(s ^ 0x6A09E667F3BCC909)
///
/// so the stream is a pure function of (seed, i) and uses only integer
/// arithmetic. Uniform doubles take the top 53 bits. Standard normals use a
/// 256-layer ziggurat (Marsaglia and Tsang 2000): one draw supplies both the
/// layer (low 8 bits) and a signed abscissa (top 53 bits); about 99% of
/// normals cost exactly one draw.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) noexcept;

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t counter() const noexcept { return counter_; }

    std::uint64_t next_u64() noexcept {
        ++counter_;
        return mix64(key_ + counter_ * kGolden);
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform on [-1, 1).
    double symmetric_uniform() noexcept { return 2.0 * uniform() - 1.0; }

    double normal() noexcept;

    /// out[k] = scale * normal() for k = 0, 1, ..., the same draws as a loop of
    /// normal() calls but without per-call overhead.
    void fill_normal(std::span<double> out, double scale = 1.0) noexcept;

    struct Tables;

    /// Fair coin: +1 or -1 from the top bit of one draw.
    int rademacher() noexcept { return (next_u64() >> 63) ? 1 : -1; }

private:
    double ziggurat(const Tables& t) noexcept;

    static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

    std::uint64_t seed_;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

/// Seed for the (cell, rep) sub-stream of a master seed. Depends only on its
/// arguments, never on execution order:
///
///     h0 = mix64(master + 0x9E3779B97F4A7C15)
///     h1 = mix64(h0 ^ (cell * 0xD1B54A32D192ED03 + 0x8CB92BA72F3D8DD7))
///     h2 = mix64(h1 ^ (rep  * 0xAEF17502108EF2D9 + 0x4F1BBCDCBFA53E0B))
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t cell_index, std::uint64_t rep_index) noexcept;

}  // namespace gmmrec
