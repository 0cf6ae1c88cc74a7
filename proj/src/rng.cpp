#include "gmmrec/rng.hpp"

#include <array>
#include <cmath>
#include <span>

namespace gmmrec {
namespace {

constexpr int kLayers = 256;
constexpr double kTailStart = 3.6541528853610088;  // r: right edge of the base strip
constexpr double kLayerArea = 0.00492867323399;     // v: area of every layer

double unnormalized_pdf(double x) { return std::exp(-0.5 * x * x); }

}  // namespace

struct CounterRng::Tables {
    std::array<double, kLayers + 1> x{};  // x[i]: right edge of layer i, x[256] = 0
    std::array<double, kLayers + 1> f{};  // f[i] = pdf(x[i])

    Tables() {
        x[0] = kLayerArea / unnormalized_pdf(kTailStart);
        x[1] = kTailStart;
        for (int i = 2; i < kLayers; ++i)
            x[i] = std::sqrt(-2.0 * std::log(kLayerArea / x[i - 1] + unnormalized_pdf(x[i - 1])));
        x[kLayers] = 0.0;
        for (int i = 0; i <= kLayers; ++i) f[i] = unnormalized_pdf(x[i]);
    }
};

namespace {

const CounterRng::Tables& tables() {
    static const CounterRng::Tables t;
    return t;
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed) noexcept
    : seed_(seed), key_(mix64(seed ^ 0x6A09E667F3BCC909ULL)) {}

double CounterRng::normal() noexcept { return ziggurat(tables()); }

void CounterRng::fill_normal(std::span<double> out, double scale) noexcept {
    const Tables& t = tables();
    for (double& v : out) v = scale * ziggurat(t);
}

inline double CounterRng::ziggurat(const Tables& t) noexcept {
    for (;;) {
        const std::uint64_t bits = next_u64();
        const auto i = static_cast<std::size_t>(bits & 0xFF);
        const double u = static_cast<double>(bits >> 11) * 0x1.0p-52 - 1.0;
        const double x = u * t.x[i];
        if (std::abs(x) < t.x[i + 1]) [[likely]]
            return x;
        if (i == 0) {
            // Tail beyond r, by Marsaglia's exponential rejection.
            double a = 0.0;
            double b = 0.0;
            do {
                a = std::log(1.0 - uniform()) / kTailStart;
                b = std::log(1.0 - uniform());
            } while (-2.0 * b < a * a);
            return u < 0.0 ? a - kTailStart : kTailStart - a;
        }
        if (t.f[i + 1] + (t.f[i] - t.f[i + 1]) * uniform() < unnormalized_pdf(x)) return x;
    }
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t cell_index, std::uint64_t rep_index) noexcept {
    std::uint64_t h = mix64(master + 0x9E3779B97F4A7C15ULL);
    h = mix64(h ^ (cell_index * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL));
    h = mix64(h ^ (rep_index * 0xAEF17502108EF2D9ULL + 0x4F1BBCDCBFA53E0BULL));
    return h;
}

}  // namespace gmmrec
