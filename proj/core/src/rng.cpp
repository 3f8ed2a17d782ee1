#include "xlab/rng.hpp"

#include <cmath>
#include <numbers>

#include "xlab/errors.hpp"

namespace xlab {

namespace {

constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
}

}  // namespace

std::uint64_t Rng::next_u64() {
    ++counter_;
    return mix(seed_ + counter_ * kGamma);
}

double Rng::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
    const double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t Rng::below(std::uint64_t n) {
    if (n == 0) throw ParameterError("Rng::below: n must be positive");
    // Lemire's multiply-shift with rejection of the biased fringe.
    while (true) {
        const std::uint64_t x = next_u64();
        const __uint128_t m = static_cast<__uint128_t>(x) * n;
        const std::uint64_t low = static_cast<std::uint64_t>(m);
        if (low >= n || low >= static_cast<std::uint64_t>(-n) % n)
            return static_cast<std::uint64_t>(m >> 64);
    }
}

Rng Rng::derive(std::uint64_t a, std::uint64_t b, std::uint64_t c) const {
    std::uint64_t h = seed_;
    h = mix(h + kGamma + a);
    h = mix(h + kGamma + b);
    h = mix(h + kGamma + c);
    return Rng(h);
}

std::vector<std::size_t> Rng::permutation(std::size_t n) {
    std::vector<std::size_t> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = i;
    for (std::size_t i = n; i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(below(i));
        std::swap(p[i - 1], p[j]);
    }
    return p;
}

}  // namespace xlab
