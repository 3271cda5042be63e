// Small numeric helpers used by several modules.
#pragma once

#include <cmath>
#include <cstdint>

namespace longmem::detail {

inline constexpr double pi = 3.14159265358979323846;

/// B(a,b) = Gamma(a)Gamma(b)/Gamma(a+b), via lgamma for overflow safety.
inline double beta(double a, double b) {
    return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

/// Standard normal distribution function.
inline double norm_cdf(double x) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

/// Finalizer of the splitmix64 generator; a bijection on 64-bit words.
inline std::uint64_t splitmix64_mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ull;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebull;
    z ^= z >> 31;
    return z;
}

} // namespace longmem::detail
