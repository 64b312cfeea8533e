#include "nilprime/unit_frac.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>

namespace nilprime {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// High 128 bits of a 128x128-bit product.
u128 mulhi(u128 a, u128 b) noexcept {
    const u128 mask = ~std::uint64_t{0};
    const u128 a_lo = a & mask, a_hi = a >> 64;
    const u128 b_lo = b & mask, b_hi = b >> 64;
    const u128 lo_lo = a_lo * b_lo;
    const u128 hi_lo = a_hi * b_lo;
    const u128 lo_hi = a_lo * b_hi;
    const u128 hi_hi = a_hi * b_hi;
    const u128 mid = (lo_lo >> 64) + (hi_lo & mask) + (lo_hi & mask);
    return hi_hi + (hi_lo >> 64) + (lo_hi >> 64) + (mid >> 64);
}

}  // namespace

UnitFrac UnitFrac::from_double(double value) {
    if (!std::isfinite(value)) throw std::invalid_argument("UnitFrac::from_double: non-finite value");
    const double frac = value - std::floor(value);
    if (frac >= 1.0) return UnitFrac{};
    // frac * 2^128 is an exact double; the conversion truncates nothing.
    return UnitFrac(static_cast<u128>(std::ldexp(frac, 128)));
}

UnitFrac UnitFrac::from_ratio(std::int64_t num, std::int64_t den) {
    if (den <= 0) throw std::invalid_argument("UnitFrac::from_ratio: denominator must be positive");
    std::int64_t r = num % den;
    if (r < 0) r += den;
    using boost::multiprecision::uint256_t;
    const uint256_t scaled = uint256_t(static_cast<std::uint64_t>(r)) << 128;
    const uint256_t d(static_cast<std::uint64_t>(den));
    uint256_t q = scaled / d;
    const uint256_t rem = scaled % d;
    if (2 * rem >= d) ++q;
    return UnitFrac(static_cast<u128>(q & uint256_t(~u128{0})));
}

double UnitFrac::to_double() const noexcept { return std::ldexp(static_cast<double>(raw_), -128); }

UnitFrac UnitFrac::mul(UnitFrac other) const noexcept { return UnitFrac(mulhi(raw_, other.raw_)); }

double circle_distance(UnitFrac a, UnitFrac b) noexcept {
    const u128 d = (a - b).raw();
    return std::ldexp(static_cast<double>(std::min(d, u128{0} - d)), -128);
}

std::complex<double> unit_phase(UnitFrac t) noexcept {
    const auto quadrant = static_cast<unsigned>(t.raw() >> 126);
    const u128 rest = t.raw() & ((u128{1} << 126) - 1);
    const double angle = kTwoPi * std::ldexp(static_cast<double>(rest), -128);
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    switch (quadrant) {
        case 0: return {c, s};
        case 1: return {-s, c};
        case 2: return {-c, -s};
        default: return {s, -c};
    }
}

}  // namespace nilprime
