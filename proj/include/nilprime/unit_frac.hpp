#ifndef NILPRIME_UNIT_FRAC_HPP
#define NILPRIME_UNIT_FRAC_HPP

#include <complex>
#include <cstdint>

namespace nilprime {

using u128 = unsigned __int128;
using i128 = __int128;

/**
 * A point of the circle R/Z stored as a 128-bit numerator over 2^128.
 *
 * Addition and integer multiples wrap modulo 1 and are exact. Only the
 * product of two fractions rounds (toward zero, error below 2^-128).
 */
class UnitFrac {
public:
    constexpr UnitFrac() noexcept = default;

    static constexpr UnitFrac from_raw(u128 raw) noexcept { return UnitFrac(raw); }

    /// Nearest representable point to frac(value).
    static UnitFrac from_double(double value);

    /// Nearest representable point to frac(num / den); den must be positive.
    static UnitFrac from_ratio(std::int64_t num, std::int64_t den);

    constexpr u128 raw() const noexcept { return raw_; }

    /// Value in [0, 1) rounded to 53 bits. May round up to exactly 1.0 for values within 2^-54 of 1.
    double to_double() const noexcept;

    /// k * this modulo 1; negative k wraps through two's complement.
    constexpr UnitFrac times(i128 k) const noexcept { return UnitFrac(raw_ * static_cast<u128>(k)); }

    /// Product of the two fractions, truncated.
    UnitFrac mul(UnitFrac other) const noexcept;

    constexpr UnitFrac operator-() const noexcept { return UnitFrac(u128{0} - raw_); }
    constexpr UnitFrac& operator+=(UnitFrac o) noexcept { raw_ += o.raw_; return *this; }
    constexpr UnitFrac& operator-=(UnitFrac o) noexcept { raw_ -= o.raw_; return *this; }
    friend constexpr UnitFrac operator+(UnitFrac a, UnitFrac b) noexcept { return a += b; }
    friend constexpr UnitFrac operator-(UnitFrac a, UnitFrac b) noexcept { return a -= b; }
    friend constexpr bool operator==(UnitFrac, UnitFrac) noexcept = default;

private:
    constexpr explicit UnitFrac(u128 raw) noexcept : raw_(raw) {}
    u128 raw_ = 0;
};

/// Circular distance |t| on R/Z, in [0, 1/2].
double circle_distance(UnitFrac a, UnitFrac b) noexcept;

/**
 * e^{2 pi i t}. The quadrant is taken from the top two bits before
 * converting to floating point, so multiples of 1/4 come out exact.
 */
std::complex<double> unit_phase(UnitFrac t) noexcept;

}  // namespace nilprime

#endif  // NILPRIME_UNIT_FRAC_HPP
