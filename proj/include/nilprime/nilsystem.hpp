#ifndef NILPRIME_NILSYSTEM_HPP
#define NILPRIME_NILSYSTEM_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "nilprime/unit_frac.hpp"

namespace nilprime {

using u256 = boost::multiprecision::uint256_t;
using u384 = boost::multiprecision::number<
    boost::multiprecision::cpp_int_backend<384, 384, boost::multiprecision::unsigned_magnitude,
                                           boost::multiprecision::unchecked, void>>;

/**
 * Signed fixed-point real with 128 fractional bits.
 *
 * The integer part is kept modulo 2^128 (two's complement). Everything that
 * survives reduction to the unit cube depends on integer parts only through
 * their residues mod 2^128, so this is exact on G/Gamma even when polynomial
 * exponents push the true integer part far beyond 64 bits.
 */
class Fixed {
public:
    Fixed() = default;

    static Fixed from_raw(const u256& raw) { Fixed f; f.raw_ = raw; return f; }
    static Fixed from_parts(i128 whole, UnitFrac frac);
    static Fixed from_frac(UnitFrac frac) { return from_parts(0, frac); }
    static Fixed from_integer(i128 whole) { return from_parts(whole, UnitFrac{}); }
    /// Nearest representable value; |value| must be below 2^100.
    static Fixed from_double(double value);

    const u256& raw() const noexcept { return raw_; }

    UnitFrac frac() const;
    /// floor(value), as a two's-complement 128-bit integer.
    i128 floor() const;
    double to_double() const;

    /// Exact integer multiple (mod 2^128 in the integer part).
    Fixed times(const u256& k) const;
    /// Product rounded toward minus infinity, error below 2^-128.
    Fixed mul(const Fixed& other) const;

    Fixed& operator+=(const Fixed& o) { raw_ += o.raw_; return *this; }
    Fixed& operator-=(const Fixed& o) { raw_ -= o.raw_; return *this; }
    friend Fixed operator+(Fixed a, const Fixed& b) { return a += b; }
    friend Fixed operator-(Fixed a, const Fixed& b) { return a -= b; }
    Fixed operator-() const { Fixed f; f.raw_ = u256(0) - raw_; return f; }
    friend bool operator==(const Fixed& a, const Fixed& b) { return a.raw_ == b.raw_; }

private:
    u256 raw_ = 0;
};

enum class ModelKind { torus, heisenberg };

/// Which nilmanifold we are on: the d-torus (step 1) or the Heisenberg nilmanifold (step 2).
struct NilsystemModel {
    ModelKind kind = ModelKind::torus;
    int step = 1;
    std::size_t dimension = 1;

    static NilsystemModel torus(std::size_t d);
    static NilsystemModel heisenberg() { return {ModelKind::heisenberg, 2, 3}; }
    friend bool operator==(const NilsystemModel&, const NilsystemModel&) = default;
};

/// Mal'cev coordinates of a Heisenberg element; law (x,y,z)(x',y',z') = (x+x', y+y', z+z'+xy').
struct HeisTriple {
    Fixed x, y, z;
    friend bool operator==(const HeisTriple&, const HeisTriple&) = default;
};

/**
 * An element of G. Torus coordinates always lie in [0,1); Heisenberg
 * coordinates are unreduced until passed through reduce().
 */
class GroupElement {
public:
    static GroupElement torus(std::vector<UnitFrac> coords);
    static GroupElement heisenberg(const Fixed& x, const Fixed& y, const Fixed& z);
    static GroupElement heisenberg(const HeisTriple& t) { return heisenberg(t.x, t.y, t.z); }
    static GroupElement identity(const NilsystemModel& model);

    ModelKind kind() const noexcept;
    NilsystemModel model() const;

    /// Throws std::invalid_argument on a Heisenberg element.
    std::span<const UnitFrac> torus_coords() const;
    /// Throws std::invalid_argument on a torus element.
    const HeisTriple& heis() const;

    friend bool operator==(const GroupElement&, const GroupElement&) = default;

private:
    std::variant<std::vector<UnitFrac>, HeisTriple> coords_;
};

/// Integer polynomial, coefficients from the constant term up; degree at most 4.
using IntPoly = std::vector<std::int64_t>;

inline constexpr std::size_t kMaxPolyDegree = 4;

/// Exact evaluation; throws std::overflow_error if an intermediate leaves the 128-bit range.
i128 eval_poly(const IntPoly& p, std::uint64_t n);

/// g(n) = g_1^{p_1(n)} ... g_m^{p_m(n)}.
class PolySequence {
public:
    /// Throws std::invalid_argument on empty input, size mismatch, mixed models or degree > 4.
    PolySequence(std::vector<GroupElement> generators, std::vector<IntPoly> exponents);

    /// The linear sequence g^n.
    static PolySequence linear(const GroupElement& g) { return PolySequence({g}, {{0, 1}}); }

    std::span<const GroupElement> generators() const noexcept { return generators_; }
    std::span<const IntPoly> exponents() const noexcept { return exponents_; }
    NilsystemModel model() const { return generators_.front().model(); }

private:
    std::vector<GroupElement> generators_;
    std::vector<IntPoly> exponents_;
};

/// Generic group product; torus elements add coordinatewise mod 1.
GroupElement multiply(const GroupElement& a, const GroupElement& b);

GroupElement heis_mul(const GroupElement& a, const GroupElement& b);

/// g^k via the closed form (k a, k b, k c + C(k,2) a b). Throws std::invalid_argument for k < 0.
GroupElement heis_pow(const GroupElement& g, i128 k);

/// Representative of g*Gamma in the half-open unit cube. Torus elements are returned unchanged.
GroupElement reduce(const GroupElement& g);

/// (k alpha_1, ..., k alpha_d) mod 1. Throws std::invalid_argument for k < 0.
GroupElement torus_pow(std::span<const UnitFrac> alpha, i128 k);

/// g^k on either model.
GroupElement power(const GroupElement& g, i128 k);

/// g_1^{p_1(n)} ... g_m^{p_m(n)} before reduction. Throws std::domain_error if some p_i(n) < 0.
GroupElement polyseq_element(const PolySequence& seq, std::uint64_t n);

/// reduce(polyseq_element(seq, n)).
GroupElement polyseq_eval(const PolySequence& seq, std::uint64_t n);

enum class Irrational { sqrt2m1, sqrt3m1, golden };

/// sqrt2-1, sqrt3-1 or (sqrt5-1)/2, correctly rounded to 128 fractional bits.
UnitFrac irrational_const(Irrational name);

/// Parses "sqrt2m1", "sqrt3m1" or "golden"; throws std::invalid_argument otherwise.
Irrational parse_irrational(std::string_view name);

}  // namespace nilprime

#endif  // NILPRIME_NILSYSTEM_HPP
