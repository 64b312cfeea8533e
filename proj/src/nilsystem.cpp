#include "nilprime/nilsystem.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace nilprime {

namespace {

const u256 kLow128Mask = u256(~u128{0});

u128 low128(const u256& v) { return static_cast<u128>(v & kLow128Mask); }

// Two's-complement widening from 256 to 384 bits.
u384 sign_extend(const u256& v) {
    u384 wide(v);
    if (boost::multiprecision::bit_test(v, 255)) wide |= u384(~u128{0}) << 256;
    return wide;
}

u256 truncate_to_256(const u384& v) { return static_cast<u256>(v & u384((u256(0) - 1))); }

void require_heisenberg(const GroupElement& g, const char* where) {
    if (g.kind() != ModelKind::heisenberg) {
        throw std::invalid_argument(std::string(where) + ": expected a Heisenberg element");
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// Fixed

Fixed Fixed::from_parts(i128 whole, UnitFrac frac) {
    Fixed f;
    f.raw_ = (u256(static_cast<u128>(whole)) << 128) | u256(frac.raw());
    return f;
}

Fixed Fixed::from_double(double value) {
    if (!std::isfinite(value) || std::fabs(value) >= 0x1p100) {
        throw std::invalid_argument("Fixed::from_double: value out of range");
    }
    const double whole = std::floor(value);
    const double frac = value - whole;  // exact for |value| < 2^100 with 53-bit mantissa
    if (frac >= 1.0) return from_integer(static_cast<i128>(whole) + 1);
    return from_parts(static_cast<i128>(whole), UnitFrac::from_double(frac));
}

UnitFrac Fixed::frac() const { return UnitFrac::from_raw(low128(raw_)); }

i128 Fixed::floor() const { return static_cast<i128>(low128(raw_ >> 128)); }

double Fixed::to_double() const { return static_cast<double>(floor()) + frac().to_double(); }

Fixed Fixed::times(const u256& k) const { return from_raw(raw_ * k); }

Fixed Fixed::mul(const Fixed& other) const {
    const u384 product = sign_extend(raw_) * sign_extend(other.raw_);
    return from_raw(truncate_to_256(product >> 128));
}

// ---------------------------------------------------------------------------
// Models and elements

NilsystemModel NilsystemModel::torus(std::size_t d) {
    if (d == 0) throw std::invalid_argument("torus model needs dimension >= 1");
    return {ModelKind::torus, 1, d};
}

GroupElement GroupElement::torus(std::vector<UnitFrac> coords) {
    if (coords.empty()) throw std::invalid_argument("torus element needs at least one coordinate");
    GroupElement g;
    g.coords_ = std::move(coords);
    return g;
}

GroupElement GroupElement::heisenberg(const Fixed& x, const Fixed& y, const Fixed& z) {
    GroupElement g;
    g.coords_ = HeisTriple{x, y, z};
    return g;
}

GroupElement GroupElement::identity(const NilsystemModel& model) {
    if (model.kind == ModelKind::heisenberg) return heisenberg(Fixed{}, Fixed{}, Fixed{});
    return torus(std::vector<UnitFrac>(model.dimension));
}

ModelKind GroupElement::kind() const noexcept {
    return std::holds_alternative<HeisTriple>(coords_) ? ModelKind::heisenberg : ModelKind::torus;
}

NilsystemModel GroupElement::model() const {
    if (kind() == ModelKind::heisenberg) return NilsystemModel::heisenberg();
    return NilsystemModel::torus(std::get<std::vector<UnitFrac>>(coords_).size());
}

std::span<const UnitFrac> GroupElement::torus_coords() const {
    if (const auto* c = std::get_if<std::vector<UnitFrac>>(&coords_)) return *c;
    throw std::invalid_argument("torus_coords: element is not a torus point");
}

const HeisTriple& GroupElement::heis() const {
    if (const auto* t = std::get_if<HeisTriple>(&coords_)) return *t;
    throw std::invalid_argument("heis: element is not a Heisenberg element");
}

// ---------------------------------------------------------------------------
// Polynomials

i128 eval_poly(const IntPoly& p, std::uint64_t n) {
    i128 acc = 0;
    const auto x = static_cast<i128>(n);
    for (auto it = p.rbegin(); it != p.rend(); ++it) {
        if (__builtin_mul_overflow(acc, x, &acc) || __builtin_add_overflow(acc, static_cast<i128>(*it), &acc)) {
            throw std::overflow_error("eval_poly: value exceeds 128-bit range at n = " + std::to_string(n));
        }
    }
    return acc;
}

PolySequence::PolySequence(std::vector<GroupElement> generators, std::vector<IntPoly> exponents)
    : generators_(std::move(generators)), exponents_(std::move(exponents)) {
    if (generators_.empty()) throw std::invalid_argument("PolySequence: at least one generator required");
    if (generators_.size() != exponents_.size()) {
        throw std::invalid_argument("PolySequence: one exponent polynomial per generator required");
    }
    const NilsystemModel m = generators_.front().model();
    for (const auto& g : generators_) {
        if (g.model() != m) throw std::invalid_argument("PolySequence: generators must share one model");
    }
    for (const auto& p : exponents_) {
        if (p.size() > kMaxPolyDegree + 1) throw std::invalid_argument("PolySequence: degree above 4");
    }
}

// ---------------------------------------------------------------------------
// Group operations

GroupElement heis_mul(const GroupElement& a, const GroupElement& b) {
    require_heisenberg(a, "heis_mul");
    require_heisenberg(b, "heis_mul");
    const HeisTriple& l = a.heis();
    const HeisTriple& r = b.heis();
    return GroupElement::heisenberg(l.x + r.x, l.y + r.y, l.z + r.z + l.x.mul(r.y));
}

GroupElement multiply(const GroupElement& a, const GroupElement& b) {
    if (a.kind() != b.kind()) throw std::invalid_argument("multiply: model mismatch");
    if (a.kind() == ModelKind::heisenberg) return heis_mul(a, b);
    const auto lhs = a.torus_coords();
    const auto rhs = b.torus_coords();
    if (lhs.size() != rhs.size()) throw std::invalid_argument("multiply: torus dimension mismatch");
    std::vector<UnitFrac> out(lhs.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = lhs[i] + rhs[i];
    return GroupElement::torus(std::move(out));
}

GroupElement heis_pow(const GroupElement& g, i128 k) {
    require_heisenberg(g, "heis_pow");
    if (k < 0) throw std::invalid_argument("heis_pow: negative exponent");
    const HeisTriple& t = g.heis();
    const u256 ku(static_cast<u128>(k));
    // C(k,2) < 2^254 for k < 2^127.
    const u256 binom = (ku % 2 == 0) ? (ku / 2) * (ku == 0 ? u256(0) : ku - 1) : ku * ((ku - 1) / 2);
    // C(k,2) * a * b is formed exactly before the single truncation; rounding a*b first
    // would be amplified by C(k,2).
    const u384 cross = sign_extend(t.x.raw()) * sign_extend(t.y.raw()) * u384(binom);
    const Fixed z = t.z.times(ku) + Fixed::from_raw(truncate_to_256(cross >> 128));
    return GroupElement::heisenberg(t.x.times(ku), t.y.times(ku), z);
}

GroupElement reduce(const GroupElement& g) {
    if (g.kind() == ModelKind::torus) return g;
    const HeisTriple& t = g.heis();
    // Right multiplication by gamma = (-floor x, -floor y, r) sends z to z - x*floor(y) + r.
    // Only the fractional part survives, and it depends on floor(y) mod 2^128.
    const UnitFrac x = t.x.frac();
    const auto y_floor = static_cast<u128>(t.y.floor());
    const UnitFrac z = t.z.frac() - x.times(static_cast<i128>(y_floor));
    return GroupElement::heisenberg(Fixed::from_frac(x), Fixed::from_frac(t.y.frac()), Fixed::from_frac(z));
}

GroupElement torus_pow(std::span<const UnitFrac> alpha, i128 k) {
    if (k < 0) throw std::invalid_argument("torus_pow: negative exponent");
    std::vector<UnitFrac> out(alpha.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = alpha[i].times(k);
    return GroupElement::torus(std::move(out));
}

GroupElement power(const GroupElement& g, i128 k) {
    if (g.kind() == ModelKind::heisenberg) return heis_pow(g, k);
    return torus_pow(g.torus_coords(), k);
}

GroupElement polyseq_element(const PolySequence& seq, std::uint64_t n) {
    const auto gens = seq.generators();
    const auto exps = seq.exponents();
    GroupElement acc = GroupElement::identity(seq.model());
    for (std::size_t i = 0; i < gens.size(); ++i) {
        const i128 k = eval_poly(exps[i], n);
        if (k < 0) {
            throw std::domain_error("polyseq_eval: exponent polynomial " + std::to_string(i) +
                                    " is negative at n = " + std::to_string(n));
        }
        acc = multiply(acc, power(gens[i], k));
    }
    return acc;
}

GroupElement polyseq_eval(const PolySequence& seq, std::uint64_t n) { return reduce(polyseq_element(seq, n)); }

// ---------------------------------------------------------------------------
// Constants

namespace {

// round(sqrt(radicand)) - offset, as a 128-bit fraction.
UnitFrac rounded_root_minus(const u384& radicand, const u384& offset) {
    u384 s = boost::multiprecision::sqrt(radicand);
    // Round to nearest: s + 1 wins iff (2s + 1)^2 < 4 * radicand.
    const u384 twice = 2 * s + 1;
    if (twice * twice < 4 * radicand) ++s;
    return UnitFrac::from_raw(static_cast<u128>((s - offset) & u384(~u128{0})));
}

}  // namespace

UnitFrac irrational_const(Irrational name) {
    static const UnitFrac sqrt2m1 = rounded_root_minus(u384(2) << 256, u384(1) << 128);
    static const UnitFrac sqrt3m1 = rounded_root_minus(u384(3) << 256, u384(1) << 128);
    static const UnitFrac golden = rounded_root_minus(u384(5) << 254, u384(1) << 127);
    switch (name) {
        case Irrational::sqrt2m1: return sqrt2m1;
        case Irrational::sqrt3m1: return sqrt3m1;
        case Irrational::golden: return golden;
    }
    throw std::invalid_argument("irrational_const: unknown constant");
}

Irrational parse_irrational(std::string_view name) {
    if (name == "sqrt2m1") return Irrational::sqrt2m1;
    if (name == "sqrt3m1") return Irrational::sqrt3m1;
    if (name == "golden") return Irrational::golden;
    throw std::invalid_argument("unknown irrational constant '" + std::string(name) + "'");
}

}  // namespace nilprime
