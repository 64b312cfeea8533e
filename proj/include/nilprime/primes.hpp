#ifndef NILPRIME_PRIMES_HPP
#define NILPRIME_PRIMES_HPP

#include <cstdint>
#include <span>
#include <vector>

namespace nilprime {

/// Largest sieve limit accepted by sieve().
inline constexpr std::uint64_t kMaxSieveLimit = 100'000'000;

/// Largest omega accepted by make_w(); W_29 = 6469693230 still fits in 64 bits.
inline constexpr std::uint64_t kMaxOmega = 29;

/**
 * Output of an Eratosthenes sieve over [0, limit].
 *
 * Primality is stored as a flat bit array. pi() is answered in O(1) from a
 * per-word rank directory, which plays the role of the prefix-count array
 * without spending 4 bytes per integer.
 */
class PrimeTable {
public:
    std::uint64_t limit() const noexcept { return limit_; }

    bool is_prime(std::uint64_t n) const;

    /// Number of primes <= n; n is clamped to limit().
    std::uint64_t pi(std::uint64_t n) const noexcept;

    /// Ascending list of all primes <= limit().
    std::span<const std::uint32_t> primes() const noexcept { return primes_; }

private:
    friend PrimeTable sieve(std::uint64_t n_max);

    std::uint64_t limit_ = 0;
    std::vector<std::uint64_t> bits_;
    std::vector<std::uint32_t> rank_;  // primes strictly below word i
    std::vector<std::uint32_t> primes_;
};

/// Sieve of Eratosthenes. Throws std::invalid_argument unless 2 <= n_max <= kMaxSieveLimit.
PrimeTable sieve(std::uint64_t n_max);

/// Restricted von Mangoldt weight: log n at primes, 0 elsewhere.
/// Throws std::invalid_argument for n outside [1, table.limit()].
double lambda_prime(const PrimeTable& table, std::uint64_t n);

/**
 * Primorial data for the W-trick.
 *
 * The coprime residue list is only materialized when W fits inside the
 * largest sieve (omega <= 19); beyond that no W-trick sum can be evaluated
 * anyway, and phi(W) alone runs to a billion residues at omega = 29.
 */
struct WData {
    std::uint64_t omega = 0;
    std::uint64_t W = 1;
    std::uint64_t phi_W = 1;
    std::vector<std::uint64_t> coprime_residues;  // ascending, 1 <= r < W

    bool residues_materialized() const noexcept { return coprime_residues.size() == phi_W; }
    bool is_coprime_residue(std::uint64_t r) const noexcept;
};

/// Throws std::invalid_argument unless 2 <= omega <= kMaxOmega and omega <= table.limit().
WData make_w(std::uint64_t omega, const PrimeTable& table);

/// (phi(W)/W) * lambda_prime(W n + r).
double lambda_w(const WData& wdata, std::uint64_t r, std::uint64_t n, const PrimeTable& table);

}  // namespace nilprime

#endif  // NILPRIME_PRIMES_HPP
