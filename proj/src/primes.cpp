#include "nilprime/primes.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace nilprime {

namespace {

constexpr std::uint64_t bit_of(std::uint64_t n) { return std::uint64_t{1} << (n & 63); }

}  // namespace

bool PrimeTable::is_prime(std::uint64_t n) const {
    if (n > limit_) {
        throw std::invalid_argument("is_prime: " + std::to_string(n) + " exceeds sieve limit " +
                                    std::to_string(limit_));
    }
    return (bits_[n >> 6] & bit_of(n)) != 0;
}

std::uint64_t PrimeTable::pi(std::uint64_t n) const noexcept {
    n = std::min(n, limit_);
    const std::uint64_t word = n >> 6;
    const std::uint64_t mask = (n & 63) == 63 ? ~std::uint64_t{0} : (bit_of(n) << 1) - 1;
    return rank_[word] + static_cast<std::uint64_t>(std::popcount(bits_[word] & mask));
}

PrimeTable sieve(std::uint64_t n_max) {
    if (n_max < 2 || n_max > kMaxSieveLimit) {
        throw std::invalid_argument("sieve: limit must lie in [2, 10^8], got " + std::to_string(n_max));
    }
    PrimeTable t;
    t.limit_ = n_max;
    const std::uint64_t words = (n_max >> 6) + 1;
    // Odd numbers start as candidates; 2 is patched in below.
    t.bits_.assign(words, 0xAAAA'AAAA'AAAA'AAAAull);
    t.bits_[0] &= ~bit_of(1);
    t.bits_[0] |= bit_of(2);
    for (std::uint64_t i = 3; i * i <= n_max; i += 2) {
        if ((t.bits_[i >> 6] & bit_of(i)) == 0) continue;
        for (std::uint64_t j = i * i; j <= n_max; j += 2 * i) t.bits_[j >> 6] &= ~bit_of(j);
    }
    // Clear the tail past n_max in the last word.
    if ((n_max & 63) != 63) t.bits_.back() &= (bit_of(n_max) << 1) - 1;

    t.rank_.resize(words);
    std::uint32_t running = 0;
    for (std::uint64_t w = 0; w < words; ++w) {
        t.rank_[w] = running;
        running += static_cast<std::uint32_t>(std::popcount(t.bits_[w]));
    }
    t.primes_.reserve(running);
    for (std::uint64_t w = 0; w < words; ++w) {
        std::uint64_t word = t.bits_[w];
        while (word != 0) {
            const int b = std::countr_zero(word);
            t.primes_.push_back(static_cast<std::uint32_t>((w << 6) + static_cast<std::uint64_t>(b)));
            word &= word - 1;
        }
    }
    return t;
}

double lambda_prime(const PrimeTable& table, std::uint64_t n) {
    if (n < 1 || n > table.limit()) {
        throw std::invalid_argument("lambda_prime: n = " + std::to_string(n) + " outside [1, " +
                                    std::to_string(table.limit()) + "]");
    }
    return table.is_prime(n) ? std::log(static_cast<double>(n)) : 0.0;
}

bool WData::is_coprime_residue(std::uint64_t r) const noexcept {
    return r >= 1 && r < W && std::gcd(r, W) == 1;
}

WData make_w(std::uint64_t omega, const PrimeTable& table) {
    if (omega < 2 || omega > kMaxOmega) {
        throw std::invalid_argument("make_w: omega must lie in [2, 29], got " + std::to_string(omega));
    }
    if (omega > table.limit()) {
        throw std::invalid_argument("make_w: sieve limit below omega");
    }
    WData w;
    w.omega = omega;
    for (const std::uint32_t p : table.primes()) {
        if (p > omega) break;
        w.W *= p;
        w.phi_W *= p - 1;
    }
    if (w.W <= kMaxSieveLimit) {
        w.coprime_residues.reserve(w.phi_W);
        for (std::uint64_t r = 1; r < w.W; ++r) {
            if (std::gcd(r, w.W) == 1) w.coprime_residues.push_back(r);
        }
    }
    return w;
}

double lambda_w(const WData& wdata, std::uint64_t r, std::uint64_t n, const PrimeTable& table) {
    if (!wdata.is_coprime_residue(r)) {
        throw std::invalid_argument("lambda_w: residue " + std::to_string(r) + " is not coprime to W = " +
                                    std::to_string(wdata.W));
    }
    std::uint64_t index = 0;
    if (__builtin_mul_overflow(wdata.W, n, &index) || __builtin_add_overflow(index, r, &index) ||
        index > table.limit()) {
        throw std::invalid_argument("lambda_w: W*n + r exceeds sieve limit");
    }
    return static_cast<double>(wdata.phi_W) / static_cast<double>(wdata.W) * lambda_prime(table, index);
}

}  // namespace nilprime
