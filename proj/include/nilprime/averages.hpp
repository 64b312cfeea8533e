#ifndef NILPRIME_AVERAGES_HPP
#define NILPRIME_AVERAGES_HPP

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "nilprime/nilsystem.hpp"
#include "nilprime/observables.hpp"
#include "nilprime/primes.hpp"
#include "nilprime/summation.hpp"

namespace nilprime {

using cplx = std::complex<double>;

/// Partial averages on a dyadic grid N0 * 2^j with successive differences.
struct AverageSeries {
    std::vector<std::uint64_t> checkpoints;
    std::vector<cplx> values;
    std::vector<double> cauchy_deltas;  // |A(N_{j+1}) - A(N_j)|

    /// Largest of the last `tail` deltas (all of them if fewer); 0 when there are none.
    double max_tail_delta(std::size_t tail = 3) const noexcept;
};

/// The weighted average split as I(N) + II(N) + remainder.
struct Decomposition {
    cplx I_N;
    cplx II_N;
    cplx remainder;
    cplx weighted_average;  // (1/WN) sum_{n<=WN} lambda'(n) F(g^n x)
};

struct AntiCorrelation {
    std::vector<std::pair<std::uint64_t, cplx>> per_r;
    double max_abs = 0.0;
};

/// Both sides of the reindexing identity over [1, WN].
struct ExactSplit {
    cplx lhs;
    cplx rhs_full;
};

/// (1/WN) sum b_n split into the coprime-residue double sum and an explicit residual.
struct CoprimeForm {
    cplx lhs;
    cplx main;
    cplx residual;
};

/// A sequence b_n readable on [1, max_index].
struct IndexedSequence {
    std::uint64_t max_index = 0;
    std::function<cplx(std::uint64_t)> at;
};

/// Weyl-sum moduli |(1/N) sum_{n<=N} e(n m (k . alpha))| indexed by m and frequency vector k.
struct WeylMatrix {
    std::uint64_t m_max = 0;
    std::vector<std::vector<std::int64_t>> frequencies;  // one per column, first nonzero entry positive
    std::vector<double> entries;                         // row-major, rows m = 1..m_max

    double at(std::uint64_t m, std::size_t column) const { return entries.at((m - 1) * frequencies.size() + column); }
    double max_entry() const noexcept;
};

enum class AverageKind { prime, lambda, birkhoff };

std::string_view to_string(AverageKind kind) noexcept;

/// F(g(n) x) with x given by any representative; the product is reduced before F sees it.
cplx orbit_value(const Observable& F, const PolySequence& seq, const GroupElement& x, std::uint64_t n);

/// (1/pi(N)) sum_{p<=N} F(g(p) x).
cplx prime_avg(const Observable& F, const PolySequence& seq, const GroupElement& x, std::uint64_t N,
               const PrimeTable& table, const Exec& exec = {});

/// (1/N) sum_{n<=N} lambda'(n) F(g(n) x).
cplx lambda_avg(const Observable& F, const PolySequence& seq, const GroupElement& x, std::uint64_t N,
                const PrimeTable& table, const Exec& exec = {});

/// |prime_avg - lambda_avg|.
double gap31(const Observable& F, const PolySequence& seq, const GroupElement& x, std::uint64_t N,
             const PrimeTable& table, const Exec& exec = {});

/// (1/N) sum_{n<=N} F(g(n) x).
cplx birkhoff_avg(const Observable& F, const PolySequence& seq, const GroupElement& x, std::uint64_t N,
                  const Exec& exec = {});

/// lhs = (1/WN) sum_{n=1}^{WN} b_n, rhs = (1/W) sum_{r=1}^{W} (1/N) sum_{n=0}^{N-1} b_{Wn+r}.
ExactSplit wtrick_exact_split(const IndexedSequence& b, std::uint64_t W, std::uint64_t N, const Exec& exec = {});

/**
 * main = (1/W) sum_{r coprime} (1/N) sum_{n=1}^{N} b_{Wn+r}, residual = lhs - main.
 * b must vanish off the primes; this is checked on a deterministic sample of
 * composites and a violation throws std::invalid_argument.
 */
CoprimeForm wtrick_coprime_form(const IndexedSequence& b, const WData& wdata, std::uint64_t N,
                                const PrimeTable& table, const Exec& exec = {});

/// (1/N) sum_{n<=N} (lambda'(n) - 1) F(g^n x), the correlation without the W-trick.
cplx raw_correlation(const Observable& F, const GroupElement& g, const GroupElement& x, std::uint64_t N,
                     const PrimeTable& table, const Exec& exec = {});

/// Per coprime r: (1/N) sum_{n=1}^{N} (lambda'_{r,omega}(n) - 1) F(g^{Wn+r} x).
AntiCorrelation anticorr(const Observable& F, const GroupElement& g, const GroupElement& x, const WData& wdata,
                         std::uint64_t N, const PrimeTable& table, const Exec& exec = {});

Decomposition decomposition_eq6(const Observable& F, const GroupElement& g, const GroupElement& x,
                                const WData& wdata, std::uint64_t N, const PrimeTable& table,
                                const Exec& exec = {});

WeylMatrix weyl_totality_test(std::span<const UnitFrac> alpha, std::uint64_t m_max, std::int64_t k_max,
                              std::uint64_t N, const Exec& exec = {});

/**
 * Averages of the given kind at N0, 2 N0, ..., 2^doublings N0. Each doubling
 * only sums the new terms. `table` may be null for the Birkhoff kind.
 */
AverageSeries dyadic_series(AverageKind kind, const Observable& F, const PolySequence& seq, const GroupElement& x,
                            std::uint64_t N0, unsigned doublings, const PrimeTable* table, const Exec& exec = {});

/// Largest pairwise distance between Birkhoff averages started at the given points.
double unique_ergodicity_probe(const Observable& F, const PolySequence& seq, std::span<const GroupElement> points,
                               std::uint64_t N, const Exec& exec = {});

}  // namespace nilprime

#endif  // NILPRIME_AVERAGES_HPP
