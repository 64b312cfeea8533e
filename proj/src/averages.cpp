#include "nilprime/averages.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace nilprime {

namespace {

void require_compatible(const Observable& F, const NilsystemModel& model, const GroupElement& x) {
    if (!F.supports(model)) {
        throw std::invalid_argument("observable " + F.describe() + " is not defined on this model");
    }
    if (x.model() != model) throw std::invalid_argument("starting point lives on a different model");
}

void require_table_covers(const PrimeTable& table, std::uint64_t n, const char* where) {
    if (n > table.limit()) {
        throw std::invalid_argument(std::string(where) + ": needs primes up to " + std::to_string(n) +
                                    " but the sieve stops at " + std::to_string(table.limit()));
    }
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b, const char* where) {
    std::uint64_t out = 0;
    if (__builtin_mul_overflow(a, b, &out)) throw std::invalid_argument(std::string(where) + ": index overflow");
    return out;
}

cplx linear_orbit(const Observable& F, const GroupElement& g, const GroupElement& x, std::uint64_t n) {
    return F(reduce(multiply(power(g, static_cast<i128>(n)), x)));
}

// Per coprime residue r: sums over n = 1..N of (lambda'_{r,omega}(n) - 1) F(g^{Wn+r} x) and of F(g^{Wn+r} x).
struct ResidueSums {
    std::uint64_t r = 0;
    cplx correlation;  // divided by N
    cplx orbit_mean;   // divided by N
};

std::vector<ResidueSums> residue_sums(const Observable& F, const GroupElement& g, const GroupElement& x,
                                      const WData& wdata, std::uint64_t N, const PrimeTable& table,
                                      const Exec& exec) {
    require_compatible(F, g.model(), x);
    if (N < 1) throw std::invalid_argument("anticorr: N must be positive");
    if (!wdata.residues_materialized()) {
        throw std::invalid_argument("anticorr: omega too large, W exceeds the sieve range");
    }
    const std::uint64_t top = checked_mul(wdata.W, N, "anticorr") + wdata.coprime_residues.back();
    require_table_covers(table, top, "anticorr");

    const double scale = static_cast<double>(wdata.phi_W) / static_cast<double>(wdata.W);
    std::vector<ResidueSums> out;
    out.reserve(wdata.coprime_residues.size());
    std::vector<cplx> values(N);
    for (const std::uint64_t r : wdata.coprime_residues) {
        parallel_fill(values, [&](std::uint64_t i) { return linear_orbit(F, g, x, wdata.W * (i + 1) + r); }, exec);
        const cplx corr = block_sum(0, N, [&](std::uint64_t i) {
            const std::uint64_t m = wdata.W * (i + 1) + r;
            const double weight = table.is_prime(m) ? scale * std::log(static_cast<double>(m)) : 0.0;
            return (weight - 1.0) * values[i];
        }, exec);
        const cplx mean = block_sum(0, N, [&](std::uint64_t i) { return values[i]; }, exec);
        const double n = static_cast<double>(N);
        out.push_back({r, corr / n, mean / n});
    }
    return out;
}

}  // namespace

double AverageSeries::max_tail_delta(std::size_t tail) const noexcept {
    const std::size_t from = cauchy_deltas.size() > tail ? cauchy_deltas.size() - tail : 0;
    double best = 0.0;
    for (std::size_t i = from; i < cauchy_deltas.size(); ++i) best = std::max(best, cauchy_deltas[i]);
    return best;
}

double WeylMatrix::max_entry() const noexcept {
    return entries.empty() ? 0.0 : *std::max_element(entries.begin(), entries.end());
}

std::string_view to_string(AverageKind kind) noexcept {
    switch (kind) {
        case AverageKind::prime: return "prime";
        case AverageKind::lambda: return "lambda";
        case AverageKind::birkhoff: return "birkhoff";
    }
    return "?";
}

cplx orbit_value(const Observable& F, const PolySequence& seq, const GroupElement& x, std::uint64_t n) {
    return F(reduce(multiply(polyseq_element(seq, n), x)));
}

cplx prime_avg(const Observable& F, const PolySequence& seq, const GroupElement& x, std::uint64_t N,
               const PrimeTable& table, const Exec& exec) {
    if (N < 2) throw std::invalid_argument("prime_avg: N must be at least 2");
    require_table_covers(table, N, "prime_avg");
    require_compatible(F, seq.model(), x);
    const auto primes = table.primes();
    const std::uint64_t count = table.pi(N);
    const cplx sum = block_sum(0, count, [&](std::uint64_t i) { return orbit_value(F, seq, x, primes[i]); }, exec);
    return sum / static_cast<double>(count);
}

cplx lambda_avg(const Observable& F, const PolySequence& seq, const GroupElement& x, std::uint64_t N,
                const PrimeTable& table, const Exec& exec) {
    if (N < 2) throw std::invalid_argument("lambda_avg: N must be at least 2");
    require_table_covers(table, N, "lambda_avg");
    require_compatible(F, seq.model(), x);
    const auto primes = table.primes();
    const cplx sum = block_sum(0, table.pi(N), [&](std::uint64_t i) {
        const std::uint32_t p = primes[i];
        return std::log(static_cast<double>(p)) * orbit_value(F, seq, x, p);
    }, exec);
    return sum / static_cast<double>(N);
}

double gap31(const Observable& F, const PolySequence& seq, const GroupElement& x, std::uint64_t N,
             const PrimeTable& table, const Exec& exec) {
    return std::abs(prime_avg(F, seq, x, N, table, exec) - lambda_avg(F, seq, x, N, table, exec));
}

cplx birkhoff_avg(const Observable& F, const PolySequence& seq, const GroupElement& x, std::uint64_t N,
                  const Exec& exec) {
    if (N < 1) throw std::invalid_argument("birkhoff_avg: N must be positive");
    require_compatible(F, seq.model(), x);
    const cplx sum = block_sum(1, N + 1, [&](std::uint64_t n) { return orbit_value(F, seq, x, n); }, exec);
    return sum / static_cast<double>(N);
}

ExactSplit wtrick_exact_split(const IndexedSequence& b, std::uint64_t W, std::uint64_t N, const Exec& exec) {
    if (W < 1 || N < 1) throw std::invalid_argument("wtrick_exact_split: W and N must be positive");
    const std::uint64_t WN = checked_mul(W, N, "wtrick_exact_split");
    if (WN > b.max_index) throw std::invalid_argument("wtrick_exact_split: sequence too short for W*N");

    const double wn = static_cast<double>(WN);
    const cplx lhs = block_sum(1, WN + 1, [&](std::uint64_t n) { return b.at(n); }, exec) / wn;

    CompensatedSum outer;
    for (std::uint64_t r = 1; r <= W; ++r) {
        const cplx inner = block_sum(0, N, [&](std::uint64_t n) { return b.at(W * n + r); }, exec);
        outer.add(inner / static_cast<double>(N));
    }
    return {lhs, outer.value() / static_cast<double>(W)};
}

CoprimeForm wtrick_coprime_form(const IndexedSequence& b, const WData& wdata, std::uint64_t N,
                                const PrimeTable& table, const Exec& exec) {
    if (N < 1) throw std::invalid_argument("wtrick_coprime_form: N must be positive");
    if (!wdata.residues_materialized()) {
        throw std::invalid_argument("wtrick_coprime_form: omega too large, W exceeds the sieve range");
    }
    const std::uint64_t W = wdata.W;
    const std::uint64_t WN = checked_mul(W, N, "wtrick_coprime_form");
    const std::uint64_t top = WN + wdata.coprime_residues.back();
    if (top > b.max_index) throw std::invalid_argument("wtrick_coprime_form: sequence too short for W*N + W");
    require_table_covers(table, top, "wtrick_coprime_form");

    // Support check on at most ~2^16 evenly spaced indices, plus every index up to 2W.
    const std::uint64_t stride = std::max<std::uint64_t>(1, top / kBlockSize);
    auto check = [&](std::uint64_t n) {
        if (!table.is_prime(n) && b.at(n) != cplx{0.0, 0.0}) {
            throw std::invalid_argument("wtrick_coprime_form: sequence is nonzero at composite index " +
                                        std::to_string(n));
        }
    };
    for (std::uint64_t n = 1; n <= std::min(top, 2 * W); ++n) check(n);
    for (std::uint64_t n = 1; n <= top; n += stride) check(n);

    const cplx lhs = block_sum(1, WN + 1, [&](std::uint64_t n) { return b.at(n); }, exec) / static_cast<double>(WN);
    CompensatedSum outer;
    for (const std::uint64_t r : wdata.coprime_residues) {
        const cplx inner = block_sum(1, N + 1, [&](std::uint64_t n) { return b.at(W * n + r); }, exec);
        outer.add(inner / static_cast<double>(N));
    }
    const cplx main = outer.value() / static_cast<double>(W);
    return {lhs, main, lhs - main};
}

cplx raw_correlation(const Observable& F, const GroupElement& g, const GroupElement& x, std::uint64_t N,
                     const PrimeTable& table, const Exec& exec) {
    if (N < 1) throw std::invalid_argument("raw_correlation: N must be positive");
    require_table_covers(table, N, "raw_correlation");
    require_compatible(F, g.model(), x);
    const cplx sum = block_sum(1, N + 1, [&](std::uint64_t n) {
        const double weight = table.is_prime(n) ? std::log(static_cast<double>(n)) : 0.0;
        return (weight - 1.0) * linear_orbit(F, g, x, n);
    }, exec);
    return sum / static_cast<double>(N);
}

AntiCorrelation anticorr(const Observable& F, const GroupElement& g, const GroupElement& x, const WData& wdata,
                         std::uint64_t N, const PrimeTable& table, const Exec& exec) {
    AntiCorrelation out;
    for (const auto& s : residue_sums(F, g, x, wdata, N, table, exec)) {
        out.per_r.emplace_back(s.r, s.correlation);
        out.max_abs = std::max(out.max_abs, std::abs(s.correlation));
    }
    return out;
}

Decomposition decomposition_eq6(const Observable& F, const GroupElement& g, const GroupElement& x,
                                const WData& wdata, std::uint64_t N, const PrimeTable& table,
                                const Exec& exec) {
    const auto sums = residue_sums(F, g, x, wdata, N, table, exec);
    CompensatedSum first, second;
    for (const auto& s : sums) {
        first.add(s.correlation);
        second.add(s.orbit_mean);
    }
    const double phi = static_cast<double>(wdata.phi_W);
    Decomposition d;
    d.I_N = first.value() / phi;
    d.II_N = second.value() / phi;
    const std::uint64_t WN = wdata.W * N;
    d.weighted_average = WN >= 2 ? lambda_avg(F, PolySequence::linear(g), x, WN, table, exec) : cplx{0.0, 0.0};
    d.remainder = d.weighted_average - d.I_N - d.II_N;
    return d;
}

WeylMatrix weyl_totality_test(std::span<const UnitFrac> alpha, std::uint64_t m_max, std::int64_t k_max,
                              std::uint64_t N, const Exec& exec) {
    if (alpha.empty()) throw std::invalid_argument("weyl_totality_test: empty rotation vector");
    if (N < 1 || m_max < 1 || k_max < 1) {
        throw std::invalid_argument("weyl_totality_test: N, m_max and k_max must be positive");
    }
    WeylMatrix w;
    w.m_max = m_max;
    // Odometer over [-k_max, k_max]^d keeping one representative of each +-k pair.
    const std::size_t d = alpha.size();
    std::vector<std::int64_t> k(d, -k_max);
    while (true) {
        const auto first_nonzero = std::find_if(k.begin(), k.end(), [](std::int64_t v) { return v != 0; });
        if (first_nonzero != k.end() && *first_nonzero > 0) w.frequencies.push_back(k);
        std::size_t axis = d;
        while (axis > 0 && k[axis - 1] == k_max) k[--axis] = -k_max;
        if (axis == 0) break;
        ++k[axis - 1];
    }

    const double n = static_cast<double>(N);
    for (std::uint64_t m = 1; m <= m_max; ++m) {
        for (const auto& freq : w.frequencies) {
            UnitFrac step;
            for (std::size_t i = 0; i < d; ++i) step += alpha[i].times(freq[i]);
            step = step.times(static_cast<i128>(m));
            const cplx s = block_sum(1, N + 1, [&](std::uint64_t j) { return unit_phase(step.times(j)); }, exec);
            w.entries.push_back(std::abs(s / n));
        }
    }
    return w;
}

AverageSeries dyadic_series(AverageKind kind, const Observable& F, const PolySequence& seq, const GroupElement& x,
                            std::uint64_t N0, unsigned doublings, const PrimeTable* table, const Exec& exec) {
    require_compatible(F, seq.model(), x);
    const bool over_primes = kind != AverageKind::birkhoff;
    if (N0 < (over_primes ? 2u : 1u)) throw std::invalid_argument("dyadic_series: N0 too small");
    if (doublings >= 64 || (N0 >> (63 - doublings)) != 0) {
        throw std::invalid_argument("dyadic_series: N0 * 2^doublings overflows");
    }
    const std::uint64_t n_max = N0 << doublings;
    if (over_primes) {
        if (table == nullptr) throw std::invalid_argument("dyadic_series: prime averages need a sieve");
        require_table_covers(*table, n_max, "dyadic_series");
    }

    AverageSeries series;
    CompensatedSum running;
    std::uint64_t done = over_primes ? 0 : 1;  // next unsummed index
    for (unsigned j = 0; j <= doublings; ++j) {
        const std::uint64_t N = N0 << j;
        double norm = static_cast<double>(N);
        if (kind == AverageKind::birkhoff) {
            running.add(block_sum(done, N + 1, [&](std::uint64_t n) { return orbit_value(F, seq, x, n); }, exec));
            done = N + 1;
        } else {
            const auto primes = table->primes();
            const std::uint64_t count = table->pi(N);
            const bool weighted = kind == AverageKind::lambda;
            running.add(block_sum(done, count, [&](std::uint64_t i) {
                const std::uint32_t p = primes[i];
                const cplx v = orbit_value(F, seq, x, p);
                return weighted ? std::log(static_cast<double>(p)) * v : v;
            }, exec));
            done = count;
            if (!weighted) norm = static_cast<double>(count);
        }
        series.checkpoints.push_back(N);
        series.values.push_back(running.value() / norm);
        if (j > 0) series.cauchy_deltas.push_back(std::abs(series.values[j] - series.values[j - 1]));
    }
    return series;
}

double unique_ergodicity_probe(const Observable& F, const PolySequence& seq, std::span<const GroupElement> points,
                               std::uint64_t N, const Exec& exec) {
    if (points.size() < 2) throw std::invalid_argument("unique_ergodicity_probe: need at least two starting points");
    std::vector<cplx> means;
    means.reserve(points.size());
    for (const auto& x : points) means.push_back(birkhoff_avg(F, seq, x, N, exec));
    double spread = 0.0;
    for (std::size_t i = 0; i < means.size(); ++i) {
        for (std::size_t j = i + 1; j < means.size(); ++j) spread = std::max(spread, std::abs(means[i] - means[j]));
    }
    return spread;
}

}  // namespace nilprime
