#ifndef NILPRIME_SUMMATION_HPP
#define NILPRIME_SUMMATION_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace nilprime {

/// Number of worker threads for index-range reductions. Results never depend on it.
struct Exec {
    unsigned workers = 1;
};

/// Block length of the fixed-block reduction. Block boundaries sit at multiples of this in index space.
inline constexpr std::uint64_t kBlockSize = std::uint64_t{1} << 16;

/// Neumaier-compensated accumulator for complex terms (real and imaginary parts tracked separately).
class CompensatedSum {
public:
    void add(std::complex<double> term) noexcept {
        step(re_, re_comp_, term.real());
        step(im_, im_comp_, term.imag());
    }

    std::complex<double> value() const noexcept { return {re_ + re_comp_, im_ + im_comp_}; }

private:
    static void step(double& sum, double& comp, double x) noexcept {
        const double t = sum + x;
        if (std::fabs(sum) >= std::fabs(x)) {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }

    double re_ = 0.0, re_comp_ = 0.0;
    double im_ = 0.0, im_comp_ = 0.0;
};

/**
 * Sum of term(i) for i in [begin, end).
 *
 * Each kBlockSize-aligned block is summed with compensation on its own; the
 * block totals are then combined in index order. The worker count only
 * changes which thread computes a block, so the result is bit-identical for
 * any Exec. The first exception thrown by a term is rethrown here.
 */
template <typename Term>
std::complex<double> block_sum(std::uint64_t begin, std::uint64_t end, Term&& term, const Exec& exec = {}) {
    if (end <= begin) return {0.0, 0.0};
    const std::uint64_t first_block = begin / kBlockSize;
    const std::uint64_t block_count = (end - 1) / kBlockSize - first_block + 1;
    std::vector<std::complex<double>> partial(block_count);

    auto run_block = [&](std::uint64_t b) {
        const std::uint64_t lo = std::max(begin, (first_block + b) * kBlockSize);
        const std::uint64_t hi = std::min(end, (first_block + b + 1) * kBlockSize);
        CompensatedSum acc;
        for (std::uint64_t i = lo; i < hi; ++i) acc.add(term(i));
        partial[b] = acc.value();
    };

    const auto workers = static_cast<std::uint64_t>(std::max(1u, exec.workers));
    if (workers == 1 || block_count == 1) {
        for (std::uint64_t b = 0; b < block_count; ++b) run_block(b);
    } else {
        const std::uint64_t used = std::min(workers, block_count);
        std::vector<std::exception_ptr> errors(used);
        {
            std::vector<std::jthread> pool;
            pool.reserve(used);
            for (std::uint64_t w = 0; w < used; ++w) {
                pool.emplace_back([&, w] {
                    try {
                        for (std::uint64_t b = w; b < block_count; b += used) run_block(b);
                    } catch (...) {
                        errors[w] = std::current_exception();
                    }
                });
            }
        }
        for (const auto& e : errors) {
            if (e) std::rethrow_exception(e);
        }
    }

    CompensatedSum total;
    for (const auto& p : partial) total.add(p);
    return total.value();
}

/// Writes fn(i) into out[i], splitting the range across workers in kBlockSize chunks.
template <typename T, typename Fn>
void parallel_fill(std::vector<T>& out, Fn&& fn, const Exec& exec = {}) {
    const std::uint64_t n = out.size();
    const std::uint64_t blocks = (n + kBlockSize - 1) / kBlockSize;
    auto run_block = [&](std::uint64_t b) {
        const std::uint64_t hi = std::min(n, (b + 1) * kBlockSize);
        for (std::uint64_t i = b * kBlockSize; i < hi; ++i) out[i] = fn(i);
    };
    const auto workers = static_cast<std::uint64_t>(std::max(1u, exec.workers));
    if (workers == 1 || blocks <= 1) {
        for (std::uint64_t b = 0; b < blocks; ++b) run_block(b);
        return;
    }
    const std::uint64_t used = std::min(workers, blocks);
    std::vector<std::exception_ptr> errors(used);
    {
        std::vector<std::jthread> pool;
        pool.reserve(used);
        for (std::uint64_t w = 0; w < used; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::uint64_t b = w; b < blocks; b += used) run_block(b);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace nilprime

#endif  // NILPRIME_SUMMATION_HPP
