#ifndef NILPRIME_OBSERVABLES_HPP
#define NILPRIME_OBSERVABLES_HPP

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nilprime/nilsystem.hpp"

namespace nilprime {

enum class ObservableKind { constant, torus_character, heis_horizontal, heis_theta };

/// Default truncation of the theta series; the tail beyond it is below 1e-66.
inline constexpr int kDefaultThetaTerms = 8;

/**
 * A Gamma-invariant test function on G/Gamma together with a declared
 * Lipschitz bound M (with respect to the max-coordinate distance between
 * representatives in G) and a sup bound.
 *
 *  - constant c
 *  - torus character      e(k . x)
 *  - Heisenberg horizontal e(k x + l y)
 *  - Heisenberg theta      sum_{|m|<=K} exp(-pi (y+m)^2) e(z + m x)
 *
 * where e(t) = exp(2 pi i t).
 */
class Observable {
public:
    static Observable constant(std::complex<double> value);
    static Observable torus_character(std::vector<std::int64_t> k);
    static Observable heis_horizontal(std::int64_t k, std::int64_t l);
    /// Throws std::invalid_argument for K < 3.
    static Observable heis_theta(int K = kDefaultThetaTerms);

    ObservableKind kind() const noexcept { return kind_; }
    std::span<const std::int64_t> frequencies() const noexcept { return freq_; }
    int theta_terms() const noexcept { return theta_terms_; }
    std::complex<double> constant_value() const noexcept { return constant_; }

    double lipschitz_bound() const noexcept { return lipschitz_; }
    double sup_bound() const noexcept { return sup_; }
    /// Exact integral against Haar measure when known in closed form.
    std::optional<std::complex<double>> analytic_mean() const;

    /// Whether the observable is defined on the given model.
    bool supports(const NilsystemModel& model) const noexcept;

    /// Evaluate at a reduced element. Throws std::invalid_argument on a model mismatch.
    std::complex<double> operator()(const GroupElement& reduced) const;

    std::string describe() const;

private:
    ObservableKind kind_ = ObservableKind::constant;
    std::vector<std::int64_t> freq_;
    int theta_terms_ = 0;
    std::complex<double> constant_{1.0, 0.0};
    double lipschitz_ = 0.0;
    double sup_ = 1.0;
};

/// e(k . x) for a torus point.
std::complex<double> eval_torus_char(std::span<const std::int64_t> k, const GroupElement& x);

/// Truncated theta observable at a reduced Heisenberg element; phases use exact mod-1 arithmetic.
std::complex<double> eval_heis_theta(int K, const GroupElement& g);

/// The same series at an arbitrary real point (x, y, z), not necessarily in the unit cube.
std::complex<double> theta_series(int K, double x, double y, double z);

/// Midpoint-rule quadrature over the unit cube with `grid` points per axis. Throws for grid < 16.
std::complex<double> space_mean(const Observable& obs, const NilsystemModel& model, int grid);

}  // namespace nilprime

#endif  // NILPRIME_OBSERVABLES_HPP
