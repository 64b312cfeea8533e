#include "nilprime/observables.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "nilprime/summation.hpp"

namespace nilprime {

namespace {

constexpr double kPi = std::numbers::pi;

double theta_weight_sum(int K) {
    double s = 0.0;
    for (int m = -K; m <= K; ++m) s += std::exp(-kPi * m * m);
    return s;
}

}  // namespace

Observable Observable::constant(std::complex<double> value) {
    Observable o;
    o.kind_ = ObservableKind::constant;
    o.constant_ = value;
    o.lipschitz_ = 0.0;
    o.sup_ = std::abs(value);
    return o;
}

Observable Observable::torus_character(std::vector<std::int64_t> k) {
    if (k.empty()) throw std::invalid_argument("torus_character: empty frequency vector");
    Observable o;
    o.kind_ = ObservableKind::torus_character;
    double l1 = 0.0;
    for (const auto ki : k) l1 += std::fabs(static_cast<double>(ki));
    o.freq_ = std::move(k);
    o.lipschitz_ = 2.0 * kPi * l1;
    o.sup_ = 1.0;
    return o;
}

Observable Observable::heis_horizontal(std::int64_t k, std::int64_t l) {
    Observable o;
    o.kind_ = ObservableKind::heis_horizontal;
    o.freq_ = {k, l};
    o.lipschitz_ = 2.0 * kPi * (std::fabs(static_cast<double>(k)) + std::fabs(static_cast<double>(l)));
    o.sup_ = 1.0;
    return o;
}

Observable Observable::heis_theta(int K) {
    if (K < 3) throw std::invalid_argument("heis_theta: truncation K must be at least 3");
    Observable o;
    o.kind_ = ObservableKind::heis_theta;
    o.theta_terms_ = K;
    // Conservative: x-derivative, z-derivative and y-derivative bounds added up.
    o.lipschitz_ = 2.0 * kPi * (K + 1) + 2.0 * kPi * K + 2.0 * kPi * std::sqrt(2.0 / std::numbers::e) * K;
    o.sup_ = theta_weight_sum(K);
    return o;
}

std::optional<std::complex<double>> Observable::analytic_mean() const {
    switch (kind_) {
        case ObservableKind::constant: return constant_;
        case ObservableKind::torus_character:
        case ObservableKind::heis_horizontal:
            for (const auto k : freq_) {
                if (k != 0) return std::complex<double>{0.0, 0.0};
            }
            return std::complex<double>{1.0, 0.0};
        case ObservableKind::heis_theta:
            // Every term carries e(z), whose integral over [0,1) vanishes.
            return std::complex<double>{0.0, 0.0};
    }
    return std::nullopt;
}

bool Observable::supports(const NilsystemModel& model) const noexcept {
    switch (kind_) {
        case ObservableKind::constant: return true;
        case ObservableKind::torus_character:
            return model.kind == ModelKind::torus && model.dimension == freq_.size();
        case ObservableKind::heis_horizontal:
        case ObservableKind::heis_theta: return model.kind == ModelKind::heisenberg;
    }
    return false;
}

std::complex<double> Observable::operator()(const GroupElement& reduced) const {
    switch (kind_) {
        case ObservableKind::constant: return constant_;
        case ObservableKind::torus_character: return eval_torus_char(freq_, reduced);
        case ObservableKind::heis_horizontal: {
            const HeisTriple& t = reduced.heis();
            return unit_phase(t.x.frac().times(freq_[0]) + t.y.frac().times(freq_[1]));
        }
        case ObservableKind::heis_theta: return eval_heis_theta(theta_terms_, reduced);
    }
    throw std::logic_error("unknown observable kind");
}

std::string Observable::describe() const {
    std::ostringstream out;
    switch (kind_) {
        case ObservableKind::constant:
            out << "constant(" << constant_.real() << (constant_.imag() < 0 ? "" : "+") << constant_.imag() << "i)";
            break;
        case ObservableKind::torus_character:
            out << "torus-character(k=[";
            for (std::size_t i = 0; i < freq_.size(); ++i) out << (i ? "," : "") << freq_[i];
            out << "])";
            break;
        case ObservableKind::heis_horizontal:
            out << "heis-horizontal(k=" << freq_[0] << ",l=" << freq_[1] << ")";
            break;
        case ObservableKind::heis_theta: out << "heis-theta(K=" << theta_terms_ << ",sigma=1)"; break;
    }
    return out.str();
}

std::complex<double> eval_torus_char(std::span<const std::int64_t> k, const GroupElement& x) {
    const auto coords = x.torus_coords();
    if (coords.size() != k.size()) throw std::invalid_argument("eval_torus_char: dimension mismatch");
    UnitFrac phase;
    for (std::size_t i = 0; i < k.size(); ++i) phase += coords[i].times(k[i]);
    return unit_phase(phase);
}

std::complex<double> eval_heis_theta(int K, const GroupElement& g) {
    if (K < 3) throw std::invalid_argument("eval_heis_theta: truncation K must be at least 3");
    const HeisTriple& t = g.heis();
    const UnitFrac x = t.x.frac();
    const UnitFrac z = t.z.frac();
    const double y = t.y.to_double();
    std::complex<double> sum{0.0, 0.0};
    for (int m = -K; m <= K; ++m) {
        const double shifted = y + m;
        sum += std::exp(-kPi * shifted * shifted) * unit_phase(z + x.times(m));
    }
    return sum;
}

std::complex<double> theta_series(int K, double x, double y, double z) {
    std::complex<double> sum{0.0, 0.0};
    for (int m = -K; m <= K; ++m) {
        const double shifted = y + m;
        const double phase = 2.0 * kPi * (z + m * x);
        sum += std::exp(-kPi * shifted * shifted) * std::complex<double>(std::cos(phase), std::sin(phase));
    }
    return sum;
}

std::complex<double> space_mean(const Observable& obs, const NilsystemModel& model, int grid) {
    if (grid < 16) throw std::invalid_argument("space_mean: grid must be at least 16");
    if (!obs.supports(model)) throw std::invalid_argument("space_mean: observable not defined on this model");
    const std::size_t axes = model.kind == ModelKind::heisenberg ? 3 : model.dimension;
    const auto g = static_cast<std::uint64_t>(grid);
    std::uint64_t points = 1;
    for (std::size_t a = 0; a < axes; ++a) {
        if (points > (std::uint64_t{1} << 28) / g) throw std::invalid_argument("space_mean: grid too fine");
        points *= g;
    }
    auto node = [g](std::uint64_t i) {
        return UnitFrac::from_ratio(static_cast<std::int64_t>(2 * i + 1), static_cast<std::int64_t>(2 * g));
    };
    const auto sum = block_sum(0, points, [&](std::uint64_t flat) {
        std::vector<UnitFrac> coords(axes);
        for (std::size_t a = 0; a < axes; ++a) {
            coords[a] = node(flat % g);
            flat /= g;
        }
        if (model.kind == ModelKind::heisenberg) {
            return obs(GroupElement::heisenberg(Fixed::from_frac(coords[0]), Fixed::from_frac(coords[1]),
                                                Fixed::from_frac(coords[2])));
        }
        return obs(GroupElement::torus(std::move(coords)));
    });
    return sum / static_cast<double>(points);
}

}  // namespace nilprime
