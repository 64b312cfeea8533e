// Runs every acceptance criterion at its stated tolerance and time budget and
// prints one PASS/FAIL line per criterion. Exit status is nonzero if any fail.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "nilprime/experiment.hpp"
#include "oracles.hpp"

using namespace nilprime;
using nlohmann::json;

namespace {

using cld = std::complex<long double>;

struct Outcome {
    bool pass = true;
    std::string detail;
};

// Accumulates named checks into one verdict with a compact detail line.
class Checks {
public:
    void expect(bool ok, const std::string& what) {
        pass_ = pass_ && ok;
        if (!detail_.empty()) detail_ += "; ";
        detail_ += (ok ? "" : "FAILED ") + what;
    }
    Outcome outcome() const { return {pass_, detail_}; }

private:
    bool pass_ = true;
    std::string detail_;
};

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

const PrimeTable& big_table() {
    static const PrimeTable t = sieve(std::uint64_t{1} << 20);
    return t;
}

const std::vector<bool>& ref_primes() {
    static const std::vector<bool> p = oracle::byte_sieve(std::uint64_t{1} << 20);
    return p;
}

long double ref_lambda(std::uint64_t n) { return ref_primes()[n] ? std::log(static_cast<long double>(n)) : 0.0L; }

const long double kSqrt2m1 = std::sqrt(2.0L) - 1.0L;
const long double kSqrt3m1 = std::sqrt(3.0L) - 1.0L;

GroupElement rot(UnitFrac a) { return GroupElement::torus({a}); }
UnitFrac s2() { return irrational_const(Irrational::sqrt2m1); }
UnitFrac s3() { return irrational_const(Irrational::sqrt3m1); }

GroupElement heis_g() { return GroupElement::heisenberg(Fixed::from_frac(s2()), Fixed::from_frac(s3()), Fixed{}); }

// Reduced theta value of g^n for g = (sqrt2-1, sqrt3-1, 0), straight from the group law in long double.
cld theta_orbit_ld(std::uint64_t n) {
    const long double N = static_cast<long double>(n);
    const long double X = N * kSqrt2m1, Y = N * kSqrt3m1;
    const long double Z = N * (N - 1) / 2 * kSqrt2m1 * kSqrt3m1;
    const long double fy = std::floor(Y);
    const long double xr = X - std::floor(X), yr = Y - fy;
    const long double zr = std::fmod(Z - X * fy, 1.0L);
    cld s = 0;
    for (int m = -8; m <= 8; ++m) {
        s += std::exp(-3.14159265358979323846L * (yr + m) * (yr + m)) * oracle::phase_ld(zr + m * xr);
    }
    return s;
}

cld torus_orbit_ld(std::uint64_t n) { return oracle::phase_ld(std::fmod(static_cast<long double>(n) * kSqrt2m1, 1.0L)); }

// Direct prime and Lambda'-weighted sums, returning |prime mean - weighted mean|.
double gap_oracle(const std::function<cld(std::uint64_t)>& f, std::uint64_t N) {
    cld plain = 0, weighted = 0;
    std::uint64_t count = 0;
    for (std::uint64_t n = 2; n <= N; ++n) {
        if (!ref_primes()[n]) continue;
        const cld v = f(n);
        plain += v;
        weighted += std::log(static_cast<long double>(n)) * v;
        ++count;
    }
    return static_cast<double>(std::abs(plain / static_cast<long double>(count) - weighted / static_cast<long double>(N)));
}

IndexedSequence lambda_seq() {
    return {std::uint64_t{1} << 20, [](std::uint64_t n) { return cplx(static_cast<double>(ref_lambda(n)), 0.0); }};
}

// ---------------------------------------------------------------------------

Outcome c1_sieve() {
    Checks c;
    const auto t0 = std::chrono::steady_clock::now();
    const PrimeTable t = sieve(1'000'000);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const std::uint64_t ref6 = oracle::trial_division_pi(1'000'000);
    const std::uint64_t ref4 = oracle::trial_division_pi(10'000);
    c.expect(t.pi(10'000) == 1229 && ref4 == 1229, "pi(1e4)=" + std::to_string(t.pi(10'000)));
    c.expect(t.pi(1'000'000) == 78498 && ref6 == 78498, "pi(1e6)=" + std::to_string(t.pi(1'000'000)));
    bool agree = true;
    for (std::uint64_t n = 0; n <= 1'000'000; ++n) agree = agree && (t.is_prime(n) == static_cast<bool>(ref_primes()[n]));
    c.expect(agree, "pointwise agreement with byte sieve");
    c.expect(secs < 1.0, "sieve " + fmt("%.3f s", secs));
    return c.outcome();
}

Outcome c2_chebyshev() {
    Checks c;
    const PrimeTable& t = big_table();
    const cplx v = lambda_avg(Observable::constant({1.0, 0.0}), PolySequence::linear(rot(UnitFrac{})), rot(UnitFrac{}),
                              1'000'000, t);
    long double ref = 0;
    for (std::uint64_t n = 1; n <= 1'000'000; ++n) ref += ref_lambda(n);
    ref /= 1e6L;
    c.expect(std::fabs(1.0 - v.real()) <= 0.01, "|1-mean|=" + fmt("%.3e", std::fabs(1.0 - v.real())));
    c.expect(std::fabs(v.real() - static_cast<double>(ref)) <= 1e-12, "oracle diff " + fmt("%.1e", std::fabs(v.real() - static_cast<double>(ref))));
    return c.outcome();
}

Outcome c3_exact_split() {
    Checks c;
    double worst = 0.0;
    for (std::uint64_t omega : {2u, 3u, 5u}) {
        const WData w = make_w(omega, big_table());
        for (std::uint64_t N : {10u, 1000u, 10'000u}) {
            const ExactSplit s = wtrick_exact_split(lambda_seq(), w.W, N);
            worst = std::max(worst, std::abs(s.lhs - s.rhs_full) / std::abs(s.lhs));
        }
    }
    c.expect(worst <= 1e-12, "max relative gap " + fmt("%.2e", worst));
    return c.outcome();
}

Outcome c4_coprime_residual() {
    Checks c;
    for (std::uint64_t omega : {3u, 5u}) {
        const WData w = make_w(omega, big_table());
        const std::uint64_t N = 10'000, WN = w.W * N;
        const CoprimeForm f = wtrick_coprime_form(lambda_seq(), w, N, big_table());
        long double enumerated = 0;
        for (std::uint64_t n = 1; n <= WN; ++n) {
            if (std::gcd(n, w.W) != 1) enumerated += ref_lambda(n);
        }
        for (std::uint64_t r = 1; r < w.W; ++r) {
            if (std::gcd(r, w.W) == 1) enumerated += ref_lambda(r) - ref_lambda(WN + r);
        }
        enumerated /= static_cast<long double>(WN);
        const double diff = std::abs(f.residual - cplx(static_cast<double>(enumerated), 0.0));
        const double bound = (static_cast<double>(omega) + 2.0 * static_cast<double>(w.phi_W)) *
                             std::log(static_cast<double>(WN + w.W)) / static_cast<double>(WN);
        const std::string tag = "omega=" + std::to_string(omega) + ": ";
        c.expect(diff <= 1e-12 * std::abs(f.lhs), tag + "residual vs enumeration " + fmt("%.1e", diff));
        c.expect(std::abs(f.residual) <= bound, tag + "|residual|=" + fmt("%.3e", std::abs(f.residual)) + " <= " + fmt("%.3e", bound));
    }
    return c.outcome();
}

Outcome c5_gap_decay() {
    Checks c;
    const PrimeTable& t = big_table();
    const GroupElement torus_x = rot(UnitFrac{});
    const GroupElement heis_x = GroupElement::identity(NilsystemModel::heisenberg());
    struct Case {
        const char* name;
        Observable F;
        PolySequence seq;
        GroupElement x;
        std::function<cld(std::uint64_t)> oracle;
    };
    const Case cases[] = {
        {"torus", Observable::torus_character({1}), PolySequence::linear(rot(s2())), torus_x, torus_orbit_ld},
        {"heis-theta", Observable::heis_theta(8), PolySequence::linear(heis_g()), heis_x, theta_orbit_ld},
    };
    for (const auto& k : cases) {
        const double g6 = gap31(k.F, k.seq, k.x, 1'000'000, t);
        const double g4 = gap31(k.F, k.seq, k.x, 10'000, t);
        const double o6 = gap_oracle(k.oracle, 1'000'000);
        const std::string tag = std::string(k.name) + ": ";
        c.expect(g6 <= 0.02, tag + "gap(1e6)=" + fmt("%.4f", g6));
        c.expect(g6 < g4, tag + "gap(1e4)=" + fmt("%.4f", g4));
        c.expect(std::fabs(g6 - o6) <= 1e-6, tag + "oracle diff " + fmt("%.1e", std::fabs(g6 - o6)));
    }
    return c.outcome();
}

Outcome c6_anticorrelation() {
    Checks c;
    const PrimeTable& t = big_table();
    const GroupElement third = rot(UnitFrac::from_ratio(1, 3));
    const Observable ch = Observable::torus_character({1});
    const std::uint64_t N = 100'000;
    const cplx raw = raw_correlation(ch, third, rot(UnitFrac{}), N, t);
    // Residue-class counts: sum of log p per class mod 3, and n-counts per class.
    long double logs[3] = {0, 0, 0};
    std::uint64_t counts[3] = {0, 0, 0};
    for (std::uint64_t n = 1; n <= N; ++n) {
        logs[n % 3] += ref_lambda(n);
        ++counts[n % 3];
    }
    cld ref = 0;
    for (int a = 0; a < 3; ++a) ref += (logs[a] - static_cast<long double>(counts[a])) * oracle::phase_ld(a / 3.0L);
    ref /= static_cast<long double>(N);
    c.expect(std::abs(raw) >= 0.4 && std::abs(raw) <= 0.6, "|raw|=" + fmt("%.4f", std::abs(raw)));
    c.expect(std::abs(raw - cplx(ref)) <= 1e-12, "raw vs counts " + fmt("%.1e", static_cast<double>(std::abs(raw - cplx(ref)))));
    const AntiCorrelation a = anticorr(ch, third, rot(UnitFrac{}), make_w(3, t), N, t);
    c.expect(a.max_abs <= 0.05, "anticorr max_abs=" + fmt("%.4f", a.max_abs));
    return c.outcome();
}

Outcome c7_reconstruction() {
    Checks c;
    const PrimeTable& t = big_table();
    std::mt19937_64 gen(20'240'607);
    double worst = 0.0, worst_oracle = 0.0;
    for (int i = 0; i < 20; ++i) {
        const std::uint64_t omegas[] = {2, 3, 5};
        const WData w = make_w(omegas[gen() % 3], t);
        const std::uint64_t N = 500 + gen() % 4000;
        const auto frac = [&] { return UnitFrac::from_raw((u128{gen()} << 64) | gen()); };
        Observable F = Observable::constant({1.0, 0.0});
        GroupElement g = rot(frac()), x = rot(frac());
        if (i % 2 == 0) {
            F = Observable::torus_character({static_cast<std::int64_t>(1 + gen() % 3)});
        } else {
            F = Observable::heis_theta(8);
            g = GroupElement::heisenberg(Fixed::from_parts(static_cast<i128>(gen() % 5) - 2, frac()),
                                         Fixed::from_parts(static_cast<i128>(gen() % 5) - 2, frac()), Fixed::from_frac(frac()));
            x = GroupElement::heisenberg(Fixed::from_frac(frac()), Fixed::from_frac(frac()), Fixed::from_frac(frac()));
        }
        const Decomposition d = decomposition_eq6(F, g, x, w, N, t);
        // Plain loop for the weighted average, with the byte sieve for primality.
        const std::uint64_t WN = w.W * N;
        cld direct = 0;
        for (std::uint64_t n = 2; n <= WN; ++n) {
            if (ref_primes()[n]) direct += ref_lambda(n) * cld(F(reduce(multiply(power(g, n), x))));
        }
        direct /= static_cast<long double>(WN);
        const double scale = std::max(1.0, std::abs(d.weighted_average));
        worst = std::max(worst, std::abs(d.I_N + d.II_N + d.remainder - d.weighted_average) / scale);
        worst_oracle = std::max(worst_oracle, static_cast<double>(std::abs(cld(d.weighted_average) - direct)) / scale);
    }
    c.expect(worst <= 1e-10, "max reconstruction error " + fmt("%.1e", worst));
    c.expect(worst_oracle <= 1e-10, "weighted average vs direct loop " + fmt("%.1e", worst_oracle));
    return c.outcome();
}

Outcome c8_linear_desk_check() {
    Checks c;
    const PrimeTable& t = big_table();
    const cplx tv = prime_avg(Observable::torus_character({1}), PolySequence::linear(rot(s2())), rot(UnitFrac{}), 1'000'000, t);
    c.expect(std::abs(tv) <= 0.05, "torus |avg|=" + fmt("%.4f", std::abs(tv)));
    const Observable theta = Observable::heis_theta(8);
    const GroupElement x = GroupElement::identity(NilsystemModel::heisenberg());
    const PolySequence seq = PolySequence::linear(heis_g());
    const cplx hv = prime_avg(theta, seq, x, 1'000'000, t);
    c.expect(std::abs(hv) <= 0.1, "heis |avg|=" + fmt("%.4f", std::abs(hv)));
    const AverageSeries s = dyadic_series(AverageKind::prime, theta, seq, x, 1024, 10, &t);
    c.expect(s.max_tail_delta(3) <= 0.05, "heis tail delta=" + fmt("%.4f", s.max_tail_delta(3)));
    cld ref = 0;
    std::uint64_t count = 0;
    for (std::uint64_t n = 2; n <= 1'000'000; ++n) {
        if (ref_primes()[n]) {
            ref += theta_orbit_ld(n);
            ++count;
        }
    }
    ref /= static_cast<long double>(count);
    c.expect(std::abs(hv - cplx(ref)) <= 1e-6, "heis oracle diff " + fmt("%.1e", std::abs(hv - cplx(ref))));
    return c.outcome();
}

Outcome c9_polynomial() {
    Checks c;
    const GroupElement g1 = heis_g();
    const GroupElement g2 = GroupElement::heisenberg(Fixed::from_frac(irrational_const(Irrational::golden)),
                                                     Fixed::from_frac(s2()), Fixed{});
    const PolySequence seq({g1, g2}, {{0, 0, 1}, {0, 1}});
    const AverageSeries s = dyadic_series(AverageKind::prime, Observable::heis_theta(8), seq,
                                          GroupElement::identity(NilsystemModel::heisenberg()), 1024, 10, &big_table());
    c.expect(s.max_tail_delta(3) <= 0.1, "tail delta=" + fmt("%.4f", s.max_tail_delta(3)));
    return c.outcome();
}

Outcome c10_invariants() {
    Checks c;
    long double worst_pow = 0;
    bool xy_exact = true;
    for (int i = 0; i < 10; ++i) {
        const GroupElement g = oracle::random_heis(3);
        GroupElement acc = GroupElement::identity(NilsystemModel::heisenberg());
        for (int k = 0; k < 1000; ++k) acc = heis_mul(acc, g);
        const GroupElement fast = heis_pow(g, 1000);
        xy_exact = xy_exact && fast.heis().x == acc.heis().x && fast.heis().y == acc.heis().y;
        worst_pow = std::max(worst_pow, std::fabs(oracle::raw_gap(fast.heis().z.raw(), acc.heis().z.raw())));
    }
    c.expect(xy_exact && worst_pow <= 0x1p38L, "heis_pow z gap 2^" + fmt("%.1f", std::log2(static_cast<double>(worst_pow) + 1) - 128));

    std::uniform_int_distribution<std::int64_t> lattice(-1000, 1000);
    std::uniform_int_distribution<std::int64_t> small(-2, 2);
    bool coset = true;
    double defect = 0.0;
    const Observable theta = Observable::heis_theta(8);
    for (int i = 0; i < 1000; ++i) {
        const GroupElement g = oracle::random_heis(1'000'000);
        const GroupElement gamma = GroupElement::heisenberg(Fixed::from_integer(lattice(oracle::rng())),
                                                            Fixed::from_integer(lattice(oracle::rng())),
                                                            Fixed::from_integer(lattice(oracle::rng())));
        coset = coset && reduce(heis_mul(g, gamma)) == reduce(g);

        const GroupElement h = reduce(g);
        const GroupElement q = GroupElement::heisenberg(Fixed::from_integer(small(oracle::rng())),
                                                        Fixed::from_integer(small(oracle::rng())),
                                                        Fixed::from_integer(small(oracle::rng())));
        const HeisTriple& m = heis_mul(h, q).heis();
        defect = std::max(defect, std::abs(theta_series(8, m.x.to_double(), m.y.to_double(), m.z.to_double()) - theta(h)));
    }
    c.expect(coset, "reduce(g gamma) == reduce(g) over 1000 pairs");
    c.expect(defect <= 1e-12, "theta invariance defect " + fmt("%.1e", defect));
    return c.outcome();
}

Outcome c11_weyl() {
    Checks c;
    const std::vector<UnitFrac> irr{s2()};
    const WeylMatrix w = weyl_totality_test(irr, 5, 3, 1'000'000);
    c.expect(w.max_entry() <= 0.01, "sqrt2-1 max entry " + fmt("%.2e", w.max_entry()));
    const std::vector<UnitFrac> half{UnitFrac::from_ratio(1, 2)};
    const WeylMatrix h = weyl_totality_test(half, 2, 1, 1'000'000);
    c.expect(h.at(2, 0) == 1.0, "alpha=1/2 entry (2,1)=" + fmt("%.17g", h.at(2, 0)));
    return c.outcome();
}

Outcome c12_unique_ergodicity() {
    Checks c;
    const Observable ch = Observable::torus_character({1});
    std::vector<GroupElement> pts;
    for (std::uint64_t i = 0; i < 5; ++i) pts.push_back(random_point(NilsystemModel::torus(1), 12, i));
    const double spread = unique_ergodicity_probe(ch, PolySequence::linear(rot(s2())), pts, 1'000'000);
    c.expect(spread <= 0.02, "ergodic spread " + fmt("%.2e", spread));
    const std::vector<GroupElement> two{rot(UnitFrac{}), rot(UnitFrac::from_ratio(1, 2))};
    const double stuck = unique_ergodicity_probe(ch, PolySequence::linear(rot(UnitFrac{})), two, 1'000'000);
    c.expect(stuck == 2.0, "alpha=0 spread " + fmt("%.17g", stuck));
    return c.outcome();
}

Outcome c13_determinism() {
    Checks c;
    const ExperimentConfig config = parse_config(json{{"experiment", "converge-prime"},
                                                      {"model", "heisenberg"},
                                                      {"generators", {{"sqrt2m1", "sqrt3m1", "0"}}},
                                                      {"observable", {{"kind", "heis-theta"}, {"K", 8}}},
                                                      {"N0", 1024},
                                                      {"doublings", 10}});
    const RunResult one = run_experiment(config, Exec{1});
    const RunResult eight = run_experiment(config, Exec{8});
    c.expect(one.csv == eight.csv, "CSV byte-identical (" + std::to_string(one.csv.size()) + " bytes)");
    return c.outcome();
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        double budget_seconds;
        Outcome (*run)();
    };
    const Criterion criteria[] = {
        {1, "sieve correctness", 1, c1_sieve},
        {2, "Chebyshev mean", 1, c2_chebyshev},
        {3, "exact reindexing", 1, c3_exact_split},
        {4, "coprime-form residual", 1, c4_coprime_residual},
        {5, "gap between prime and weighted averages", 30, c5_gap_decay},
        {6, "W-trick anti-correlation", 10, c6_anticorrelation},
        {7, "decomposition reconstruction", 10, c7_reconstruction},
        {8, "linear desk check", 60, c8_linear_desk_check},
        {9, "polynomial Cauchy diagnostic", 120, c9_polynomial},
        {10, "dynamics invariants", 5, c10_invariants},
        {11, "Weyl total-ergodicity proxy", 10, c11_weyl},
        {12, "unique-ergodicity proxy", 30, c12_unique_ergodicity},
        {13, "determinism across workers", 120, c13_determinism},
    };
    // Oracle tables are built up front so no criterion is charged for them.
    (void)ref_primes();
    (void)big_table();

    int failures = 0;
    for (const auto& k : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = k.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = secs < k.budget_seconds;
        const bool pass = o.pass && in_time;
        failures += pass ? 0 : 1;
        std::printf("[%s] criterion %2d  %-40s %7.2f s (budget %g s)%s | %s\n", pass ? "PASS" : "FAIL", k.id, k.name,
                    secs, k.budget_seconds, in_time ? "" : " OVER BUDGET", o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(criteria)) - failures, std::size(criteria));
    return failures == 0 ? 0 : 1;
}
