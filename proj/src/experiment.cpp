#include "nilprime/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

namespace nilprime {

using nlohmann::json;

namespace {

struct Coord {
    i128 whole = 0;
    UnitFrac frac;
};

constexpr std::pair<Experiment, std::string_view> kExperimentNames[] = {
    {Experiment::converge_prime, "converge-prime"}, {Experiment::converge_birkhoff, "converge-birkhoff"},
    {Experiment::anticorr, "anticorr"},             {Experiment::wtrick_check, "wtrick-check"},
    {Experiment::ergodicity, "ergodicity"},         {Experiment::decomposition, "decomposition"},
};

std::int64_t parse_int(std::string_view text, const std::string& what) {
    std::int64_t v = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end || text.empty()) {
        throw ConfigError(what + ": '" + std::string(text) + "' is not an integer");
    }
    return v;
}

Coord parse_coord(const std::string& spec) {
    if (spec == "sqrt2m1" || spec == "sqrt3m1" || spec == "golden") {
        return {0, irrational_const(parse_irrational(spec))};
    }
    const auto slash = spec.find('/');
    if (slash == std::string::npos) return {parse_int(spec, "coordinate"), UnitFrac{}};
    const std::int64_t num = parse_int(std::string_view(spec).substr(0, slash), "coordinate numerator");
    const std::int64_t den = parse_int(std::string_view(spec).substr(slash + 1), "coordinate denominator");
    if (den <= 0) throw ConfigError("coordinate '" + spec + "': denominator must be positive");
    std::int64_t whole = num / den;
    if (num % den != 0 && num < 0) --whole;
    return {whole, UnitFrac::from_ratio(num, den)};
}

std::string coord_spec(const json& v, const std::string& where) {
    if (v.is_string()) {
        parse_coord(v.get<std::string>());
        return v.get<std::string>();
    }
    if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
    throw ConfigError(where + ": coordinates must be strings (sqrt2m1, sqrt3m1, golden, p/q) or integers");
}

GroupElement build_element(ModelKind model, const std::vector<std::string>& coords) {
    if (model == ModelKind::heisenberg) {
        Fixed c[3];
        for (int i = 0; i < 3; ++i) {
            const Coord p = parse_coord(coords[i]);
            c[i] = Fixed::from_parts(p.whole, p.frac);
        }
        return GroupElement::heisenberg(c[0], c[1], c[2]);
    }
    std::vector<UnitFrac> out;
    for (const auto& s : coords) out.push_back(parse_coord(s).frac);
    return GroupElement::torus(std::move(out));
}

void reject_unknown_keys(const json& obj, std::initializer_list<std::string_view> allowed, const std::string& where) {
    for (const auto& item : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
            throw ConfigError(where + ": unknown key '" + item.key() + "'");
        }
    }
}

template <typename T>
T get_unsigned(const json& doc, const char* key, T fallback) {
    if (!doc.contains(key)) return fallback;
    const json& v = doc.at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
        throw ConfigError(std::string(key) + ": expected a nonnegative integer");
    }
    return static_cast<T>(v.get<std::uint64_t>());
}

Observable make_observable(const json& spec) {
    if (!spec.is_object() || !spec.contains("kind") || !spec.at("kind").is_string()) {
        throw ConfigError("observable: expected an object with a string 'kind'");
    }
    const auto kind = spec.at("kind").get<std::string>();
    if (kind == "constant") {
        reject_unknown_keys(spec, {"kind", "value"}, "observable");
        const json& v = spec.at("value");
        if (v.is_number()) return Observable::constant({v.get<double>(), 0.0});
        if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
            return Observable::constant({v[0].get<double>(), v[1].get<double>()});
        }
        throw ConfigError("observable.value: expected a number or [re, im]");
    }
    if (kind == "torus-character") {
        reject_unknown_keys(spec, {"kind", "k"}, "observable");
        const json& k = spec.at("k");
        if (!k.is_array() || k.empty()) throw ConfigError("observable.k: expected a nonempty integer array");
        std::vector<std::int64_t> freq;
        for (const auto& e : k) {
            if (!e.is_number_integer()) throw ConfigError("observable.k: entries must be integers");
            freq.push_back(e.get<std::int64_t>());
        }
        return Observable::torus_character(std::move(freq));
    }
    if (kind == "heis-horizontal") {
        reject_unknown_keys(spec, {"kind", "k", "l"}, "observable");
        if (!spec.at("k").is_number_integer() || !spec.at("l").is_number_integer()) {
            throw ConfigError("observable: heis-horizontal needs integer k and l");
        }
        return Observable::heis_horizontal(spec.at("k").get<std::int64_t>(), spec.at("l").get<std::int64_t>());
    }
    if (kind == "heis-theta") {
        reject_unknown_keys(spec, {"kind", "K"}, "observable");
        if (!spec.at("K").is_number_integer()) throw ConfigError("observable.K: expected an integer");
        const auto K = spec.at("K").get<std::int64_t>();
        if (K < 3 || K > 64) throw ConfigError("observable.K: must lie in [3, 64]");
        return Observable::heis_theta(static_cast<int>(K));
    }
    throw ConfigError("observable: unknown kind '" + kind + "'");
}

std::uint64_t primorial(std::uint64_t omega) {
    std::uint64_t w = 1;
    for (std::uint64_t p = 2; p <= omega; ++p) {
        bool prime = true;
        for (std::uint64_t d = 2; d * d <= p; ++d) prime = prime && (p % d != 0);
        if (prime) w *= p;
    }
    return w;
}

std::uint64_t n_max_of(const ExperimentConfig& c) { return c.N0 << c.doublings; }

bool is_linear(const ExperimentConfig& c) {
    return c.generators.size() == 1 && c.exponents.front() == IntPoly{0, 1};
}

json complex_json(cplx v) { return json{{"re", v.real()}, {"im", v.imag()}}; }

struct Row {
    std::uint64_t N;
    cplx value;
};

std::uint64_t predicted_terms(const ExperimentConfig& c) {
    const long double n = static_cast<long double>(n_max_of(c));
    const long double w = static_cast<long double>(primorial(c.omega));
    long double terms = 0;
    switch (c.experiment) {
        case Experiment::converge_prime:
        case Experiment::converge_birkhoff: terms = n; break;
        case Experiment::anticorr:
        case Experiment::decomposition: terms = 3 * w * n; break;
        case Experiment::wtrick_check: terms = 4 * w * n; break;
        case Experiment::ergodicity: {
            const long double k = static_cast<long double>(c.k_max);
            const std::size_t d = c.model == ModelKind::heisenberg ? 2 : c.generators.front().size();
            terms = n * (static_cast<long double>(c.starting_points) +
                         static_cast<long double>(c.m_max) * std::pow(2 * k + 1, static_cast<long double>(d)));
            break;
        }
    }
    return terms > 1e18L ? std::uint64_t{1'000'000'000'000'000'000} : static_cast<std::uint64_t>(terms);
}

}  // namespace

std::string_view to_string(Experiment e) noexcept {
    for (const auto& [value, name] : kExperimentNames) {
        if (value == e) return name;
    }
    return "?";
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::uint64_t counter_random(std::uint64_t seed, std::uint64_t counter) noexcept {
    std::uint64_t z = seed + (counter + 1) * 0x9E37'79B9'7F4A'7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58'476D'1CE4'E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D0'49BB'1331'11EBull;
    return z ^ (z >> 31);
}

GroupElement random_point(const NilsystemModel& model, std::uint64_t seed, std::uint64_t index) {
    const std::size_t axes = model.kind == ModelKind::heisenberg ? 3 : model.dimension;
    std::vector<UnitFrac> coords(axes);
    for (std::size_t a = 0; a < axes; ++a) {
        const std::uint64_t c = 2 * (index * axes + a);
        coords[a] = UnitFrac::from_raw((u128{counter_random(seed, c)} << 64) | counter_random(seed, c + 1));
    }
    if (model.kind == ModelKind::heisenberg) {
        return GroupElement::heisenberg(Fixed::from_frac(coords[0]), Fixed::from_frac(coords[1]),
                                        Fixed::from_frac(coords[2]));
    }
    return GroupElement::torus(std::move(coords));
}

ExperimentConfig parse_config(const json& doc) {
    if (!doc.is_object()) throw ConfigError("config: expected a JSON object");
    reject_unknown_keys(doc,
                        {"experiment", "model", "generators", "exponents", "observable", "start", "N0", "doublings",
                         "omega", "seed", "starting_points", "m_max", "k_max", "output"},
                        "config");
    ExperimentConfig c;
    try {
        if (!doc.contains("experiment") || !doc.at("experiment").is_string()) {
            throw ConfigError("config: 'experiment' (string) is required");
        }
        const auto name = doc.at("experiment").get<std::string>();
        const auto* found = std::find_if(std::begin(kExperimentNames), std::end(kExperimentNames),
                                         [&](const auto& e) { return e.second == name; });
        if (found == std::end(kExperimentNames)) throw ConfigError("config: unknown experiment '" + name + "'");
        c.experiment = found->first;

        const std::string model = doc.value("model", std::string("torus"));
        if (model == "torus") {
            c.model = ModelKind::torus;
        } else if (model == "heisenberg") {
            c.model = ModelKind::heisenberg;
        } else {
            throw ConfigError("config: model must be 'torus' or 'heisenberg'");
        }

        if (doc.contains("generators")) {
            const json& gens = doc.at("generators");
            if (!gens.is_array() || gens.empty()) throw ConfigError("generators: expected a nonempty array");
            for (const auto& g : gens) {
                if (!g.is_array() || g.empty()) throw ConfigError("generators: each generator is a coordinate array");
                std::vector<std::string> coords;
                for (const auto& v : g) coords.push_back(coord_spec(v, "generators"));
                c.generators.push_back(std::move(coords));
            }
        } else if (c.model == ModelKind::heisenberg) {
            c.generators = {{"sqrt2m1", "sqrt3m1", "0"}};
        } else {
            c.generators = {{"sqrt2m1"}};
        }
        const std::size_t axes = c.model == ModelKind::heisenberg ? 3 : c.generators.front().size();
        for (const auto& g : c.generators) {
            if (g.size() != axes) {
                throw ConfigError(c.model == ModelKind::heisenberg
                                      ? "generators: Heisenberg generators need exactly 3 coordinates"
                                      : "generators: all torus generators need the same dimension");
            }
        }

        if (doc.contains("exponents")) {
            const json& exps = doc.at("exponents");
            if (!exps.is_array()) throw ConfigError("exponents: expected an array of coefficient arrays");
            for (const auto& p : exps) {
                if (!p.is_array() || p.size() > kMaxPolyDegree + 1) {
                    throw ConfigError("exponents: each polynomial is a coefficient array of degree <= 4");
                }
                IntPoly poly;
                for (const auto& a : p) {
                    if (!a.is_number_integer()) throw ConfigError("exponents: coefficients must be integers");
                    poly.push_back(a.get<std::int64_t>());
                }
                c.exponents.push_back(std::move(poly));
            }
        } else if (c.generators.size() == 1) {
            c.exponents = {{0, 1}};
        }
        if (c.exponents.size() != c.generators.size()) {
            throw ConfigError("exponents: one polynomial per generator required");
        }

        if (doc.contains("observable")) {
            c.observable = doc.at("observable");
            if (c.observable.is_object() && c.observable.value("kind", "") == "heis-theta" &&
                !c.observable.contains("K")) {
                c.observable["K"] = kDefaultThetaTerms;
            }
            if (c.observable.is_object() && c.observable.value("kind", "") == "constant" &&
                !c.observable.contains("value")) {
                c.observable["value"] = 1.0;
            }
        } else if (c.model == ModelKind::heisenberg) {
            c.observable = {{"kind", "heis-theta"}, {"K", kDefaultThetaTerms}};
        } else {
            std::vector<std::int64_t> k(axes, 0);
            k[0] = 1;
            c.observable = {{"kind", "torus-character"}, {"k", k}};
        }
        const Observable F = make_observable(c.observable);
        const NilsystemModel nm = c.model == ModelKind::heisenberg ? NilsystemModel::heisenberg()
                                                                     : NilsystemModel::torus(axes);
        if (!F.supports(nm)) throw ConfigError("observable: " + F.describe() + " is not defined on this model");

        if (doc.contains("start")) {
            const json& s = doc.at("start");
            if (s.is_string() && s.get<std::string>() == "identity") {
                c.start.clear();
            } else if (s.is_array() && s.size() == axes) {
                for (const auto& v : s) c.start.push_back(coord_spec(v, "start"));
            } else {
                throw ConfigError("start: expected \"identity\" or a coordinate array matching the model");
            }
        }

        c.N0 = get_unsigned<std::uint64_t>(doc, "N0", c.N0);
        c.doublings = get_unsigned<unsigned>(doc, "doublings", c.doublings);
        c.omega = get_unsigned<std::uint64_t>(doc, "omega", c.omega);
        c.seed = get_unsigned<std::uint64_t>(doc, "seed", c.seed);
        c.starting_points = get_unsigned<std::uint64_t>(doc, "starting_points", c.starting_points);
        c.m_max = get_unsigned<std::uint64_t>(doc, "m_max", c.m_max);
        c.k_max = static_cast<std::int64_t>(get_unsigned<std::uint64_t>(doc, "k_max", 3));
        if (doc.contains("output")) {
            if (!doc.at("output").is_string()) throw ConfigError("output: expected a path string");
            c.output = doc.at("output").get<std::string>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }

    const bool over_primes = c.experiment != Experiment::converge_birkhoff && c.experiment != Experiment::ergodicity;
    if (c.N0 < (over_primes ? 2u : 1u)) throw ConfigError("N0: too small for this experiment");
    if (c.doublings > 40) throw ConfigError("doublings: at most 40");
    if ((c.N0 >> (63 - c.doublings)) != 0) throw ConfigError("N0 * 2^doublings overflows");
    if (c.omega < 2 || c.omega > kMaxOmega) throw ConfigError("omega: must lie in [2, 29]");
    if (c.starting_points < 2) throw ConfigError("starting_points: at least 2");
    if (c.m_max < 1 || c.m_max > 64) throw ConfigError("m_max: must lie in [1, 64]");
    if (c.k_max < 1 || c.k_max > 64) throw ConfigError("k_max: must lie in [1, 64]");
    const bool needs_linear = c.experiment == Experiment::anticorr || c.experiment == Experiment::decomposition ||
                              c.experiment == Experiment::ergodicity;
    if (needs_linear && !is_linear(c)) {
        throw ConfigError(std::string(to_string(c.experiment)) +
                          ": needs a single generator with exponent polynomial [0, 1]");
    }
    return c;
}

json to_json(const ExperimentConfig& c) {
    json doc;
    doc["experiment"] = std::string(to_string(c.experiment));
    doc["model"] = c.model == ModelKind::heisenberg ? "heisenberg" : "torus";
    doc["generators"] = c.generators;
    doc["exponents"] = c.exponents;
    doc["observable"] = c.observable;
    if (c.start.empty()) {
        doc["start"] = "identity";
    } else {
        doc["start"] = c.start;
    }
    doc["N0"] = c.N0;
    doc["doublings"] = c.doublings;
    doc["omega"] = c.omega;
    doc["seed"] = c.seed;
    doc["starting_points"] = c.starting_points;
    doc["m_max"] = c.m_max;
    doc["k_max"] = c.k_max;
    doc["output"] = c.output;
    return doc;
}

std::uint64_t required_sieve_limit(const ExperimentConfig& c) {
    const long double n = static_cast<long double>(n_max_of(c));
    const long double w = static_cast<long double>(primorial(c.omega));
    long double limit = 0;
    switch (c.experiment) {
        case Experiment::converge_prime: limit = n; break;
        case Experiment::anticorr:
        case Experiment::decomposition:
        case Experiment::wtrick_check: limit = w * n + w; break;
        case Experiment::converge_birkhoff:
        case Experiment::ergodicity: limit = 0; break;
    }
    return limit > 1e18L ? std::uint64_t{1'000'000'000'000'000'000} : static_cast<std::uint64_t>(limit);
}

RunResult run_experiment(const ExperimentConfig& c, const Exec& exec) {
    const auto started = std::chrono::steady_clock::now();

    const std::uint64_t sieve_limit = required_sieve_limit(c);
    if (sieve_limit > kMaxSieveLimit) {
        throw ResourceError("experiment needs primes up to " + std::to_string(sieve_limit) +
                            ", above the sieve guard of 10^8");
    }
    if (predicted_terms(c) > kMaxPredictedTerms) {
        throw ResourceError("experiment schedules more than " + std::to_string(kMaxPredictedTerms) + " evaluations");
    }

    std::vector<GroupElement> gens;
    for (const auto& g : c.generators) gens.push_back(build_element(c.model, g));
    const PolySequence seq(gens, c.exponents);
    const NilsystemModel model = seq.model();
    const Observable F = make_observable(c.observable);
    const GroupElement x = c.start.empty() ? GroupElement::identity(model) : build_element(c.model, c.start);

    std::optional<PrimeTable> table;
    if (sieve_limit > 0) table = sieve(std::max<std::uint64_t>(sieve_limit, 64));

    const std::uint64_t n_max = n_max_of(c);
    std::vector<Row> rows;
    json details = json::object();

    auto checkpoints = [&] {
        std::vector<std::uint64_t> out;
        for (unsigned j = 0; j <= c.doublings; ++j) out.push_back(c.N0 << j);
        return out;
    };

    switch (c.experiment) {
        case Experiment::converge_prime:
        case Experiment::converge_birkhoff: {
            const AverageKind kind =
                c.experiment == Experiment::converge_prime ? AverageKind::prime : AverageKind::birkhoff;
            const AverageSeries s =
                dyadic_series(kind, F, seq, x, c.N0, c.doublings, table ? &*table : nullptr, exec);
            for (std::size_t i = 0; i < s.values.size(); ++i) rows.push_back({s.checkpoints[i], s.values[i]});
            if (auto mean = F.analytic_mean()) details["space_mean"] = complex_json(*mean);
            break;
        }
        case Experiment::anticorr: {
            const WData w = make_w(c.omega, *table);
            AntiCorrelation last;
            for (const std::uint64_t N : checkpoints()) {
                last = anticorr(F, gens.front(), x, w, N, *table, exec);
                const auto best = std::max_element(last.per_r.begin(), last.per_r.end(), [](const auto& a, const auto& b) {
                    return std::abs(a.second) < std::abs(b.second);
                });
                rows.push_back({N, best->second});
            }
            json per_r = json::array();
            for (const auto& [r, v] : last.per_r) per_r.push_back({{"r", r}, {"re", v.real()}, {"im", v.imag()}});
            details["W"] = w.W;
            details["phi_W"] = w.phi_W;
            details["per_r"] = per_r;
            details["max_abs"] = last.max_abs;
            details["raw_correlation"] = complex_json(raw_correlation(F, gens.front(), x, n_max, *table, exec));
            break;
        }
        case Experiment::wtrick_check: {
            const WData w = make_w(c.omega, *table);
            const PrimeTable& t = *table;
            const IndexedSequence b{t.limit(), [&](std::uint64_t n) -> cplx {
                                        if (!t.is_prime(n)) return {0.0, 0.0};
                                        return std::log(static_cast<double>(n)) * orbit_value(F, seq, x, n);
                                    }};
            ExactSplit split;
            CoprimeForm form;
            for (const std::uint64_t N : checkpoints()) {
                split = wtrick_exact_split(b, w.W, N, exec);
                form = wtrick_coprime_form(b, w, N, t, exec);
                rows.push_back({N, form.residual});
            }
            details["W"] = w.W;
            details["phi_W"] = w.phi_W;
            details["exact_split"] = {{"lhs", complex_json(split.lhs)},
                                      {"rhs_full", complex_json(split.rhs_full)},
                                      {"difference", std::abs(split.lhs - split.rhs_full)}};
            details["coprime_form"] = {{"lhs", complex_json(form.lhs)},
                                       {"main", complex_json(form.main)},
                                       {"residual", complex_json(form.residual)}};
            break;
        }
        case Experiment::decomposition: {
            const WData w = make_w(c.omega, *table);
            Decomposition d;
            for (const std::uint64_t N : checkpoints()) {
                d = decomposition_eq6(F, gens.front(), x, w, N, *table, exec);
                rows.push_back({N, d.weighted_average});
            }
            details["W"] = w.W;
            details["phi_W"] = w.phi_W;
            details["I"] = complex_json(d.I_N);
            details["II"] = complex_json(d.II_N);
            details["remainder"] = complex_json(d.remainder);
            details["weighted_average"] = complex_json(d.weighted_average);
            details["reconstruction_error"] = std::abs(d.I_N + d.II_N + d.remainder - d.weighted_average);
            break;
        }
        case Experiment::ergodicity: {
            // The rotation on the horizontal torus decides ergodicity of a nilrotation.
            std::vector<UnitFrac> alpha;
            if (model.kind == ModelKind::heisenberg) {
                alpha = {gens.front().heis().x.frac(), gens.front().heis().y.frac()};
            } else {
                const auto coords = gens.front().torus_coords();
                alpha.assign(coords.begin(), coords.end());
            }
            const WeylMatrix weyl = weyl_totality_test(alpha, c.m_max, c.k_max, n_max, exec);
            std::vector<AverageSeries> per_point;
            for (std::uint64_t i = 0; i < c.starting_points; ++i) {
                per_point.push_back(dyadic_series(AverageKind::birkhoff, F, seq, random_point(model, c.seed, i),
                                                  c.N0, c.doublings, nullptr, exec));
            }
            for (std::size_t j = 0; j <= c.doublings; ++j) {
                double spread = 0.0;
                for (std::size_t a = 0; a < per_point.size(); ++a) {
                    for (std::size_t b = a + 1; b < per_point.size(); ++b) {
                        spread = std::max(spread, std::abs(per_point[a].values[j] - per_point[b].values[j]));
                    }
                }
                rows.push_back({c.N0 << j, {spread, 0.0}});
            }
            json entries = json::array();
            for (std::uint64_t m = 1; m <= weyl.m_max; ++m) {
                json row = json::array();
                for (std::size_t k = 0; k < weyl.frequencies.size(); ++k) row.push_back(weyl.at(m, k));
                entries.push_back(row);
            }
            details["weyl"] = {{"frequencies", weyl.frequencies},
                               {"entries", entries},
                               {"max_entry", weyl.max_entry()}};
            details["spread"] = rows.back().value.real();
            break;
        }
    }

    std::ostringstream csv;
    csv << "N,re,im,abs,delta\n";
    std::vector<double> deltas;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const cplx v = rows[i].value;
        csv << rows[i].N << ',' << format_double(v.real()) << ',' << format_double(v.imag()) << ','
            << format_double(std::abs(v)) << ',';
        if (i > 0) {
            deltas.push_back(std::abs(v - rows[i - 1].value));
            csv << format_double(deltas.back());
        }
        csv << '\n';
    }
    AverageSeries tail;
    tail.cauchy_deltas = deltas;

    RunResult result;
    result.csv = csv.str();
    json& s = result.summary;
    s["experiment"] = std::string(to_string(c.experiment));
    s["config"] = to_json(c);
    s["final_value"] = complex_json(rows.back().value);
    s["max_tail_delta"] = tail.max_tail_delta(3);
    s["n_max"] = n_max;
    s["details"] = details;
    // omega(N) <= (1/2) log log N is reported, never enforced.
    s["omega_note"] = {{"omega", c.omega},
                       {"half_loglog_n_max", 0.5 * std::log(std::log(static_cast<double>(std::max<std::uint64_t>(n_max, 3))))}};
    s["wall_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return result;
}

void write_outputs(const RunResult& result, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    {
        std::ofstream out(dir / "series.csv", std::ios::binary);
        out << result.csv;
        if (!out) throw std::runtime_error("cannot write " + (dir / "series.csv").string());
    }
    std::ofstream out(dir / "summary.json", std::ios::binary);
    out << result.summary.dump(2) << '\n';
    if (!out) throw std::runtime_error("cannot write " + (dir / "summary.json").string());
}

}  // namespace nilprime
