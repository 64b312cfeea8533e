#ifndef NILPRIME_EXPERIMENT_HPP
#define NILPRIME_EXPERIMENT_HPP

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "nilprime/averages.hpp"

namespace nilprime {

/// Invalid experiment description (CLI exit status 2).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Predicted sieve size or work exceeds the runner's guard (CLI exit status 3).
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Experiment { converge_prime, converge_birkhoff, anticorr, wtrick_check, ergodicity, decomposition };

/// Upper bound on observable evaluations a single run may schedule.
inline constexpr std::uint64_t kMaxPredictedTerms = 4'000'000'000;

/**
 * A fully resolved experiment description. Coordinates are kept as their
 * textual specs ("sqrt2m1", "sqrt3m1", "golden", an integer, or "p/q") so
 * the summary can echo them verbatim.
 */
struct ExperimentConfig {
    Experiment experiment = Experiment::converge_prime;
    ModelKind model = ModelKind::torus;
    std::vector<std::vector<std::string>> generators;
    std::vector<IntPoly> exponents;
    nlohmann::json observable;          // {"kind": ..., parameters}
    std::vector<std::string> start;     // empty means the identity coset
    std::uint64_t N0 = 1024;
    unsigned doublings = 10;
    std::uint64_t omega = 3;
    std::uint64_t seed = 0;
    std::uint64_t starting_points = 5;
    std::uint64_t m_max = 5;
    std::int64_t k_max = 3;
    std::string output = ".";
};

/// Validates every field and materializes defaults. Unknown keys are rejected. Throws ConfigError.
ExperimentConfig parse_config(const nlohmann::json& doc);

/// The resolved config with all defaults spelled out.
nlohmann::json to_json(const ExperimentConfig& config);

std::string_view to_string(Experiment e) noexcept;

/// Counter-based generator: splitmix64 finalizer of seed + (counter + 1) * 0x9E3779B97F4A7C15.
std::uint64_t counter_random(std::uint64_t seed, std::uint64_t counter) noexcept;

/// Seeded starting point number `index` for the given model (uniform in the unit cube).
GroupElement random_point(const NilsystemModel& model, std::uint64_t seed, std::uint64_t index);

/// Largest sieve limit the experiment will need.
std::uint64_t required_sieve_limit(const ExperimentConfig& config);

struct RunResult {
    std::string csv;             // header N,re,im,abs,delta
    nlohmann::json summary;      // wall_seconds is the only run-dependent field
};

/// Runs the experiment in memory. Throws ConfigError or ResourceError.
RunResult run_experiment(const ExperimentConfig& config, const Exec& exec = {});

/// Writes series.csv and summary.json into `dir`, creating it if needed.
void write_outputs(const RunResult& result, const std::filesystem::path& dir);

/// 17-significant-digit rendering used for every CSV field.
std::string format_double(double v);

}  // namespace nilprime

#endif  // NILPRIME_EXPERIMENT_HPP
