// nilprime: experiment runner for ergodic averages along primes on nilsystems.
//
//   nilprime run <config.json> [--out DIR] [--threads K]
//   nilprime sieve-stats <N>
//   nilprime list-observables
//
// Exit status: 0 success, 2 invalid config, 3 resource guard exceeded, 1 anything else.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "nilprime/experiment.hpp"

namespace {

int run_command(const std::string& config_path, const std::string& out_dir, unsigned threads) {
    nilprime::ExperimentConfig config;
    try {
        std::ifstream in(config_path);
        if (!in) throw nilprime::ConfigError("cannot open config file '" + config_path + "'");
        config = nilprime::parse_config(nlohmann::json::parse(in));
    } catch (const nlohmann::json::parse_error& e) {
        std::cerr << "nilprime: malformed JSON: " << e.what() << '\n';
        return 2;
    } catch (const nilprime::ConfigError& e) {
        std::cerr << "nilprime: invalid config: " << e.what() << '\n';
        return 2;
    }
    if (!out_dir.empty()) config.output = out_dir;

    try {
        const auto result = nilprime::run_experiment(config, nilprime::Exec{threads});
        nilprime::write_outputs(result, config.output);
        std::cout << "final_value " << nilprime::format_double(result.summary["final_value"]["re"].get<double>())
                  << ' ' << nilprime::format_double(result.summary["final_value"]["im"].get<double>())
                  << "  max_tail_delta " << nilprime::format_double(result.summary["max_tail_delta"].get<double>())
                  << "  -> " << config.output << '\n';
    } catch (const nilprime::ResourceError& e) {
        std::cerr << "nilprime: resource guard: " << e.what() << '\n';
        return 3;
    } catch (const nilprime::ConfigError& e) {
        std::cerr << "nilprime: invalid config: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "nilprime: evaluation error: " << e.what() << '\n';
        return 2;
    } catch (const std::overflow_error& e) {
        std::cerr << "nilprime: evaluation error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}

int sieve_stats(std::uint64_t n) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto table = nilprime::sieve(n);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    double chebyshev = 0.0;
    for (const auto p : table.primes()) chebyshev += std::log(static_cast<double>(p));
    std::cout << "N " << n << '\n'
              << "pi(N) " << table.pi(n) << '\n'
              << "largest_prime " << table.primes().back() << '\n'
              << "chebyshev_mean " << nilprime::format_double(chebyshev / static_cast<double>(n)) << '\n'
              << "sieve_seconds " << seconds << '\n';
    return 0;
}

void list_observables() {
    std::cout << "constant         {\"kind\":\"constant\",\"value\":1 | [re,im]}                  any model\n"
                 "torus-character  {\"kind\":\"torus-character\",\"k\":[k1,...,kd]}            torus, e(k.x)\n"
                 "heis-horizontal  {\"kind\":\"heis-horizontal\",\"k\":K,\"l\":L}               heisenberg, e(kx+ly)\n"
                 "heis-theta       {\"kind\":\"heis-theta\",\"K\":8}                         heisenberg,\n"
                 "                 sum_{|m|<=K} exp(-pi (y+m)^2) e(z + m x)\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ergodic averages along primes on nilsystems"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    unsigned threads = 1;
    auto* run = app.add_subcommand("run", "Run an experiment described by a JSON config");
    run->add_option("config", config_path, "Experiment config (JSON)")->required();
    run->add_option("--out", out_dir, "Output directory (overrides the config's 'output')");
    run->add_option("--threads", threads, "Worker threads; results do not depend on it")
        ->check(CLI::Range(1u, 256u));

    std::uint64_t n = 0;
    auto* stats = app.add_subcommand("sieve-stats", "Sieve up to N and print prime statistics");
    stats->add_option("N", n, "Sieve limit")->required()->check(CLI::Range(std::uint64_t{2}, nilprime::kMaxSieveLimit));

    auto* list = app.add_subcommand("list-observables", "Print the built-in observables");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*run) return run_command(config_path, out_dir, threads);
        if (*stats) return sieve_stats(n);
        if (*list) list_observables();
    } catch (const std::exception& e) {
        std::cerr << "nilprime: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
