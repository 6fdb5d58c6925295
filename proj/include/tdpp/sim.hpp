#pragma once

#include "tdpp/network.hpp"
#include "tdpp/routing.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace tdpp {

enum class Algorithm { tdpp, hop_baseline, greedy_baseline };

const char* algorithm_name(Algorithm algorithm);
Algorithm algorithm_from_name(const std::string& name);

/// Sweep definition. Defaults mirror the reference scenario: 24-node
/// backbone, Normal(0.80, 0.1) link fidelities, 20-qubit node memories,
/// 10 concurrent pairs, capacities 10..90, 500 ms slots.
struct ExperimentConfig {
    std::string topology_path;
    int pair_count = 10;
    std::vector<SdPair> explicit_pairs;  // used instead of pair_count when non-empty
    std::vector<Algorithm> algorithms{Algorithm::tdpp};
    int trials = 1000;
    std::uint64_t rng_seed = 42;
    double alpha = 0.5;
    double beta = 0.5;
    std::vector<int> capacities{10, 20, 30, 40, 50, 60, 70, 80, 90};
    int memory_per_node = 20;
    double mean_fidelity = 0.80;
    double fidelity_std = 0.1;
    double fidelity_threshold = 0.50;
    int k_paths = 3;
    int slot_ms = 500;
    int lifetime_ms = 1460;
    bool use_state_factor = true;
    int threads = 0;  // 0 = all available processors

    void validate() const;  // throws on out-of-range settings
};

/// Purity weight of the normalized (alpha, beta) amplitude pair:
/// max(alpha, beta)^2 / (alpha^2 + beta^2), in [0.5, 1].
double state_overlap_factor(double alpha, double beta);

/// Success bar actually applied to routed fidelities. The amplitude factor
/// scales the configured threshold and is an explicit modeling stand-in;
/// use_state_factor=false turns it off.
double effective_threshold(const ExperimentConfig& config);

struct MetricsRecord {
    int capacity = 0;
    Algorithm algorithm = Algorithm::tdpp;
    double mean_e2e_fidelity = 0.0;
    double stderr_fidelity = 0.0;
    double mean_throughput = 0.0;
    double stderr_throughput = 0.0;
    double success_rate = 0.0;
    int trials = 0;
};

/// One slot: fresh graph with uniform capacity and memory, per-trial edge
/// fidelities and sampled pairs (child seeds derived from (root, capacity,
/// trial)), then the configured router and the lifetime filter.
std::vector<RoutingOutcome> run_trial(const ExperimentConfig& config, const NetworkGraph& base,
                                      Algorithm algorithm, int capacity, int trial_index);

/// Convenience form: loads the topology and runs the first configured
/// algorithm.
std::vector<RoutingOutcome> run_trial(const ExperimentConfig& config, int capacity,
                                      int trial_index);

/// Full sweep: one MetricsRecord per (capacity, algorithm), capacities outer.
std::vector<MetricsRecord> run_experiment(const ExperimentConfig& config);

/// Fails outcomes whose establishment needs more sequential slots than the
/// qubit lifetime allows (budget = floor(lifetime/slot)).
std::vector<RoutingOutcome> qubit_lifetime_filter(std::vector<RoutingOutcome> outcomes,
                                                  int slot_ms, int lifetime_ms);

std::string metrics_to_csv(const std::vector<MetricsRecord>& records);
std::vector<MetricsRecord> metrics_from_csv(const std::string& text);

} // namespace tdpp
