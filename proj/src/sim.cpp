#include "tdpp/sim.hpp"

#include "tdpp/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace tdpp {

const char* algorithm_name(Algorithm algorithm) {
    switch (algorithm) {
        case Algorithm::tdpp: return "tdpp";
        case Algorithm::hop_baseline: return "hop_baseline";
        case Algorithm::greedy_baseline: return "greedy_baseline";
    }
    throw std::logic_error("unreachable algorithm");
}

Algorithm algorithm_from_name(const std::string& name) {
    if (name == "tdpp") return Algorithm::tdpp;
    if (name == "hop_baseline") return Algorithm::hop_baseline;
    if (name == "greedy_baseline") return Algorithm::greedy_baseline;
    throw std::invalid_argument("unknown algorithm '" + name + "'");
}

void ExperimentConfig::validate() const {
    if (topology_path.empty()) throw std::invalid_argument("config needs a topology path");
    if (trials < 1) throw std::invalid_argument("trials must be at least 1");
    if (explicit_pairs.empty() && pair_count < 1)
        throw std::invalid_argument("pair count must be at least 1");
    if (algorithms.empty()) throw std::invalid_argument("at least one algorithm required");
    if (capacities.empty()) throw std::invalid_argument("at least one capacity required");
    for (int c : capacities)
        if (c < 1) throw std::invalid_argument("capacity values must be at least 1");
    if (memory_per_node < 1) throw std::invalid_argument("memory must be at least 1");
    if (!(fidelity_threshold > 0.0 && fidelity_threshold <= 1.0))
        throw std::invalid_argument("threshold must lie in (0,1]");
    if (!(mean_fidelity > 0.0 && mean_fidelity <= 1.0))
        throw std::invalid_argument("mean fidelity must lie in (0,1]");
    if (fidelity_std < 0.0) throw std::invalid_argument("fidelity std must be non-negative");
    if (k_paths < 1) throw std::invalid_argument("k must be at least 1");
    if (slot_ms < 1 || lifetime_ms < 1)
        throw std::invalid_argument("slot and lifetime must be positive");
    if (alpha == 0.0 && beta == 0.0)
        throw std::invalid_argument("alpha and beta must not both be zero");
    if (threads < 0) throw std::invalid_argument("threads must be non-negative");
}

double state_overlap_factor(double alpha, double beta) {
    const PureState psi = make_state(alpha, beta);
    const double a0 = std::norm(psi.amp(0));
    const double a1 = std::norm(psi.amp(1));
    return std::max(a0, a1);
}

double effective_threshold(const ExperimentConfig& config) {
    return config.use_state_factor
               ? config.fidelity_threshold * state_overlap_factor(config.alpha, config.beta)
               : config.fidelity_threshold;
}

namespace {

std::vector<SdPair> sample_pairs(const NetworkGraph& graph, int count, std::uint64_t seed) {
    const std::vector<std::string> ids = graph.node_ids();
    std::vector<SdPair> all;
    all.reserve(ids.size() * (ids.size() - 1) / 2);
    for (size_t i = 0; i < ids.size(); ++i)
        for (size_t j = i + 1; j < ids.size(); ++j) all.push_back({ids[i], ids[j]});
    if (count > static_cast<int>(all.size()))
        throw std::invalid_argument("pair count exceeds the number of node pairs");

    Rng rng(seed);
    for (size_t i = all.size() - 1; i > 0; --i)
        std::swap(all[i], all[static_cast<size_t>(rng.uniform_int(static_cast<int>(i) + 1))]);
    all.resize(static_cast<size_t>(count));
    return all;
}

std::vector<RoutingOutcome> route_with(const NetworkGraph& graph, Algorithm algorithm,
                                       const std::vector<SdPair>& pairs, int k,
                                       double threshold) {
    switch (algorithm) {
        case Algorithm::tdpp:
            return tdpp_route(graph, pairs, k, threshold);
        case Algorithm::hop_baseline:
            return baseline_route(graph, pairs, BaselineKind::hop_shortest_no_purification,
                                  threshold);
        case Algorithm::greedy_baseline:
            return baseline_route(graph, pairs, BaselineKind::greedy_max_fidelity, threshold);
    }
    throw std::logic_error("unreachable algorithm");
}

double sample_stddev(const std::vector<double>& values, double mean) {
    if (values.size() < 2) return 0.0;
    double acc = 0.0;
    for (double v : values) acc += (v - mean) * (v - mean);
    return std::sqrt(acc / static_cast<double>(values.size() - 1));
}

MetricsRecord aggregate(const ExperimentConfig& config, int capacity, Algorithm algorithm,
                        const std::vector<std::vector<RoutingOutcome>>& per_trial) {
    const int pairs_per_trial = config.explicit_pairs.empty()
                                    ? config.pair_count
                                    : static_cast<int>(config.explicit_pairs.size());
    std::vector<double> throughput;
    std::vector<double> trial_fidelity;  // mean over the trial's successes
    throughput.reserve(per_trial.size());
    long total_successes = 0;

    for (const std::vector<RoutingOutcome>& outcomes : per_trial) {
        int successes = 0;
        double fidelity_sum = 0.0;
        for (const RoutingOutcome& o : outcomes) {
            if (!o.success) continue;
            ++successes;
            fidelity_sum += o.e2e_fidelity;
        }
        throughput.push_back(successes);
        total_successes += successes;
        if (successes > 0) trial_fidelity.push_back(fidelity_sum / successes);
    }

    MetricsRecord rec;
    rec.capacity = capacity;
    rec.algorithm = algorithm;
    rec.trials = static_cast<int>(per_trial.size());

    double tp_mean = 0.0;
    for (double t : throughput) tp_mean += t;
    tp_mean /= static_cast<double>(throughput.size());
    rec.mean_throughput = tp_mean;
    rec.stderr_throughput =
        sample_stddev(throughput, tp_mean) / std::sqrt(static_cast<double>(throughput.size()));

    if (!trial_fidelity.empty()) {
        double f_mean = 0.0;
        for (double f : trial_fidelity) f_mean += f;
        f_mean /= static_cast<double>(trial_fidelity.size());
        rec.mean_e2e_fidelity = f_mean;
        rec.stderr_fidelity = sample_stddev(trial_fidelity, f_mean) /
                              std::sqrt(static_cast<double>(trial_fidelity.size()));
    }
    rec.success_rate = static_cast<double>(total_successes) /
                       (static_cast<double>(per_trial.size()) * pairs_per_trial);
    return rec;
}

} // namespace

std::vector<RoutingOutcome> run_trial(const ExperimentConfig& config, const NetworkGraph& base,
                                      Algorithm algorithm, int capacity, int trial_index) {
    NetworkGraph work = base;
    work.set_uniform_capacity(capacity);
    work.set_uniform_memory(config.memory_per_node);

    const std::uint64_t edge_seed =
        combine_seed(config.rng_seed, static_cast<std::uint64_t>(capacity),
                     static_cast<std::uint64_t>(trial_index), 1);
    const std::uint64_t pair_seed =
        combine_seed(config.rng_seed, static_cast<std::uint64_t>(capacity),
                     static_cast<std::uint64_t>(trial_index), 2);
    work = sample_edge_attributes(std::move(work), config.mean_fidelity, config.fidelity_std,
                                  edge_seed);

    const std::vector<SdPair> pairs = config.explicit_pairs.empty()
                                          ? sample_pairs(work, config.pair_count, pair_seed)
                                          : config.explicit_pairs;

    // per-node initial state; its purity factor feeds the success bar
    make_state(config.alpha, config.beta);
    const double threshold = effective_threshold(config);

    std::vector<RoutingOutcome> outcomes =
        route_with(work, algorithm, pairs, config.k_paths, threshold);
    return qubit_lifetime_filter(std::move(outcomes), config.slot_ms, config.lifetime_ms);
}

std::vector<RoutingOutcome> run_trial(const ExperimentConfig& config, int capacity,
                                      int trial_index) {
    config.validate();
    const NetworkGraph base = load_topology_file(config.topology_path);
    return run_trial(config, base, config.algorithms.front(), capacity, trial_index);
}

std::vector<MetricsRecord> run_experiment(const ExperimentConfig& config) {
    config.validate();
    const NetworkGraph base = load_topology_file(config.topology_path);

    unsigned worker_count = config.threads > 0
                                ? static_cast<unsigned>(config.threads)
                                : std::max(1u, std::thread::hardware_concurrency());
    worker_count = std::min(worker_count, static_cast<unsigned>(config.trials));

    std::vector<MetricsRecord> records;
    for (int capacity : config.capacities) {
        for (Algorithm algorithm : config.algorithms) {
            std::vector<std::vector<RoutingOutcome>> per_trial(
                static_cast<size_t>(config.trials));
            if (worker_count <= 1) {
                for (int t = 0; t < config.trials; ++t)
                    per_trial[static_cast<size_t>(t)] =
                        run_trial(config, base, algorithm, capacity, t);
            } else {
                // trials are independent; results land in their own slots so
                // parallel and serial runs aggregate identically
                std::atomic<int> next{0};
                auto worker = [&] {
                    for (int t = next.fetch_add(1); t < config.trials; t = next.fetch_add(1))
                        per_trial[static_cast<size_t>(t)] =
                            run_trial(config, base, algorithm, capacity, t);
                };
                std::vector<std::thread> threads;
                threads.reserve(worker_count);
                for (unsigned w = 0; w < worker_count; ++w) threads.emplace_back(worker);
                for (std::thread& th : threads) th.join();
            }
            records.push_back(aggregate(config, capacity, algorithm, per_trial));
        }
    }
    return records;
}

std::vector<RoutingOutcome> qubit_lifetime_filter(std::vector<RoutingOutcome> outcomes,
                                                  int slot_ms, int lifetime_ms) {
    if (slot_ms <= 0 || lifetime_ms <= 0)
        throw std::invalid_argument("slot and lifetime must be positive");
    const int budget = lifetime_ms / slot_ms;
    for (RoutingOutcome& o : outcomes) {
        if (o.slots_required > budget) {
            o.success = false;
            o.failure_reason = FailureReason::fidelity_below_threshold;
        }
    }
    return outcomes;
}

std::string metrics_to_csv(const std::vector<MetricsRecord>& records) {
    std::ostringstream out;
    out << "capacity,algorithm,mean_fidelity,stderr_fidelity,mean_throughput,"
           "stderr_throughput,success_rate,trials\n";
    char buf[256];
    for (const MetricsRecord& rec : records) {
        std::snprintf(buf, sizeof buf, "%d,%s,%.6g,%.6g,%.6g,%.6g,%.6g,%d\n", rec.capacity,
                      algorithm_name(rec.algorithm), rec.mean_e2e_fidelity, rec.stderr_fidelity,
                      rec.mean_throughput, rec.stderr_throughput, rec.success_rate, rec.trials);
        out << buf;
    }
    return out.str();
}

std::vector<MetricsRecord> metrics_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty CSV");
    std::vector<MetricsRecord> records;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::string field;
        std::vector<std::string> parts;
        while (std::getline(fields, field, ',')) parts.push_back(field);
        if (parts.size() != 8) throw std::runtime_error("bad CSV row: " + line);
        MetricsRecord rec;
        rec.capacity = std::stoi(parts[0]);
        rec.algorithm = algorithm_from_name(parts[1]);
        rec.mean_e2e_fidelity = std::stod(parts[2]);
        rec.stderr_fidelity = std::stod(parts[3]);
        rec.mean_throughput = std::stod(parts[4]);
        rec.stderr_throughput = std::stod(parts[5]);
        rec.success_rate = std::stod(parts[6]);
        rec.trials = std::stoi(parts[7]);
        records.push_back(rec);
    }
    return records;
}

} // namespace tdpp
