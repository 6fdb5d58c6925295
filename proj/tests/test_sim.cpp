#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "tdpp/config.hpp"
#include "tdpp/sim.hpp"

#include <cmath>

using namespace tdpp;

namespace {

ExperimentConfig fig3_config() {
    ExperimentConfig config;
    config.topology_path = std::string(TDPP_DATA_DIR) + "/fig3.topo";
    config.explicit_pairs = {{"s", "d"}};
    config.k_paths = 2;
    config.fidelity_threshold = 0.5;
    config.use_state_factor = false;
    config.trials = 1;
    config.capacities = {4};
    config.memory_per_node = 4;
    return config;
}

ExperimentConfig backbone_config() {
    ExperimentConfig config;
    config.topology_path = std::string(TDPP_DATA_DIR) + "/us_backbone.topo";
    return config;
}

} // namespace

TEST_CASE("amplitude factor of the initial state") {
    CHECK(state_overlap_factor(0.5, 0.5) == doctest::Approx(0.5));
    CHECK(state_overlap_factor(0.4, 0.4) == doctest::Approx(0.5));
    CHECK(state_overlap_factor(0.4, 0.6) == doctest::Approx(0.36 / 0.52));
    CHECK(state_overlap_factor(0.4, 0.5) == doctest::Approx(0.25 / 0.41));
    CHECK_THROWS(state_overlap_factor(0.0, 0.0));

    ExperimentConfig config = fig3_config();
    config.fidelity_threshold = 0.8;
    config.use_state_factor = true;
    config.alpha = 0.5;
    config.beta = 0.5;
    CHECK(effective_threshold(config) == doctest::Approx(0.4));
    config.use_state_factor = false;
    CHECK(effective_threshold(config) == doctest::Approx(0.8));
}

TEST_CASE("trials are deterministic in (seed, capacity, index)") {
    const ExperimentConfig config = backbone_config();
    const NetworkGraph base = load_topology_file(config.topology_path);
    const auto a = run_trial(config, base, Algorithm::tdpp, 30, 7);
    const auto b = run_trial(config, base, Algorithm::tdpp, 30, 7);
    CHECK(render_decision_log(a) == render_decision_log(b));

    const auto other_trial = run_trial(config, base, Algorithm::tdpp, 30, 8);
    const auto other_capacity = run_trial(config, base, Algorithm::tdpp, 40, 7);
    CHECK(render_decision_log(a) != render_decision_log(other_trial));
    CHECK(render_decision_log(a) != render_decision_log(other_capacity));
}

TEST_CASE("a one-pair trial reproduces the worked routing example") {
    const ExperimentConfig config = fig3_config();
    const auto outcomes = run_trial(config, 4, 0);
    REQUIRE(outcomes.size() == 1);
    CHECK(outcomes[0].success);
    REQUIRE(outcomes[0].path.has_value());
    CHECK(outcomes[0].path->nodes == std::vector<std::string>{"s", "r2", "r3", "d"});
    REQUIRE(outcomes[0].decision.has_value());
    CHECK(std::abs(outcomes[0].decision->f_purified - 0.92) <= 0.01);
    CHECK(outcomes[0].e2e_fidelity == doctest::Approx(0.80 * std::sqrt(0.86) * 0.86));
}

TEST_CASE("zero capacity exhausts every pair") {
    const ExperimentConfig config = fig3_config();
    const NetworkGraph base = load_topology_file(config.topology_path);
    const auto outcomes = run_trial(config, base, Algorithm::tdpp, 0, 0);
    for (const RoutingOutcome& o : outcomes) {
        CHECK_FALSE(o.success);
        CHECK(o.failure_reason == FailureReason::capacity_exhausted);
    }
}

TEST_CASE("pair sampling is bounded by the pair count of the graph") {
    ExperimentConfig config = fig3_config();
    config.explicit_pairs.clear();
    config.pair_count = 11;  // 5 nodes only give 10 unordered pairs
    const NetworkGraph base = load_topology_file(config.topology_path);
    CHECK_THROWS(run_trial(config, base, Algorithm::tdpp, 4, 0));
    config.pair_count = 10;
    CHECK(run_trial(config, base, Algorithm::tdpp, 4, 0).size() == 10);
}

TEST_CASE("qubit lifetime filter") {
    RoutingOutcome quick;
    quick.pair = {"a", "b"};
    quick.success = true;
    quick.e2e_fidelity = 0.9;
    RoutingOutcome slow = quick;
    slow.slots_required = 3;

    // 1460 ms lifetime over 500 ms slots gives a 2-slot budget
    const auto kept = qubit_lifetime_filter({quick, slow}, 500, 1460);
    CHECK(kept[0].success);
    CHECK_FALSE(kept[1].success);
    CHECK(kept[1].failure_reason == FailureReason::fidelity_below_threshold);

    const auto strict = qubit_lifetime_filter({quick}, 500, 499);
    CHECK_FALSE(strict[0].success);

    const auto budget2 = qubit_lifetime_filter({slow}, 500, 1000);
    CHECK_FALSE(budget2[0].success);

    CHECK_THROWS(qubit_lifetime_filter({}, 0, 100));
}

TEST_CASE("experiment aggregation basics") {
    ExperimentConfig config = fig3_config();
    config.fidelity_threshold = 0.1;

    SUBCASE("single trial zeroes the error bars and saturates success") {
        const auto records = run_experiment(config);
        REQUIRE(records.size() == 1);
        CHECK(records[0].trials == 1);
        CHECK(records[0].stderr_fidelity == 0.0);
        CHECK(records[0].stderr_throughput == 0.0);
        CHECK(records[0].success_rate == doctest::Approx(1.0));
        CHECK(records[0].mean_throughput == doctest::Approx(1.0));
        CHECK(records[0].mean_e2e_fidelity > 0.0);
        CHECK(records[0].mean_e2e_fidelity <= 1.0);
    }

    SUBCASE("rows come out as capacities times algorithms") {
        config.capacities = {1, 2, 3};
        config.algorithms = {Algorithm::tdpp, Algorithm::hop_baseline};
        const auto records = run_experiment(config);
        REQUIRE(records.size() == 6);
        CHECK(records[0].capacity == 1);
        CHECK(records[0].algorithm == Algorithm::tdpp);
        CHECK(records[1].capacity == 1);
        CHECK(records[1].algorithm == Algorithm::hop_baseline);
        CHECK(records[5].capacity == 3);
    }

    SUBCASE("config validation rejects nonsense") {
        config.trials = 0;
        CHECK_THROWS(run_experiment(config));
        config.trials = 1;
        config.capacities = {0};
        CHECK_THROWS(run_experiment(config));
    }
}

TEST_CASE("experiments are reproducible and thread-count independent") {
    ExperimentConfig config = backbone_config();
    config.trials = 6;
    config.capacities = {10, 50};
    config.algorithms = {Algorithm::tdpp, Algorithm::hop_baseline};

    config.threads = 1;
    const std::string serial = metrics_to_csv(run_experiment(config));
    const std::string serial_again = metrics_to_csv(run_experiment(config));
    config.threads = 2;
    const std::string threaded = metrics_to_csv(run_experiment(config));

    CHECK(serial == serial_again);
    CHECK(serial == threaded);
}

TEST_CASE("successful fidelities never fall below the plain threshold") {
    ExperimentConfig config = backbone_config();
    config.use_state_factor = false;
    config.fidelity_threshold = 0.45;
    const NetworkGraph base = load_topology_file(config.topology_path);
    for (int t = 0; t < 10; ++t) {
        for (Algorithm algo :
             {Algorithm::tdpp, Algorithm::hop_baseline, Algorithm::greedy_baseline}) {
            for (const RoutingOutcome& o : run_trial(config, base, algo, 20, t)) {
                if (!o.success) continue;
                CHECK(o.e2e_fidelity >= config.fidelity_threshold);
                CHECK(o.e2e_fidelity <= 1.0);
            }
        }
    }
}

TEST_CASE("trial resource usage always validates") {
    ExperimentConfig config = backbone_config();
    config.pair_count = 12;
    const NetworkGraph base = load_topology_file(config.topology_path);
    for (int t = 0; t < 5; ++t) {
        const auto outcomes = run_trial(config, base, Algorithm::tdpp, 10, t);
        NetworkGraph check = base;
        check.set_uniform_capacity(10);
        check.set_uniform_memory(config.memory_per_node);
        CHECK(validate_flow_constraints(check, outcomes).ok());
    }
}

TEST_CASE("purified routing beats the hop baseline at capacity 50") {
    ExperimentConfig config = backbone_config();
    config.trials = 200;
    config.capacities = {50};
    config.algorithms = {Algorithm::tdpp, Algorithm::hop_baseline};
    const auto records = run_experiment(config);
    REQUIRE(records.size() == 2);
    const MetricsRecord& ours = records[0];
    const MetricsRecord& base = records[1];
    const double margin = 3.0 * (ours.stderr_fidelity + base.stderr_fidelity);
    CHECK(ours.mean_e2e_fidelity > base.mean_e2e_fidelity + margin);
}

TEST_CASE("metrics CSV round-trips at the printed precision") {
    ExperimentConfig config = fig3_config();
    config.fidelity_threshold = 0.3;
    config.capacities = {2, 4};
    const auto records = run_experiment(config);
    const std::string csv = metrics_to_csv(records);
    CHECK(csv.rfind("capacity,algorithm,mean_fidelity,stderr_fidelity,mean_throughput,"
                    "stderr_throughput,success_rate,trials\n",
                    0) == 0);
    const auto parsed = metrics_from_csv(csv);
    REQUIRE(parsed.size() == records.size());
    for (size_t i = 0; i < parsed.size(); ++i) {
        CHECK(parsed[i].capacity == records[i].capacity);
        CHECK(parsed[i].algorithm == records[i].algorithm);
        CHECK(parsed[i].trials == records[i].trials);
        CHECK(parsed[i].mean_e2e_fidelity ==
              doctest::Approx(records[i].mean_e2e_fidelity).epsilon(1e-5));
        CHECK(parsed[i].mean_throughput ==
              doctest::Approx(records[i].mean_throughput).epsilon(1e-5));
    }
    // byte determinism of the rendered form
    CHECK(csv == metrics_to_csv(metrics_from_csv(csv)));
}

TEST_CASE("config parsing") {
    const std::string text =
        "# sweep setup\n"
        "topology = data/us_backbone.topo\n"
        "pairs = 6\n"
        "algorithm = tdpp,hop_baseline\n"
        "trials = 25\n"
        "seed = 1234\n"
        "alpha = 0.4\n"
        "beta = 0.6\n"
        "capacity = 10,30,50\n"
        "memory = 16\n"
        "mean_fidelity = 0.82\n"
        "fidelity_std = 0.05\n"
        "threshold = 0.7\n"
        "k = 4\n"
        "slot_ms = 500\n"
        "lifetime_ms = 1460\n"
        "state_factor = off\n"
        "threads = 2\n";
    const ExperimentConfig config = parse_config_text(text);
    CHECK(config.topology_path == "data/us_backbone.topo");
    CHECK(config.pair_count == 6);
    REQUIRE(config.algorithms.size() == 2);
    CHECK(config.algorithms[1] == Algorithm::hop_baseline);
    CHECK(config.trials == 25);
    CHECK(config.rng_seed == 1234);
    CHECK(config.alpha == doctest::Approx(0.4));
    CHECK(config.capacities == std::vector<int>{10, 30, 50});
    CHECK(config.memory_per_node == 16);
    CHECK(config.mean_fidelity == doctest::Approx(0.82));
    CHECK(config.fidelity_threshold == doctest::Approx(0.7));
    CHECK(config.k_paths == 4);
    CHECK_FALSE(config.use_state_factor);
    CHECK(config.threads == 2);

    // explicit pair lists
    const ExperimentConfig with_pairs =
        parse_config_text("topology = x\npairs = a:b, c:d\n");
    REQUIRE(with_pairs.explicit_pairs.size() == 2);
    CHECK(with_pairs.explicit_pairs[0].source == "a");
    CHECK(with_pairs.explicit_pairs[1].destination == "d");

    // round-trip through the rendered form
    const ExperimentConfig again = parse_config_text(config_to_text(config));
    CHECK(config_to_text(again) == config_to_text(config));

    CHECK_THROWS_WITH_AS(parse_config_text("topology = x\nbogus_key = 3\n"),
                         "unknown config key 'bogus_key'", std::runtime_error);
    CHECK_THROWS(parse_config_text("topology = x\ntrials = many\n"));
    CHECK_THROWS(parse_config_text("topology\n"));
    CHECK_THROWS(parse_config_text("algorithm = warp_drive\n"));
}
