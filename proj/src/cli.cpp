#include "tdpp/cli.hpp"

#include "tdpp/config.hpp"
#include "tdpp/network.hpp"
#include "tdpp/quantum.hpp"
#include "tdpp/routing.hpp"
#include "tdpp/sim.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace tdpp {

namespace {

constexpr const char* kFig3Topology =
    "# Five-node demo topology with fixed edge metrics and closeness overrides.\n"
    "# Node lines carry an explicit closeness value; edge lines carry\n"
    "# capacity, fidelity and trace distance.\n"
    "node s 4 0.60\n"
    "node r1 4 0.40\n"
    "node r2 4 0.90\n"
    "node r3 4 0.90\n"
    "node d 4 0.60\n"
    "edge s r1 4 0.70 0.60\n"
    "edge s r2 4 0.80 0.60\n"
    "edge r1 d 4 0.70 0.60\n"
    "edge r2 r3 4 0.64 0.67\n"
    "edge r3 d 4 0.86 0.50\n";

std::vector<SdPair> parse_pair_flags(const std::vector<std::string>& entries) {
    std::vector<SdPair> pairs;
    for (const std::string& entry : entries) {
        const size_t colon = entry.find(':');
        if (colon == std::string::npos || colon == 0 || colon + 1 == entry.size())
            throw std::runtime_error("pair '" + entry + "' must look like source:destination");
        pairs.push_back({entry.substr(0, colon), entry.substr(colon + 1)});
    }
    return pairs;
}

int cmd_route(const std::string& topology_path, const std::vector<std::string>& pair_specs,
              const std::string& algorithm, int k, double threshold, std::uint64_t seed,
              double mean_fidelity, double fidelity_std, std::ostream& out, std::ostream& err) {
    try {
        NetworkGraph graph = load_topology_file(topology_path);
        bool needs_sampling = false;
        for (const auto& [key, rec] : graph.edges())
            if (!rec.attributes_set()) needs_sampling = true;
        if (needs_sampling)
            graph = sample_edge_attributes(std::move(graph), mean_fidelity, fidelity_std, seed);

        const std::vector<SdPair> pairs = parse_pair_flags(pair_specs);
        const Algorithm algo = algorithm_from_name(algorithm);
        std::vector<RoutingOutcome> outcomes;
        switch (algo) {
            case Algorithm::tdpp:
                outcomes = tdpp_route(graph, pairs, k, threshold);
                break;
            case Algorithm::hop_baseline:
                outcomes = baseline_route(graph, pairs,
                                          BaselineKind::hop_shortest_no_purification, threshold);
                break;
            case Algorithm::greedy_baseline:
                outcomes =
                    baseline_route(graph, pairs, BaselineKind::greedy_max_fidelity, threshold);
                break;
        }
        out << render_decision_log(outcomes);
        for (const RoutingOutcome& o : outcomes)
            if (!o.success) return 2;
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

int cmd_experiment(const std::string& config_path,
                   const std::vector<std::pair<std::string, std::string>>& overrides,
                   const std::string& out_path, std::ostream& out, std::ostream& err) {
    try {
        ExperimentConfig config =
            config_path.empty() ? ExperimentConfig{} : parse_config_file(config_path);
        for (const auto& [key, value] : overrides) apply_config_value(config, key, value);
        const std::vector<MetricsRecord> records = run_experiment(config);
        const std::string csv = metrics_to_csv(records);
        if (out_path.empty()) {
            out << csv;
        } else {
            std::ofstream file(out_path, std::ios::binary);
            if (!file) throw std::runtime_error("cannot write '" + out_path + "'");
            file << csv;
        }
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

int cmd_validate(const std::string& topology_path, const std::string& log_path, std::ostream& out,
                 std::ostream& err) {
    NetworkGraph graph;
    std::vector<RoutingOutcome> outcomes;
    try {
        graph = load_topology_file(topology_path);
        std::ifstream in(log_path);
        if (!in) throw std::runtime_error("cannot open log file '" + log_path + "'");
        std::ostringstream buffer;
        buffer << in.rdbuf();
        outcomes = parse_decision_log(buffer.str());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    try {
        const ValidationReport report = validate_flow_constraints(graph, outcomes);
        out << report.to_text();
        if (report.ok()) {
            out << "all constraints satisfied\n";
            return 0;
        }
        return 3;
    } catch (const std::exception& e) {
        // outcomes referencing unknown entities are an input problem
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

int cmd_demo_pump(double a, double b, double threshold, int max_rounds, std::ostream& out,
                  std::ostream& err) {
    try {
        const PumpResult result = pump_until_threshold(a, b, threshold, max_rounds);
        const bool default_run =
            a == 0.528 && b == 0.548 && threshold == 0.80;
        const double reference[3] = {0.731, 0.793, 0.809};

        out << "pumping " << a << " against base " << b << " toward threshold " << threshold
            << "\n";
        bool flagged = false;
        char line[160];
        for (size_t i = 0; i < result.trajectory.size(); ++i) {
            if (default_run && i < 3) {
                const double dev = std::abs(result.trajectory[i] - reference[i]);
                const bool bad = dev > 0.01;
                flagged |= bad;
                std::snprintf(line, sizeof line,
                              "round %zu: %.4f  (reference %.3f, deviation %.4f)%s\n", i + 1,
                              result.trajectory[i], reference[i], dev,
                              bad ? "  DEVIATION" : "");
            } else {
                std::snprintf(line, sizeof line, "round %zu: %.4f\n", i + 1,
                              result.trajectory[i]);
            }
            out << line;
        }
        if (result.converged) {
            std::snprintf(line, sizeof line, "reached %.4f after %d rounds\n",
                          result.final_fidelity, result.rounds);
        } else {
            std::snprintf(line, sizeof line, "not converged after %d rounds (at %.4f)\n",
                          result.rounds, result.final_fidelity);
        }
        out << line;
        return flagged ? 2 : 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

int cmd_demo_fig3(double threshold, std::ostream& out, std::ostream& err) {
    try {
        NetworkGraph graph = load_topology_text(kFig3Topology);
        const std::vector<RoutingOutcome> outcomes =
            tdpp_route(graph, {{"s", "d"}}, 2, threshold);
        out << render_decision_log(outcomes);

        const RoutingOutcome& o = outcomes.front();
        bool ok = true;
        auto check = [&](const char* what, bool pass) {
            out << (pass ? "ok:   " : "FAIL: ") << what << "\n";
            ok &= pass;
        };
        check("path is s,r2,r3,d",
              o.path && o.path->nodes == std::vector<std::string>{"s", "r2", "r3", "d"});
        check("worst-edge trace distance is 0.67",
              o.decision && std::abs(o.decision->d_max - 0.67) < 1e-9);
        check("selected edge fidelity is 0.86",
              o.decision && std::abs(o.decision->f_sel_edge - 0.86) < 1e-9);
        check("purified fidelity is 0.92 within 0.01",
              o.decision && std::abs(o.decision->f_purified - 0.92) <= 0.01);
        check("purified edge is r2:r3", o.decision && o.decision->edge == EdgeKey{"r2", "r3"});
        return ok ? 0 : 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace

const char* fig3_topology_text() { return kFig3Topology; }

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"trace-distance path-purification routing simulator"};
    app.require_subcommand(1);

    // route
    auto* route = app.add_subcommand("route", "route S-D pairs over a topology file");
    std::string route_topology;
    std::vector<std::string> route_pairs;
    std::string route_algorithm = "tdpp";
    int route_k = 3;
    double route_threshold = 0.5;
    std::uint64_t route_seed = 42;
    double route_mean = 0.80, route_std = 0.1;
    route->add_option("topology", route_topology, "topology file")->required();
    route->add_option("--pair", route_pairs, "source:destination (repeatable)")->required();
    route->add_option("--algorithm", route_algorithm, "tdpp|hop_baseline|greedy_baseline");
    route->add_option("--k", route_k, "candidate paths per pair");
    route->add_option("--threshold", route_threshold, "success fidelity threshold");
    route->add_option("--seed", route_seed, "seed for sampling unset edge fidelities");
    route->add_option("--mean-fidelity", route_mean, "mean for sampled fidelities");
    route->add_option("--fidelity-std", route_std, "spread for sampled fidelities");

    // experiment
    auto* experiment = app.add_subcommand("experiment", "run a capacity sweep, emit CSV");
    std::string exp_config, exp_out;
    experiment->add_option("--config", exp_config, "experiment config file");
    experiment->add_option("--out", exp_out, "write CSV here instead of standard output");
    std::string ov_seed, ov_trials, ov_capacity, ov_algorithm, ov_alpha, ov_beta, ov_threshold,
        ov_k, ov_threads, ov_topology;
    experiment->add_option("--seed", ov_seed, "override: root seed");
    experiment->add_option("--trials", ov_trials, "override: trials per point");
    experiment->add_option("--capacity", ov_capacity, "override: capacity list");
    experiment->add_option("--algorithm", ov_algorithm, "override: algorithm list");
    experiment->add_option("--alpha", ov_alpha, "override: amplitude alpha");
    experiment->add_option("--beta", ov_beta, "override: amplitude beta");
    experiment->add_option("--threshold", ov_threshold, "override: fidelity threshold");
    experiment->add_option("--k", ov_k, "override: candidate paths");
    experiment->add_option("--threads", ov_threads, "override: worker threads");
    experiment->add_option("--topology", ov_topology, "override: topology file");

    // validate
    auto* validate = app.add_subcommand("validate", "check a decision log against a topology");
    std::string val_topology, val_log;
    validate->add_option("topology", val_topology, "topology file")->required();
    validate->add_option("log", val_log, "decision log file")->required();

    // demo-fig3
    auto* demo_fig3 = app.add_subcommand("demo-fig3", "five-node purification walkthrough");
    double fig3_threshold = 0.5;
    demo_fig3->add_option("--threshold", fig3_threshold, "success fidelity threshold");

    // demo-pump
    auto* demo_pump = app.add_subcommand("demo-pump", "entanglement pumping trajectory");
    double pump_a = 0.528, pump_b = 0.548, pump_threshold = 0.80;
    int pump_rounds = 10;
    demo_pump->add_option("--a", pump_a, "first pair fidelity");
    demo_pump->add_option("--b", pump_b, "base pair fidelity");
    demo_pump->add_option("--threshold", pump_threshold, "target fidelity");
    demo_pump->add_option("--max-rounds", pump_rounds, "round budget");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    if (route->parsed())
        return cmd_route(route_topology, route_pairs, route_algorithm, route_k, route_threshold,
                         route_seed, route_mean, route_std, out, err);
    if (experiment->parsed()) {
        std::vector<std::pair<std::string, std::string>> overrides;
        auto add = [&overrides](const char* key, const std::string& value) {
            if (!value.empty()) overrides.push_back({key, value});
        };
        add("topology", ov_topology);
        add("seed", ov_seed);
        add("trials", ov_trials);
        add("capacity", ov_capacity);
        add("algorithm", ov_algorithm);
        add("alpha", ov_alpha);
        add("beta", ov_beta);
        add("threshold", ov_threshold);
        add("k", ov_k);
        add("threads", ov_threads);
        return cmd_experiment(exp_config, overrides, exp_out, out, err);
    }
    if (validate->parsed()) return cmd_validate(val_topology, val_log, out, err);
    if (demo_fig3->parsed()) return cmd_demo_fig3(fig3_threshold, out, err);
    if (demo_pump->parsed())
        return cmd_demo_pump(pump_a, pump_b, pump_threshold, pump_rounds, out, err);
    err << "error: no subcommand\n";
    return 1;
}

} // namespace tdpp
