#pragma once

#include "tdpp/network.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace tdpp {

enum class CostModel { hop_count, centrality_cost, neg_log_fidelity };

struct EdgeMetric {
    double fidelity = 0.0;
    double trace_distance = 0.0;
};

struct PathRecord {
    std::vector<std::string> nodes;          // source .. destination
    std::vector<EdgeKey> edges;              // canonical keys, traversal order
    double cost = 0.0;
    std::vector<EdgeMetric> edge_metrics;    // parallel to edges
};

struct PurificationDecision {
    EdgeKey edge;
    bool triggered = false;
    double d_max = 0.0;
    double f_sel_edge = 0.0;
    double f_purified = 0.0;
    int rounds = 0;
};

enum class FailureReason {
    none,
    no_path,
    capacity_exhausted,
    memory_exhausted,
    fidelity_below_threshold,
};

const char* failure_reason_name(FailureReason reason);
FailureReason failure_reason_from_name(const std::string& name);

struct RoutingOutcome {
    SdPair pair;
    std::optional<PathRecord> path;
    std::optional<PurificationDecision> decision;
    double e2e_fidelity = 0.0;
    bool success = false;
    FailureReason failure_reason = FailureReason::none;
    int slots_required = 1;
    // log-only predicate values for the chosen path's worst edge
    bool purify_rule_fired = false;    // max trace distance >= that edge's fidelity
    bool distance_bound_ok = false;    // F >= 1 - D/2 on that edge
};

enum class BaselineKind { hop_shortest_no_purification, greedy_max_fidelity };

/// Least-cost simple path, or nothing when disconnected. Cost ties break on
/// the lexicographically smallest node sequence.
///   hop_count:        number of edges
///   centrality_cost:  sum over path nodes of 1/C_v
///   neg_log_fidelity: sum over edges of -log(F), i.e. max-product-fidelity
std::optional<PathRecord> dijkstra_shortest_path(NetworkGraph& graph, const SdPair& pair,
                                                 CostModel cost_model);

/// Loopless K-shortest paths (spur-node enumeration over the Dijkstra core).
/// Non-decreasing costs, first entry equals the Dijkstra path, ties
/// lexicographic, no duplicates.
std::vector<PathRecord> yen_k_shortest_paths(NetworkGraph& graph, const SdPair& pair, int k,
                                             CostModel cost_model);

/// Purify when the state degradation measure has caught up with the edge
/// quality: D >= F.
bool purification_trigger(double fidelity, double trace_distance);

struct PathMaxima {
    double d_max = 0.0;
    double f_sel_edge = 0.0;
};

/// Largest edge trace distance and largest edge fidelity along a path.
PathMaxima path_maxima(const PathRecord& path);

/// Replaces the worst edge's metrics (the one attaining d_max) with the
/// square-root update, on the path copy only. The sqrt map is applied until
/// it no longer decreases the value, which takes a single round on [0,1].
PurificationDecision purify_selected_edge(PathRecord& path);

/// Full routing pass: centrality initialization, auxiliary-graph pruning of
/// unsalvageable edges, closeness-priority pair ordering, candidate paths,
/// per-path purification, multiplicative end-to-end fidelity and resource
/// accounting.
std::vector<RoutingOutcome> tdpp_route(NetworkGraph graph, const std::vector<SdPair>& pairs,
                                       int k, double fidelity_threshold);

/// Comparison routers: plain hop-count Dijkstra and greedy max-fidelity
/// Dijkstra, no purification in either.
std::vector<RoutingOutcome> baseline_route(NetworkGraph graph, const std::vector<SdPair>& pairs,
                                           BaselineKind kind, double fidelity_threshold);

/// One structured-text line per outcome; parse_decision_log reads them back.
std::string render_decision_log(const std::vector<RoutingOutcome>& outcomes);
std::vector<RoutingOutcome> parse_decision_log(const std::string& text);

} // namespace tdpp
