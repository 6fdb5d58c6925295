#include "tdpp/routing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace tdpp {

namespace {

constexpr double kMinCostFidelity = 1e-12;  // floor for -log(F) edge costs

EdgeKey make_key(const std::string& u, const std::string& v) {
    return u < v ? EdgeKey{u, v} : EdgeKey{v, u};
}

struct Masks {
    const std::set<EdgeKey>* banned_edges = nullptr;
    const std::set<std::string>* banned_nodes = nullptr;

    bool edge_banned(const std::string& u, const std::string& v) const {
        return banned_edges && banned_edges->count(make_key(u, v));
    }
    bool node_banned(const std::string& id) const {
        return banned_nodes && banned_nodes->count(id);
    }
};

double inverse_closeness(NetworkGraph& graph, const std::string& id) {
    const double c = closeness_centrality(graph, id);
    if (c <= 0.0) return std::numeric_limits<double>::infinity();
    return 1.0 / c;
}

double edge_cost(NetworkGraph& graph, const std::string& from, const std::string& to,
                 CostModel model) {
    switch (model) {
        case CostModel::hop_count:
            return 1.0;
        case CostModel::centrality_cost:
            return inverse_closeness(graph, to);
        case CostModel::neg_log_fidelity: {
            const EdgeRecord& rec = graph.edge(from, to);
            if (!rec.attributes_set())
                throw std::invalid_argument("edge attributes required for fidelity-based costs");
            return -std::log(std::max(rec.fidelity, kMinCostFidelity));
        }
    }
    throw std::logic_error("unreachable cost model");
}

double start_cost(NetworkGraph& graph, const std::string& source, CostModel model) {
    return model == CostModel::centrality_cost ? inverse_closeness(graph, source) : 0.0;
}

// Front-to-back accumulation; Dijkstra relaxations add terms in the same
// order, so identical paths always yield bitwise-identical costs.
double path_cost(NetworkGraph& graph, const std::vector<std::string>& nodes, CostModel model) {
    double cost = start_cost(graph, nodes.front(), model);
    for (size_t i = 1; i < nodes.size(); ++i)
        cost += edge_cost(graph, nodes[i - 1], nodes[i], model);
    return cost;
}

// Least-cost path with deterministic ties: on equal cost the
// lexicographically smaller node sequence wins.
std::optional<std::vector<std::string>> dijkstra_nodes(NetworkGraph& graph,
                                                       const std::string& source,
                                                       const std::string& target, CostModel model,
                                                       const Masks& masks) {
    using Entry = std::pair<double, std::vector<std::string>>;
    if (masks.node_banned(source) || masks.node_banned(target)) return std::nullopt;

    const double init = start_cost(graph, source, model);
    if (std::isinf(init)) return std::nullopt;

    std::map<std::string, Entry> best;
    std::set<Entry> queue;
    best[source] = {init, {source}};
    queue.insert(best[source]);

    while (!queue.empty()) {
        const Entry current = *queue.begin();
        queue.erase(queue.begin());
        const std::string& node = current.second.back();
        if (best[node] != current) continue;  // stale
        if (node == target) return current.second;

        for (const std::string& next : graph.neighbors(node)) {
            if (masks.node_banned(next) || masks.edge_banned(node, next)) continue;
            if (std::find(current.second.begin(), current.second.end(), next) !=
                current.second.end())
                continue;
            const double cand_cost = current.first + edge_cost(graph, node, next, model);
            if (std::isinf(cand_cost)) continue;
            std::vector<std::string> cand_path = current.second;
            cand_path.push_back(next);

            auto it = best.find(next);
            const bool better =
                it == best.end() || cand_cost < it->second.first ||
                (cand_cost == it->second.first && cand_path < it->second.second);
            if (better) {
                best[next] = {cand_cost, std::move(cand_path)};
                queue.insert(best[next]);
            }
        }
    }
    return std::nullopt;
}

PathRecord to_record(NetworkGraph& graph, std::vector<std::string> nodes, CostModel model) {
    PathRecord rec;
    rec.cost = path_cost(graph, nodes, model);
    for (size_t i = 1; i < nodes.size(); ++i) {
        const EdgeRecord& e = graph.edge(nodes[i - 1], nodes[i]);
        rec.edges.push_back(e.endpoints);
        rec.edge_metrics.push_back({e.fidelity, e.trace_distance});
    }
    rec.nodes = std::move(nodes);
    return rec;
}

std::vector<PathRecord> yen_impl(NetworkGraph& graph, const SdPair& pair, int k, CostModel model,
                                 const std::set<EdgeKey>* base_banned_edges) {
    std::vector<std::vector<std::string>> accepted;
    Masks base_masks{base_banned_edges, nullptr};

    auto first = dijkstra_nodes(graph, pair.source, pair.destination, model, base_masks);
    if (!first) return {};
    accepted.push_back(std::move(*first));

    // candidates ordered by (cost, node sequence)
    std::set<std::pair<double, std::vector<std::string>>> candidates;

    while (static_cast<int>(accepted.size()) < k) {
        const std::vector<std::string> previous = accepted.back();
        for (size_t j = 0; j + 1 < previous.size(); ++j) {
            const std::string& spur_node = previous[j];
            const std::vector<std::string> root(previous.begin(),
                                                previous.begin() + static_cast<long>(j) + 1);

            std::set<EdgeKey> banned_edges;
            if (base_banned_edges) banned_edges = *base_banned_edges;
            for (const std::vector<std::string>& path : accepted) {
                if (path.size() > j + 1 && std::equal(root.begin(), root.end(), path.begin()))
                    banned_edges.insert(make_key(path[j], path[j + 1]));
            }
            std::set<std::string> banned_nodes(root.begin(), root.end());
            banned_nodes.erase(spur_node);

            Masks masks{&banned_edges, &banned_nodes};
            auto spur = dijkstra_nodes(graph, spur_node, pair.destination, model, masks);
            if (!spur) continue;

            std::vector<std::string> candidate(root.begin(), root.end() - 1);
            candidate.insert(candidate.end(), spur->begin(), spur->end());
            if (std::find(accepted.begin(), accepted.end(), candidate) != accepted.end())
                continue;
            candidates.insert({path_cost(graph, candidate, model), std::move(candidate)});
        }
        if (candidates.empty()) break;
        accepted.push_back(candidates.begin()->second);
        candidates.erase(candidates.begin());
    }

    std::vector<PathRecord> out;
    out.reserve(accepted.size());
    for (std::vector<std::string>& nodes : accepted)
        out.push_back(to_record(graph, std::move(nodes), model));
    return out;
}

void validate_pair(const NetworkGraph& graph, const SdPair& pair) {
    if (!graph.has_node(pair.source))
        throw std::invalid_argument("unknown node '" + pair.source + "'");
    if (!graph.has_node(pair.destination))
        throw std::invalid_argument("unknown node '" + pair.destination + "'");
    if (pair.source == pair.destination)
        throw std::invalid_argument("pair source and destination must differ");
}

void require_edge_attributes(const NetworkGraph& graph) {
    for (const auto& [key, rec] : graph.edges())
        if (!rec.attributes_set())
            throw std::invalid_argument("edge " + key.first + "-" + key.second +
                                        " has no fidelity; sample or load attributes first");
}

size_t worst_edge_index(const PathRecord& path) {
    size_t worst = 0;
    for (size_t i = 1; i < path.edge_metrics.size(); ++i)
        if (path.edge_metrics[i].trace_distance > path.edge_metrics[worst].trace_distance)
            worst = i;
    return worst;
}

double product_fidelity(const PathRecord& path) {
    double f = 1.0;
    for (const EdgeMetric& m : path.edge_metrics) f *= m.fidelity;
    return f;
}

bool path_has_free_resources(const NetworkGraph& graph, const PathRecord& path) {
    for (const EdgeKey& key : path.edges)
        if (graph.edge(key.first, key.second).capacity_free < 1) return false;
    for (const std::string& id : path.nodes)
        if (graph.node(id).memory_free < 1) return false;
    return true;
}

FailureReason blocking_reason(const NetworkGraph& graph, const PathRecord& path) {
    for (const EdgeKey& key : path.edges)
        if (graph.edge(key.first, key.second).capacity_free < 1)
            return FailureReason::capacity_exhausted;
    return FailureReason::memory_exhausted;
}

void consume_resources(NetworkGraph& graph, const PathRecord& path) {
    for (const EdgeKey& key : path.edges) graph.edge(key.first, key.second).capacity_free -= 1;
    for (const std::string& id : path.nodes) graph.node(id).memory_free -= 1;
}

RoutingOutcome finish_outcome(NetworkGraph& graph, const SdPair& pair, PathRecord path,
                              bool allow_purification, double threshold) {
    RoutingOutcome outcome;
    outcome.pair = pair;

    const PathMaxima maxima = path_maxima(path);
    const size_t worst = worst_edge_index(path);
    const EdgeMetric worst_metric = path.edge_metrics[worst];
    for (const EdgeMetric& m : path.edge_metrics)
        if (purification_trigger(m.fidelity, m.trace_distance)) outcome.purify_rule_fired = true;
    outcome.distance_bound_ok = worst_metric.fidelity >= 1.0 - 0.5 * worst_metric.trace_distance;

    if (allow_purification && outcome.purify_rule_fired) {
        outcome.decision = purify_selected_edge(path);
        // report the pre-purification maxima
        outcome.decision->d_max = maxima.d_max;
        outcome.decision->f_sel_edge = maxima.f_sel_edge;
    }

    outcome.e2e_fidelity = product_fidelity(path);
    if (outcome.e2e_fidelity >= threshold) {
        outcome.success = true;
        outcome.failure_reason = FailureReason::none;
        consume_resources(graph, path);
    } else {
        outcome.success = false;
        outcome.failure_reason = FailureReason::fidelity_below_threshold;
    }
    outcome.path = std::move(path);
    return outcome;
}

} // namespace

const char* failure_reason_name(FailureReason reason) {
    switch (reason) {
        case FailureReason::none: return "success";
        case FailureReason::no_path: return "no_path";
        case FailureReason::capacity_exhausted: return "capacity_exhausted";
        case FailureReason::memory_exhausted: return "memory_exhausted";
        case FailureReason::fidelity_below_threshold: return "fidelity_below_threshold";
    }
    throw std::logic_error("unreachable failure reason");
}

FailureReason failure_reason_from_name(const std::string& name) {
    if (name == "success") return FailureReason::none;
    if (name == "no_path") return FailureReason::no_path;
    if (name == "capacity_exhausted") return FailureReason::capacity_exhausted;
    if (name == "memory_exhausted") return FailureReason::memory_exhausted;
    if (name == "fidelity_below_threshold") return FailureReason::fidelity_below_threshold;
    throw std::runtime_error("unknown status '" + name + "'");
}

std::optional<PathRecord> dijkstra_shortest_path(NetworkGraph& graph, const SdPair& pair,
                                                 CostModel cost_model) {
    validate_pair(graph, pair);
    auto nodes = dijkstra_nodes(graph, pair.source, pair.destination, cost_model, Masks{});
    if (!nodes) return std::nullopt;
    return to_record(graph, std::move(*nodes), cost_model);
}

std::vector<PathRecord> yen_k_shortest_paths(NetworkGraph& graph, const SdPair& pair, int k,
                                             CostModel cost_model) {
    validate_pair(graph, pair);
    if (k < 1) throw std::invalid_argument("k must be positive");
    return yen_impl(graph, pair, k, cost_model, nullptr);
}

bool purification_trigger(double fidelity, double trace_distance) {
    if (!(fidelity >= 0.0 && fidelity <= 1.0) ||
        !(trace_distance >= 0.0 && trace_distance <= 1.0))
        throw std::invalid_argument("trigger inputs must lie in [0,1]");
    return trace_distance >= fidelity;
}

PathMaxima path_maxima(const PathRecord& path) {
    if (path.edge_metrics.empty()) throw std::invalid_argument("empty path");
    PathMaxima maxima{0.0, 0.0};
    for (const EdgeMetric& m : path.edge_metrics) {
        maxima.d_max = std::max(maxima.d_max, m.trace_distance);
        maxima.f_sel_edge = std::max(maxima.f_sel_edge, m.fidelity);
    }
    return maxima;
}

PurificationDecision purify_selected_edge(PathRecord& path) {
    if (path.edge_metrics.empty()) throw std::invalid_argument("empty path");
    const PathMaxima maxima = path_maxima(path);
    const size_t worst = worst_edge_index(path);

    PurificationDecision decision;
    decision.edge = path.edges[worst];
    decision.triggered = true;
    decision.d_max = maxima.d_max;
    decision.f_sel_edge = maxima.f_sel_edge;

    // sqrt never drops below its argument on [0,1], so a single round
    // settles the do-while update
    double purified = 0.0;
    do {
        purified = std::sqrt(maxima.f_sel_edge);
        ++decision.rounds;
    } while (purified < maxima.f_sel_edge && decision.rounds < 8);
    decision.f_purified = purified;

    path.edge_metrics[worst].fidelity = purified;
    path.edge_metrics[worst].trace_distance = coupled_trace_distance(purified);
    return decision;
}

std::vector<RoutingOutcome> tdpp_route(NetworkGraph graph, const std::vector<SdPair>& pairs,
                                       int k, double fidelity_threshold) {
    if (k < 1) throw std::invalid_argument("k must be positive");
    if (!(fidelity_threshold > 0.0 && fidelity_threshold <= 1.0))
        throw std::invalid_argument("fidelity threshold must lie in (0,1]");
    for (const SdPair& pair : pairs) validate_pair(graph, pair);
    require_edge_attributes(graph);
    compute_all_closeness(graph);

    // auxiliary graph: drop edges that would still trip the trigger even
    // after a square-root purification, under the scalar coupling
    std::set<EdgeKey> excluded;
    for (const auto& [key, rec] : graph.edges()) {
        const double purified = std::sqrt(rec.fidelity);
        if (coupled_trace_distance(purified) >= purified) excluded.insert(key);
    }

    // serve pairs in descending order of their best endpoint closeness
    std::vector<size_t> order(pairs.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> priority(pairs.size());
    for (size_t i = 0; i < pairs.size(); ++i)
        priority[i] = std::max(closeness_centrality(graph, pairs[i].source),
                               closeness_centrality(graph, pairs[i].destination));
    std::stable_sort(order.begin(), order.end(),
                     [&priority](size_t a, size_t b) { return priority[a] > priority[b]; });

    std::vector<RoutingOutcome> outcomes(pairs.size());
    for (size_t index : order) {
        const SdPair& pair = pairs[index];
        const std::vector<PathRecord> candidates =
            yen_impl(graph, pair, k, CostModel::centrality_cost, &excluded);

        if (candidates.empty()) {
            outcomes[index].pair = pair;
            outcomes[index].failure_reason = FailureReason::no_path;
            continue;
        }

        const PathRecord* usable = nullptr;
        for (const PathRecord& candidate : candidates) {
            if (path_has_free_resources(graph, candidate)) {
                usable = &candidate;
                break;
            }
        }
        if (!usable) {
            outcomes[index].pair = pair;
            outcomes[index].failure_reason = blocking_reason(graph, candidates.front());
            continue;
        }
        outcomes[index] = finish_outcome(graph, pair, *usable, true, fidelity_threshold);
    }
    return outcomes;
}

std::vector<RoutingOutcome> baseline_route(NetworkGraph graph, const std::vector<SdPair>& pairs,
                                           BaselineKind kind, double fidelity_threshold) {
    if (!(fidelity_threshold > 0.0 && fidelity_threshold <= 1.0))
        throw std::invalid_argument("fidelity threshold must lie in (0,1]");
    for (const SdPair& pair : pairs) validate_pair(graph, pair);
    require_edge_attributes(graph);

    const CostModel model = (kind == BaselineKind::hop_shortest_no_purification)
                                ? CostModel::hop_count
                                : CostModel::neg_log_fidelity;

    std::vector<RoutingOutcome> outcomes;
    outcomes.reserve(pairs.size());
    for (const SdPair& pair : pairs) {
        auto nodes = dijkstra_nodes(graph, pair.source, pair.destination, model, Masks{});
        RoutingOutcome outcome;
        outcome.pair = pair;
        if (!nodes) {
            outcome.failure_reason = FailureReason::no_path;
            outcomes.push_back(std::move(outcome));
            continue;
        }
        PathRecord path = to_record(graph, std::move(*nodes), model);
        if (!path_has_free_resources(graph, path)) {
            outcome.failure_reason = blocking_reason(graph, path);
            outcomes.push_back(std::move(outcome));
            continue;
        }
        outcomes.push_back(
            finish_outcome(graph, pair, std::move(path), false, fidelity_threshold));
    }
    return outcomes;
}

// --- decision log -------------------------------------------------------------

namespace {

std::string format_real(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", value);
    return buf;
}

std::string join_nodes(const std::vector<std::string>& nodes) {
    std::string out;
    for (size_t i = 0; i < nodes.size(); ++i) {
        if (i) out += ",";
        out += nodes[i];
    }
    return out;
}

std::pair<std::string, std::string> split_kv(const std::string& token, int line_no) {
    const size_t eq = token.find('=');
    if (eq == std::string::npos)
        throw std::runtime_error("line " + std::to_string(line_no) +
                                 ": expected key=value, got '" + token + "'");
    return {token.substr(0, eq), token.substr(eq + 1)};
}

std::vector<std::string> split_on(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string current;
    for (char c : text) {
        if (c == sep) {
            parts.push_back(current);
            current.clear();
        } else {
            current += c;
        }
    }
    parts.push_back(current);
    return parts;
}

} // namespace

std::string render_decision_log(const std::vector<RoutingOutcome>& outcomes) {
    std::ostringstream out;
    for (const RoutingOutcome& o : outcomes) {
        out << "pair=" << o.pair.source << ":" << o.pair.destination;
        out << " path=" << (o.path ? join_nodes(o.path->nodes) : "none");
        if (o.path) {
            const PathMaxima maxima =
                o.decision ? PathMaxima{o.decision->d_max, o.decision->f_sel_edge}
                           : path_maxima(*o.path);
            out << " dmax=" << format_real(maxima.d_max);
            out << " fsel=" << format_real(maxima.f_sel_edge);
        } else {
            out << " dmax=na fsel=na";
        }
        if (o.decision) {
            out << " pedge=" << o.decision->edge.first << ":" << o.decision->edge.second;
            out << " fpur=" << format_real(o.decision->f_purified);
        } else {
            out << " pedge=none fpur=na";
        }
        out << " purify=" << (o.purify_rule_fired ? "yes" : "no");
        out << " bound=" << (o.distance_bound_ok ? "yes" : "no");
        out << " e2e=" << format_real(o.e2e_fidelity);
        out << " status=" << (o.success ? "success" : failure_reason_name(o.failure_reason));
        out << "\n";
    }
    return out.str();
}

std::vector<RoutingOutcome> parse_decision_log(const std::string& text) {
    std::vector<RoutingOutcome> outcomes;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream tokens(line);
        std::string token;
        RoutingOutcome outcome;
        std::string path_text = "none", pedge_text = "none", fpur_text = "na";
        std::string dmax_text = "na", fsel_text = "na";
        bool saw_pair = false, saw_status = false;
        while (tokens >> token) {
            auto [key, value] = split_kv(token, line_no);
            if (key == "pair") {
                const auto parts = split_on(value, ':');
                if (parts.size() != 2)
                    throw std::runtime_error("line " + std::to_string(line_no) + ": bad pair");
                outcome.pair = {parts[0], parts[1]};
                saw_pair = true;
            } else if (key == "path") {
                path_text = value;
            } else if (key == "dmax") {
                dmax_text = value;
            } else if (key == "fsel") {
                fsel_text = value;
            } else if (key == "pedge") {
                pedge_text = value;
            } else if (key == "fpur") {
                fpur_text = value;
            } else if (key == "purify") {
                outcome.purify_rule_fired = (value == "yes");
            } else if (key == "bound") {
                outcome.distance_bound_ok = (value == "yes");
            } else if (key == "e2e") {
                outcome.e2e_fidelity = std::stod(value);
            } else if (key == "status") {
                const FailureReason reason = failure_reason_from_name(value);
                outcome.success = (reason == FailureReason::none);
                outcome.failure_reason = reason;
                saw_status = true;
            } else {
                throw std::runtime_error("line " + std::to_string(line_no) + ": unknown key '" +
                                         key + "'");
            }
        }
        if (!saw_pair || !saw_status)
            throw std::runtime_error("line " + std::to_string(line_no) +
                                     ": missing pair or status");
        if (path_text != "none") {
            PathRecord path;
            path.nodes = split_on(path_text, ',');
            for (size_t i = 1; i < path.nodes.size(); ++i)
                path.edges.push_back(make_key(path.nodes[i - 1], path.nodes[i]));
            outcome.path = std::move(path);
        }
        if (pedge_text != "none") {
            const auto parts = split_on(pedge_text, ':');
            if (parts.size() != 2)
                throw std::runtime_error("line " + std::to_string(line_no) + ": bad pedge");
            PurificationDecision decision;
            decision.edge = make_key(parts[0], parts[1]);
            decision.triggered = true;
            decision.rounds = 1;
            if (fpur_text != "na") decision.f_purified = std::stod(fpur_text);
            if (fsel_text != "na") decision.f_sel_edge = std::stod(fsel_text);
            if (dmax_text != "na") decision.d_max = std::stod(dmax_text);
            outcome.decision = std::move(decision);
        }
        outcomes.push_back(std::move(outcome));
    }
    return outcomes;
}

} // namespace tdpp
