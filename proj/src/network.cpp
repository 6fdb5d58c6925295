#include "tdpp/network.hpp"

#include "tdpp/rng.hpp"
#include "tdpp/routing.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tdpp {

double coupled_trace_distance(double fidelity) {
    return std::clamp(2.0 * (1.0 - fidelity), 0.0, 1.0);
}

namespace {

EdgeKey make_key(const std::string& u, const std::string& v) {
    return u < v ? EdgeKey{u, v} : EdgeKey{v, u};
}

std::string edge_name(const EdgeKey& key) { return key.first + "-" + key.second; }

} // namespace

void NetworkGraph::add_node(const std::string& id, int memory_total) {
    if (id.empty()) throw std::invalid_argument("node id must not be empty");
    if (memory_total < 0) throw std::invalid_argument("memory must be non-negative");
    if (nodes_.count(id)) throw std::invalid_argument("duplicate node '" + id + "'");
    NodeRecord rec;
    rec.id = id;
    rec.memory_total = memory_total;
    rec.memory_free = memory_total;
    nodes_.emplace(id, std::move(rec));
    adjacency_.emplace(id, std::vector<std::string>{});
}

void NetworkGraph::add_edge(const std::string& u, const std::string& v, int capacity) {
    if (u == v) throw std::invalid_argument("self-loop on node '" + u + "'");
    if (!nodes_.count(u)) throw std::invalid_argument("unknown endpoint '" + u + "'");
    if (!nodes_.count(v)) throw std::invalid_argument("unknown endpoint '" + v + "'");
    if (capacity < 0) throw std::invalid_argument("capacity must be non-negative");
    const EdgeKey key = make_key(u, v);
    if (edges_.count(key)) throw std::invalid_argument("duplicate edge '" + edge_name(key) + "'");
    EdgeRecord rec;
    rec.endpoints = key;
    rec.capacity_total = capacity;
    rec.capacity_free = capacity;
    edges_.emplace(key, std::move(rec));
    auto insert_sorted = [](std::vector<std::string>& list, const std::string& id) {
        list.insert(std::lower_bound(list.begin(), list.end(), id), id);
    };
    insert_sorted(adjacency_[u], v);
    insert_sorted(adjacency_[v], u);
    // topology changed, computed closeness values are stale
    for (auto& [id, node] : nodes_)
        if (!node.closeness_overridden) node.closeness = -1.0;
}

bool NetworkGraph::has_edge(const std::string& u, const std::string& v) const {
    return edges_.count(make_key(u, v)) > 0;
}

NodeRecord& NetworkGraph::node(const std::string& id) {
    auto it = nodes_.find(id);
    if (it == nodes_.end()) throw std::invalid_argument("unknown node '" + id + "'");
    return it->second;
}

const NodeRecord& NetworkGraph::node(const std::string& id) const {
    auto it = nodes_.find(id);
    if (it == nodes_.end()) throw std::invalid_argument("unknown node '" + id + "'");
    return it->second;
}

EdgeRecord& NetworkGraph::edge(const std::string& u, const std::string& v) {
    auto it = edges_.find(make_key(u, v));
    if (it == edges_.end())
        throw std::invalid_argument("unknown edge '" + edge_name(make_key(u, v)) + "'");
    return it->second;
}

const EdgeRecord& NetworkGraph::edge(const std::string& u, const std::string& v) const {
    auto it = edges_.find(make_key(u, v));
    if (it == edges_.end())
        throw std::invalid_argument("unknown edge '" + edge_name(make_key(u, v)) + "'");
    return it->second;
}

const std::vector<std::string>& NetworkGraph::neighbors(const std::string& id) const {
    auto it = adjacency_.find(id);
    if (it == adjacency_.end()) throw std::invalid_argument("unknown node '" + id + "'");
    return it->second;
}

std::vector<std::string> NetworkGraph::node_ids() const {
    std::vector<std::string> ids;
    ids.reserve(nodes_.size());
    for (const auto& [id, rec] : nodes_) ids.push_back(id);
    return ids;
}

void NetworkGraph::set_edge_states(const std::string& u, const std::string& v, DensityMatrix rho,
                                   DensityMatrix sigma) {
    EdgeRecord& rec = edge(u, v);
    rec.fidelity = fidelity_product_form(rho, sigma);
    rec.trace_distance = trace_distance(rho, sigma);
    rec.rho = std::move(rho);
    rec.sigma = std::move(sigma);
}

void NetworkGraph::set_uniform_capacity(int capacity) {
    if (capacity < 0) throw std::invalid_argument("capacity must be non-negative");
    for (auto& [key, rec] : edges_) {
        rec.capacity_total = capacity;
        rec.capacity_free = capacity;
    }
}

void NetworkGraph::set_uniform_memory(int memory) {
    if (memory < 0) throw std::invalid_argument("memory must be non-negative");
    for (auto& [id, rec] : nodes_) {
        rec.memory_total = memory;
        rec.memory_free = memory;
    }
}

void NetworkGraph::reset_free_resources() {
    for (auto& [key, rec] : edges_) rec.capacity_free = rec.capacity_total;
    for (auto& [id, rec] : nodes_) rec.memory_free = rec.memory_total;
}

// --- centrality -----------------------------------------------------------

std::map<std::string, int> bfs_distances(const NetworkGraph& graph, const std::string& start) {
    std::map<std::string, int> dist;
    dist[start] = 0;
    std::deque<std::string> frontier{start};
    while (!frontier.empty()) {
        const std::string current = frontier.front();
        frontier.pop_front();
        const int d = dist[current];
        for (const std::string& next : graph.neighbors(current)) {
            if (dist.count(next)) continue;
            dist[next] = d + 1;
            frontier.push_back(next);
        }
    }
    return dist;
}

double closeness_centrality(NetworkGraph& graph, const std::string& node_id) {
    NodeRecord& rec = graph.node(node_id);
    if (rec.closeness >= 0.0) return rec.closeness;

    const std::map<std::string, int> dist = bfs_distances(graph, node_id);
    // component-relative form: N is the component size, unreachable nodes
    // simply do not participate
    long sum = 0;
    for (const auto& [id, d] : dist) sum += d;
    rec.closeness = (sum > 0) ? static_cast<double>(dist.size() - 1) / static_cast<double>(sum)
                              : 0.0;
    return rec.closeness;
}

void compute_all_closeness(NetworkGraph& graph) {
    for (const std::string& id : graph.node_ids()) closeness_centrality(graph, id);
}

// --- topology documents -----------------------------------------------------

namespace {

[[noreturn]] void parse_fail(int line_no, const std::string& message) {
    throw std::runtime_error("line " + std::to_string(line_no) + ": " + message);
}

double parse_real(const std::string& token, int line_no, const char* what, double lo, double hi) {
    size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(token, &used);
    } catch (const std::exception&) {
        parse_fail(line_no, std::string("malformed ") + what + " '" + token + "'");
    }
    if (used != token.size())
        parse_fail(line_no, std::string("malformed ") + what + " '" + token + "'");
    if (value < lo || value > hi)
        parse_fail(line_no, std::string(what) + " " + token + " out of range");
    return value;
}

int parse_int(const std::string& token, int line_no, const char* what) {
    size_t used = 0;
    int value = 0;
    try {
        value = std::stoi(token, &used);
    } catch (const std::exception&) {
        parse_fail(line_no, std::string("malformed ") + what + " '" + token + "'");
    }
    if (used != token.size())
        parse_fail(line_no, std::string("malformed ") + what + " '" + token + "'");
    if (value < 0) parse_fail(line_no, std::string(what) + " must be non-negative");
    return value;
}

} // namespace

NetworkGraph load_topology(std::istream& in) {
    NetworkGraph graph;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream tokens(line);
        std::vector<std::string> parts;
        std::string token;
        while (tokens >> token) parts.push_back(token);
        if (parts.empty()) continue;

        try {
            if (parts[0] == "node") {
                if (parts.size() < 3 || parts.size() > 4)
                    parse_fail(line_no, "node line needs: node <id> <memory> [closeness]");
                graph.add_node(parts[1], parse_int(parts[2], line_no, "memory"));
                if (parts.size() == 4) {
                    NodeRecord& rec = graph.node(parts[1]);
                    rec.closeness = parse_real(parts[3], line_no, "closeness", 0.0, 1e9);
                    rec.closeness_overridden = true;
                }
            } else if (parts[0] == "edge") {
                if (parts.size() < 4 || parts.size() > 6)
                    parse_fail(
                        line_no,
                        "edge line needs: edge <u> <v> <capacity> [fidelity] [trace_distance]");
                graph.add_edge(parts[1], parts[2], parse_int(parts[3], line_no, "capacity"));
                EdgeRecord& rec = graph.edge(parts[1], parts[2]);
                if (parts.size() >= 5) {
                    rec.fidelity = parse_real(parts[4], line_no, "fidelity", 0.0, 1.0);
                    rec.trace_distance =
                        (parts.size() == 6)
                            ? parse_real(parts[5], line_no, "trace_distance", 0.0, 1.0)
                            : coupled_trace_distance(rec.fidelity);
                }
            } else {
                parse_fail(line_no, "unknown directive '" + parts[0] + "'");
            }
        } catch (const std::invalid_argument& e) {
            parse_fail(line_no, e.what());
        }
    }
    return graph;
}

NetworkGraph load_topology_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open topology file '" + path + "'");
    return load_topology(in);
}

NetworkGraph load_topology_text(const std::string& text) {
    std::istringstream in(text);
    return load_topology(in);
}

std::string save_topology(const NetworkGraph& graph) {
    std::ostringstream out;
    char buf[160];
    for (const std::string& id : graph.node_ids()) {
        const NodeRecord& rec = graph.node(id);
        if (rec.closeness_overridden) {
            std::snprintf(buf, sizeof buf, "node %s %d %.10g\n", id.c_str(), rec.memory_total,
                          rec.closeness);
        } else {
            std::snprintf(buf, sizeof buf, "node %s %d\n", id.c_str(), rec.memory_total);
        }
        out << buf;
    }
    for (const auto& [key, rec] : graph.edges()) {
        if (rec.attributes_set()) {
            std::snprintf(buf, sizeof buf, "edge %s %s %d %.10g %.10g\n", key.first.c_str(),
                          key.second.c_str(), rec.capacity_total, rec.fidelity,
                          rec.trace_distance);
        } else {
            std::snprintf(buf, sizeof buf, "edge %s %s %d\n", key.first.c_str(),
                          key.second.c_str(), rec.capacity_total);
        }
        out << buf;
    }
    return out.str();
}

// --- sampling ----------------------------------------------------------------

NetworkGraph sample_edge_attributes(NetworkGraph graph, double mean_fidelity, double std_dev,
                                    std::uint64_t rng_seed) {
    if (!(mean_fidelity > 0.0 && mean_fidelity <= 1.0))
        throw std::invalid_argument("mean fidelity must lie in (0,1]");
    if (std_dev < 0.0) throw std::invalid_argument("standard deviation must be non-negative");
    Rng rng(rng_seed);
    for (auto& [key, rec] : graph.edges()) {
        if (rec.attributes_set()) continue;
        rec.fidelity = std::clamp(rng.normal(mean_fidelity, std_dev), 0.01, 1.0);
        rec.trace_distance = coupled_trace_distance(rec.fidelity);
    }
    return graph;
}

NetworkGraph generate_random_graph(int n_nodes, double edge_probability, std::uint64_t rng_seed) {
    if (n_nodes < 2) throw std::invalid_argument("need at least two nodes");
    if (!(edge_probability > 0.0 && edge_probability <= 1.0))
        throw std::invalid_argument("edge probability must lie in (0,1]");

    Rng rng(rng_seed);
    constexpr int kDefaultMemory = 8;
    constexpr int kDefaultCapacity = 4;
    constexpr int kMaxRetries = 1000;

    for (int attempt = 0; attempt < kMaxRetries; ++attempt) {
        NetworkGraph graph;
        for (int i = 0; i < n_nodes; ++i) {
            char id[16];
            std::snprintf(id, sizeof id, "n%03d", i);
            graph.add_node(id, kDefaultMemory);
        }
        const std::vector<std::string> ids = graph.node_ids();
        for (size_t i = 0; i < ids.size(); ++i)
            for (size_t j = i + 1; j < ids.size(); ++j)
                if (rng.uniform() < edge_probability)
                    graph.add_edge(ids[i], ids[j], kDefaultCapacity);
        if (bfs_distances(graph, ids.front()).size() == ids.size()) return graph;
    }
    throw std::runtime_error("failed to generate a connected graph in 1000 attempts");
}

// --- constraint validation ------------------------------------------------------

std::string ValidationReport::to_text() const {
    std::ostringstream out;
    for (const Violation& v : violations)
        out << "CONSTRAINT " << v.label << " AT " << v.entity << ": " << v.detail << "\n";
    return out.str();
}

ValidationReport validate_flow_constraints(const NetworkGraph& graph,
                                           const std::vector<RoutingOutcome>& outcomes) {
    ValidationReport report;
    std::map<EdgeKey, int> edge_use;
    std::map<std::string, int> node_use;

    for (const RoutingOutcome& outcome : outcomes) {
        const std::string pair_name = outcome.pair.source + ":" + outcome.pair.destination;
        if (!graph.has_node(outcome.pair.source))
            throw std::invalid_argument("unknown node '" + outcome.pair.source + "'");
        if (!graph.has_node(outcome.pair.destination))
            throw std::invalid_argument("unknown node '" + outcome.pair.destination + "'");

        if (outcome.path) {
            const std::vector<std::string>& nodes = outcome.path->nodes;
            for (const std::string& id : nodes)
                if (!graph.has_node(id)) throw std::invalid_argument("unknown node '" + id + "'");
            for (size_t i = 0; i + 1 < nodes.size(); ++i)
                if (!graph.has_edge(nodes[i], nodes[i + 1]))
                    throw std::invalid_argument("unknown edge '" + nodes[i] + "-" +
                                                nodes[i + 1] + "'");

            if (nodes.empty() || nodes.front() != outcome.pair.source)
                report.violations.push_back(
                    {"13d", pair_name, "path does not start at the source node"});
            if (nodes.empty() || nodes.back() != outcome.pair.destination)
                report.violations.push_back(
                    {"13e", pair_name, "path does not end at the destination node"});
            std::map<std::string, int> seen;
            for (const std::string& id : nodes)
                if (++seen[id] == 2)
                    report.violations.push_back(
                        {"13f", id, "node revisited on path for pair " + pair_name});

            for (size_t i = 0; i + 1 < nodes.size(); ++i) {
                const EdgeRecord& rec = graph.edge(nodes[i], nodes[i + 1]);
                if (rec.capacity_total < 1)
                    report.violations.push_back(
                        {"13b", edge_name(rec.endpoints), "edge has no channel capacity"});
            }
            for (const std::string& id : nodes)
                if (graph.node(id).memory_total < 1)
                    report.violations.push_back({"13c", id, "node has no quantum memory"});

            if (outcome.success) {
                for (size_t i = 0; i + 1 < nodes.size(); ++i)
                    edge_use[make_key(nodes[i], nodes[i + 1])] += 1;
                for (const std::string& id : nodes) node_use[id] += 1;
            }
        }

        if (outcome.decision && outcome.decision->triggered) {
            if (outcome.decision->f_purified + 1e-12 < outcome.decision->f_sel_edge)
                report.violations.push_back(
                    {"13h", edge_name(outcome.decision->edge),
                     "purified fidelity fell below the pre-purification value"});
        }
    }

    for (const auto& [key, used] : edge_use) {
        const EdgeRecord& rec = graph.edge(key.first, key.second);
        if (used > rec.capacity_total)
            report.violations.push_back({"13g", edge_name(key),
                                         "edge used " + std::to_string(used) +
                                             " times with capacity " +
                                             std::to_string(rec.capacity_total)});
    }
    for (const auto& [id, used] : node_use) {
        const NodeRecord& rec = graph.node(id);
        if (used > rec.memory_total)
            report.violations.push_back({"13c", id,
                                         "node used by " + std::to_string(used) +
                                             " paths with memory " +
                                             std::to_string(rec.memory_total)});
    }
    return report;
}

} // namespace tdpp
