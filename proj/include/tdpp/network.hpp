#pragma once

#include "tdpp/quantum.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace tdpp {

struct RoutingOutcome;  // routing.hpp

struct NodeRecord {
    std::string id;
    int memory_total = 0;
    int memory_free = 0;
    double closeness = -1.0;  // negative while uncomputed
    bool closeness_overridden = false;
};

using EdgeKey = std::pair<std::string, std::string>;  // lexicographically ordered

struct EdgeRecord {
    EdgeKey endpoints;
    int capacity_total = 0;
    int capacity_free = 0;
    double fidelity = -1.0;        // negative while unset
    double trace_distance = -1.0;
    std::optional<DensityMatrix> rho;
    std::optional<DensityMatrix> sigma;

    bool attributes_set() const { return fidelity >= 0.0; }
};

/// Scalar coupling used whenever no explicit state pair is attached to an
/// edge: D = clamp(2 (1 - F), 0, 1).
double coupled_trace_distance(double fidelity);

/// Undirected simple graph with quantum edge attributes. Ordered containers
/// keep every traversal deterministic.
class NetworkGraph {
public:
    void add_node(const std::string& id, int memory_total);
    void add_edge(const std::string& u, const std::string& v, int capacity);

    bool has_node(const std::string& id) const { return nodes_.count(id) > 0; }
    bool has_edge(const std::string& u, const std::string& v) const;

    NodeRecord& node(const std::string& id);
    const NodeRecord& node(const std::string& id) const;
    EdgeRecord& edge(const std::string& u, const std::string& v);
    const EdgeRecord& edge(const std::string& u, const std::string& v) const;

    const std::vector<std::string>& neighbors(const std::string& id) const;

    size_t node_count() const { return nodes_.size(); }
    size_t edge_count() const { return edges_.size(); }

    std::vector<std::string> node_ids() const;
    const std::map<EdgeKey, EdgeRecord>& edges() const { return edges_; }
    std::map<EdgeKey, EdgeRecord>& edges() { return edges_; }

    /// Attach an explicit state pair; fidelity and trace distance are then
    /// derived from the matrices instead of the scalar coupling.
    void set_edge_states(const std::string& u, const std::string& v, DensityMatrix rho,
                         DensityMatrix sigma);

    void set_uniform_capacity(int capacity);
    void set_uniform_memory(int memory);
    void reset_free_resources();

private:
    std::map<std::string, NodeRecord> nodes_;
    std::map<EdgeKey, EdgeRecord> edges_;
    std::map<std::string, std::vector<std::string>> adjacency_;
};

struct SdPair {
    std::string source;
    std::string destination;
};

/// Hop-count closeness over the node's connected component; cached on the
/// node record. A closeness value loaded from a topology file wins over the
/// computed one.
double closeness_centrality(NetworkGraph& graph, const std::string& node);
void compute_all_closeness(NetworkGraph& graph);

/// Unweighted BFS distances from a start node; unreachable nodes are absent.
std::map<std::string, int> bfs_distances(const NetworkGraph& graph, const std::string& start);

// Topology documents: '#' starts a comment, then either
//   node <id> <memory_total> [closeness]
//   edge <id_u> <id_v> <capacity> [fidelity] [trace_distance]
NetworkGraph load_topology(std::istream& in);
NetworkGraph load_topology_file(const std::string& path);
NetworkGraph load_topology_text(const std::string& text);
std::string save_topology(const NetworkGraph& graph);

/// Draw Normal(mean, std) fidelities, clamped to [0.01, 1], for every edge
/// whose attributes are still unset; trace distance follows the coupling.
NetworkGraph sample_edge_attributes(NetworkGraph graph, double mean_fidelity, double std_dev,
                                    std::uint64_t rng_seed);

/// Connected Erdos-Renyi instance; resamples until connected (bounded).
NetworkGraph generate_random_graph(int n_nodes, double edge_probability, std::uint64_t rng_seed);

struct Violation {
    std::string label;   // 13b .. 13h
    std::string entity;  // node id, edge "u-v", or pair "s:d"
    std::string detail;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
    std::string to_text() const;
};

/// Checks routed outcomes against the graph's resource and consistency
/// constraints. Violations become report entries; unknown nodes or edges in
/// an outcome throw.
ValidationReport validate_flow_constraints(const NetworkGraph& graph,
                                           const std::vector<RoutingOutcome>& outcomes);

} // namespace tdpp
