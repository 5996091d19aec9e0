#pragma once

#include "swarm/motion.hpp"

#include <random>
#include <string>
#include <vector>

namespace swarm {

// Static undirected sensor network. Adjacency is kept as sorted neighbor
// lists; all generators return connected graphs.
struct SensorNetwork {
    int n = 0;
    std::vector<std::vector<int>> adj;  // sorted, symmetric, no self-loops
    std::vector<Vec2> positions;

    const std::vector<int>& neighbors(int i) const { return adj[i]; }
    int degree(int i) const { return static_cast<int>(adj[i].size()); }
    bool has_edge(int i, int j) const;
    long edge_count() const;
};

// Builds a network from an undirected edge set; validates indices,
// rejects self-loops and duplicate edges.
SensorNetwork network_from_edges(int n, const std::vector<std::pair<int, int>>& edges);

bool is_connected(const SensorNetwork& net);

// Configuration I: connected D-regular graph via the pairing model with
// rejection until simple and connected.
SensorNetwork gen_config1(int n, int D, std::mt19937_64& rng);

// Configuration II: Erdos-Renyi draw with edge probability Pe, redrawn
// until connected (capped with a diagnostic).
SensorNetwork gen_config2(int n, double Pe, std::mt19937_64& rng);

// Configuration III: uniform random spanning tree plus distinct random
// extra edges, exactly Ne edges total.
SensorNetwork gen_config3(int n, long Ne, std::mt19937_64& rng);

// Edge-list text format: one "i j" pair per line, 0-indexed, each undirected
// edge listed once.
void save_edge_list(const SensorNetwork& net, const std::string& path);
SensorNetwork load_edge_list(const std::string& path, int n);

}  // namespace swarm
