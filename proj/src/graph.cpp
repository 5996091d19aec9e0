#include "swarm/graph.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <stdexcept>

namespace swarm {

namespace {

constexpr long kConnectivityRetryCap = 10000;
constexpr long kPairingRetryCap = 200000;

}  // namespace

bool SensorNetwork::has_edge(int i, int j) const {
    const auto& nb = adj[i];
    return std::binary_search(nb.begin(), nb.end(), j);
}

long SensorNetwork::edge_count() const {
    long deg_sum = 0;
    for (const auto& nb : adj) deg_sum += static_cast<long>(nb.size());
    return deg_sum / 2;
}

SensorNetwork network_from_edges(int n,
                                 const std::vector<std::pair<int, int>>& edges) {
    if (n < 1) throw std::invalid_argument("network_from_edges: n must be >= 1");
    SensorNetwork net;
    net.n = n;
    net.adj.assign(n, {});
    net.positions.assign(n, Vec2::Zero());
    std::set<std::pair<int, int>> seen;
    for (auto [a, b] : edges) {
        if (a < 0 || a >= n || b < 0 || b >= n) {
            throw std::invalid_argument("network_from_edges: vertex out of range");
        }
        if (a == b) throw std::invalid_argument("network_from_edges: self-loop");
        auto key = std::minmax(a, b);
        if (!seen.insert(key).second) {
            throw std::invalid_argument("network_from_edges: duplicate edge");
        }
        net.adj[a].push_back(b);
        net.adj[b].push_back(a);
    }
    for (auto& nb : net.adj) std::sort(nb.begin(), nb.end());
    return net;
}

bool is_connected(const SensorNetwork& net) {
    if (net.n == 0) return false;
    std::vector<char> seen(net.n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int u : net.adj[v]) {
            if (!seen[u]) {
                seen[u] = 1;
                ++count;
                stack.push_back(u);
            }
        }
    }
    return count == net.n;
}

namespace {

// Pairing-model draw of a simple d-regular edge set: random unused stubs are
// paired, re-drawing pairs that would create a loop or multi-edge, with a
// full restart on dead ends.
bool pair_stubs_once(int n, int d, std::mt19937_64& rng,
                     std::vector<std::pair<int, int>>& edges) {
    edges.clear();
    if (d == 0) return true;
    std::vector<int> stubs(static_cast<size_t>(n) * d);
    for (int v = 0; v < n; ++v) {
        std::fill_n(stubs.begin() + static_cast<long>(v) * d, d, v);
    }
    std::set<std::pair<int, int>> seen;
    while (!stubs.empty()) {
        bool placed = false;
        for (int tries = 0; tries < 200 && !placed; ++tries) {
            std::uniform_int_distribution<size_t> pick(0, stubs.size() - 1);
            size_t i = pick(rng), j = pick(rng);
            if (i == j) continue;
            int u = stubs[i], v = stubs[j];
            if (u == v || seen.count(std::minmax(u, v))) continue;
            seen.insert(std::minmax(u, v));
            edges.emplace_back(u, v);
            if (i < j) std::swap(i, j);
            stubs[i] = stubs.back();
            stubs.pop_back();
            stubs[j] = stubs.back();
            stubs.pop_back();
            placed = true;
        }
        if (!placed) {
            // Random draws keep colliding; check whether any valid pair is left.
            for (size_t i = 0; i < stubs.size() && !placed; ++i) {
                for (size_t j = i + 1; j < stubs.size() && !placed; ++j) {
                    int u = stubs[i], v = stubs[j];
                    if (u == v || seen.count(std::minmax(u, v))) continue;
                    seen.insert(std::minmax(u, v));
                    edges.emplace_back(u, v);
                    stubs[j] = stubs.back();  // j > i: remove the larger index first
                    stubs.pop_back();
                    stubs[i] = stubs.back();
                    stubs.pop_back();
                    placed = true;
                }
            }
            if (!placed) return false;  // dead end
        }
    }
    return true;
}

}  // namespace

SensorNetwork gen_config1(int n, int D, std::mt19937_64& rng) {
    if (n < 2 || D < 1 || D >= n || (static_cast<long>(n) * D) % 2 != 0) {
        throw std::invalid_argument("gen_config1: infeasible (n, D)");
    }
    if (D == 1 && n != 2) {
        // A 1-regular graph is a perfect matching; connected only for n = 2.
        throw std::invalid_argument("gen_config1: 1-regular connected graph needs n = 2");
    }

    // Dense degrees pair the complement instead: the complement of a simple
    // (n-1-D)-regular graph is D-regular.
    const bool complement = D > (n - 1) / 2;
    const int d = complement ? n - 1 - D : D;

    std::vector<std::pair<int, int>> edges;
    for (long attempt = 0; attempt < kPairingRetryCap; ++attempt) {
        if (!pair_stubs_once(n, d, rng, edges)) continue;
        std::vector<std::pair<int, int>> final_edges;
        if (complement) {
            std::set<std::pair<int, int>> present;
            for (auto& e : edges) present.insert(std::minmax(e.first, e.second));
            for (int i = 0; i < n; ++i) {
                for (int j = i + 1; j < n; ++j) {
                    if (!present.count({i, j})) final_edges.emplace_back(i, j);
                }
            }
        } else {
            final_edges = edges;
        }
        SensorNetwork net = network_from_edges(n, final_edges);
        if (is_connected(net)) return net;
    }
    throw std::runtime_error("gen_config1: no simple connected pairing found");
}

SensorNetwork gen_config2(int n, double Pe, std::mt19937_64& rng) {
    if (n < 1) throw std::invalid_argument("gen_config2: n must be >= 1");
    if (!(Pe > 0.0 && Pe <= 1.0)) {
        throw std::invalid_argument("gen_config2: Pe must be in (0, 1]");
    }

    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (long attempt = 0; attempt < kConnectivityRetryCap; ++attempt) {
        std::vector<std::pair<int, int>> edges;
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                if (u(rng) < Pe) edges.emplace_back(i, j);
            }
        }
        SensorNetwork net = network_from_edges(n, edges);
        if (is_connected(net)) return net;
    }
    throw std::runtime_error("gen_config2: no connected draw within " +
                             std::to_string(kConnectivityRetryCap) + " attempts");
}

SensorNetwork gen_config3(int n, long Ne, std::mt19937_64& rng) {
    if (n < 1) throw std::invalid_argument("gen_config3: n must be >= 1");
    const long max_edges = static_cast<long>(n) * (n - 1) / 2;
    if (Ne < n - 1 || Ne > max_edges) {
        throw std::invalid_argument("gen_config3: Ne must be in [n-1, n(n-1)/2]");
    }

    // Uniform random labeled tree via a random Pruefer sequence.
    std::vector<std::pair<int, int>> edges;
    if (n >= 2) {
        std::vector<int> prufer(std::max(n - 2, 0));
        std::uniform_int_distribution<int> pick(0, n - 1);
        for (auto& p : prufer) p = pick(rng);

        std::vector<int> degree(n, 1);
        for (int p : prufer) ++degree[p];
        std::set<int> leaves;
        for (int v = 0; v < n; ++v) {
            if (degree[v] == 1) leaves.insert(v);
        }
        for (int p : prufer) {
            int leaf = *leaves.begin();
            leaves.erase(leaves.begin());
            edges.emplace_back(leaf, p);
            if (--degree[p] == 1) leaves.insert(p);
        }
        int a = *leaves.begin();
        int b = *std::next(leaves.begin());
        edges.emplace_back(a, b);
    }

    // Extra edges: a uniform sample of the non-tree pairs.
    std::set<std::pair<int, int>> present;
    for (auto [a, b] : edges) present.insert(std::minmax(a, b));
    std::vector<std::pair<int, int>> candidates;
    candidates.reserve(max_edges - (n - 1));
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (!present.count({i, j})) candidates.emplace_back(i, j);
        }
    }
    std::shuffle(candidates.begin(), candidates.end(), rng);
    for (long k = 0; k < Ne - (n - 1); ++k) edges.push_back(candidates[k]);

    return network_from_edges(n, edges);
}

void save_edge_list(const SensorNetwork& net, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_edge_list: cannot open " + path);
    for (int i = 0; i < net.n; ++i) {
        for (int j : net.adj[i]) {
            if (i < j) out << i << " " << j << "\n";
        }
    }
}

SensorNetwork load_edge_list(const std::string& path, int n) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_edge_list: cannot open " + path);
    std::vector<std::pair<int, int>> edges;
    int a, b;
    while (in >> a >> b) edges.emplace_back(a, b);
    return network_from_edges(n, edges);
}

}  // namespace swarm
