#include <doctest.h>

#include "swarm/graph.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

using namespace swarm;

TEST_CASE("network_from_edges: validation") {
    CHECK_THROWS_AS(network_from_edges(3, {{0, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(network_from_edges(3, {{0, 3}}), std::invalid_argument);
    CHECK_THROWS_AS(network_from_edges(3, {{0, 1}, {1, 0}}), std::invalid_argument);
    SensorNetwork net = network_from_edges(3, {{0, 1}, {1, 2}});
    CHECK(net.degree(1) == 2);
    CHECK(net.has_edge(0, 1));
    CHECK(net.has_edge(1, 0));
    CHECK(!net.has_edge(0, 2));
    CHECK(net.edge_count() == 2);
}

TEST_CASE("is_connected") {
    CHECK(is_connected(network_from_edges(1, {})));
    CHECK(!is_connected(network_from_edges(2, {})));
    CHECK(is_connected(network_from_edges(2, {{0, 1}})));
    CHECK(!is_connected(network_from_edges(4, {{0, 1}, {2, 3}})));
}

TEST_CASE("gen_config1: regular connected graphs") {
    std::mt19937_64 rng(5);

    SensorNetwork pair = gen_config1(2, 1, rng);
    CHECK(pair.edge_count() == 1);
    CHECK(pair.has_edge(0, 1));

    SensorNetwork net = gen_config1(10, 3, rng);
    CHECK(net.edge_count() == 15);  // n*D/2
    CHECK(is_connected(net));
    for (int i = 0; i < 10; ++i) CHECK(net.degree(i) == 3);

    CHECK_THROWS_AS(gen_config1(5, 3, rng), std::invalid_argument);   // n*D odd
    CHECK_THROWS_AS(gen_config1(10, 1, rng), std::invalid_argument);  // matching
    CHECK_THROWS_AS(gen_config1(4, 4, rng), std::invalid_argument);   // D >= n
}

TEST_CASE("gen_config2: Erdos-Renyi with connectivity rejection") {
    std::mt19937_64 rng(7);
    SensorNetwork complete = gen_config2(8, 1.0, rng);
    CHECK(complete.edge_count() == 28);

    SensorNetwork sparse = gen_config2(10, 0.1, rng);
    CHECK(is_connected(sparse));

    CHECK_THROWS_AS(gen_config2(5, 0.0, rng), std::invalid_argument);
    CHECK_THROWS_AS(gen_config2(5, 1.5, rng), std::invalid_argument);
}

TEST_CASE("gen_config2: empirical edge frequency at Pe = 0.9") {
    std::mt19937_64 rng(11);
    const int n = 10;
    const long pairs = 45;
    long edges = 0;
    const int graphs = 1000;
    for (int g = 0; g < graphs; ++g) {
        edges += gen_config2(n, 0.9, rng).edge_count();
    }
    double freq = static_cast<double>(edges) / (static_cast<double>(graphs) * pairs);
    CHECK(freq == doctest::Approx(0.9).epsilon(0.056));  // +-0.05 absolute
}

TEST_CASE("gen_config3: tree plus extra edges") {
    std::mt19937_64 rng(13);
    SensorNetwork tree = gen_config3(10, 9, rng);
    CHECK(tree.edge_count() == 9);
    CHECK(is_connected(tree));

    SensorNetwork complete = gen_config3(10, 45, rng);
    CHECK(complete.edge_count() == 45);

    SensorNetwork mid = gen_config3(10, 15, rng);
    CHECK(mid.edge_count() == 15);
    CHECK(is_connected(mid));

    CHECK_THROWS_AS(gen_config3(10, 8, rng), std::invalid_argument);
    CHECK_THROWS_AS(gen_config3(10, 46, rng), std::invalid_argument);
}

TEST_CASE("generators: invariants hold on 1000 random instances each") {
    std::mt19937_64 rng(17);

    std::uniform_int_distribution<int> pick_n(4, 14);
    for (int it = 0; it < 1000; ++it) {
        int n = pick_n(rng);
        std::uniform_int_distribution<int> pick_d(2, n - 1);
        int D = pick_d(rng);
        if ((n * D) % 2 != 0) D = D == n - 1 ? D - 1 : D + 1;
        SensorNetwork net = gen_config1(n, D, rng);
        CHECK(is_connected(net));
        bool all_d = true;
        for (int i = 0; i < n; ++i) all_d = all_d && net.degree(i) == D;
        CHECK(all_d);
        CHECK(net.edge_count() == static_cast<long>(n) * D / 2);
    }

    std::uniform_real_distribution<double> pick_pe(0.3, 1.0);
    for (int it = 0; it < 1000; ++it) {
        int n = pick_n(rng);
        SensorNetwork net = gen_config2(n, pick_pe(rng), rng);
        CHECK(is_connected(net));
        CHECK(net.n == n);
    }

    for (int it = 0; it < 1000; ++it) {
        int n = pick_n(rng);
        long max_edges = static_cast<long>(n) * (n - 1) / 2;
        std::uniform_int_distribution<long> pick_ne(n - 1, max_edges);
        long ne = pick_ne(rng);
        SensorNetwork net = gen_config3(n, ne, rng);
        CHECK(is_connected(net));
        CHECK(net.edge_count() == ne);
    }
}

TEST_CASE("edge list save/load round trip") {
    std::mt19937_64 rng(19);
    SensorNetwork net = gen_config3(9, 14, rng);
    auto path = std::filesystem::temp_directory_path() / "swarm_graph_test.edges";
    save_edge_list(net, path.string());

    SensorNetwork back = load_edge_list(path.string(), 9);
    CHECK(back.n == net.n);
    for (int i = 0; i < 9; ++i) CHECK(back.adj[i] == net.adj[i]);

    // One "i j" pair per line, each edge once.
    std::ifstream in(path);
    int lines = 0, a, b;
    while (in >> a >> b) {
        CHECK(a < b);
        ++lines;
    }
    CHECK(lines == 14);
    std::filesystem::remove(path);
}
