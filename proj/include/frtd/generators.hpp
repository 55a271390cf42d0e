#pragma once

#include <random>
#include <stdexcept>
#include <vector>

#include "frtd/graph.hpp"

namespace frtd {
namespace gen {

inline Graph cycle(int n) {
    std::vector<WeightedEdge> e;
    for (int i = 0; i < n; ++i) e.push_back({i, (i + 1) % n, 1.0});
    if (n == 2) e.pop_back();  // avoid duplicate 0-1
    return make_graph(n, e, false);
}

inline Graph path(int n) {
    std::vector<WeightedEdge> e;
    for (int i = 0; i + 1 < n; ++i) e.push_back({i, i + 1, 1.0});
    return make_graph(n, e, false);
}

// Star with `leaves` leaf nodes; node 0 is the center.
inline Graph star(int leaves) {
    std::vector<WeightedEdge> e;
    for (int i = 1; i <= leaves; ++i) e.push_back({0, i, 1.0});
    return make_graph(leaves + 1, e, false);
}

inline Graph complete(int n) {
    std::vector<WeightedEdge> e;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) e.push_back({i, j, 1.0});
    return make_graph(n, e, false);
}

// Two cliques of size `clique` bridged by a path of `path_len` extra nodes.
inline Graph barbell(int clique, int path_len) {
    std::vector<WeightedEdge> e;
    auto add_clique = [&](int base) {
        for (int i = 0; i < clique; ++i)
            for (int j = i + 1; j < clique; ++j) e.push_back({base + i, base + j, 1.0});
    };
    add_clique(0);
    add_clique(clique);
    int first_path = 2 * clique;
    int prev = clique - 1;  // attach to last node of clique 1
    for (int i = 0; i < path_len; ++i) {
        e.push_back({prev, first_path + i, 1.0});
        prev = first_path + i;
    }
    e.push_back({prev, clique, 1.0});  // into first node of clique 2
    return make_graph(2 * clique + path_len, e, false);
}

// 12-node cubic Frucht graph from its LCF notation [-5,-2,-4,2,5,-2,2,5,-2,-5,4,2].
inline Graph frucht() {
    const int n = 12;
    const int lcf[12] = {-5, -2, -4, 2, 5, -2, 2, 5, -2, -5, 4, 2};
    std::vector<WeightedEdge> e;
    auto add = [&](int u, int v) {
        if (u > v) std::swap(u, v);
        for (const auto& x : e)
            if (x.u == u && x.v == v) return;
        e.push_back({u, v, 1.0});
    };
    for (int i = 0; i < n; ++i) add(i, (i + 1) % n);
    for (int i = 0; i < n; ++i) add(i, ((i + lcf[i]) % n + n) % n);
    return make_graph(n, e, false);
}

inline Graph directed_cycle(int n) {
    std::vector<WeightedEdge> e;
    for (int i = 0; i < n; ++i) e.push_back({i, (i + 1) % n, 1.0});
    return make_graph(n, e, true);
}

// Uniform simple graph with exactly m edges.
inline Graph gnm(int n, int m, std::uint64_t seed) {
    const long long max_edges = static_cast<long long>(n) * (n - 1) / 2;
    if (m > max_edges) throw std::invalid_argument("too many edges for gnm");
    std::mt19937_64 rng(seed);
    std::vector<std::pair<int, int>> all;
    all.reserve(max_edges);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) all.emplace_back(i, j);
    // partial Fisher-Yates for the first m slots
    for (int i = 0; i < m; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, all.size() - 1);
        std::swap(all[i], all[pick(rng)]);
    }
    std::vector<WeightedEdge> e;
    for (int i = 0; i < m; ++i) e.push_back({all[i].first, all[i].second, 1.0});
    // a uniform G(n,m) sample may legitimately contain isolated nodes
    return make_graph(n, e, false, {}, /*allow_isolated=*/true);
}

// Erdos-Renyi G(n,p) conditioned on connectivity (and no isolated nodes).
inline Graph gnp_connected(int n, double p, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (int attempt = 0; attempt < 10000; ++attempt) {
        std::vector<WeightedEdge> e;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (coin(rng) < p) e.push_back({i, j, 1.0});
        try {
            Graph g = make_graph(n, e, false);
            if (is_connected(g)) return g;
        } catch (const DataError&) {
            // isolated node, resample
        }
    }
    throw std::runtime_error("gnp_connected: could not generate a connected sample");
}

}  // namespace gen
}  // namespace frtd
