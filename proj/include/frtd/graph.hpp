#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "frtd/io.hpp"

namespace frtd {

// Malformed or semantically invalid input data (CLI maps this to exit 2).
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

struct WeightedEdge {
    int u = 0;
    int v = 0;
    double w = 1.0;
};

// Simple graph with positive weights and contiguous 0..n-1 indices.
// Immutable after construction; undirected adjacency is stored symmetrically.
struct Graph {
    int n = 0;
    int m = 0;
    bool directed = false;
    SparseMatrix adjacency;
    std::vector<std::string> node_labels;

    const std::string& label(int i) const { return node_labels.at(i); }
};

namespace detail {
inline std::int64_t edge_key(int u, int v, int n, bool directed) {
    if (!directed && u > v) std::swap(u, v);
    return static_cast<std::int64_t>(u) * n + v;
}
}  // namespace detail

// Builds a validated Graph from an explicit edge list. Labels default to the
// decimal index when not given.
inline Graph make_graph(int n, const std::vector<WeightedEdge>& edges, bool directed,
                        std::vector<std::string> labels = {}, bool allow_isolated = false) {
    if (n < 1) throw DataError("graph must have at least one node");
    if (labels.empty()) {
        labels.reserve(n);
        for (int i = 0; i < n; ++i) labels.push_back(std::to_string(i));
    }
    if (static_cast<int>(labels.size()) != n) throw DataError("label count != node count");

    std::unordered_map<std::int64_t, bool> seen;
    seen.reserve(edges.size() * 2);
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(edges.size() * 2);
    for (const auto& e : edges) {
        if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n)
            throw DataError("edge endpoint out of range: " + std::to_string(e.u) + " " +
                            std::to_string(e.v));
        if (e.u == e.v)
            throw DataError("self-loop at node " + labels[e.u]);
        if (!(e.w > 0.0))
            throw DataError("non-positive weight on edge " + labels[e.u] + " " + labels[e.v]);
        auto key = detail::edge_key(e.u, e.v, n, directed);
        if (!seen.emplace(key, true).second)
            throw DataError("duplicate edge " + labels[e.u] + " " + labels[e.v]);
        triplets.emplace_back(e.u, e.v, e.w);
        if (!directed) triplets.emplace_back(e.v, e.u, e.w);
    }

    Graph g;
    g.n = n;
    g.m = static_cast<int>(edges.size());
    g.directed = directed;
    g.node_labels = std::move(labels);
    g.adjacency.resize(n, n);
    g.adjacency.setFromTriplets(triplets.begin(), triplets.end());
    g.adjacency.makeCompressed();

    if (!directed && !allow_isolated) {
        for (int i = 0; i < n; ++i) {
            if (g.adjacency.row(i).nonZeros() == 0)
                throw DataError("isolated node " + g.node_labels[i] +
                                " (degree 0) in undirected graph");
        }
    }
    return g;
}

// Edge-list loader: "u v [w]" per line, '#' comments, labels mapped to indices
// by first appearance.
inline Graph load_edge_list(const std::string& path, bool directed) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open edge list: " + path);

    std::vector<std::string> labels;
    std::unordered_map<std::string, int> index_of;
    auto intern = [&](const std::string& s) {
        auto it = index_of.find(s);
        if (it != index_of.end()) return it->second;
        int idx = static_cast<int>(labels.size());
        labels.push_back(s);
        index_of.emplace(s, idx);
        return idx;
    };

    std::vector<WeightedEdge> edges;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string a, b, c;
        if (!(ls >> a)) continue;  // blank line
        if (!(ls >> b))
            throw DataError(path + ":" + std::to_string(lineno) + ": expected 'u v [w]'");
        double w = 1.0;
        if (ls >> c) {
            std::size_t pos = 0;
            try {
                w = std::stod(c, &pos);
            } catch (const std::exception&) {
                pos = 0;
            }
            if (pos != c.size())
                throw DataError(path + ":" + std::to_string(lineno) + ": bad weight '" + c + "'");
            std::string extra;
            if (ls >> extra)
                throw DataError(path + ":" + std::to_string(lineno) + ": trailing fields");
        }
        if (!(w > 0.0))
            throw DataError(path + ":" + std::to_string(lineno) + ": non-positive weight");
        int u = intern(a);
        int v = intern(b);
        if (u == v) throw DataError(path + ":" + std::to_string(lineno) + ": self-loop");
        edges.push_back({u, v, w});
    }
    if (labels.empty()) throw DataError(path + ": no edges found");

    const int n = static_cast<int>(labels.size());
    try {
        return make_graph(n, edges, directed, std::move(labels));
    } catch (const DataError& e) {
        throw DataError(path + ": " + e.what());
    }
}

inline Eigen::VectorXd degree_vector(const Graph& g) {
    Eigen::VectorXd d = Eigen::VectorXd::Zero(g.n);
    for (int i = 0; i < g.adjacency.outerSize(); ++i)
        for (SparseMatrix::InnerIterator it(g.adjacency, i); it; ++it) d[i] += it.value();
    return d;
}

// Row-stochastic walk matrix; rows are adjacency rows divided by out-degree.
inline SparseMatrix transition_matrix(const Graph& g) {
    Eigen::VectorXd d = degree_vector(g);
    for (int i = 0; i < g.n; ++i)
        if (d[i] <= 0.0)
            throw DataError("zero-degree row " + g.node_labels[i] +
                            " has no transition probabilities");
    SparseMatrix t = g.adjacency;
    for (int i = 0; i < t.outerSize(); ++i)
        for (SparseMatrix::InnerIterator it(t, i); it; ++it) it.valueRef() /= d[i];
    return t;
}

// Degree-symmetrized adjacency; shares its spectrum with the walk matrix.
inline SparseMatrix symmetric_normalized_adjacency(const Graph& g) {
    if (g.directed)
        throw std::invalid_argument("symmetric normalization requires an undirected graph");
    Eigen::VectorXd d = degree_vector(g);
    for (int i = 0; i < g.n; ++i)
        if (d[i] <= 0.0) throw DataError("zero-degree node " + g.node_labels[i]);
    SparseMatrix x = g.adjacency;
    for (int i = 0; i < x.outerSize(); ++i)
        for (SparseMatrix::InnerIterator it(x, i); it; ++it)
            it.valueRef() /= std::sqrt(d[it.row()] * d[it.col()]);
    return x;
}

// Extracts the undirected edge list (u < v) or directed edge list.
inline std::vector<WeightedEdge> edge_list(const Graph& g) {
    std::vector<WeightedEdge> edges;
    edges.reserve(g.m);
    for (int i = 0; i < g.adjacency.outerSize(); ++i)
        for (SparseMatrix::InnerIterator it(g.adjacency, i); it; ++it) {
            int u = static_cast<int>(it.row()), v = static_cast<int>(it.col());
            if (g.directed || u < v) edges.push_back({u, v, it.value()});
        }
    return edges;
}

// Relabels nodes: node i of g becomes node perm[i].
inline Graph permute_graph(const Graph& g, const std::vector<int>& perm) {
    if (static_cast<int>(perm.size()) != g.n)
        throw std::invalid_argument("permutation size mismatch");
    std::vector<WeightedEdge> edges;
    for (const auto& e : edge_list(g)) edges.push_back({perm[e.u], perm[e.v], e.w});
    std::vector<std::string> labels(g.n);
    for (int i = 0; i < g.n; ++i) labels[perm[i]] = g.node_labels[i];
    return make_graph(g.n, edges, g.directed, std::move(labels), /*allow_isolated=*/true);
}

// Connectivity on the underlying undirected structure (weak for digraphs).
inline bool is_connected(const Graph& g) {
    if (g.n == 0) return false;
    std::vector<std::vector<int>> adj(g.n);
    for (const auto& e : edge_list(g)) {
        adj[e.u].push_back(e.v);
        adj[e.v].push_back(e.u);
    }
    std::vector<char> seen(g.n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        for (int v : adj[u])
            if (!seen[v]) {
                seen[v] = 1;
                ++count;
                stack.push_back(v);
            }
    }
    return count == g.n;
}

inline std::string label_map_csv(const Graph& g) {
    std::string out = "index,label\n";
    for (int i = 0; i < g.n; ++i) out += std::to_string(i) + "," + g.node_labels[i] + "\n";
    return out;
}

inline std::string edge_list_text(const Graph& g) {
    std::string out;
    for (const auto& e : edge_list(g))
        out += g.node_labels[e.u] + " " + g.node_labels[e.v] +
               (e.w == 1.0 ? std::string() : " " + format_double(e.w)) + "\n";
    return out;
}

}  // namespace frtd
