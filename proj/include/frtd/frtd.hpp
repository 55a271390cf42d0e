#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <utility>

#include "frtd/graph.hpp"
#include "frtd/io.hpp"
#include "frtd/parallel.hpp"

namespace frtd {

enum class DirectedMode { none, forward, reverse };

// Row i holds the probabilities of a first return to i after 1..K steps,
// with the unresolved mass appended as a final tail column. Rows sum to 1.
struct FrtdMatrix {
    Eigen::MatrixXd values;  // n x (K+1)
    int max_steps = 0;
    DirectedMode directed_mode = DirectedMode::none;

    int nodes() const { return static_cast<int>(values.rows()); }

    Eigen::VectorXd row(int i) const {
        if (i < 0 || i >= nodes())
            throw std::out_of_range("node index " + std::to_string(i) + " out of range");
        return values.row(i).transpose();
    }
};

struct TeleportationConfig {
    double alpha = 0.15;
};

// Exact truncated FRTDs for an undirected graph. Nodes of degree zero are
// only tolerated when allow_isolated is set; they receive a pure-tail row.
inline FrtdMatrix compute_frtd(const Graph& g, int max_steps, bool allow_isolated = false) {
    if (g.directed)
        throw std::invalid_argument("compute_frtd requires an undirected graph");
    if (max_steps < 2) throw std::invalid_argument("max_steps must be >= 2");

    const int n = g.n;
    Eigen::VectorXd d = degree_vector(g);
    std::vector<int> isolated;
    for (int i = 0; i < n; ++i)
        if (d[i] <= 0.0) {
            if (!allow_isolated) throw DataError("zero-degree node " + g.node_labels[i]);
            isolated.push_back(i);
        }

    // Row-normalize, leaving isolated rows empty; their walk never starts and
    // all their mass lands in the tail.
    SparseMatrix t = g.adjacency;
    for (int i = 0; i < t.outerSize(); ++i)
        for (SparseMatrix::InnerIterator it(t, i); it; ++it) it.valueRef() /= d[i];

    Eigen::MatrixXd p = Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd f = Eigen::MatrixXd::Zero(n, max_steps + 1);
    Eigen::MatrixXd next(n, n);
    for (int step = 1; step <= max_steps; ++step) {
        parallel_blocks(n, [&](int lo, int hi) {
            next.middleCols(lo, hi - lo).noalias() = t * p.middleCols(lo, hi - lo);
        });
        p.swap(next);
        f.col(step - 1) = p.diagonal();
        p.diagonal().setZero();
    }
    f.col(max_steps) = Eigen::VectorXd::Ones(n) - f.leftCols(max_steps).rowwise().sum();
    for (int i : isolated) {
        f.row(i).setZero();
        f(i, max_steps) = 1.0;
    }

    FrtdMatrix out;
    out.values = std::move(f);
    out.max_steps = max_steps;
    out.directed_mode = DirectedMode::none;
    return out;
}

namespace detail {

inline Eigen::MatrixXd teleported_transition(const Graph& g, double alpha, bool reversed) {
    const int n = g.n;
    Eigen::MatrixXd a = Eigen::MatrixXd(g.adjacency);
    if (reversed) a.transposeInPlace();
    Eigen::MatrixXd t(n, n);
    for (int i = 0; i < n; ++i) {
        double out_degree = a.row(i).sum();
        if (out_degree > 0.0)
            t.row(i) = (1.0 - alpha) * a.row(i) / out_degree;
        else
            t.row(i).setConstant((1.0 - alpha) / n);  // dangling: pure teleport
    }
    t.array() += alpha / n;
    return t;
}

inline FrtdMatrix frtd_dense(const Eigen::MatrixXd& t, int k, DirectedMode mode) {
    const int n = static_cast<int>(t.rows());
    Eigen::MatrixXd p = Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd f = Eigen::MatrixXd::Zero(n, k + 1);
    Eigen::MatrixXd next(n, n);
    for (int step = 1; step <= k; ++step) {
        parallel_blocks(n, [&](int lo, int hi) {
            next.middleCols(lo, hi - lo).noalias() = t * p.middleCols(lo, hi - lo);
        });
        p.swap(next);
        f.col(step - 1) = p.diagonal();
        p.diagonal().setZero();
    }
    f.col(k) = Eigen::VectorXd::Ones(n) - f.leftCols(k).rowwise().sum();
    FrtdMatrix out;
    out.values = std::move(f);
    out.max_steps = k;
    out.directed_mode = mode;
    return out;
}

}  // namespace detail

// Directed FRTDs under uniform teleportation, on the graph and its reversal.
// alpha = 0 is accepted for chains that are already irreducible.
inline std::pair<FrtdMatrix, FrtdMatrix> compute_frtd_directed(const Graph& g, int max_steps,
                                                               TeleportationConfig tp = {}) {
    if (max_steps < 2) throw std::invalid_argument("max_steps must be >= 2");
    if (tp.alpha < 0.0 || tp.alpha >= 1.0)
        throw std::invalid_argument("alpha must lie in [0, 1)");
    if (tp.alpha == 0.0) {
        Eigen::VectorXd out_deg = degree_vector(g);
        Eigen::VectorXd in_deg = Eigen::VectorXd::Zero(g.n);
        for (int i = 0; i < g.adjacency.outerSize(); ++i)
            for (SparseMatrix::InnerIterator it(g.adjacency, i); it; ++it)
                in_deg[it.col()] += it.value();
        for (int i = 0; i < g.n; ++i)
            if (out_deg[i] <= 0.0 || in_deg[i] <= 0.0)
                throw DataError("node " + g.node_labels[i] +
                                " has zero in- or out-degree; requires alpha > 0");
    }
    auto fwd = detail::frtd_dense(detail::teleported_transition(g, tp.alpha, false), max_steps,
                                  DirectedMode::forward);
    auto rev = detail::frtd_dense(detail::teleported_transition(g, tp.alpha, true), max_steps,
                                  DirectedMode::reverse);
    return {std::move(fwd), std::move(rev)};
}

inline Eigen::VectorXd frtd_of_node(const FrtdMatrix& f, int i) { return f.row(i); }

inline std::string frtd_csv(const FrtdMatrix& f) {
    std::string out = "node";
    for (int t = 1; t <= f.max_steps; ++t) out += ",t" + std::to_string(t);
    out += ",tail\n";
    for (int i = 0; i < f.nodes(); ++i) {
        out += std::to_string(i);
        for (int c = 0; c <= f.max_steps; ++c) out += "," + format_double(f.values(i, c));
        out += "\n";
    }
    return out;
}

}  // namespace frtd
