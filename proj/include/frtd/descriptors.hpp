#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "frtd/graph.hpp"

namespace frtd {
namespace descriptors {

// Unweighted neighbor lists; weights are ignored by the topological
// descriptors below.
inline std::vector<std::vector<int>> neighbor_lists(const Graph& g) {
    std::vector<std::vector<int>> adj(g.n);
    for (const auto& e : edge_list(g)) {
        adj[e.u].push_back(e.v);
        if (!g.directed) adj[e.v].push_back(e.u);
    }
    for (auto& nb : adj) std::sort(nb.begin(), nb.end());
    return adj;
}

inline Eigen::VectorXd degrees(const std::vector<std::vector<int>>& adj) {
    Eigen::VectorXd d(adj.size());
    for (std::size_t i = 0; i < adj.size(); ++i) d[i] = static_cast<double>(adj[i].size());
    return d;
}

inline Eigen::VectorXd local_clustering(const std::vector<std::vector<int>>& adj) {
    const int n = static_cast<int>(adj.size());
    Eigen::VectorXd c = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) {
        int d = static_cast<int>(adj[i].size());
        if (d < 2) continue;
        int links = 0;
        for (std::size_t a = 0; a < adj[i].size(); ++a)
            for (std::size_t b = a + 1; b < adj[i].size(); ++b)
                if (std::binary_search(adj[adj[i][a]].begin(), adj[adj[i][a]].end(), adj[i][b]))
                    ++links;
        c[i] = 2.0 * links / (static_cast<double>(d) * (d - 1));
    }
    return c;
}

// Brandes betweenness for unweighted graphs.
inline Eigen::VectorXd betweenness(const std::vector<std::vector<int>>& adj) {
    const int n = static_cast<int>(adj.size());
    Eigen::VectorXd bc = Eigen::VectorXd::Zero(n);
    for (int s = 0; s < n; ++s) {
        std::vector<int> order;
        order.reserve(n);
        std::vector<std::vector<int>> pred(n);
        std::vector<double> sigma(n, 0.0);
        std::vector<int> dist(n, -1);
        sigma[s] = 1.0;
        dist[s] = 0;
        std::queue<int> q;
        q.push(s);
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            order.push_back(v);
            for (int w : adj[v]) {
                if (dist[w] < 0) {
                    dist[w] = dist[v] + 1;
                    q.push(w);
                }
                if (dist[w] == dist[v] + 1) {
                    sigma[w] += sigma[v];
                    pred[w].push_back(v);
                }
            }
        }
        std::vector<double> delta(n, 0.0);
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            int w = *it;
            for (int v : pred[w]) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            if (w != s) bc[w] += delta[w];
        }
    }
    return bc / 2.0;
}

inline Eigen::VectorXd closeness(const std::vector<std::vector<int>>& adj) {
    const int n = static_cast<int>(adj.size());
    Eigen::VectorXd cc = Eigen::VectorXd::Zero(n);
    std::vector<int> dist(n);
    for (int s = 0; s < n; ++s) {
        std::fill(dist.begin(), dist.end(), -1);
        dist[s] = 0;
        std::queue<int> q;
        q.push(s);
        long long total = 0;
        int reached = 0;
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            total += dist[v];
            ++reached;
            for (int w : adj[v])
                if (dist[w] < 0) {
                    dist[w] = dist[v] + 1;
                    q.push(w);
                }
        }
        // Wasserman-Faust component scaling keeps disconnected graphs comparable.
        if (total > 0)
            cc[s] = (static_cast<double>(reached - 1) / (n - 1)) * (reached - 1) / total;
    }
    return cc;
}

inline Eigen::VectorXd eigenvector_centrality(const Graph& g, int iterations = 200) {
    Eigen::MatrixXd a = Eigen::MatrixXd(g.adjacency);
    if (g.directed) a = (a + a.transpose()) / 2.0;
    Eigen::VectorXd v = Eigen::VectorXd::Ones(g.n);
    for (int it = 0; it < iterations; ++it) {
        v = a * v;
        double norm = v.norm();
        if (norm <= 0.0) return Eigen::VectorXd::Ones(g.n) / std::sqrt(double(g.n));
        v /= norm;
    }
    return v.cwiseAbs();
}

inline Eigen::VectorXd pagerank(const Graph& g, double alpha = 0.15, int iterations = 200) {
    const int n = g.n;
    Eigen::MatrixXd a = Eigen::MatrixXd(g.adjacency);
    Eigen::MatrixXd t(n, n);
    for (int i = 0; i < n; ++i) {
        double d = a.row(i).sum();
        if (d > 0.0)
            t.row(i) = (1.0 - alpha) * a.row(i) / d;
        else
            t.row(i).setConstant((1.0 - alpha) / n);
    }
    t.array() += alpha / n;
    Eigen::RowVectorXd pi = Eigen::RowVectorXd::Constant(n, 1.0 / n);
    for (int it = 0; it < iterations; ++it) pi = pi * t;
    return pi.transpose();
}

inline double mean_clustering(const std::vector<std::vector<int>>& adj) {
    Eigen::VectorXd c = local_clustering(adj);
    return c.mean();
}

inline long long triangle_count(const std::vector<std::vector<int>>& adj) {
    long long t = 0;
    const int n = static_cast<int>(adj.size());
    for (int i = 0; i < n; ++i)
        for (int j : adj[i])
            if (j > i)
                for (int k : adj[j])
                    if (k > j && std::binary_search(adj[i].begin(), adj[i].end(), k)) ++t;
    return t;
}

// Degree assortativity: Pearson correlation of endpoint degrees over edges.
inline double assortativity(const std::vector<std::vector<int>>& adj) {
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    long long cnt = 0;
    const int n = static_cast<int>(adj.size());
    for (int i = 0; i < n; ++i)
        for (int j : adj[i]) {
            double x = static_cast<double>(adj[i].size());
            double y = static_cast<double>(adj[j].size());
            sx += x;
            sy += y;
            sxx += x * x;
            syy += y * y;
            sxy += x * y;
            ++cnt;
        }
    if (cnt == 0) return 0.0;
    double vx = sxx / cnt - (sx / cnt) * (sx / cnt);
    double vy = syy / cnt - (sy / cnt) * (sy / cnt);
    double cov = sxy / cnt - (sx / cnt) * (sy / cnt);
    if (vx <= 0.0 || vy <= 0.0) return 0.0;
    return cov / std::sqrt(vx * vy);
}

// Mean shortest-path length within the largest connected component.
inline double characteristic_path_length(const std::vector<std::vector<int>>& adj) {
    const int n = static_cast<int>(adj.size());
    std::vector<int> comp(n, -1);
    int best_comp = -1, best_size = 0, ncomp = 0;
    for (int s = 0; s < n; ++s) {
        if (comp[s] >= 0) continue;
        int size = 0;
        std::queue<int> q;
        q.push(s);
        comp[s] = ncomp;
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            ++size;
            for (int w : adj[v])
                if (comp[w] < 0) {
                    comp[w] = ncomp;
                    q.push(w);
                }
        }
        if (size > best_size) {
            best_size = size;
            best_comp = ncomp;
        }
        ++ncomp;
    }
    if (best_size < 2) return 0.0;
    long long total = 0, pairs = 0;
    std::vector<int> dist(n);
    for (int s = 0; s < n; ++s) {
        if (comp[s] != best_comp) continue;
        std::fill(dist.begin(), dist.end(), -1);
        dist[s] = 0;
        std::queue<int> q;
        q.push(s);
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            if (v != s) {
                total += dist[v];
                ++pairs;
            }
            for (int w : adj[v])
                if (dist[w] < 0) {
                    dist[w] = dist[v] + 1;
                    q.push(w);
                }
        }
    }
    return pairs ? static_cast<double>(total) / pairs : 0.0;
}

// Gap between the two largest eigenvalues of the normalized adjacency.
inline double spectral_gap(const Graph& g) {
    Eigen::VectorXd d = degree_vector(g);
    const int n = g.n;
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < g.adjacency.outerSize(); ++i)
        for (SparseMatrix::InnerIterator it(g.adjacency, i); it; ++it) {
            double di = d[it.row()], dj = d[it.col()];
            if (di > 0.0 && dj > 0.0) x(it.row(), it.col()) = it.value() / std::sqrt(di * dj);
        }
    if (g.directed) x = (x + x.transpose()) / 2.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(x, Eigen::EigenvaluesOnly);
    const auto& ev = solver.eigenvalues();
    if (n < 2) return 0.0;
    return ev[n - 1] - ev[n - 2];
}

inline double pearson(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    const double n = static_cast<double>(x.size());
    double mx = x.mean(), my = y.mean();
    Eigen::VectorXd dx = x.array() - mx, dy = y.array() - my;
    double vx = dx.squaredNorm() / n, vy = dy.squaredNorm() / n;
    if (vx <= 0.0 || vy <= 0.0) return std::numeric_limits<double>::quiet_NaN();
    return (dx.dot(dy) / n) / std::sqrt(vx * vy);
}

}  // namespace descriptors
}  // namespace frtd
