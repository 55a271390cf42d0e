#pragma once

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "frtd/descriptors.hpp"
#include "frtd/distance.hpp"
#include "frtd/frtd.hpp"
#include "frtd/graph.hpp"
#include "frtd/hungarian.hpp"
#include "frtd/parallel.hpp"

namespace frtd {

struct AlignmentProblem {
    const Graph* g1 = nullptr;
    const Graph* g2 = nullptr;
    DistanceMatrix cost;
    double mu = 1.0;
};

struct AlignmentResult {
    std::vector<int> permutation;  // permutation[i] = matched node in G2
    double objective = 0.0;
    double accuracy = -1.0;  // unset when no ground truth is known
    double runtime_seconds = 0.0;
};

inline double alignment_accuracy(const std::vector<int>& perm, const std::vector<int>& truth) {
    if (perm.size() != truth.size()) throw std::invalid_argument("permutation size mismatch");
    int hits = 0;
    for (std::size_t i = 0; i < perm.size(); ++i)
        if (perm[i] == truth[i]) ++hits;
    return static_cast<double>(hits) / perm.size();
}

// ||A1 P - P A2||_F^2 for a permutation given as a vector.
inline double quadratic_objective(const Graph& g1, const Graph& g2, const std::vector<int>& perm) {
    Eigen::MatrixXd a1 = Eigen::MatrixXd(g1.adjacency);
    Eigen::MatrixXd a2 = Eigen::MatrixXd(g2.adjacency);
    const int n = g1.n;
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) p(i, perm[i]) = 1.0;
    return (a1 * p - p * a2).squaredNorm();
}

// Optimal linear assignment on the FRTD cost matrix.
inline AlignmentResult solve_lap(const DistanceMatrix& cost) {
    auto t0 = std::chrono::steady_clock::now();
    AlignmentResult res;
    res.permutation = hungarian(cost.values, &res.objective);
    res.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

// Frank-Wolfe over the doubly-stochastic relaxation of the guided quadratic
// assignment objective, then Hungarian rounding of the fractional solution.
inline AlignmentResult solve_fugal_frt(const AlignmentProblem& problem, int iterations = 15,
                                       std::uint64_t seed = 0) {
    (void)seed;  // the solver is deterministic: uniform start, exact line search
    if (iterations < 1) throw std::invalid_argument("iteration cap must be >= 1");
    const Graph& g1 = *problem.g1;
    const Graph& g2 = *problem.g2;
    if (g1.n != g2.n) throw std::invalid_argument("graphs must have equal node counts");
    if (problem.cost.rows() != g1.n || problem.cost.cols() != g2.n)
        throw std::invalid_argument("cost matrix dimension mismatch");
    if (problem.mu < 0.0) throw std::invalid_argument("mu must be >= 0");

    auto t0 = std::chrono::steady_clock::now();
    const int n = g1.n;
    Eigen::MatrixXd a1 = Eigen::MatrixXd(g1.adjacency);
    Eigen::MatrixXd a2 = Eigen::MatrixXd(g2.adjacency);
    const Eigen::MatrixXd& c = problem.cost.values;
    const double mu = problem.mu;

    Eigen::MatrixXd p = Eigen::MatrixXd::Constant(n, n, 1.0 / n);
    Eigen::MatrixXd residual = a1 * p - p * a2;
    double relaxed = residual.squaredNorm() + mu * c.cwiseProduct(p).sum();

    for (int iter = 0; iter < iterations; ++iter) {
        Eigen::MatrixXd grad =
            2.0 * (a1.transpose() * residual - residual * a2.transpose()) + mu * c;
        auto vertex = hungarian(grad);
        Eigen::MatrixXd direction = -p;
        for (int i = 0; i < n; ++i) direction(i, vertex[i]) += 1.0;

        Eigen::MatrixXd step_residual = a1 * direction - direction * a2;
        double quad = step_residual.squaredNorm();
        double lin = 2.0 * (residual.cwiseProduct(step_residual)).sum() +
                     mu * c.cwiseProduct(direction).sum();
        double gamma;
        if (quad > 0.0)
            gamma = std::clamp(-lin / (2.0 * quad), 0.0, 1.0);
        else
            gamma = lin < 0.0 ? 1.0 : 0.0;
        if (gamma <= 0.0) break;

        p += gamma * direction;
        residual += gamma * step_residual;
        double next = residual.squaredNorm() + mu * c.cwiseProduct(p).sum();
        if (next > relaxed + 1e-9) break;  // exact line search should never go uphill
        relaxed = next;
        if (gamma >= 1.0 && quad == 0.0) break;
    }

    AlignmentResult res;
    res.permutation = hungarian(-p);
    res.objective = quadratic_objective(g1, g2, res.permutation);
    for (int i = 0; i < n; ++i) res.objective += mu * c(i, res.permutation[i]);
    res.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

// Corruption benchmark: remove floor(fraction * m) edges, then relabel with a
// uniform random permutation. Returned truth[i] is the corrupted-graph index
// of original node i. Corruption may disconnect or isolate nodes.
struct CorruptedGraph {
    Graph graph;
    std::vector<int> truth;
};

inline CorruptedGraph corrupt_graph(const Graph& g, double fraction, std::uint64_t seed) {
    if (fraction < 0.0 || fraction >= 1.0)
        throw std::invalid_argument("fraction must lie in [0, 1)");
    std::mt19937_64 rng(seed);
    auto edges = edge_list(g);
    const int remove = static_cast<int>(fraction * g.m);
    // partial Fisher-Yates: move `remove` random edges to the front, drop them
    for (int i = 0; i < remove; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, edges.size() - 1);
        std::swap(edges[i], edges[pick(rng)]);
    }
    edges.erase(edges.begin(), edges.begin() + remove);

    std::vector<int> perm(g.n);
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = g.n - 1; i > 0; --i) {
        std::uniform_int_distribution<int> pick(0, i);
        std::swap(perm[i], perm[pick(rng)]);
    }

    std::vector<WeightedEdge> relabeled;
    relabeled.reserve(edges.size());
    for (const auto& e : edges) relabeled.push_back({perm[e.u], perm[e.v], e.w});
    CorruptedGraph out;
    out.graph = make_graph(g.n, relabeled, g.directed, {}, /*allow_isolated=*/true);
    out.truth = std::move(perm);
    return out;
}

// Hand-crafted comparison cost: degree, mean neighbor degree, clustering
// coefficient, min-max scaled per graph, L1 distance.
inline DistanceMatrix fugal_lite_cost(const Graph& g1, const Graph& g2) {
    auto features = [](const Graph& g) {
        auto adj = descriptors::neighbor_lists(g);
        Eigen::MatrixXd f(g.n, 3);
        Eigen::VectorXd deg = descriptors::degrees(adj);
        f.col(0) = deg;
        for (int i = 0; i < g.n; ++i) {
            double acc = 0.0;
            for (int j : adj[i]) acc += deg[j];
            f(i, 1) = adj[i].empty() ? 0.0 : acc / adj[i].size();
        }
        f.col(2) = descriptors::local_clustering(adj);
        for (int c = 0; c < 3; ++c) {
            double lo = f.col(c).minCoeff(), hi = f.col(c).maxCoeff();
            if (hi > lo)
                f.col(c) = (f.col(c).array() - lo) / (hi - lo);
            else
                f.col(c).setZero();
        }
        return f;
    };
    Eigen::MatrixXd f1 = features(g1), f2 = features(g2);
    DistanceMatrix dm;
    dm.values.resize(g1.n, g2.n);
    for (int i = 0; i < g1.n; ++i)
        for (int j = 0; j < g2.n; ++j)
            dm.values(i, j) = (f1.row(i) - f2.row(j)).cwiseAbs().sum();
    return dm;
}

struct BenchmarkRow {
    std::string method;
    double mean_accuracy = 0.0;
    double std_accuracy = 0.0;
    double mean_runtime = 0.0;
    double std_runtime = 0.0;
    std::vector<double> accuracies;
};

inline FrtdMatrix embedding_for_alignment(const Graph& g, int max_steps) {
    return compute_frtd(g, max_steps, /*allow_isolated=*/true);
}

// Runs the corruption protocol `trials` times per method. Trial t uses seed
// derived from (seed, t) so trials are independent and order-insensitive.
inline std::vector<BenchmarkRow> benchmark(const Graph& g, double fraction, int trials,
                                           const std::vector<std::string>& methods,
                                           std::uint64_t seed, int max_steps = 50,
                                           double mu = 1.0, int iterations = 15) {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    for (const auto& m : methods)
        if (m != "lap" && m != "fugal-frt" && m != "fugal-lite")
            throw std::invalid_argument("unknown method: " + m);

    FrtdMatrix f1 = embedding_for_alignment(g, max_steps);
    struct TrialResult {
        double accuracy, runtime;
    };
    std::vector<std::vector<TrialResult>> results(methods.size(),
                                                  std::vector<TrialResult>(trials));

    parallel_blocks(trials, [&](int lo, int hi) {
        for (int t = lo; t < hi; ++t) {
            auto corrupted = corrupt_graph(g, fraction, seed + 0x9e3779b97f4a7c15ull * (t + 1));
            FrtdMatrix f2 = embedding_for_alignment(corrupted.graph, max_steps);
            DistanceMatrix frt_cost;
            for (std::size_t mi = 0; mi < methods.size(); ++mi) {
                const auto& method = methods[mi];
                AlignmentResult res;
                if (method == "lap") {
                    if (frt_cost.rows() == 0) frt_cost = pairwise_distances(f1, f2);
                    res = solve_lap(frt_cost);
                } else {
                    AlignmentProblem problem;
                    problem.g1 = &g;
                    problem.g2 = &corrupted.graph;
                    problem.mu = mu;
                    if (method == "fugal-frt") {
                        if (frt_cost.rows() == 0) frt_cost = pairwise_distances(f1, f2);
                        problem.cost = frt_cost;
                    } else {
                        problem.cost = fugal_lite_cost(g, corrupted.graph);
                    }
                    res = solve_fugal_frt(problem, iterations, seed);
                }
                results[mi][t] = {alignment_accuracy(res.permutation, corrupted.truth),
                                  res.runtime_seconds};
            }
        }
    });

    std::vector<BenchmarkRow> rows;
    for (std::size_t mi = 0; mi < methods.size(); ++mi) {
        BenchmarkRow row;
        row.method = methods[mi];
        double sa = 0, sr = 0;
        for (const auto& r : results[mi]) {
            sa += r.accuracy;
            sr += r.runtime;
            row.accuracies.push_back(r.accuracy);
        }
        row.mean_accuracy = sa / trials;
        row.mean_runtime = sr / trials;
        double va = 0, vr = 0;
        for (const auto& r : results[mi]) {
            va += (r.accuracy - row.mean_accuracy) * (r.accuracy - row.mean_accuracy);
            vr += (r.runtime - row.mean_runtime) * (r.runtime - row.mean_runtime);
        }
        row.std_accuracy = std::sqrt(va / trials);
        row.std_runtime = std::sqrt(vr / trials);
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace frtd
