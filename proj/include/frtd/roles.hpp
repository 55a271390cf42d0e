#pragma once

#include <Eigen/Dense>

#include <limits>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "frtd/distance.hpp"

namespace frtd {

struct RoleAssignment {
    std::vector<int> labels;
    int k = 0;
    double inertia = 0.0;
    std::uint64_t seed = 0;
};

namespace detail {

struct KmeansResult {
    std::vector<int> labels;
    double inertia = std::numeric_limits<double>::infinity();
};

// Lloyd iterations from a k-means++ seeding. Assignment ties break toward the
// lowest centroid index.
inline KmeansResult kmeans_once(const Eigen::MatrixXd& points, int k, std::mt19937_64& rng) {
    const int n = static_cast<int>(points.rows());
    std::vector<Eigen::VectorXd> centers;
    centers.reserve(k);

    std::uniform_int_distribution<int> first(0, n - 1);
    centers.push_back(points.row(first(rng)).transpose());
    Eigen::VectorXd dist2 = (points.rowwise() - centers[0].transpose()).rowwise().squaredNorm();
    while (static_cast<int>(centers.size()) < k) {
        double total = dist2.sum();
        int chosen = 0;
        if (total > 0.0) {
            std::uniform_real_distribution<double> u(0.0, total);
            double target = u(rng), acc = 0.0;
            for (int i = 0; i < n; ++i) {
                acc += dist2[i];
                if (acc >= target) {
                    chosen = i;
                    break;
                }
            }
        } else {
            chosen = first(rng);
        }
        centers.push_back(points.row(chosen).transpose());
        dist2 = dist2.cwiseMin(
            (points.rowwise() - centers.back().transpose()).rowwise().squaredNorm());
    }

    std::vector<int> labels(n, 0);
    double inertia = 0.0;
    for (int iter = 0; iter < 300; ++iter) {
        bool changed = false;
        inertia = 0.0;
        for (int i = 0; i < n; ++i) {
            int best = 0;
            double best_d = (points.row(i).transpose() - centers[0]).squaredNorm();
            for (int c = 1; c < k; ++c) {
                double d = (points.row(i).transpose() - centers[c]).squaredNorm();
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            if (labels[i] != best) {
                labels[i] = best;
                changed = true;
            }
            inertia += best_d;
        }
        if (!changed && iter > 0) break;
        for (int c = 0; c < k; ++c) {
            Eigen::VectorXd sum = Eigen::VectorXd::Zero(points.cols());
            int count = 0;
            for (int i = 0; i < n; ++i)
                if (labels[i] == c) {
                    sum += points.row(i).transpose();
                    ++count;
                }
            if (count > 0) centers[c] = sum / count;
        }
    }
    return {labels, inertia};
}

}  // namespace detail

// Spectral clustering of an intra-graph FRTD distance matrix: exp-kernel,
// symmetric normalized Laplacian, k leading eigenvectors, row normalization,
// then k-means++ with n_init restarts (lowest inertia wins, ties to the
// earliest restart).
inline RoleAssignment spectral_cluster(const DistanceMatrix& dm, int k, std::uint64_t seed,
                                       int n_init = 10) {
    if (dm.rows() != dm.cols()) throw std::invalid_argument("distance matrix must be square");
    const int n = dm.rows();
    if (k < 1 || k > n) throw std::invalid_argument("cluster count out of range");

    RoleAssignment ra;
    ra.k = k;
    ra.seed = seed;
    if (k == 1) {
        ra.labels.assign(n, 0);
        return ra;
    }

    Eigen::MatrixXd s = similarity_kernel(dm);
    Eigen::VectorXd deg = s.rowwise().sum();
    Eigen::VectorXd inv_sqrt = deg.array().rsqrt();
    Eigen::MatrixXd lap = Eigen::MatrixXd::Identity(n, n) -
                          inv_sqrt.asDiagonal() * s * inv_sqrt.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap);
    if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");

    // k smallest Laplacian eigenvalues = leading kernel eigenvectors.
    Eigen::MatrixXd embed = solver.eigenvectors().leftCols(k);
    // Nodes at (numerically) zero distance are indistinguishable — the metric
    // property bounds their whole distance rows by the same tolerance. Pin
    // them to one embedding row so degenerate eigenvectors cannot split them.
    constexpr double pin_tol = 1e-12;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j)
            if (dm.values(i, j) <= pin_tol) {
                embed.row(i) = embed.row(j);
                break;
            }
    for (int i = 0; i < n; ++i) {
        double norm = embed.row(i).norm();
        if (norm > 0.0) embed.row(i) /= norm;
    }

    std::mt19937_64 rng(seed);
    detail::KmeansResult best;
    for (int restart = 0; restart < n_init; ++restart) {
        auto res = detail::kmeans_once(embed, k, rng);
        if (res.inertia < best.inertia) best = res;
    }
    ra.labels = best.labels;
    ra.inertia = best.inertia;
    return ra;
}

// Per-cluster membership plus (with metadata) a cluster x category table.
struct ClusterReport {
    std::vector<std::vector<std::string>> members;             // per cluster
    std::map<std::string, std::vector<int>> category_counts;   // category -> per-cluster counts
};

inline ClusterReport cluster_report(const RoleAssignment& ra,
                                    const std::vector<std::string>& node_labels,
                                    const std::map<std::string, std::string>& metadata = {}) {
    if (node_labels.size() != ra.labels.size())
        throw std::invalid_argument("label count mismatch");
    for (const auto& [key, value] : metadata) {
        (void)value;
        bool found = false;
        for (const auto& l : node_labels)
            if (l == key) {
                found = true;
                break;
            }
        if (!found) throw std::invalid_argument("metadata key not a node label: " + key);
    }
    ClusterReport report;
    report.members.resize(ra.k);
    for (std::size_t i = 0; i < node_labels.size(); ++i) {
        report.members[ra.labels[i]].push_back(node_labels[i]);
        auto it = metadata.find(node_labels[i]);
        if (it != metadata.end()) {
            auto& row = report.category_counts[it->second];
            if (row.empty()) row.assign(ra.k, 0);
            row[ra.labels[i]] += 1;
        }
    }
    return report;
}

}  // namespace frtd
