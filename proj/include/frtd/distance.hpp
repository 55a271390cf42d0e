#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

#include "frtd/frtd.hpp"
#include "frtd/parallel.hpp"

namespace frtd {

struct DistanceMatrix {
    Eigen::MatrixXd values;

    int rows() const { return static_cast<int>(values.rows()); }
    int cols() const { return static_cast<int>(values.cols()); }
};

// Total variation: half the L1 gap between two probability vectors.
inline double tv_distance(const Eigen::VectorXd& p, const Eigen::VectorXd& q,
                          double norm_tol = 1e-9) {
    if (p.size() != q.size()) throw std::invalid_argument("tv_distance: length mismatch");
    if (std::abs(p.sum() - 1.0) > norm_tol || std::abs(q.sum() - 1.0) > norm_tol)
        throw std::invalid_argument("tv_distance: input not normalized");
    return 0.5 * (p - q).cwiseAbs().sum();
}

namespace detail {

inline void check_compatible(const FrtdMatrix& a, const FrtdMatrix& b) {
    if (a.max_steps != b.max_steps)
        throw std::invalid_argument("FRTD truncation mismatch");
    if (a.directed_mode != b.directed_mode)
        throw std::invalid_argument("FRTD directed-mode mismatch");
}

}  // namespace detail

// All-pairs TV distances between rows of two FRTD matrices.
inline DistanceMatrix pairwise_distances(const FrtdMatrix& f1, const FrtdMatrix& f2) {
    detail::check_compatible(f1, f2);
    const int n1 = f1.nodes(), n2 = f2.nodes();
    DistanceMatrix dm;
    dm.values.resize(n1, n2);
    parallel_blocks(n1, [&](int lo, int hi) {
        for (int i = lo; i < hi; ++i)
            for (int j = 0; j < n2; ++j)
                dm.values(i, j) = 0.5 * (f1.values.row(i) - f2.values.row(j)).cwiseAbs().sum();
    });
    return dm;
}

// Directed embeddings compare forward and reverse rows and average the two
// TVs, keeping the result in [0, 1].
inline DistanceMatrix pairwise_distances(const FrtdMatrix& fwd1, const FrtdMatrix& rev1,
                                         const FrtdMatrix& fwd2, const FrtdMatrix& rev2) {
    detail::check_compatible(fwd1, fwd2);
    detail::check_compatible(rev1, rev2);
    if (fwd1.nodes() != rev1.nodes() || fwd2.nodes() != rev2.nodes())
        throw std::invalid_argument("forward/reverse node count mismatch");
    const int n1 = fwd1.nodes(), n2 = fwd2.nodes();
    DistanceMatrix dm;
    dm.values.resize(n1, n2);
    parallel_blocks(n1, [&](int lo, int hi) {
        for (int i = lo; i < hi; ++i)
            for (int j = 0; j < n2; ++j)
                dm.values(i, j) =
                    0.25 * ((fwd1.values.row(i) - fwd2.values.row(j)).cwiseAbs().sum() +
                            (rev1.values.row(i) - rev2.values.row(j)).cwiseAbs().sum());
    });
    return dm;
}

// Identity-pairing graph distance, (1/2n) sum_i tv(f_i, f'_i); range [0, 1/2].
inline double graph_distance(const FrtdMatrix& f1, const FrtdMatrix& f2) {
    detail::check_compatible(f1, f2);
    if (f1.nodes() != f2.nodes()) throw std::invalid_argument("node count mismatch");
    const int n = f1.nodes();
    double acc = 0.0;
    for (int i = 0; i < n; ++i)
        acc += 0.5 * (f1.values.row(i) - f2.values.row(i)).cwiseAbs().sum();
    return acc / (2.0 * n);
}

inline double graph_distance(const FrtdMatrix& fwd1, const FrtdMatrix& rev1,
                             const FrtdMatrix& fwd2, const FrtdMatrix& rev2) {
    detail::check_compatible(fwd1, fwd2);
    detail::check_compatible(rev1, rev2);
    if (fwd1.nodes() != fwd2.nodes()) throw std::invalid_argument("node count mismatch");
    const int n = fwd1.nodes();
    double acc = 0.0;
    for (int i = 0; i < n; ++i)
        acc += 0.25 * ((fwd1.values.row(i) - fwd2.values.row(i)).cwiseAbs().sum() +
                       (rev1.values.row(i) - rev2.values.row(i)).cwiseAbs().sum());
    return acc / (2.0 * n);
}

// s_ij = exp(-d_ij); unit diagonal for intra-graph distance matrices.
inline Eigen::MatrixXd similarity_kernel(const DistanceMatrix& dm) {
    if (dm.rows() != dm.cols())
        throw std::invalid_argument("similarity kernel needs a square distance matrix");
    return (-dm.values).array().exp();
}

inline std::string distance_csv(const DistanceMatrix& dm) {
    std::string out;
    for (int i = 0; i < dm.rows(); ++i) {
        for (int j = 0; j < dm.cols(); ++j) {
            if (j) out += ",";
            out += format_double(dm.values(i, j));
        }
        out += "\n";
    }
    return out;
}

}  // namespace frtd
