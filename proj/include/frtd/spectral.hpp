#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "frtd/graph.hpp"

namespace frtd {

// Distinct eigenvalues of the symmetric normalized adjacency (descending),
// their multiplicities, and per-node squared eigenvector masses. Raw
// eigenvectors are not retained; the masses are all the FRTD needs.
struct SpectralDecomposition {
    std::vector<double> distinct_eigenvalues;
    std::vector<int> multiplicities;
    Eigen::MatrixXd mass;  // n x N, mass(i, a) = sum_b psi_{a,b,i}^2
    double degeneracy_tol = 1e-8;

    int nodes() const { return static_cast<int>(mass.rows()); }
    int distinct() const { return static_cast<int>(distinct_eigenvalues.size()); }
};

struct EquivalenceVerdict {
    bool cospectral = false;
    bool mass_matched = false;
    bool equivalent = false;
    double max_eigenvalue_gap = 0.0;
    double max_mass_gap = 0.0;
};

inline SpectralDecomposition decompose(const Graph& g, double degeneracy_tol = 1e-8,
                                       int dense_limit = 2000) {
    if (g.directed) throw std::invalid_argument("decompose requires an undirected graph");
    if (g.n > dense_limit)
        throw std::invalid_argument("graph exceeds dense eigensolver limit (" +
                                    std::to_string(dense_limit) + " nodes)");
    Eigen::MatrixXd x = Eigen::MatrixXd(symmetric_normalized_adjacency(g));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(x);
    if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");

    const int n = g.n;
    // Eigen returns ascending eigenvalues; walk them descending and merge
    // groups closer than degeneracy_tol.
    SpectralDecomposition sd;
    sd.degeneracy_tol = degeneracy_tol;
    std::vector<Eigen::VectorXd> group_mass;
    for (int idx = n - 1; idx >= 0; --idx) {
        double lambda = solver.eigenvalues()[idx];
        Eigen::VectorXd sq = solver.eigenvectors().col(idx).array().square();
        if (!sd.distinct_eigenvalues.empty() &&
            std::abs(sd.distinct_eigenvalues.back() - lambda) <= degeneracy_tol) {
            sd.multiplicities.back() += 1;
            group_mass.back() += sq;
        } else {
            sd.distinct_eigenvalues.push_back(lambda);
            sd.multiplicities.push_back(1);
            group_mass.push_back(sq);
        }
    }
    sd.mass.resize(n, static_cast<int>(group_mass.size()));
    for (int a = 0; a < sd.distinct(); ++a) sd.mass.col(a) = group_mass[a];
    return sd;
}

// Any-order return probabilities r_i(t) = sum_a lambda_a^t mass(i, a).
inline Eigen::VectorXd return_probabilities(const SpectralDecomposition& sd, int i, int max_steps) {
    Eigen::VectorXd r = Eigen::VectorXd::Zero(max_steps);
    std::vector<double> power(sd.distinct(), 1.0);
    for (int t = 1; t <= max_steps; ++t) {
        double acc = 0.0;
        for (int a = 0; a < sd.distinct(); ++a) {
            power[a] *= sd.distinct_eigenvalues[a];
            acc += power[a] * sd.mass(i, a);
        }
        r[t - 1] = acc;
    }
    return r;
}

// Renewal inversion f(t) = r(t) - sum_{s<t} f(s) r(t-s), plus tail column.
inline Eigen::VectorXd frtd_from_spectrum(const SpectralDecomposition& sd, int i, int max_steps) {
    if (max_steps < 2) throw std::invalid_argument("max_steps must be >= 2");
    if (i < 0 || i >= sd.nodes()) throw std::out_of_range("node index out of range");
    Eigen::VectorXd r = return_probabilities(sd, i, max_steps);
    Eigen::VectorXd f = Eigen::VectorXd::Zero(max_steps + 1);
    for (int t = 1; t <= max_steps; ++t) {
        double acc = r[t - 1];
        for (int s = 1; s < t; ++s) acc -= f[s - 1] * r[t - s - 1];
        f[t - 1] = acc;
    }
    f[max_steps] = 1.0 - f.head(max_steps).sum();
    return f;
}

// Forward convolution r(t) = f(t) + sum_{s<t} f(s) r(t-s); inverse of the
// renewal inversion, used by property tests.
inline Eigen::VectorXd return_from_frtd(const Eigen::VectorXd& f_no_tail) {
    const int k = static_cast<int>(f_no_tail.size());
    Eigen::VectorXd r = Eigen::VectorXd::Zero(k);
    for (int t = 1; t <= k; ++t) {
        double acc = f_no_tail[t - 1];
        for (int s = 1; s < t; ++s) acc += f_no_tail[s - 1] * r[t - s - 1];
        r[t - 1] = acc;
    }
    return r;
}

namespace detail {

struct SpectrumMatch {
    bool matched = false;
    double max_gap = 0.0;
};

inline SpectrumMatch match_spectra(const SpectralDecomposition& a, const SpectralDecomposition& b,
                                   double tol) {
    SpectrumMatch m;
    if (a.distinct() != b.distinct()) return m;
    double gap = 0.0;
    for (int i = 0; i < a.distinct(); ++i) {
        if (a.multiplicities[i] != b.multiplicities[i]) return m;
        gap = std::max(gap, std::abs(a.distinct_eigenvalues[i] - b.distinct_eigenvalues[i]));
    }
    m.max_gap = gap;
    m.matched = gap <= tol;
    return m;
}

}  // namespace detail

inline bool graphs_cospectral(const SpectralDecomposition& a, const SpectralDecomposition& b,
                              double tol = 1e-8) {
    if (a.nodes() != b.nodes()) return false;
    return detail::match_spectra(a, b, tol).matched;
}

inline EquivalenceVerdict nodes_frtd_equivalent(const SpectralDecomposition& a, int i,
                                                const SpectralDecomposition& b, int j,
                                                double tol = 1e-8) {
    if (a.degeneracy_tol != b.degeneracy_tol)
        throw std::invalid_argument("decompositions built with different degeneracy tolerances");
    if (i < 0 || i >= a.nodes() || j < 0 || j >= b.nodes())
        throw std::out_of_range("node index out of range");
    EquivalenceVerdict v;
    auto spec = detail::match_spectra(a, b, tol);
    v.max_eigenvalue_gap = spec.max_gap;
    v.cospectral = spec.matched;
    if (a.distinct() == b.distinct()) {
        double gap = 0.0;
        for (int alpha = 0; alpha < a.distinct(); ++alpha)
            gap = std::max(gap, std::abs(a.mass(i, alpha) - b.mass(j, alpha)));
        v.max_mass_gap = gap;
        v.mass_matched = gap <= tol;
    }
    v.equivalent = v.cospectral && v.mass_matched;
    return v;
}

}  // namespace frtd
