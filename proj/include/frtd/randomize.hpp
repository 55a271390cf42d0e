#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "frtd/descriptors.hpp"
#include "frtd/distance.hpp"
#include "frtd/frtd.hpp"
#include "frtd/generators.hpp"
#include "frtd/graph.hpp"
#include "frtd/parallel.hpp"

namespace frtd {

struct GibbsConfig {
    std::vector<double> betas;  // ascending, all >= 0
    long long burn_in = 200000;
    int samples_per_chain = 500;
    int sample_interval = 10;
    int swap_interval = 100;
    int truncation = 14;
    double edge_move_probability = 0.4;
    bool degree_preserving_only = false;  // forced on in directed mode
    bool directed = false;
    double alpha = 0.15;  // teleportation for directed FRTDs
    std::uint64_t seed = 0;
    long long audit_interval = 10000;
    int proposal_retry_cap = 100;

    void validate() const {
        if (betas.empty()) throw std::invalid_argument("empty beta ladder");
        double prev = -1.0;
        for (double b : betas) {
            if (b < 0.0 || b < prev) throw std::invalid_argument("betas must be ascending and >= 0");
            prev = b;
        }
        if (edge_move_probability < 0.0 || edge_move_probability > 1.0)
            throw std::invalid_argument("edge_move_probability must lie in [0, 1]");
        if (sample_interval < 1 || swap_interval < 1)
            throw std::invalid_argument("intervals must be >= 1");
        if (truncation < 2) throw std::invalid_argument("truncation must be >= 2");
    }
};

namespace mc {

// Mutable simple graph for the sampler; undirected edges stored with u < v.
struct EdgeSet {
    int n = 0;
    bool directed = false;
    std::vector<std::pair<int, int>> edges;
    std::unordered_set<std::int64_t> members;

    static std::int64_t key(int u, int v, int n, bool directed) {
        if (!directed && u > v) std::swap(u, v);
        return static_cast<std::int64_t>(u) * n + v;
    }
    bool has(int u, int v) const { return members.count(key(u, v, n, directed)) > 0; }
    void add(int u, int v) {
        if (!directed && u > v) std::swap(u, v);
        edges.emplace_back(u, v);
        members.insert(key(u, v, n, directed));
    }
    void remove_at(std::size_t idx) {
        auto [u, v] = edges[idx];
        members.erase(key(u, v, n, directed));
        edges[idx] = edges.back();
        edges.pop_back();
    }

    static EdgeSet from_graph(const Graph& g) {
        EdgeSet es;
        es.n = g.n;
        es.directed = g.directed;
        for (const auto& e : edge_list(g)) es.add(e.u, e.v);
        return es;
    }
    Graph to_graph() const {
        std::vector<WeightedEdge> e;
        e.reserve(edges.size());
        for (auto [u, v] : edges) e.push_back({u, v, 1.0});
        return make_graph(n, e, directed, {}, /*allow_isolated=*/true);
    }
};

enum class ProposalKind { edge_move, rewire, rejected };

struct Move {
    ProposalKind kind = ProposalKind::rejected;
    // removed and inserted pairs, enough to revert
    std::vector<std::pair<int, int>> removed;
    std::vector<std::pair<int, int>> inserted;
};

// Edge relocation: delete a uniform edge, insert a uniform absent non-loop
// pair. Symmetric; preserves m; reaches every m-edge graph.
inline Move propose_edge_move(EdgeSet& es, std::mt19937_64& rng, int retry_cap) {
    Move mv;
    if (es.edges.empty() || es.n < 2) return mv;
    std::uniform_int_distribution<std::size_t> pick_edge(0, es.edges.size() - 1);
    std::uniform_int_distribution<int> pick_node(0, es.n - 1);
    std::size_t idx = pick_edge(rng);
    auto old_edge = es.edges[idx];
    for (int attempt = 0; attempt < retry_cap; ++attempt) {
        int u = pick_node(rng), v = pick_node(rng);
        if (u == v) continue;
        if (!es.directed && u > v) std::swap(u, v);
        bool is_old = (std::make_pair(u, v) == old_edge);
        if (!is_old && es.has(u, v)) continue;
        es.remove_at(idx);
        es.add(u, v);
        mv.kind = ProposalKind::edge_move;
        mv.removed.push_back(old_edge);
        mv.inserted.emplace_back(u, v);
        return mv;
    }
    return mv;
}

// Double-edge swap (undirected) or in/out-degree preserving swap (directed).
inline Move propose_rewire(EdgeSet& es, std::mt19937_64& rng, int retry_cap) {
    Move mv;
    if (es.edges.size() < 2) return mv;
    std::uniform_int_distribution<std::size_t> pick_edge(0, es.edges.size() - 1);
    std::uniform_int_distribution<int> coin(0, 1);
    for (int attempt = 0; attempt < retry_cap; ++attempt) {
        std::size_t i1 = pick_edge(rng), i2 = pick_edge(rng);
        if (i1 == i2) continue;
        auto [a, b] = es.edges[i1];
        auto [c, d] = es.edges[i2];
        if (!es.directed && coin(rng)) std::swap(c, d);
        // (a,b),(c,d) -> (a,d),(c,b)
        if (a == d || c == b || a == c || b == d) continue;
        if (es.has(a, d) || es.has(c, b)) continue;
        if (i1 < i2) std::swap(i1, i2);  // remove the higher index first
        auto e1 = es.edges[i1], e2 = es.edges[i2];
        es.remove_at(i1);
        es.remove_at(i2);
        es.add(a, d);
        es.add(c, b);
        mv.kind = ProposalKind::rewire;
        mv.removed.push_back(e1);
        mv.removed.push_back(e2);
        mv.inserted.emplace_back(a, d);
        mv.inserted.emplace_back(c, b);
        return mv;
    }
    return mv;
}

inline void revert(EdgeSet& es, const Move& mv) {
    for (auto [u, v] : mv.inserted) {
        for (std::size_t i = 0; i < es.edges.size(); ++i) {
            auto key = std::make_pair(es.directed ? u : std::min(u, v),
                                      es.directed ? v : std::max(u, v));
            if (es.edges[i] == key) {
                es.remove_at(i);
                break;
            }
        }
    }
    for (auto [u, v] : mv.removed) es.add(u, v);
}

}  // namespace mc

struct ChainState {
    mc::EdgeSet graph;
    double beta = 0.0;
    double distance = 0.0;
    long long accept_count = 0;
    long long proposal_count = 0;
    long long swap_count = 0;
    std::mt19937_64 rng;
};

struct GraphSample {
    std::vector<std::pair<int, int>> edges;
    double distance = 0.0;
};

struct BetaStatistics {
    double beta = 0.0;
    double mean_distance = 0.0;
    double var_distance = 0.0;
    double specific_heat = 0.0;
    double entropy = std::numeric_limits<double>::quiet_NaN();
    std::map<std::string, double> node_correlation_medians;
    std::map<std::string, double> global_ratios;
};

struct EnsembleStatistics {
    std::vector<BetaStatistics> per_beta;
};

struct EnsembleRun {
    std::vector<std::vector<GraphSample>> samples;  // [beta index][sample]
    EnsembleStatistics statistics;
    std::vector<double> acceptance_rates;
    std::vector<long long> swap_counts;
};

namespace mc {

// Distance evaluator: graph_distance against the target FRTD at truncation K.
struct DistanceOracle {
    const GibbsConfig* cfg = nullptr;
    FrtdMatrix target_fwd;
    FrtdMatrix target_rev;  // directed mode only

    double operator()(const EdgeSet& es) const {
        Graph g = es.to_graph();
        if (cfg->directed) {
            auto [fwd, rev] = compute_frtd_directed(g, cfg->truncation, {cfg->alpha});
            return graph_distance(fwd, rev, target_fwd, target_rev);
        }
        FrtdMatrix f = compute_frtd(g, cfg->truncation, /*allow_isolated=*/true);
        return graph_distance(f, target_fwd);
    }
};

// One Metropolis step: propose, evaluate, accept with
// min{1, exp(-beta * (d_new - d_old))}.
inline void metropolis_step(ChainState& chain, const DistanceOracle& oracle,
                            const GibbsConfig& cfg) {
    ++chain.proposal_count;
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    Move mv;
    if (cfg.degree_preserving_only || u01(chain.rng) >= cfg.edge_move_probability)
        mv = propose_rewire(chain.graph, chain.rng, cfg.proposal_retry_cap);
    else
        mv = propose_edge_move(chain.graph, chain.rng, cfg.proposal_retry_cap);
    if (mv.kind == ProposalKind::rejected) return;

    double candidate_distance = oracle(chain.graph);
    double delta = candidate_distance - chain.distance;
    double accept_prob = delta <= 0.0 ? 1.0 : std::exp(-chain.beta * delta);
    if (accept_prob >= 1.0 || u01(chain.rng) < accept_prob) {
        chain.distance = candidate_distance;
        ++chain.accept_count;
    } else {
        revert(chain.graph, mv);
    }
}

}  // namespace mc

inline double metropolis_acceptance_probability(double beta, double delta_distance) {
    return std::min(1.0, std::exp(-beta * delta_distance));
}

inline double swap_acceptance_probability(double beta_i, double beta_j, double d_i, double d_j) {
    return std::min(1.0, std::exp((beta_i - beta_j) * (d_i - d_j)));
}

// Replica-exchange round over adjacent pairs; `round` alternates even/odd
// pairings. Swaps graph states between neighboring temperatures.
inline void swap_step(std::vector<ChainState>& chains, std::mt19937_64& swap_rng, int round) {
    if (chains.size() < 2) return;
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (std::size_t i = (round % 2 == 0) ? 0 : 1; i + 1 < chains.size(); i += 2) {
        double p = swap_acceptance_probability(chains[i].beta, chains[i + 1].beta,
                                               chains[i].distance, chains[i + 1].distance);
        if (p >= 1.0 || u01(swap_rng) < p) {
            std::swap(chains[i].graph, chains[i + 1].graph);
            std::swap(chains[i].distance, chains[i + 1].distance);
            ++chains[i].swap_count;
            ++chains[i + 1].swap_count;
        }
    }
}

// log of binomial(n, k) via lgamma; S(0) for the m-edge uniform ensemble.
inline double log_binomial(long long n, long long k) {
    return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
           std::lgamma(static_cast<double>(n - k) + 1.0);
}

inline EnsembleStatistics compute_statistics(
    const std::vector<std::vector<GraphSample>>& samples, const Graph& target,
    const GibbsConfig& cfg) {
    GibbsConfig checked = cfg;
    checked.validate();
    if (samples.size() != cfg.betas.size())
        throw std::invalid_argument("one sample vector per beta required");
    for (const auto& s : samples)
        if (s.empty()) throw std::invalid_argument("empty sample set for some beta");

    auto target_adj = descriptors::neighbor_lists(target);
    std::map<std::string, Eigen::VectorXd> target_node = {
        {"degree", descriptors::degrees(target_adj)},
        {"clustering", descriptors::local_clustering(target_adj)},
        {"betweenness", descriptors::betweenness(target_adj)},
        {"closeness", descriptors::closeness(target_adj)},
        {"eigenvector", descriptors::eigenvector_centrality(target)},
        {"pagerank", descriptors::pagerank(target)},
    };
    std::map<std::string, double> target_global = {
        {"mean_clustering", descriptors::mean_clustering(target_adj)},
        {"assortativity", descriptors::assortativity(target_adj)},
        {"triangles", static_cast<double>(descriptors::triangle_count(target_adj))},
        {"char_path_length", descriptors::characteristic_path_length(target_adj)},
        {"spectral_gap", descriptors::spectral_gap(target)},
    };

    EnsembleStatistics stats;
    stats.per_beta.resize(cfg.betas.size());
    const int nb = static_cast<int>(cfg.betas.size());

    parallel_blocks(nb, [&](int lo, int hi) {
        for (int b = lo; b < hi; ++b) {
            BetaStatistics& bs = stats.per_beta[b];
            bs.beta = cfg.betas[b];
            double sum = 0.0, sum2 = 0.0;
            std::map<std::string, std::vector<double>> correlations;
            std::map<std::string, double> ratio_sums;
            std::map<std::string, int> ratio_counts;
            for (const auto& sample : samples[b]) {
                sum += sample.distance;
                sum2 += sample.distance * sample.distance;
                std::vector<WeightedEdge> edges;
                for (auto [u, v] : sample.edges) edges.push_back({u, v, 1.0});
                Graph gp = make_graph(target.n, edges, target.directed, {}, true);
                auto adj = descriptors::neighbor_lists(gp);
                std::map<std::string, Eigen::VectorXd> node = {
                    {"degree", descriptors::degrees(adj)},
                    {"clustering", descriptors::local_clustering(adj)},
                    {"betweenness", descriptors::betweenness(adj)},
                    {"closeness", descriptors::closeness(adj)},
                    {"eigenvector", descriptors::eigenvector_centrality(gp)},
                    {"pagerank", descriptors::pagerank(gp)},
                };
                for (const auto& [name, vec] : node) {
                    double r = descriptors::pearson(target_node.at(name), vec);
                    if (std::isfinite(r)) correlations[name].push_back(r);
                }
                std::map<std::string, double> global = {
                    {"mean_clustering", descriptors::mean_clustering(adj)},
                    {"assortativity", descriptors::assortativity(adj)},
                    {"triangles", static_cast<double>(descriptors::triangle_count(adj))},
                    {"char_path_length", descriptors::characteristic_path_length(adj)},
                    {"spectral_gap", descriptors::spectral_gap(gp)},
                };
                for (const auto& [name, value] : global) {
                    double denom = target_global.at(name);
                    if (denom != 0.0) {
                        ratio_sums[name] += value / denom;
                        ratio_counts[name] += 1;
                    }
                }
            }
            const double count = static_cast<double>(samples[b].size());
            bs.mean_distance = sum / count;
            bs.var_distance = std::max(0.0, sum2 / count - bs.mean_distance * bs.mean_distance);
            bs.specific_heat = bs.beta * bs.beta * bs.var_distance;
            for (auto& [name, vals] : correlations) {
                std::sort(vals.begin(), vals.end());
                const std::size_t k = vals.size();
                bs.node_correlation_medians[name] =
                    k % 2 ? vals[k / 2] : 0.5 * (vals[k / 2 - 1] + vals[k / 2]);
            }
            for (const auto& [name, total] : ratio_sums)
                bs.global_ratios[name] = total / ratio_counts.at(name);
        }
    });

    // Entropy by thermodynamic integration from the ladder's first point.
    // Absolute when the ladder starts at beta = 0 in edge-move mode, where
    // S(0) = log C(n(n-1)/2, m) exactly; otherwise left undefined.
    if (!cfg.degree_preserving_only && !cfg.betas.empty() && cfg.betas.front() == 0.0) {
        const long long pairs = static_cast<long long>(target.n) * (target.n - 1) / 2;
        const double s0 = log_binomial(pairs, target.m);
        double integral = 0.0;
        stats.per_beta[0].entropy = s0;
        for (int b = 1; b < nb; ++b) {
            integral += 0.5 *
                        (stats.per_beta[b].mean_distance + stats.per_beta[b - 1].mean_distance) *
                        (cfg.betas[b] - cfg.betas[b - 1]);
            stats.per_beta[b].entropy =
                s0 - cfg.betas[b] * stats.per_beta[b].mean_distance + integral;
        }
    }
    return stats;
}

// Full parallel-tempering run. Chains advance independently between swap
// barriers; chain c draws from stream (seed, c), swaps from a dedicated
// stream, so results do not depend on the physical thread count.
inline EnsembleRun run_ensemble(const Graph& target, const GibbsConfig& cfg_in) {
    GibbsConfig cfg = cfg_in;
    if (cfg.directed) cfg.degree_preserving_only = true;
    cfg.validate();
    if (!cfg.directed && !is_connected(target))
        throw std::invalid_argument("undirected target must be connected");

    mc::DistanceOracle oracle;
    oracle.cfg = &cfg;
    if (cfg.directed) {
        auto [fwd, rev] = compute_frtd_directed(target, cfg.truncation, {cfg.alpha});
        oracle.target_fwd = std::move(fwd);
        oracle.target_rev = std::move(rev);
    } else {
        oracle.target_fwd = compute_frtd(target, cfg.truncation);
    }

    const int nchains = static_cast<int>(cfg.betas.size());
    std::vector<ChainState> chains(nchains);
    for (int c = 0; c < nchains; ++c) {
        chains[c].beta = cfg.betas[c];
        chains[c].rng.seed(cfg.seed * 0x9e3779b97f4a7c15ull + 0xda942042e4dd58b5ull * (c + 1));
        Graph init = cfg.degree_preserving_only
                         ? target
                         : gen::gnm(target.n, target.m, cfg.seed + 7919 * (c + 1));
        chains[c].graph = mc::EdgeSet::from_graph(init);
        chains[c].distance = oracle(chains[c].graph);
    }
    std::mt19937_64 swap_rng(cfg.seed * 0x9e3779b97f4a7c15ull + 0x2545f4914f6cdd1dull);

    EnsembleRun run;
    run.samples.resize(nchains);

    const long long total_steps =
        cfg.burn_in + static_cast<long long>(cfg.samples_per_chain) * cfg.sample_interval;
    long long step = 0;
    int swap_round = 0;
    while (step < total_steps) {
        const long long block = std::min<long long>(cfg.swap_interval, total_steps - step);
        parallel_blocks(nchains, [&](int lo, int hi) {
            for (int c = lo; c < hi; ++c) {
                for (long long s = 0; s < block; ++s) {
                    mc::metropolis_step(chains[c], oracle, cfg);
                    const long long now = step + s + 1;
                    if (now > cfg.burn_in && (now - cfg.burn_in) % cfg.sample_interval == 0 &&
                        static_cast<int>(run.samples[c].size()) < cfg.samples_per_chain)
                        run.samples[c].push_back({chains[c].graph.edges, chains[c].distance});
                    if (cfg.audit_interval > 0 && now % cfg.audit_interval == 0) {
                        double fresh = oracle(chains[c].graph);
                        if (std::abs(fresh - chains[c].distance) > 1e-9)
                            throw std::runtime_error("distance cache audit failed");
                        chains[c].distance = fresh;
                    }
                }
            }
        });
        step += block;
        if (step < total_steps) swap_step(chains, swap_rng, swap_round++);
    }

    for (const auto& chain : chains) {
        run.acceptance_rates.push_back(
            chain.proposal_count ? static_cast<double>(chain.accept_count) / chain.proposal_count
                                 : 0.0);
        run.swap_counts.push_back(chain.swap_count);
    }
    run.statistics = compute_statistics(run.samples, target, cfg);
    return run;
}

}  // namespace frtd
