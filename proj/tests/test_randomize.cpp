#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>

#include "frtd/generators.hpp"
#include "frtd/randomize.hpp"
#include "oracles.hpp"

namespace {

std::vector<int> degree_sequence(const frtd::mc::EdgeSet& es) {
    std::vector<int> deg(es.n, 0);
    for (auto [u, v] : es.edges) {
        ++deg[u];
        ++deg[v];
    }
    std::sort(deg.begin(), deg.end());
    return deg;
}

std::int64_t state_key(const frtd::mc::EdgeSet& es) {
    std::int64_t key = 0;
    for (auto [u, v] : es.edges) key |= std::int64_t{1} << (u * es.n + v);
    return key;
}

}  // namespace

TEST_CASE("EdgeSet round trip") {
    auto g = frtd::gen::gnp_connected(10, 0.35, 3);
    auto es = frtd::mc::EdgeSet::from_graph(g);
    CHECK(static_cast<int>(es.edges.size()) == g.m);
    CHECK(es.has(frtd::edge_list(g)[0].u, frtd::edge_list(g)[0].v));
    auto g2 = es.to_graph();
    CHECK(g2.m == g.m);
    for (const auto& e : frtd::edge_list(g)) CHECK(g2.adjacency.coeff(e.u, e.v) == 1.0);
}

TEST_CASE("edge move preserves edge count and simplicity") {
    auto es = frtd::mc::EdgeSet::from_graph(frtd::gen::gnp_connected(8, 0.4, 1));
    const std::size_t m = es.edges.size();
    std::mt19937_64 rng(5);
    for (int i = 0; i < 2000; ++i) {
        auto mv = frtd::mc::propose_edge_move(es, rng, 100);
        CHECK(mv.kind == frtd::mc::ProposalKind::edge_move);
        CHECK(es.edges.size() == m);
        CHECK(es.members.size() == m);
        for (auto [u, v] : es.edges) CHECK(u != v);
    }
}

TEST_CASE("rewire preserves the degree sequence") {
    auto es = frtd::mc::EdgeSet::from_graph(frtd::gen::gnp_connected(10, 0.4, 2));
    auto original = degree_sequence(es);
    std::mt19937_64 rng(11);
    int applied = 0;
    for (int i = 0; i < 2000; ++i) {
        auto mv = frtd::mc::propose_rewire(es, rng, 100);
        if (mv.kind == frtd::mc::ProposalKind::rewire) ++applied;
        CHECK(degree_sequence(es) == original);
        CHECK(es.members.size() == es.edges.size());
    }
    CHECK(applied > 1000);
}

TEST_CASE("directed rewire preserves in and out degrees") {
    std::vector<frtd::WeightedEdge> edges = {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 0, 1},
                                             {0, 2, 1}, {1, 3, 1}, {2, 0, 1}};
    auto es = frtd::mc::EdgeSet::from_graph(frtd::make_graph(4, edges, true));
    std::vector<int> in(4, 0), out(4, 0);
    for (auto [u, v] : es.edges) {
        ++out[u];
        ++in[v];
    }
    std::mt19937_64 rng(7);
    for (int i = 0; i < 500; ++i) {
        frtd::mc::propose_rewire(es, rng, 100);
        std::vector<int> in2(4, 0), out2(4, 0);
        for (auto [u, v] : es.edges) {
            ++out2[u];
            ++in2[v];
        }
        CHECK(in2 == in);
        CHECK(out2 == out);
    }
}

TEST_CASE("revert restores the previous state") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 200; ++trial) {
        auto es = frtd::mc::EdgeSet::from_graph(frtd::gen::gnp_connected(8, 0.4, trial + 1));
        auto before = state_key(es);
        auto mv = (trial % 2 == 0) ? frtd::mc::propose_edge_move(es, rng, 100)
                                   : frtd::mc::propose_rewire(es, rng, 100);
        // edge moves may reinsert the removed edge (a valid self-move), so the
        // state is not guaranteed to change; rewires always change it
        if (mv.kind == frtd::mc::ProposalKind::rewire) CHECK(state_key(es) != before);
        frtd::mc::revert(es, mv);
        CHECK(state_key(es) == before);
    }
}

TEST_CASE("edge-move chain is uniform over fixed-m graphs") {
    // n = 4, m = 3: C(6, 3) = 20 states. The move is symmetric, so the
    // always-accept (beta = 0) chain has the uniform stationary distribution.
    auto es = frtd::mc::EdgeSet::from_graph(frtd::gen::path(4));
    std::mt19937_64 rng(99);
    for (int i = 0; i < 5000; ++i) frtd::mc::propose_edge_move(es, rng, 100);  // burn-in
    std::map<std::int64_t, long long> counts;
    const int steps = 200000;
    for (int i = 0; i < steps; ++i) {
        frtd::mc::propose_edge_move(es, rng, 100);
        ++counts[state_key(es)];
    }
    REQUIRE(counts.size() == 20);
    std::vector<long long> observed;
    for (const auto& [key, c] : counts) observed.push_back(c);
    // correlated samples inflate the statistic; thin by using a loose cutoff
    double p = oracle::chi_square_p_value(observed, steps / 20.0);
    for (long long c : observed) {
        CHECK(c > steps / 40);
        CHECK(c < steps / 10);
    }
    CHECK(p > 1e-12);
}

TEST_CASE("acceptance probability formulas") {
    CHECK(frtd::metropolis_acceptance_probability(3.0, -0.2) == 1.0);
    CHECK(frtd::metropolis_acceptance_probability(3.0, 0.0) == 1.0);
    CHECK(frtd::metropolis_acceptance_probability(2.0, 0.5) == doctest::Approx(std::exp(-1.0)));
    // exponent is (beta_i - beta_j)(d_i - d_j): the swap is certain when the
    // hotter chain already holds the lower-distance graph
    CHECK(frtd::swap_acceptance_probability(1.0, 2.0, 0.1, 0.3) == 1.0);
    CHECK(frtd::swap_acceptance_probability(1.0, 2.0, 0.3, 0.1) ==
          doctest::Approx(std::exp(-0.2)));
}

TEST_CASE("swap step exchanges states when guaranteed") {
    std::vector<frtd::ChainState> chains(2);
    chains[0].beta = 1.0;
    chains[1].beta = 5.0;
    chains[0].distance = 0.1;  // hot chain holds the better graph: p = 1
    chains[1].distance = 0.5;
    chains[0].graph = frtd::mc::EdgeSet::from_graph(frtd::gen::path(4));
    chains[1].graph = frtd::mc::EdgeSet::from_graph(frtd::gen::star(4));
    std::mt19937_64 rng(0);
    frtd::swap_step(chains, rng, 0);
    CHECK(chains[0].distance == 0.5);
    CHECK(chains[1].distance == 0.1);
    CHECK(chains[0].swap_count == 1);
    CHECK(chains[1].swap_count == 1);
    CHECK(chains[0].graph.edges.size() == 4);  // star edges moved down
}

TEST_CASE("log binomial") {
    CHECK(frtd::log_binomial(6, 3) == doctest::Approx(std::log(20.0)));
    CHECK(frtd::log_binomial(10, 0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(frtd::log_binomial(561, 78) > 0.0);  // large inputs stay finite
}

TEST_CASE("config validation") {
    frtd::GibbsConfig cfg;
    cfg.betas = {0.0, 1.0, 5.0};
    CHECK_NOTHROW(cfg.validate());
    cfg.betas = {};
    CHECK_THROWS(cfg.validate());
    cfg.betas = {1.0, 0.5};
    CHECK_THROWS(cfg.validate());
    cfg.betas = {-1.0};
    CHECK_THROWS(cfg.validate());
    cfg.betas = {0.0};
    cfg.edge_move_probability = 1.5;
    CHECK_THROWS(cfg.validate());
    cfg.edge_move_probability = 0.4;
    cfg.truncation = 1;
    CHECK_THROWS(cfg.validate());
}

TEST_CASE("compute_statistics on hand-made samples") {
    auto target = frtd::gen::gnp_connected(8, 0.5, 4);
    frtd::GibbsConfig cfg;
    cfg.betas = {0.0, 2.0};
    auto edges = [&]() {
        std::vector<std::pair<int, int>> e;
        for (const auto& we : frtd::edge_list(target)) e.emplace_back(we.u, we.v);
        return e;
    }();
    std::vector<std::vector<frtd::GraphSample>> samples(2);
    samples[0] = {{edges, 0.2}, {edges, 0.4}};
    samples[1] = {{edges, 0.1}, {edges, 0.1}};

    auto stats = frtd::compute_statistics(samples, target, cfg);
    REQUIRE(stats.per_beta.size() == 2);
    CHECK(stats.per_beta[0].mean_distance == doctest::Approx(0.3));
    CHECK(stats.per_beta[0].var_distance == doctest::Approx(0.01));
    CHECK(stats.per_beta[0].specific_heat == 0.0);
    CHECK(stats.per_beta[1].specific_heat == doctest::Approx(4.0 * 0.0));

    // samples equal the target, so node correlations are 1 and ratios are 1
    for (const auto& [name, r] : stats.per_beta[0].node_correlation_medians)
        CHECK(r == doctest::Approx(1.0).epsilon(1e-9));
    for (const auto& [name, r] : stats.per_beta[0].global_ratios)
        CHECK(r == doctest::Approx(1.0).epsilon(1e-9));

    // entropy: S(0) = log C(28, m); S(2) = S(0) - 2 * 0.1 + trapezoid
    const double s0 = frtd::log_binomial(28, target.m);
    CHECK(stats.per_beta[0].entropy == doctest::Approx(s0));
    const double integral = 0.5 * (0.3 + 0.1) * 2.0;
    CHECK(stats.per_beta[1].entropy == doctest::Approx(s0 - 2.0 * 0.1 + integral));

    // degree-preserving mode has no absolute reference point
    cfg.degree_preserving_only = true;
    auto stats2 = frtd::compute_statistics(samples, target, cfg);
    CHECK(std::isnan(stats2.per_beta[0].entropy));

    samples[1].clear();
    CHECK_THROWS(frtd::compute_statistics(samples, target, cfg));
}

TEST_CASE("run_ensemble smoke test") {
    auto target = frtd::gen::gnp_connected(10, 0.35, 6);
    frtd::GibbsConfig cfg;
    cfg.betas = {0.0, 10.0, 40.0};
    cfg.burn_in = 300;
    cfg.samples_per_chain = 30;
    cfg.sample_interval = 5;
    cfg.swap_interval = 50;
    cfg.truncation = 8;
    cfg.seed = 17;
    cfg.audit_interval = 100;

    auto run = frtd::run_ensemble(target, cfg);
    REQUIRE(run.samples.size() == 3);
    for (const auto& s : run.samples) CHECK(static_cast<int>(s.size()) == 30);
    for (double rate : run.acceptance_rates) {
        CHECK(rate > 0.0);
        CHECK(rate <= 1.0);
    }
    // cold chains track the target better than the free chain
    const auto& pb = run.statistics.per_beta;
    CHECK(pb[2].mean_distance < pb[0].mean_distance);
    // recorded distances match a recomputation
    for (const auto& sample : run.samples[1]) {
        std::vector<frtd::WeightedEdge> edges;
        for (auto [u, v] : sample.edges) edges.push_back({u, v, 1.0});
        auto g = frtd::make_graph(target.n, edges, false, {}, true);
        auto f = frtd::compute_frtd(g, cfg.truncation, true);
        auto tf = frtd::compute_frtd(target, cfg.truncation);
        CHECK(frtd::graph_distance(f, tf) == doctest::Approx(sample.distance).epsilon(1e-9));
    }

    SUBCASE("independent of thread count") {
        int saved = frtd::thread_count().load();
        frtd::thread_count() = 1;
        auto serial = frtd::run_ensemble(target, cfg);
        frtd::thread_count() = saved;
        auto threaded = frtd::run_ensemble(target, cfg);
        REQUIRE(serial.samples.size() == threaded.samples.size());
        for (std::size_t c = 0; c < serial.samples.size(); ++c) {
            REQUIRE(serial.samples[c].size() == threaded.samples[c].size());
            for (std::size_t s = 0; s < serial.samples[c].size(); ++s) {
                CHECK(serial.samples[c][s].edges == threaded.samples[c][s].edges);
                CHECK(serial.samples[c][s].distance == threaded.samples[c][s].distance);
            }
        }
    }
}

TEST_CASE("degree-preserving ensemble keeps every degree sequence") {
    auto target = frtd::gen::gnp_connected(9, 0.4, 8);
    frtd::GibbsConfig cfg;
    cfg.betas = {0.0, 20.0};
    cfg.burn_in = 200;
    cfg.samples_per_chain = 20;
    cfg.sample_interval = 5;
    cfg.swap_interval = 50;
    cfg.truncation = 8;
    cfg.degree_preserving_only = true;
    cfg.seed = 4;

    auto target_deg = degree_sequence(frtd::mc::EdgeSet::from_graph(target));
    auto run = frtd::run_ensemble(target, cfg);
    for (const auto& per_beta : run.samples)
        for (const auto& sample : per_beta) {
            frtd::mc::EdgeSet es;
            es.n = target.n;
            for (auto [u, v] : sample.edges) es.add(u, v);
            CHECK(degree_sequence(es) == target_deg);
        }
}

TEST_CASE("run_ensemble rejects disconnected undirected targets") {
    auto target = frtd::make_graph(4, {{0, 1, 1.0}, {2, 3, 1.0}}, false);
    frtd::GibbsConfig cfg;
    cfg.betas = {0.0};
    cfg.burn_in = 10;
    cfg.samples_per_chain = 2;
    cfg.sample_interval = 1;
    cfg.truncation = 4;
    CHECK_THROWS(frtd::run_ensemble(target, cfg));
}
