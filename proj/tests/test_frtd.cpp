#include <doctest.h>

#include <random>

#include "frtd/distance.hpp"
#include "frtd/frtd.hpp"
#include "frtd/generators.hpp"
#include "oracles.hpp"

using frtd::compute_frtd;

TEST_CASE("P_2 returns deterministically at t=2") {
    auto f = compute_frtd(frtd::gen::path(2), 4);
    for (int i = 0; i < 2; ++i) {
        CHECK(f.values(i, 1) == doctest::Approx(1.0));
        CHECK(f.values(i, 0) == 0.0);
        CHECK(f.values(i, 2) == doctest::Approx(0.0));
        CHECK(f.values(i, 4) == doctest::Approx(0.0));  // tail
    }
}

TEST_CASE("triangle FRTD matches exhaustive enumeration") {
    auto g = frtd::gen::cycle(3);
    auto f = compute_frtd(g, 5);
    // geometric: each step after the first has probability 1/2 of returning
    CHECK(f.values(0, 1) == doctest::Approx(0.5));
    CHECK(f.values(0, 2) == doctest::Approx(0.25));
    CHECK(f.values(0, 3) == doctest::Approx(0.125));
    CHECK(f.values(0, 4) == doctest::Approx(0.0625));
    CHECK(f.values(0, 5) == doctest::Approx(0.0625));  // tail
    auto expected = oracle::frtd_by_enumeration(oracle::dense_transition(g), 0, 5);
    CHECK((f.values.row(0).transpose() - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("star FRTD, center and leaf") {
    auto g = frtd::gen::star(3);
    auto f = compute_frtd(g, 6);
    CHECK(f.values(0, 1) == doctest::Approx(1.0));  // center always returns at 2
    CHECK(f.values(1, 1) == doctest::Approx(1.0 / 3));
    CHECK(f.values(1, 3) == doctest::Approx(2.0 / 9));
    CHECK(f.values(1, 5) == doctest::Approx(4.0 / 27));
    CHECK(f.values(1, 6) == doctest::Approx(8.0 / 27));  // tail
    for (int i = 0; i < g.n; ++i) {
        auto expected = oracle::frtd_by_enumeration(oracle::dense_transition(g), i, 6);
        CHECK((f.values.row(i).transpose() - expected).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("rows are normalized distributions") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto g = frtd::gen::gnp_connected(4 + static_cast<int>(seed) * 3, 0.35, seed);
        auto f = compute_frtd(g, 20);
        for (int i = 0; i < g.n; ++i) {
            CHECK(std::abs(f.values.row(i).sum() - 1.0) < 1e-12);
            CHECK(f.values.row(i).minCoeff() >= -1e-14);
            CHECK(f.values.row(i).maxCoeff() <= 1.0 + 1e-14);
            CHECK(f.values(i, 0) == 0.0);  // no return at t=1 on simple graphs
        }
    }
}

TEST_CASE("bipartite graphs have zero odd-step probabilities") {
    for (const auto& g : {frtd::gen::path(6), frtd::gen::cycle(8), frtd::gen::star(4)}) {
        auto f = compute_frtd(g, 12);
        for (int i = 0; i < g.n; ++i)
            for (int t = 1; t <= 12; t += 2) CHECK(f.values(i, t - 1) == 0.0);
    }
}

TEST_CASE("permutation equivariance") {
    auto g = frtd::gen::gnp_connected(12, 0.35, 99);
    std::vector<int> perm = {5, 0, 7, 2, 11, 3, 1, 10, 4, 8, 6, 9};
    auto h = frtd::permute_graph(g, perm);
    auto fg = compute_frtd(g, 16);
    auto fh = compute_frtd(h, 16);
    for (int i = 0; i < g.n; ++i)
        CHECK((fg.values.row(i) - fh.values.row(perm[i])).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("vertex-transitive graphs give identical rows") {
    for (const auto& g : {frtd::gen::cycle(7), frtd::gen::complete(6)}) {
        auto f = compute_frtd(g, 24);
        for (int i = 1; i < g.n; ++i)
            CHECK((f.values.row(i) - f.values.row(0)).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("tail mass is non-increasing in K") {
    auto g = frtd::gen::gnp_connected(15, 0.3, 5);
    double prev_tail = 2.0;
    for (int k : {4, 8, 16, 32}) {
        auto f = compute_frtd(g, k);
        double tail = f.values.col(k).maxCoeff();
        CHECK(tail <= prev_tail + 1e-14);
        prev_tail = tail;
    }
}

TEST_CASE("argument validation") {
    CHECK_THROWS(compute_frtd(frtd::gen::cycle(4), 1));
    CHECK_THROWS(compute_frtd(frtd::gen::directed_cycle(3), 8));
    auto f = compute_frtd(frtd::gen::cycle(4), 8);
    CHECK_THROWS(f.row(-1));
    CHECK_THROWS(f.row(4));
    CHECK(frtd::frtd_of_node(f, 0).size() == 9);
}

TEST_CASE("directed 2-cycle without teleportation") {
    auto g = frtd::gen::directed_cycle(2);
    auto [fwd, rev] = frtd::compute_frtd_directed(g, 4, {0.0});
    for (int i = 0; i < 2; ++i) {
        CHECK(fwd.values(i, 1) == doctest::Approx(1.0));
        CHECK(rev.values(i, 1) == doctest::Approx(1.0));
    }
}

TEST_CASE("single node teleports back immediately") {
    frtd::Graph g;
    g.n = 1;
    g.m = 0;
    g.directed = true;
    g.adjacency.resize(1, 1);
    g.node_labels = {"0"};
    auto [fwd, rev] = frtd::compute_frtd_directed(g, 3, {0.15});
    CHECK(fwd.values(0, 0) == doctest::Approx(1.0));
    CHECK(rev.values(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("directed 3-cycle with teleportation matches enumeration") {
    auto g = frtd::gen::directed_cycle(3);
    const double alpha = 0.15;
    auto [fwd, rev] = frtd::compute_frtd_directed(g, 6, {alpha});
    Eigen::MatrixXd t(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            t(i, j) = (1.0 - alpha) * (j == (i + 1) % 3 ? 1.0 : 0.0) + alpha / 3.0;
    for (int i = 0; i < 3; ++i) {
        auto expected = oracle::frtd_by_enumeration(t, i, 6);
        CHECK((fwd.values.row(i).transpose() - expected).cwiseAbs().maxCoeff() < 1e-12);
    }
    // reversed cycle is the mirror image; rows must match forward by symmetry
    for (int i = 0; i < 3; ++i)
        CHECK((rev.values.row(i) - fwd.values.row(i)).cwiseAbs().maxCoeff() < 1e-12);
    for (int i = 0; i < 3; ++i) {
        CHECK(std::abs(fwd.values.row(i).sum() - 1.0) < 1e-12);
        CHECK(std::abs(rev.values.row(i).sum() - 1.0) < 1e-12);
    }
}

TEST_CASE("directed validation") {
    auto g = frtd::gen::directed_cycle(3);
    CHECK_THROWS(frtd::compute_frtd_directed(g, 1, {0.15}));
    CHECK_THROWS(frtd::compute_frtd_directed(g, 6, {1.0}));
    CHECK_THROWS(frtd::compute_frtd_directed(g, 6, {-0.1}));
    // dangling node with alpha = 0 cannot be walked
    frtd::Graph dangling = frtd::make_graph(2, {{0, 1, 1.0}}, true);
    CHECK_THROWS(frtd::compute_frtd_directed(dangling, 4, {0.0}));
    auto [fwd, rev] = frtd::compute_frtd_directed(dangling, 4, {0.15});
    CHECK(std::abs(fwd.values.row(1).sum() - 1.0) < 1e-12);
}

TEST_CASE("isolated nodes carry pure tail when allowed") {
    frtd::Graph g = frtd::make_graph(3, {{0, 1, 1.0}}, false, {}, true);
    CHECK_THROWS(compute_frtd(g, 4));
    auto f = compute_frtd(g, 4, true);
    CHECK(f.values(2, 4) == 1.0);
    CHECK(f.values.row(2).head(4).cwiseAbs().maxCoeff() == 0.0);
    CHECK(f.values(0, 1) == doctest::Approx(1.0));
}
