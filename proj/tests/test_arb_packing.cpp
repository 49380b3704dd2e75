#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "mlp/arb_packing.hpp"

#include <random>
#include <sstream>

using namespace mlp;

static WeightedDigraph graph(int n, std::initializer_list<std::tuple<int, int, Weight>> arcs) {
    WeightedDigraph D(n, 0);
    for (auto [u, v, w] : arcs) D.add(u, v, w);
    return D;
}

TEST_CASE("connectivity") {
    CHECK(connectivity(graph(2, {{0, 1, 2}, {1, 0, 2}}), 0, 1) == 2);
    CHECK(connectivity(graph(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}}), 0, 2) == 2);
    CHECK(connectivity(graph(3, {{0, 1, 1}}), 0, 2) == 0);
    CHECK_THROWS(connectivity(graph(2, {}), 0, 5));
}

TEST_CASE("eulerianize") {
    auto E = eulerianize(graph(2, {{0, 1, 2}}));
    CHECK(E.w[1][0] == 2);
    for (int u = 0; u < 2; ++u) CHECK(E.in_degree(u) == E.out_degree(u));
    auto C = graph(3, {{0, 1, 1}, {1, 2, 1}, {2, 0, 1}});
    CHECK(eulerianize(C).w == C.w);
    CHECK_THROWS_WITH_AS(eulerianize(graph(3, {{0, 1, 1}, {1, 2, 3}})), doctest::Contains("node 1"), PackingError);
}

TEST_CASE("max splittable") {
    auto D = graph(3, {{0, 1, 1}, {1, 2, 1}, {2, 0, 1}});
    CHECK(max_splittable(D, 0, 1, 2, {{0, 2, 1}}) == 1);
    auto H = graph(3, {{0, 1, 3}, {1, 2, 2}, {2, 0, 2}, {1, 0, 1}});
    CHECK(max_splittable(H, 0, 1, 2, {}) == 2);
    auto Z = graph(3, {{0, 1, 1}, {2, 0, 1}});
    CHECK_THROWS_AS(max_splittable(Z, 0, 1, 2, {}), PackingError);
}

TEST_CASE("pack examples") {
    auto single = pack_arborescences(graph(2, {{0, 1, 2}}), 2);
    REQUIRE(single.members.size() == 1);
    CHECK(single.members[0].first == 2);
    CHECK(single.members[0].second.arcs() == std::vector<std::pair<int, int>>{{0, 1}});

    auto D = graph(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}});
    auto fam = pack_arborescences(D, 2);
    auto rep = verify_packing(D, 2, fam);
    CHECK(rep.ok);
    Weight cov1 = 0, cov2 = 0;
    for (auto& [g, F] : fam.members) {
        cov1 += F.contains(1) ? g : 0;
        cov2 += F.contains(2) ? g : 0;
    }
    CHECK(cov1 >= 1);
    CHECK(cov2 == 2);

    auto empty = pack_arborescences(D, 0);
    CHECK(empty.members.empty());
    CHECK(verify_packing(D, 0, empty).ok);
    CHECK_THROWS(pack_arborescences(D, -1));
}

TEST_CASE("verify catches broken families") {
    auto D = graph(2, {{0, 1, 1}});
    Arborescence F{{0, 0}};
    ArbFamily over{2, {{2, F}}};
    auto rep = verify_packing(D, 2, over);
    CHECK_FALSE(rep.ok);
    CHECK(rep.problems.front().find("arc (0,1)") != std::string::npos);
    Arborescence T{{0, -1}};
    ArbFamily light{2, {{1, T}}};
    auto rep2 = verify_packing(D, 2, light);
    CHECK_FALSE(rep2.ok);
    CHECK(rep2.problems.front().find("weight total") != std::string::npos);
}

// Random digraphs with in >= out at every non-root node: random arcs, deficits
// repaired from the root, rejected if the repair would exceed the weight cap.
static WeightedDigraph random_balanced(std::mt19937_64& rng, int n, Weight maxw) {
    while (true) {
        WeightedDigraph D(n, 0);
        for (int u = 0; u < n; ++u)
            for (int v = 0; v < n; ++v)
                if (u != v && rng() % 3 == 0) D.w[u][v] = 1 + static_cast<Weight>(rng() % maxw);
        bool ok = true;
        for (int u = 1; u < n && ok; ++u) {
            Weight gap = D.out_degree(u) - D.in_degree(u);
            if (gap > 0) D.w[0][u] += gap;
            ok = D.w[0][u] <= maxw;
        }
        if (ok) return D;
    }
}

TEST_CASE("random packings satisfy all guarantees") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 60; ++trial) {
        int n = 2 + static_cast<int>(rng() % 5);
        auto D = random_balanced(rng, n, 5);
        Weight K = static_cast<Weight>(rng() % 6);
        PackingOptions opt;
        opt.check_splits = true;
        auto fam = pack_arborescences(D, K, opt);
        auto rep = verify_packing(D, K, fam);
        CHECK_MESSAGE(rep.ok, (rep.problems.empty() ? "" : rep.problems.front()));
    }
}

TEST_CASE("trace output") {
    std::ostringstream os;
    PackingOptions opt;
    opt.trace = &os;
    pack_arborescences(graph(3, {{0, 1, 2}, {1, 2, 1}}), 2, opt);
    CHECK(os.str().find("split") != std::string::npos);
}
