#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "mlp/concat_graph.hpp"
#include "mlp/exact_oracles.hpp"
#include "mlp/formulations.hpp"
#include "mlp/generators.hpp"
#include "mlp/latency_solvers.hpp"

#include <random>
#include <set>

using namespace mlp;

namespace {

const Rational MU = Rational(mu_star()) * (1 + make_rational(1, 1000000000));

MetricInstance random_small(std::mt19937_64& rng, int n, int k, bool single, int max_cost = 4) {
    GeneratorSpec spec;
    spec.n = n;
    spec.k = k;
    spec.single_depot = single;
    spec.max_cost = max_cost;
    return random_instance(spec, rng);
}

MetricInstance single_client() { return make_instance({"r", "v"}, {0}, {{0, 3}, {3, 0}}); }

// every client exactly once, on an allowed vehicle; routes start at their depot
void check_feasible(const MetricInstance& inst, const RoutePlan& plan) {
    REQUIRE(static_cast<int>(plan.routes.size()) == inst.k());
    std::multiset<int> seen;
    for (int i = 0; i < inst.k(); ++i) {
        REQUIRE(!plan.routes[i].empty());
        CHECK(plan.routes[i][0] == inst.roots[i]);
        for (std::size_t p = 1; p < plan.routes[i].size(); ++p) {
            int v = plan.routes[i][p];
            seen.insert(v);
            CHECK(inst.allows(v, i));
        }
    }
    for (int v : inst.clients()) CHECK(seen.count(v) == 1);
    CHECK(seen.size() == inst.clients().size());
}

Cost cycle_cost(const CostMatrix& c, const Cycle& z) {
    Cost s = 0;
    for (std::size_t i = 0; i < z.size(); ++i) s += c[z[i]][z[(i + 1) % z.size()]];
    return s;
}

RootedTree random_tree(std::mt19937_64& rng, int n, int root) {
    RootedTree t = RootedTree::trivial(n, root);
    std::vector<int> in{root};
    for (int v = 0; v < n; ++v) {
        if (v == root || rng() % 4 == 0) continue;
        t.parent[v] = in[rng() % in.size()];
        in.push_back(v);
    }
    return t;
}

}  // namespace

TEST_CASE("split_tree_into_k_tours") {
    auto a = fixture_a();
    RootedTree path = RootedTree::trivial(3, 0);
    path.parent[1] = 0;
    path.parent[2] = 1;
    CostMatrix c{{0, 1, 3}, {1, 0, 2}, {3, 2, 0}};

    auto one = split_tree_into_k_tours(path, 1, {0, 1, 2}, c);
    REQUIRE(one.size() == 1);
    CHECK(one[0] == Cycle{0, 1, 2});
    CHECK(cycle_cost(c, one[0]) <= 2 * path.cost(c));

    auto two = split_tree_into_k_tours(path, 2, {0, 1, 2}, c);
    REQUIRE(two.size() == 2);
    std::set<int> covered;
    for (const auto& z : two) {
        CHECK(z[0] == 0);
        Cost internal = 0;
        for (std::size_t i = 2; i < z.size(); ++i) internal += c[z[i - 1]][z[i]];
        CHECK(internal <= 3);
        covered.insert(z.begin() + 1, z.end());
    }
    CHECK(covered == std::set<int>{1, 2});

    auto trivial = split_tree_into_k_tours(path, 3, {0}, c);
    REQUIRE(trivial.size() == 3);
    for (const auto& z : trivial) CHECK(z == Cycle{0});

    CHECK_THROWS_AS(split_tree_into_k_tours(path, 2, {0, 1, 2, 3}, c), std::invalid_argument);
    (void)a;
}

TEST_CASE("break_cycle_with_service fixtures") {
    RootedTree star = RootedTree::trivial(2, 0);
    star.parent[1] = 0;
    CostMatrix c{{0, 1}, {1, 0}};
    auto only_root = break_cycle_with_service(star, {0}, 2, {0, 0}, c);
    REQUIRE(only_root.size() == 2);
    for (const auto& z : only_root) CHECK(z == Cycle{0});

    auto one = break_cycle_with_service(star, {0, 1}, 1, {0, 0}, c);
    REQUIRE(one.size() == 1);
    CHECK(one[0] == Cycle{0, 1});
    CHECK(cycle_cost(c, one[0]) == 2);

    CHECK_THROWS_AS(break_cycle_with_service(RootedTree::trivial(2, 0), {0, 1}, 1, {0, 0}, c), std::invalid_argument);
}

TEST_CASE("break_cycle_with_service bound on random trees") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 7);
        const int k = 1 + static_cast<int>(rng() % 3);
        auto inst = random_small(rng, n, 1, true, 6);
        const int r = inst.roots[0];
        auto tree = random_tree(rng, n, r);
        std::vector<Cost> d(n, 0);
        for (int v = 0; v < n; ++v)
            if (v != r) d[v] = static_cast<Cost>(rng() % 4);
        std::vector<int> S{r};
        for (int v : tree.nodes())
            if (v != r && rng() % 3 != 0) S.push_back(v);

        Cost cq = tree.cost(inst.cost), dq = 0, L = 0;
        for (int v : tree.nodes()) dq += d[v];
        for (int u : S) L = std::max(L, inst.c(r, u) + d[u]);
        const Rational bound = make_rational(2 * (cq + dq), k) + 2 * L;

        auto cycles = break_cycle_with_service(tree, S, k, d, inst.cost);
        CHECK(static_cast<int>(cycles.size()) <= k);
        std::set<int> covered{r};
        for (const auto& z : cycles) {
            REQUIRE(!z.empty());
            CHECK(z[0] == r);
            Cost dz = 0;
            for (int v : z) dz += d[v];
            CHECK(Rational(cycle_cost(inst.cost, z) + 2 * dz) <= bound);
            covered.insert(z.begin(), z.end());
        }
        for (int u : S) CHECK(covered.count(u) == 1);
    }
}

TEST_CASE("solve_multidepot") {
    auto b = fixture_b();
    SolverConfig cfg;
    cfg.seed = 7;
    auto run = solve_multidepot(b, cfg);
    check_feasible(b, run.plan);
    CHECK(run.cost >= 2);
    CHECK(run.cost <= run.walk_latency);
    REQUIRE(run.lp_value);

    auto again = solve_multidepot(b, cfg);
    CHECK(again.plan.routes == run.plan.routes);

    auto s = single_client();
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        SolverConfig c2;
        c2.seed = seed;
        c2.derandomize = seed % 2 == 0;
        auto r = solve_multidepot(s, c2);
        CHECK(r.plan.routes == std::vector<std::vector<int>>{{0, 1}});
        CHECK(r.cost == 3);
    }

    auto lp1 = build_and_solve_lp1(b, static_cast<int>(time_horizon(b).T));
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        SolverConfig c3;
        c3.seed = seed;
        c3.derandomize = false;
        auto r = solve_multidepot(b, lp1, c3);
        check_feasible(b, r.plan);
        CHECK(r.cost >= 2);
    }
    auto lp2 = build_and_solve_lp2(b, static_cast<int>(time_horizon(b).T));
    CHECK_THROWS_AS(solve_multidepot(b, lp2, cfg), SolverError);
}

TEST_CASE("solve_kmlp_lp and solve_mlp_lp fixtures") {
    auto a = fixture_a();
    const int T = static_cast<int>(time_horizon(a).T);
    auto lp3 = build_and_solve_lp3(a, T);

    auto run = solve_kmlp_lp(a, lp3);
    check_feasible(a, run.plan);
    REQUIRE(run.concat);
    CHECK(run.cost <= run.walk_latency);
    CHECK(run.walk_latency <= run.concat->length);
    CHECK(run.cost <= 2 * MU * lp3.objective);

    auto mlp = solve_mlp_lp(a, lp3);
    check_feasible(a, mlp.plan);
    CHECK(mlp.cost <= mlp.walk_latency);
    CHECK(mlp.walk_latency <= mlp.concat->length);
    CHECK(mlp.cost <= MU * lp3.objective);

    auto a2 = a;
    a2.roots = {a.roots[0], a.roots[0]};
    validate(a2);
    auto lp3b = build_and_solve_lp3(a2, static_cast<int>(time_horizon(a2).T));
    auto run2 = solve_kmlp_lp(a2, lp3b);
    check_feasible(a2, run2.plan);
    CHECK(run2.cost <= 2 * MU * lp3b.objective);
    CHECK_THROWS_AS(solve_mlp_lp(a2), SolverError);

    auto s = single_client();
    CHECK(solve_kmlp_lp(s).plan.routes == std::vector<std::vector<int>>{{0, 1}});
    CHECK(solve_mlp_lp(s).plan.routes == std::vector<std::vector<int>>{{0, 1}});

    auto two = make_instance({"r", "a", "b"}, {0}, {{0, 1, 1}, {1, 0, 2}, {1, 2, 0}});
    CHECK(exact_kmlp(two).value == 4);
    auto lp = build_and_solve_lp3(two, static_cast<int>(time_horizon(two).T));
    auto r2 = solve_mlp_lp(two, lp);
    CHECK(r2.cost >= 4);
    CHECK(r2.cost <= MU * lp.objective);
    auto lp_small = build_and_solve_lp3(s, static_cast<int>(time_horizon(s).T));
    CHECK_THROWS_AS(solve_kmlp_lp(a, lp_small), SolverError);

    CHECK_THROWS_AS(solve_kmlp_lp(fixture_b()), SolverError);
}

TEST_CASE("solve_kmlp_combinatorial fixtures") {
    auto a = fixture_a();
    auto table = bnslb(a);
    CHECK(table.sum == 4);
    auto run = solve_kmlp_combinatorial(a);
    check_feasible(a, run.plan);
    CHECK(run.cost == 4);
    CHECK(run.cost <= 2 * MU * table.sum);
    REQUIRE(run.s.size() == table.b.size());
    for (std::size_t l = 0; l < run.s.size(); ++l) CHECK(run.s[l] <= 4 * table.b[l]);

    CHECK(solve_kmlp_combinatorial(single_client()).plan.routes == std::vector<std::vector<int>>{{0, 1}});
    CHECK_THROWS_AS(solve_kmlp_combinatorial(fixture_b()), SolverError);
}

TEST_CASE("round_lp2 and bnslb_construction fixtures") {
    auto b = fixture_b();
    const int T = static_cast<int>(time_horizon(b).T);
    auto lp2 = build_and_solve_lp2(b, T);
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        SolverConfig cfg;
        cfg.seed = seed;
        auto r = round_lp2(b, lp2, cfg);
        check_feasible(b, r.plan);
        CHECK(r.cost >= 2);
    }
    auto lp1 = build_and_solve_lp1(b, T);
    CHECK_THROWS_AS(round_lp2(b, lp1), SolverError);
    CHECK(round_lp2(single_client()).plan.routes == std::vector<std::vector<int>>{{0, 1}});

    auto a = fixture_a();
    auto ta = bnslb(a);
    auto ra = bnslb_construction(a, ta);
    check_feasible(a, ra.plan);
    CHECK(ra.cost <= MU * ta.sum);
    CHECK(ra.cost >= exact_kmlp(a).value);

    auto tb = bnslb(b);
    auto rb = bnslb_construction(b, tb);
    check_feasible(b, rb.plan);
    CHECK(rb.cost <= MU * tb.sum);

    auto s = single_client();
    auto ts = bnslb(s);
    auto rs = bnslb_construction(s, ts);
    CHECK(rs.plan.routes == std::vector<std::vector<int>>{{0, 1}});
    CHECK(rs.cost == ts.sum);

    BnsTable broken = ta;
    broken.witness.clear();
    CHECK_THROWS_AS(bnslb_construction(a, broken), SolverError);
}

TEST_CASE("per-run bounds on random single-depot instances") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 12; ++trial) {
        const int n = 3 + static_cast<int>(rng() % 4);
        const int k = 1 + static_cast<int>(rng() % 2);
        auto inst = random_small(rng, n, k, true, 3);
        auto table = bnslb(inst);
        auto opt = exact_kmlp(inst).value;
        auto lp3 = build_and_solve_lp3(inst, static_cast<int>(time_horizon(inst).T));
        CHECK(lp3.objective <= opt);

        auto comb = solve_kmlp_combinatorial(inst);
        check_feasible(inst, comb.plan);
        CHECK(comb.cost >= opt);
        CHECK(comb.cost <= 2 * MU * table.sum);
        for (std::size_t l = 0; l < comb.s.size(); ++l) CHECK(comb.s[l] <= 4 * table.b[l]);

        auto lpr = solve_kmlp_lp(inst, lp3);
        check_feasible(inst, lpr.plan);
        CHECK(lpr.cost <= lpr.walk_latency);
        CHECK(lpr.walk_latency <= lpr.concat->length);
        CHECK(lpr.cost <= 2 * MU * lp3.objective);
        if (k == 1) {
            auto m = solve_mlp_lp(inst, lp3);
            CHECK(m.cost <= MU * lp3.objective);
        }

        auto bc = bnslb_construction(inst, table);
        check_feasible(inst, bc.plan);
        CHECK(bc.cost <= MU * table.sum);
    }
}

TEST_CASE("variants") {
    SUBCASE("weights") {
        auto a = fixture_a();
        a.weight = {1, 3, 1};
        a.has_weights = true;
        validate(a);
        CHECK(natural_objective(a) == Objective::weighted);
        auto run = solve_multidepot(a);
        check_feasible(a, run.plan);
        auto lp3 = build_and_solve_lp3(a, static_cast<int>(time_horizon(a).T));
        auto k = solve_kmlp_lp(a, lp3);
        check_feasible(a, k.plan);
        CHECK(k.cost <= 2 * MU * lp3.objective);
        CHECK_THROWS_AS(solve_kmlp_combinatorial(a), SolverError);
        CHECK_THROWS_AS(bnslb_construction(a, bnslb(fixture_a())), SolverError);
    }
    SUBCASE("service times") {
        auto a = fixture_a();
        a.service = {0, 2, 1};
        a.has_service = true;
        validate(a);
        auto run = solve_multidepot(a);
        check_feasible(a, run.plan);
        CHECK(run.cost <= run.walk_latency);
        auto k = solve_kmlp_lp(a);
        check_feasible(a, k.plan);
        CHECK(k.cost <= k.walk_latency);
    }
    SUBCASE("allowed depots") {
        auto b = fixture_b();
        b.has_allowed = true;
        for (int v : b.clients()) b.allowed[v] = {b.roots[0]};
        validate(b);
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            SolverConfig cfg;
            cfg.seed = seed;
            auto run = solve_multidepot(b, cfg);
            check_feasible(b, run.plan);
            CHECK(run.plan.routes[1].size() == 1);
        }
        CHECK_THROWS_AS(bnslb_construction(b, bnslb(fixture_b())), SolverError);
    }
}

TEST_CASE("config validation") {
    SolverConfig cfg;
    cfg.growth = Rational(3);
    CHECK_THROWS(solve_multidepot(fixture_b(), cfg));
    cfg.growth = Rational(1);
    CHECK_THROWS(solve_multidepot(fixture_b(), cfg));
    SolverConfig e;
    e.epsilon = 0;
    CHECK_THROWS(solve_multidepot(fixture_b(), e));
    SolverConfig kap;
    kap.kappa = make_rational(1, 2);
    CHECK_THROWS(solve_multidepot(fixture_b(), kap));
}
