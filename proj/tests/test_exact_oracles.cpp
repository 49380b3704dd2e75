#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "mlp/exact_oracles.hpp"
#include "mlp/generators.hpp"

#include <algorithm>
#include <functional>
#include <random>

using namespace mlp;

namespace {

std::vector<Rational> constant(int n, const Rational& v) { return std::vector<Rational>(n, v); }

Cost path_cost(const MetricInstance& inst, const std::vector<int>& p) {
    Cost c = 0;
    for (std::size_t i = 1; i < p.size(); ++i) c += inst.c(p[i - 1], p[i]);
    return c;
}

// Naive k-MLP: every assignment of clients to vehicles, every order per vehicle.
Rational naive_kmlp(const MetricInstance& inst) {
    auto clients = inst.clients();
    const int m = static_cast<int>(clients.size()), k = inst.k();
    Rational best = -1;
    std::vector<int> assign(m, 0);
    std::function<void(int)> rec = [&](int j) {
        if (j == m) {
            std::vector<std::vector<int>> groups(k);
            for (int x = 0; x < m; ++x) {
                if (!inst.allows(clients[x], assign[x])) return;
                groups[assign[x]].push_back(clients[x]);
            }
            for (auto& g : groups) std::sort(g.begin(), g.end());
            // iterate over the product of permutations
            std::function<void(int)> perm = [&](int i) {
                if (i == k) {
                    RoutePlan plan;
                    plan.variant = natural_objective(inst);
                    for (int v = 0; v < k; ++v) {
                        std::vector<int> r{inst.roots[v]};
                        r.insert(r.end(), groups[v].begin(), groups[v].end());
                        plan.routes.push_back(r);
                    }
                    Rational c = evaluate_plan(inst, plan);
                    if (best < 0 || c < best) best = c;
                    return;
                }
                do perm(i + 1);
                while (std::next_permutation(groups[i].begin(), groups[i].end()));
            };
            perm(0);
            return;
        }
        for (int v = 0; v < k; ++v) {
            assign[j] = v;
            rec(j + 1);
        }
    };
    rec(0);
    return best;
}

// All simple paths from root (as node sequences), by DFS.
void all_paths(const MetricInstance& inst, std::vector<int>& cur, std::vector<char>& used,
               std::vector<std::vector<int>>& out) {
    out.push_back(cur);
    for (int v = 0; v < inst.n(); ++v) {
        if (used[v]) continue;
        used[v] = 1;
        cur.push_back(v);
        all_paths(inst, cur, used, out);
        cur.pop_back();
        used[v] = 0;
    }
}

std::vector<std::vector<int>> paths_from(const MetricInstance& inst, int root) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur{root};
    std::vector<char> used(inst.n(), 0);
    used[root] = 1;
    all_paths(inst, cur, used, out);
    return out;
}

Cost naive_stroll(const MetricInstance& inst, int l) {
    std::vector<std::vector<std::vector<int>>> per(inst.k());
    for (int i = 0; i < inst.k(); ++i) per[i] = paths_from(inst, inst.roots[i]);
    Cost best = -1;
    std::vector<int> idx(inst.k(), 0);
    std::function<void(int, unsigned, Cost)> rec = [&](int i, unsigned cov, Cost mx) {
        if (best >= 0 && mx >= best) return;
        if (i == inst.k()) {
            if (std::popcount(cov) >= l) best = mx;
            return;
        }
        for (const auto& p : per[i]) {
            unsigned c = cov;
            for (int v : p) c |= 1u << v;
            rec(i + 1, c, std::max(mx, path_cost(inst, p)));
        }
    };
    rec(0, 0, 0);
    return best;
}

// Naive path collections: repeatedly choose a path over uncovered nodes.
Rational naive_pc(const MetricInstance& inst, int root, const std::vector<Rational>& pi) {
    auto paths = paths_from(inst, root);
    Rational best = -1;
    std::function<void(unsigned, Cost, std::size_t)> rec = [&](unsigned cov, Cost c, std::size_t from) {
        Rational v(static_cast<long>(c));
        for (int x = 0; x < inst.n(); ++x)
            if (x != root && !(cov & (1u << x))) v += pi[x];
        if (best < 0 || v < best) best = v;
        for (std::size_t j = from; j < paths.size(); ++j) {
            unsigned m = 0;
            for (std::size_t q = 1; q < paths[j].size(); ++q) m |= 1u << paths[j][q];
            if (!m || (m & cov)) continue;
            rec(cov | m, c + path_cost(inst, paths[j]), j + 1);
        }
    };
    rec(0, 0, 0);
    return best;
}

MetricInstance random_small(std::mt19937_64& rng, int n, int k, bool single) {
    GeneratorSpec spec;
    spec.n = n;
    spec.k = k;
    spec.single_depot = single;
    spec.max_cost = 7;
    return random_instance(spec, rng);
}

}  // namespace

TEST_CASE("fixture values") {
    auto a = fixture_a();
    auto ra = exact_kmlp(a);
    CHECK(ra.value == 4);
    CHECK(ra.plan.routes == std::vector<std::vector<int>>{{0, 1, 2}});
    auto b = fixture_b();
    auto rb = exact_kmlp(b);
    CHECK(rb.value == 2);
    CHECK(evaluate_plan(b, rb.plan) == 2);

    CHECK(exact_bottleneck_stroll(a, 1).value == 0);
    CHECK(exact_bottleneck_stroll(a, 2).value == 1);
    auto s3 = exact_bottleneck_stroll(a, 3);
    CHECK(s3.value == 3);
    CHECK(s3.paths == std::vector<std::vector<int>>{{0, 1, 2}});
    CHECK_THROWS(exact_bottleneck_stroll(a, 4));

    auto t = bnslb(a);
    CHECK(t.b == std::vector<Rational>{0, 1, 3});
    CHECK(t.sum == 4);
    auto tb = bnslb(b);
    CHECK(tb.b[0] == 0);
    CHECK(tb.b[1] == 0);
    CHECK(tb.sum <= 2);

    auto one = line_instance({0, 5}, {0});
    CHECK(exact_kmlp(one).value == 5);
    CHECK(bnslb(one).sum == 5);
}

TEST_CASE("orienteering fixtures") {
    auto a = fixture_a();
    auto th = std::vector<Rational>{0, 1, 1};
    auto o1 = exact_orienteering(a, 0, 1, th);
    CHECK(o1.value == 1);
    CHECK(o1.paths[0] == std::vector<int>{0, 1});
    auto o3 = exact_orienteering(a, 0, 3, th);
    CHECK(o3.value == 2);
    CHECK(o3.paths[0] == std::vector<int>{0, 1, 2});
    auto o0 = exact_orienteering(a, 0, 0, th);
    CHECK(o0.value == 0);
    CHECK(o0.paths[0] == std::vector<int>{0});
    CHECK_THROWS(exact_orienteering(a, 0, 1, std::vector<Rational>{1, 1, 1}));
}

TEST_CASE("prize-collecting path fixtures") {
    auto a = fixture_a();
    // covering both clients costs 3 along r,a,b; each penalty is 10
    CHECK(exact_pc_paths(a, 0, constant(3, 10)).value == 3);
    CHECK(exact_pc_paths(a, 0, constant(3, 0)).value == 0);
    CHECK(exact_pc_paths(a, 0, constant(3, make_rational(2, 5))).value == make_rational(4, 5));
    CHECK(exact_pc_paths(a, 0, constant(3, 1)).value == 2);
    CHECK(exact_min_cover_cost(a, 0, 1) == 0);
    CHECK(exact_min_cover_cost(a, 0, 2) == 1);
    CHECK(exact_min_cover_cost(a, 0, 3) == 3);
    CHECK(exact_max_cover_weight(a, 0, {0, 1, 1}, 2) == 1);
    CHECK(exact_max_cover_weight(a, 0, {0, 1, 1}, 3) == 2);
}

TEST_CASE("guards") {
    std::mt19937_64 rng(1);
    auto big = random_small(rng, 11, 1, true);
    CHECK_THROWS_AS(exact_kmlp(big), GuardError);
    CHECK_THROWS_AS(bnslb(big), GuardError);
    CHECK_THROWS_AS(exact_pc_paths(big, 0, constant(11, 1)), GuardError);
    auto huge = random_small(rng, 13, 1, true);
    CHECK_THROWS_AS(exact_orienteering(huge, 0, 5, constant(13, 0)), GuardError);
}

TEST_CASE("random instances agree with naive enumeration") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 40; ++trial) {
        int k = 1 + static_cast<int>(rng() % 2);
        bool single = rng() % 2;
        int n = (single ? 1 : k) + 1 + static_cast<int>(rng() % 4);
        auto inst = random_small(rng, n, k, single);
        auto ex = exact_kmlp(inst);
        CHECK(ex.value == naive_kmlp(inst));
        CHECK(evaluate_plan(inst, ex.plan) == ex.value);
        auto t = bnslb(inst);
        CHECK(t.sum <= ex.value);
        for (int l = 1; l <= inst.n(); ++l) {
            CHECK(t.b[l - 1] == naive_stroll(inst, l));
            if (l > 1) CHECK(t.b[l - 1] >= t.b[l - 2]);
            unsigned cov = 0;
            Cost mx = 0;
            for (const auto& p : t.witness[l - 1]) {
                for (int v : p) cov |= 1u << v;
                mx = std::max(mx, path_cost(inst, p));
            }
            CHECK(std::popcount(cov) >= l);
            CHECK(Rational(static_cast<long>(mx)) == t.b[l - 1]);
        }
        if (n <= 6) {
            std::vector<Rational> pi(inst.n());
            for (auto& p : pi) p = make_rational(static_cast<int>(rng() % 13), 2);
            auto pc = exact_pc_paths(inst, inst.roots[0], pi);
            CHECK(pc.value == naive_pc(inst, inst.roots[0], pi));
            Rational re = 0;
            unsigned cov = 1u << inst.roots[0];
            for (const auto& p : pc.paths) {
                re += Rational(static_cast<long>(path_cost(inst, p)));
                for (int v : p) cov |= 1u << v;
            }
            for (int v = 0; v < inst.n(); ++v)
                if (!(cov & (1u << v))) re += pi[v];
            CHECK(re == pc.value);
        }
    }
}

TEST_CASE("service times and weights") {
    auto a = fixture_a();
    a.has_service = true;
    a.service = {0, 2, 1};
    CHECK(exact_kmlp(a).value == 9);
    auto w = fixture_a();
    w.has_weights = true;
    w.weight = {1, 1, 5};
    // visiting b first: 5*3 + 1*5 = 20; a first: 1 + 5*3 = 16
    CHECK(exact_kmlp(w).value == 16);
}
