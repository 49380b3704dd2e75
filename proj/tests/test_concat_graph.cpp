#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "mlp/concat_graph.hpp"

#include <cmath>
#include <random>

using namespace mlp;

static std::vector<Rational> seq(std::initializer_list<int> xs) {
    std::vector<Rational> out;
    for (int x : xs) out.emplace_back(x);
    return out;
}

TEST_CASE("mu star") {
    double mu = mu_star(1e-9);
    CHECK(std::fabs(mu * std::log(mu) - mu - 1) <= 1e-9);
    CHECK(mu < 3.5912);
    CHECK(std::fabs(mu - 3.59112) < 1e-5);
    double rough = mu_star(0.5);
    CHECK(rough >= 3.0);
    CHECK(rough <= 4.0);
    CHECK(std::fabs(rough * std::log(rough) - rough - 1) <= 0.5);
}

TEST_CASE("edge lengths") {
    auto C = seq({0, 2, 6});
    CHECK(edge_length(C, 3, 1, 2) == 3);
    CHECK(edge_length(C, 3, 1, 3) == 6);
    CHECK(edge_length(C, 3, 2, 3) == 3);
    CHECK_THROWS(edge_length(C, 3, 2, 2));
}

TEST_CASE("lower envelope") {
    auto f = lower_envelope({{1, 0}, {2, 2}, {3, 6}});
    CHECK(f.corners.size() == 3);
    auto g = lower_envelope({{1, 0}, {2, 5}, {3, 6}});
    REQUIRE(g.corners.size() == 2);
    CHECK(g.eval(2) == 3);
    auto h = lower_envelope({{1, 0}, {2, 2}, {2, 1}});
    REQUIRE(h.corners.size() == 2);
    CHECK(h.corners[1] == Point{2, 1});
    CHECK_THROWS(lower_envelope({}));
}

TEST_CASE("envelope integral") {
    auto f = lower_envelope({{1, 0}, {3, 6}});
    CHECK(envelope_integral(f, 1, 3) == 6);
    auto g = lower_envelope({{1, 0}, {2, 2}, {3, 6}});
    CHECK(envelope_integral(g, 1, 3) == 5);
    CHECK(envelope_integral(g, 2, 2) == 0);
    CHECK_THROWS(envelope_integral(g, 0, 2));
}

TEST_CASE("shortest path examples") {
    auto p = shortest_concat_path(seq({0, 2, 6}));
    CHECK(p.length == 6);
    CHECK(p.nodes == std::vector<int>{1, 3});
    auto z = shortest_concat_path(seq({0, 0, 0, 0}));
    CHECK(z.length == 0);
    CHECK(z.nodes == std::vector<int>{1, 4});
    auto one = shortest_concat_path(seq({0}));
    CHECK(one.length == 0);
    CHECK(one.nodes == std::vector<int>{1});
    CHECK_THROWS(shortest_concat_path(seq({1, 2})));
}

TEST_CASE("random sequences: bounds, restriction, scaling") {
    std::mt19937_64 rng(2024);
    const double mu = mu_star(1e-12);
    for (int trial = 0; trial < 300; ++trial) {
        int n = 1 + static_cast<int>(rng() % 20);
        std::vector<Rational> C(n);
        for (int l = 1; l < n; ++l) C[l] = static_cast<int>(rng() % 101);
        auto p = shortest_concat_path(C);
        auto full = shortest_concat_path_all_nodes(C);
        CHECK(p.length == full.length);
        std::vector<Point> pts;
        for (int l = 1; l <= n; ++l) pts.emplace_back(l, C[l - 1]);
        auto f = lower_envelope(pts);
        Rational sum_f = 0, sum_c = 0;
        for (int l = 1; l <= n; ++l) {
            sum_f += f.eval(l);
            sum_c += C[l - 1];
        }
        double len = to_double(p.length);
        CHECK(len <= mu / 2 * to_double(sum_f) + 1e-9);
        CHECK(sum_f <= sum_c);
        double integral = to_double(envelope_integral(f, 1, n));
        CHECK(len <= mu / 2 * (integral + to_double(f.eval(n)) * 1e-6) + 1e-9);
        std::vector<Rational> scaled = C;
        for (auto& c : scaled) c *= make_rational(7, 3);
        auto q = shortest_concat_path(scaled);
        CHECK(q.length == p.length * make_rational(7, 3));
        CHECK(q.nodes == p.nodes);
    }
}

TEST_CASE("curve version matches sequence version") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        int n = 2 + static_cast<int>(rng() % 15);
        std::vector<Point> pts{{1, 0}};
        for (int l = 2; l <= n; ++l) pts.emplace_back(l, static_cast<int>(rng() % 50));
        auto f = lower_envelope(pts);
        std::vector<Rational> C;
        for (int l = 1; l <= n; ++l) C.push_back(f.eval(l));
        CHECK(shortest_concat_path(f).length == shortest_concat_path(C).length);
    }
}
