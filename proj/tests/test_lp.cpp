#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "mlp/lp.hpp"

#include <optional>
#include <random>
#include <sstream>

using namespace mlp;

TEST_CASE("small LPs") {
    LinearProgram a;
    int x = a.add_variable("x", 1);
    a.add_constraint({{{x, 1}}, Sense::ge, 3});
    auto ra = solve_lp(a);
    CHECK(ra.x[x] == 3);
    CHECK(ra.objective == 3);

    LinearProgram b;
    int u = b.add_variable("x", 1), v = b.add_variable("y", 1);
    b.add_constraint({{{u, 1}, {v, 1}}, Sense::ge, 2});
    b.add_constraint({{{u, 1}}, Sense::le, make_rational(1, 2)});
    CHECK(solve_lp(b).objective == 2);

    LinearProgram c;
    c.add_variable("x", -1);
    CHECK_THROWS_AS(solve_lp(c), LpError);
    try {
        solve_lp(c);
    } catch (const LpError& e) {
        CHECK(e.status == LpStatus::unbounded);
    }

    LinearProgram d;
    int w = d.add_variable("x", 1);
    d.add_constraint({{{w, 1}}, Sense::le, -1});
    try {
        solve_lp(d);
        CHECK(false);
    } catch (const LpError& e) {
        CHECK(e.status == LpStatus::infeasible);
    }
}

TEST_CASE("cut loop") {
    LinearProgram lp;
    int x = lp.add_variable("x", 1), y = lp.add_variable("y", 1);
    lp.add_constraint({{{x, 1}, {y, 1}}, Sense::ge, 1});
    auto same = solve_with_cuts(lp, [](const std::vector<Rational>&) { return std::vector<Constraint>{}; });
    CHECK(same.objective == solve_lp(lp).objective);

    // separator enforcing x >= 1/3 and y >= 1/3 lazily
    auto sep = [&](const std::vector<Rational>& v) {
        std::vector<Constraint> cuts;
        if (v[x] < make_rational(1, 3)) cuts.push_back({{{x, 1}}, Sense::ge, make_rational(1, 3)});
        if (v[y] < make_rational(1, 3)) cuts.push_back({{{y, 1}}, Sense::ge, make_rational(1, 3)});
        return cuts;
    };
    LinearProgram copy = lp;
    auto res = solve_with_cuts(copy, sep);
    CHECK(res.objective == 1);
    CHECK(res.x[x] >= make_rational(1, 3));

    LinearProgram stuck = lp;
    auto bad = [&](const std::vector<Rational>&) {
        return std::vector<Constraint>{{{{x, 1}, {y, 1}}, Sense::ge, 1}};
    };
    CHECK_THROWS_WITH(solve_with_cuts(stuck, bad), doctest::Contains("no progress"));
}

TEST_CASE("random LPs agree with the reference simplex") {
    std::mt19937_64 rng(3);
    int solved = 0;
    for (int trial = 0; trial < 150; ++trial) {
        LinearProgram lp;
        int n = 2 + static_cast<int>(rng() % 6), m = 1 + static_cast<int>(rng() % 7);
        for (int j = 0; j < n; ++j) lp.add_variable("x" + std::to_string(j), static_cast<int>(rng() % 9) - 2);
        for (int i = 0; i < m; ++i) {
            Constraint c;
            for (int j = 0; j < n; ++j)
                if (rng() % 2) c.terms.push_back({j, make_rational(static_cast<int>(rng() % 7) - 2, 1 + static_cast<int>(rng() % 3))});
            c.sense = static_cast<Sense>(rng() % 3);
            c.rhs = static_cast<int>(rng() % 9) - 3;
            lp.add_constraint(c);
        }
        // bound the region so most instances are bounded
        Constraint box;
        for (int j = 0; j < n; ++j) box.terms.push_back({j, 1});
        box.sense = Sense::le;
        box.rhs = 20;
        lp.add_constraint(box);
        std::optional<LpStatus> s1, s2;
        LpResult r1, r2;
        try { r1 = solve_lp(lp); } catch (const LpError& e) { s1 = e.status; }
        try { r2 = solve_lp_reference(lp); } catch (const LpError& e) { s2 = e.status; }
        CHECK(s1.has_value() == s2.has_value());
        if (!s1 && !s2) {
            ++solved;
            CHECK(r1.objective == r2.objective);
            CHECK(max_violation(lp, r1.x) == 0);
        }
    }
    CHECK(solved > 30);
}

TEST_CASE("lp text dump") {
    LinearProgram lp;
    int x = lp.add_variable("x", 2);
    lp.add_constraint({{{x, 1}}, Sense::ge, 1});
    std::ostringstream os;
    lp.write_lp_format(os);
    CHECK(os.str().find("Minimize") == 0);
    CHECK(os.str().find("c0:") != std::string::npos);
}
