#pragma once

#include "mlp/rational.hpp"

#include <utility>
#include <vector>

namespace mlp {

// Root of mu*ln(mu) = mu + 1 on [3,4] with residual <= tolerance.
double mu_star(double tolerance = 1e-12);

using Point = std::pair<Rational, Rational>;  // (coverage, cost)

struct EnvelopeCurve {
    std::vector<Point> points;
    std::vector<Point> corners;  // lower hull, strictly increasing x, strictly increasing slopes

    const Rational& lo() const { return corners.front().first; }
    const Rational& hi() const { return corners.back().first; }
    Rational eval(const Rational& x) const;
};

EnvelopeCurve lower_envelope(std::vector<Point> points);

Rational envelope_integral(const EnvelopeCurve& f, const Rational& lo, const Rational& hi);

// C is 1-based in the math: C[0] holds C_1.
Rational edge_length(const std::vector<Rational>& C, int n, int o, int l);

struct ConcatPath {
    std::vector<int> nodes;  // 1 = l_0 < ... < l_h = n
    Rational length;
};

// Shortest 1 -> n path in the concatenation graph, searched over extreme points only.
ConcatPath shortest_concat_path(const std::vector<Rational>& C);

// Same search where the node set is the integer corner set of a curve on [1, N].
// Arc (o,l) has length f(l) * (N - (o+l)/2).
ConcatPath shortest_concat_path(const EnvelopeCurve& f);

// Plain O(n^2) DP over every node, kept for cross-checks.
ConcatPath shortest_concat_path_all_nodes(const std::vector<Rational>& C);

}  // namespace mlp
