#pragma once

#include "mlp/exact_oracles.hpp"
#include "mlp/instance.hpp"
#include "mlp/lp.hpp"

#include <functional>
#include <utility>
#include <vector>

namespace mlp {

enum class LpKind { pclp, lp1, lp2, lp3 };
const char* lp_kind_name(LpKind k);

// Rooted path column of LP1. `covered` lists the clients on the path.
struct PathColumn {
    int copy = 0;
    int t = 0;
    std::vector<int> path;
    std::vector<int> covered;
    int var = -1;
};

// Configuration column of LP2: one path per vehicle.
struct ConfigColumn {
    int t = 0;
    std::vector<std::vector<int>> paths;
    std::vector<int> covered;
    int var = -1;
};

struct LpSolution {
    LpKind which = LpKind::lp3;
    int T = 0;
    // With identical depots LP1 and LP3 use a single copy whose values are
    // sums over the k vehicles (aggregated = true).
    bool aggregated = false;
    std::vector<int> copy_root;
    LinearProgram lp;
    std::vector<Rational> values;
    Rational objective;
    int cut_rounds = 0;
    int cuts_added = 0;

    std::vector<std::vector<std::vector<int>>> xvar;      // [copy][v][t], -1 if absent
    std::vector<std::vector<std::pair<int, int>>> arcs;   // [copy] arc list
    std::vector<std::vector<std::vector<int>>> zvar;      // [copy][t][arc]; PC-LP uses t = 0
    std::vector<int> penalty_var;                         // PC-LP: per node, -1 for root
    std::vector<PathColumn> paths;
    std::vector<ConfigColumn> configs;
    Separator separator;                                  // exponential families (may be empty)

    int copies() const { return static_cast<int>(copy_root.size()); }
    Rational value(int var) const { return var < 0 ? Rational(0) : values[var]; }
    Rational x(int copy, int v, int t) const;
    Rational x_total(int v, int t) const;
    Rational z_arc(int copy, int t, int a) const { return value(zvar[copy][t][a]); }
    // explicit rows and one final separation sweep; true when nothing is violated
    bool recheck() const;
};

struct EnumerationCaps {
    std::size_t lp1 = 200000;
    std::size_t lp2 = 500000;
};

// Prize-collecting LP on the bidirected graph. `cost` may be a directed
// metric (defaults to the instance costs); penalty[root] is ignored.
LpSolution build_and_solve_pclp(const MetricInstance& inst, int root, const std::vector<Rational>& penalty,
                                const CostMatrix* cost = nullptr, const LpOptions& opt = {});

// Time-indexed LPs over 1..T. Weights, allowed depots and service times follow
// the instance flags: LP3 uses arc costs c_uv + d_v, LP1/LP2 the metric
// c_uv + (d_u + d_v)/2.
LpSolution build_and_solve_lp3(const MetricInstance& inst, int T, const LpOptions& opt = {});
LpSolution build_and_solve_lp1(const MetricInstance& inst, int T, const EnumerationCaps& caps = {},
                               const LpOptions& opt = {});
LpSolution build_and_solve_lp2(const MetricInstance& inst, int T, const EnumerationCaps& caps = {},
                               const LpOptions& opt = {});

// Directed costs used by the arc formulations and the path formulations.
CostMatrix service_arc_costs(const MetricInstance& inst);      // c_uv + d_v
CostMatrix doubled_service_metric(const MetricInstance& inst); // 2c_uv + d_u + d_v

}  // namespace mlp
