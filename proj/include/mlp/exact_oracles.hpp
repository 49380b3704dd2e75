#pragma once

#include "mlp/instance.hpp"

#include <stdexcept>
#include <vector>

namespace mlp {

class GuardError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using CostMatrix = std::vector<std::vector<Cost>>;  // may be asymmetric

struct OracleResult {
    Rational value;
    RoutePlan plan;                          // exact_kmlp
    std::vector<std::vector<int>> paths;     // paths starting at their root
    long long explored = 0;
};

// Min-length simple paths from `start` visiting exactly a subset of `pool`
// (bit b of the mask = pool[b]); any end node.
struct PathTable {
    int start = -1;
    std::vector<int> pool;
    std::vector<Cost> len;       // per mask; len[0] = 0
    std::vector<int> last;       // end node index in pool per mask (-1 for empty)
    std::vector<std::vector<int>> parent;  // [mask][end] -> previous end (-1 = start)
    std::vector<std::vector<Cost>> dp;

    std::vector<int> path(unsigned mask) const;  // starts with `start`
};

PathTable build_path_table(const CostMatrix& cost, int start, const std::vector<int>& pool);

OracleResult exact_kmlp(const MetricInstance& inst);
OracleResult exact_bottleneck_stroll(const MetricInstance& inst, int l);

struct BnsTable {
    std::vector<Rational> b;                                // b[l-1]
    Rational sum;
    std::vector<std::vector<std::vector<int>>> witness;     // [l-1][vehicle] path from its root
};

BnsTable bnslb(const MetricInstance& inst);

OracleResult exact_orienteering(const MetricInstance& inst, int root, const Rational& budget,
                                const std::vector<Rational>& reward);

// Minimum over collections of rooted paths of cost + penalties of uncovered nodes.
// `cost` defaults to the instance metric; depots other than root are ordinary nodes.
OracleResult exact_pc_paths(const MetricInstance& inst, int root, const std::vector<Rational>& penalty,
                            const CostMatrix* cost = nullptr);

// Cheapest path collection from root spanning >= B nodes (root included).
Rational exact_min_cover_cost(const MetricInstance& inst, int root, int B, const CostMatrix* cost = nullptr);
// Largest weight (root weight excluded) coverable by path collections of total cost <= C.
Rational exact_max_cover_weight(const MetricInstance& inst, int root, const std::vector<Rational>& w,
                                const Rational& C, const CostMatrix* cost = nullptr);

}  // namespace mlp
