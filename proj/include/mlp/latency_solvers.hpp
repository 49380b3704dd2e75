#pragma once

#include "mlp/concat_graph.hpp"
#include "mlp/exact_oracles.hpp"
#include "mlp/formulations.hpp"
#include "mlp/instance.hpp"
#include "mlp/pc_tree.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace mlp {

class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SolverConfig {
    std::uint64_t seed = 0;
    // Growth of the geometric time points. Unset: 1.616 for the per-vehicle
    // sampler, mu* for the configuration sampler.
    std::optional<Rational> growth;
    Rational epsilon = make_rational(1, 100);
    Rational kappa = 1;
    bool derandomize = true;  // cheaper direction per cycle instead of a coin flip
    EnumerationCaps caps;

    void validate() const;
};

// A cycle through a vehicle's depot: cycle[0] is the depot, the walk returns
// to it after the last node. {root} alone is the trivial cycle.
using Cycle = std::vector<int>;
// One cycle per vehicle, traversed in the same round.
using Stage = std::vector<Cycle>;

// Corner of the lower envelope together with the object that produced it.
struct CornerWitness {
    Rational x, y;
    RootedTree tree;
    Rational t;      // time point (LP rounding) or c(r, v_j) (combinatorial)
    int prefix = 0;  // j of G_j (combinatorial), 0 otherwise
};

struct SolverRun {
    RoutePlan plan;
    Rational cost;             // evaluate_plan under the natural objective
    Rational walk_latency;     // latency of the stitched walk before shortcutting (>= cost)
    std::optional<Rational> lp_value;
    std::optional<ConcatPath> concat;
    std::vector<Rational> s;   // s_l = f(l) for l = 1..N (envelope solvers) or C_l (BNSLB construction)
    std::vector<CornerWitness> used;  // witnesses of the concatenation path nodes l > 1
    std::vector<Stage> stages;
    int rounds = 0;            // sampling rounds (randomized solvers)
    int leftovers = 0;         // nodes appended after truncation
};

// Preorder of the tree (children by increasing index), i.e. the doubled and
// shortcut Euler tour starting at the root.
std::vector<int> tree_preorder(const RootedTree& tree);

// Cuts the doubled tree (restricted to `keep`) into at most k pieces of
// internal length <= 2c(tree)/k and closes each through the root. Always k cycles.
std::vector<Cycle> split_tree_into_k_tours(const RootedTree& tree, int k, const std::vector<int>& keep,
                                           const CostMatrix& cost);

// Snips the doubled tree restricted to S with the two-case charging rule so that
// every cycle has c(Z) + 2d(V(Z)) <= 2(c(Q) + d(V(Q)))/k + 2L. Always k cycles.
std::vector<Cycle> break_cycle_with_service(const RootedTree& tree, const std::vector<int>& S, int k,
                                            const std::vector<Cost>& d, const CostMatrix& cost);

struct Stitched {
    RoutePlan plan;
    Cost walk_latency = 0;
};

// Concatenates the stages per vehicle. Each node is served on one cycle of the
// first stage covering it (allowed vehicles only); nodes never covered are left out.
Stitched stitch_stages(const MetricInstance& inst, const std::vector<Stage>& stages, bool derandomize,
                       std::mt19937_64& rng);

SolverRun solve_multidepot(const MetricInstance& inst, const SolverConfig& cfg = {});
// Reuses an LP1 solution of the same instance (repeated seeds).
SolverRun solve_multidepot(const MetricInstance& inst, const LpSolution& lp1, const SolverConfig& cfg = {});
SolverRun solve_kmlp_lp(const MetricInstance& inst, const SolverConfig& cfg = {});
SolverRun solve_mlp_lp(const MetricInstance& inst, const SolverConfig& cfg = {});
// Both LP3 solvers accept a precomputed LP3 (T = time horizon) of the same instance.
SolverRun solve_kmlp_lp(const MetricInstance& inst, const LpSolution& lp3, const SolverConfig& cfg = {});
SolverRun solve_mlp_lp(const MetricInstance& inst, const LpSolution& lp3, const SolverConfig& cfg = {});
SolverRun solve_kmlp_combinatorial(const MetricInstance& inst, const SolverConfig& cfg = {});
SolverRun round_lp2(const MetricInstance& inst, const LpSolution& lp2, const SolverConfig& cfg = {});
SolverRun round_lp2(const MetricInstance& inst, const SolverConfig& cfg = {});
SolverRun bnslb_construction(const MetricInstance& inst, const BnsTable& table, const SolverConfig& cfg = {});

}  // namespace mlp
