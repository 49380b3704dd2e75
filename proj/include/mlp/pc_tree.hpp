#pragma once

#include "mlp/exact_oracles.hpp"
#include "mlp/instance.hpp"

#include <map>
#include <utility>
#include <vector>

namespace mlp {

struct RootedTree {
    int root = 0;
    std::vector<int> parent;  // -1 if absent; parent[root] = root

    static RootedTree trivial(int n, int root);
    bool contains(int v) const { return parent[v] >= 0; }
    int size() const;
    std::vector<int> nodes() const;
    std::vector<std::pair<int, int>> edges() const;  // (parent, child), sorted
    // Sum of c[parent][child]: the edge cost, or the mixed length under c_uv + d_v.
    Cost cost(const CostMatrix& c) const;
};

// a*T1 + b*T2 with a + b = 1. A plain tree is stored with b = 0 and t2 = t1.
struct BipointTree {
    Rational a = 1, b = 0;
    RootedTree t1, t2;

    bool single() const { return b == 0; }
    Rational cost(const CostMatrix& c) const;
    Rational coverage() const;  // expected node count
    Rational weight(const std::vector<Rational>& w) const;
};

struct PcTree {
    RootedTree tree;
    Rational objective;     // c(T) + penalties of nodes outside T
    Rational lp_objective;  // PC-LP optimum it was extracted from
    mpz_class K;
    std::size_t family_size = 0;
};

// Best member of an arborescence packing of the scaled PC-LP solution.
PcTree pc_tree(const MetricInstance& inst, int root, const std::vector<Rational>& penalty,
               const CostMatrix* cost = nullptr);
PcTree uniform_pc_tree(const MetricInstance& inst, int root, const Rational& lambda,
                       const CostMatrix* cost = nullptr);

// Search over the penalty scale lambda (penalty lambda * w_v) on the subgraph
// induced by `subset` (all nodes when empty). Probes are memoized by lambda.
class ParametricPc {
public:
    ParametricPc(const MetricInstance& inst, int root, const CostMatrix* cost = nullptr,
                 std::vector<int> subset = {}, std::vector<Rational> weight = {});

    // Expected weighted coverage exactly `target`, expected cost <= cheapest
    // path collection reaching that coverage.
    BipointTree coverage(const Rational& target);
    // Expected cost exactly C (or the full tree when C exceeds it, with
    // degenerate set), expected coverage >= best path collection within C.
    BipointTree budget(const Rational& C, bool* degenerate = nullptr);

    struct Probe {
        Rational lambda;
        Rational cost;
        Rational measure;
        int size;
    };
    const std::vector<Probe>& probes() const { return log_; }
    bool last_certified() const { return certified_; }

private:
    const PcTree& probe(const Rational& lambda);
    Rational measure(const RootedTree& t) const;
    RootedTree lift(const RootedTree& local) const;
    BipointTree search(bool by_cost, const Rational& target, bool* degenerate);

    int n_full_;
    std::vector<int> map_;  // local -> original
    MetricInstance local_;
    CostMatrix cost_;
    int root_ = 0;
    std::vector<Rational> w_;  // local weights
    std::map<Rational, PcTree> memo_;
    std::vector<Probe> log_;
    bool certified_ = false;
    mpz_class max_K_ = 1;
};

BipointTree coverage_tree(const MetricInstance& inst, int root, int B, const CostMatrix* cost = nullptr);

struct BudgetTree {
    BipointTree q;
    bool degenerate = false;
};

BudgetTree budget_tree(const MetricInstance& inst, int root, const std::vector<Rational>& w, const Rational& C,
                       const CostMatrix* cost = nullptr);

}  // namespace mlp
