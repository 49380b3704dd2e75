#include "mlp/pc_tree.hpp"

#include "mlp/arb_packing.hpp"
#include "mlp/formulations.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace mlp {

RootedTree RootedTree::trivial(int n, int root) {
    RootedTree t;
    t.root = root;
    t.parent.assign(n, -1);
    t.parent[root] = root;
    return t;
}

int RootedTree::size() const {
    return static_cast<int>(std::count_if(parent.begin(), parent.end(), [](int p) { return p >= 0; }));
}

std::vector<int> RootedTree::nodes() const {
    std::vector<int> out;
    for (int v = 0; v < static_cast<int>(parent.size()); ++v)
        if (parent[v] >= 0) out.push_back(v);
    return out;
}

std::vector<std::pair<int, int>> RootedTree::edges() const {
    std::vector<std::pair<int, int>> out;
    for (int v = 0; v < static_cast<int>(parent.size()); ++v)
        if (parent[v] >= 0 && v != root) out.emplace_back(parent[v], v);
    std::sort(out.begin(), out.end());
    return out;
}

Cost RootedTree::cost(const CostMatrix& c) const {
    Cost s = 0;
    for (auto [u, v] : edges()) s += c[u][v];
    return s;
}

Rational BipointTree::cost(const CostMatrix& c) const {
    return a * Rational(static_cast<long>(t1.cost(c))) + b * Rational(static_cast<long>(t2.cost(c)));
}

Rational BipointTree::coverage() const { return a * t1.size() + b * t2.size(); }

Rational BipointTree::weight(const std::vector<Rational>& w) const {
    Rational s1 = 0, s2 = 0;
    for (int v : t1.nodes()) s1 += w[v];
    for (int v : t2.nodes()) s2 += w[v];
    return a * s1 + b * s2;
}

PcTree pc_tree(const MetricInstance& inst, int root, const std::vector<Rational>& penalty, const CostMatrix* cost) {
    const CostMatrix& c = cost ? *cost : inst.cost;
    if (inst.n() == 1) {
        PcTree only;
        only.tree = RootedTree::trivial(1, root);
        only.objective = only.lp_objective = 0;
        only.K = 1;
        only.family_size = 1;
        return only;
    }
    auto sol = build_and_solve_pclp(inst, root, penalty, &c);
    const auto& arcs = sol.arcs[0];
    mpz_class K = 1;
    for (std::size_t a = 0; a < arcs.size(); ++a) lcm_denominator(K, sol.z_arc(0, 0, a));
    if (K > mpz_class(std::numeric_limits<Weight>::max() / 64)) throw PackingError("scaling factor too large");
    const Weight Kw = K.get_si();
    WeightedDigraph D(inst.n(), root);
    for (std::size_t a = 0; a < arcs.size(); ++a) {
        Rational x = sol.z_arc(0, 0, a) * K;
        if (x != 0) D.add(arcs[a].first, arcs[a].second, x.get_num().get_si());
    }
    auto fam = pack_arborescences(D, Kw);
    PcTree best;
    best.lp_objective = sol.objective;
    best.K = K;
    best.family_size = fam.members.size();
    bool set = false;
    for (const auto& [gamma, F] : fam.members) {
        if (gamma <= 0) continue;
        RootedTree t{root, F.parent};
        Rational obj(static_cast<long>(t.cost(c)));
        for (int v = 0; v < inst.n(); ++v)
            if (v != root && !t.contains(v)) obj += penalty[v];
        bool better = !set || obj < best.objective ||
                      (obj == best.objective && (t.size() < best.tree.size() ||
                                                 (t.size() == best.tree.size() && t.edges() < best.tree.edges())));
        if (better) {
            set = true;
            best.tree = t;
            best.objective = obj;
        }
    }
    if (!set) throw PackingError("empty arborescence family");
    return best;
}

PcTree uniform_pc_tree(const MetricInstance& inst, int root, const Rational& lambda, const CostMatrix* cost) {
    if (lambda < 0) throw std::invalid_argument("negative penalty scale");
    std::vector<Rational> pi(inst.n(), lambda);
    pi[root] = 0;
    return pc_tree(inst, root, pi, cost);
}

ParametricPc::ParametricPc(const MetricInstance& inst, int root, const CostMatrix* cost, std::vector<int> subset,
                           std::vector<Rational> weight)
    : n_full_(inst.n()) {
    if (root < 0 || root >= inst.n()) throw std::out_of_range("root index out of range");
    if (subset.empty())
        for (int v = 0; v < inst.n(); ++v) subset.push_back(v);
    std::sort(subset.begin(), subset.end());
    subset.erase(std::unique(subset.begin(), subset.end()), subset.end());
    if (!std::binary_search(subset.begin(), subset.end(), root)) throw std::invalid_argument("subset must contain the root");
    map_ = subset;
    const CostMatrix& c = cost ? *cost : inst.cost;
    const int m = static_cast<int>(map_.size());
    cost_.assign(m, std::vector<Cost>(m, 0));
    for (int i = 0; i < m; ++i) {
        local_.nodes.push_back(inst.nodes[map_[i]]);
        if (map_[i] == root) root_ = i;
        for (int j = 0; j < m; ++j) cost_[i][j] = c[map_[i]][map_[j]];
    }
    local_.cost = cost_;
    local_.roots = {root_};
    if (weight.empty()) weight.assign(inst.n(), 1);
    if (static_cast<int>(weight.size()) != inst.n()) throw std::invalid_argument("weight vector size mismatch");
    for (int i = 0; i < m; ++i) {
        if (weight[map_[i]] < 0) throw std::invalid_argument("negative node weight");
        w_.push_back(weight[map_[i]]);
    }
}

const PcTree& ParametricPc::probe(const Rational& lambda) {
    if (auto it = memo_.find(lambda); it != memo_.end()) return it->second;
    std::vector<Rational> pi(w_.size());
    for (std::size_t v = 0; v < w_.size(); ++v) pi[v] = static_cast<int>(v) == root_ ? Rational(0) : lambda * w_[v];
    auto res = pc_tree(local_, root_, pi, &cost_);
    if (res.K > max_K_) max_K_ = res.K;
    log_.push_back({lambda, Rational(static_cast<long>(res.tree.cost(cost_))), measure(res.tree), res.tree.size()});
    return memo_.emplace(lambda, std::move(res)).first->second;
}

Rational ParametricPc::measure(const RootedTree& t) const {
    Rational s = 0;
    for (int v : t.nodes()) s += w_[v];
    return s;
}

RootedTree ParametricPc::lift(const RootedTree& local) const {
    RootedTree t = RootedTree::trivial(n_full_, map_[root_]);
    for (int v = 0; v < static_cast<int>(local.parent.size()); ++v)
        if (local.parent[v] >= 0) t.parent[map_[v]] = map_[local.parent[v]];
    return t;
}

BipointTree ParametricPc::coverage(const Rational& target) { return search(false, target, nullptr); }

BipointTree ParametricPc::budget(const Rational& C, bool* degenerate) {
    if (C < 0) throw std::invalid_argument("negative cost budget");
    return search(true, C, degenerate);
}

BipointTree ParametricPc::search(bool by_cost, const Rational& target, bool* degenerate) {
    certified_ = false;
    if (degenerate) *degenerate = false;
    auto key = [&](const RootedTree& t) { return by_cost ? Rational(static_cast<long>(t.cost(cost_))) : measure(t); };
    auto single = [&](const RootedTree& t) {
        certified_ = true;
        BipointTree q;
        q.t1 = q.t2 = lift(t);
        return q;
    };
    Rational W = 0;
    for (const auto& w : w_) W += w;
    if (!by_cost && (target < w_[root_] || target > W)) throw std::out_of_range("coverage target out of range");

    RootedTree T1 = probe(0).tree;
    if (key(T1) >= target) {
        if (by_cost || key(T1) == target) return single(T1);
        // zero-cost tree already past the target: drop leaves (cost cannot grow)
        RootedTree t = T1;
        bool changed = true;
        while (measure(t) > target && changed) {
            changed = false;
            for (int v = static_cast<int>(t.parent.size()) - 1; v >= 0; --v) {
                if (v == root_ || t.parent[v] < 0) continue;
                bool leaf = std::count(t.parent.begin(), t.parent.end(), v) == 0;
                if (leaf && measure(t) - w_[v] >= target) {
                    t.parent[v] = -1;
                    changed = true;
                    break;
                }
            }
        }
        if (measure(t) != target) throw std::logic_error("could not trim a zero-cost tree to the target");
        return single(t);
    }
    Cost cmax = 1;
    for (const auto& row : cost_)
        for (Cost c : row) cmax = std::max(cmax, c);
    Rational wmin = 0;
    for (int v = 0; v < static_cast<int>(w_.size()); ++v)
        if (v != root_ && w_[v] > 0 && (wmin == 0 || w_[v] < wmin)) wmin = w_[v];
    if (wmin == 0) wmin = 1;
    Rational lo = 0, hi = Rational(static_cast<long>(static_cast<Cost>(w_.size()) * cmax + 1)) / wmin;
    RootedTree T2 = probe(hi).tree;
    for (int it = 0; it < 64 && key(T2) < target; ++it) {
        hi *= 2;
        T2 = probe(hi).tree;
    }
    if (key(T2) < target) {
        if (!by_cost) throw std::out_of_range("coverage target unreachable");
        if (degenerate) *degenerate = true;
        return single(T2);
    }
    if (key(T2) == target) return single(T2);

    auto combine = [&](bool cert) {
        certified_ = cert;
        BipointTree q;
        q.t1 = lift(T1);
        q.t2 = lift(T2);
        Rational k1 = key(T1), k2 = key(T2);
        q.b = (target - k1) / (k2 - k1);
        q.a = 1 - q.b;
        return q;
    };
    auto place = [&](const Rational& lam, const RootedTree& t) {
        if (key(t) < target) {
            lo = lam;
            T1 = t;
        } else {
            hi = lam;
            T2 = t;
        }
    };
    const Rational n2 = Rational(static_cast<long>(w_.size() * w_.size()));
    for (int iter = 0; iter < 400; ++iter) {
        Rational c1(static_cast<long>(T1.cost(cost_))), c2(static_cast<long>(T2.cost(cost_)));
        Rational s1 = measure(T1), s2 = measure(T2);
        if (s1 != s2) {
            Rational cross = (c2 - c1) / (s2 - s1);
            if (cross >= 0) {
                const PcTree& p = probe(cross);
                if (key(p.tree) == target) return single(p.tree);
                if (c1 + cross * (W - s1) <= p.lp_objective) return combine(true);
                if (cross > lo && cross < hi) {
                    place(cross, p.tree);
                    continue;
                }
            }
        }
        Rational width = Rational(1) / (2 * n2 * Rational(max_K_));
        if (hi - lo < width) return combine(false);
        Rational mid = (lo + hi) / 2;
        const PcTree& p = probe(mid);
        if (key(p.tree) == target) return single(p.tree);
        place(mid, p.tree);
    }
    return combine(false);
}

BipointTree coverage_tree(const MetricInstance& inst, int root, int B, const CostMatrix* cost) {
    if (B < 1 || B > inst.n()) throw std::out_of_range("coverage target out of range");
    ParametricPc search(inst, root, cost);
    return search.coverage(B);
}

BudgetTree budget_tree(const MetricInstance& inst, int root, const std::vector<Rational>& w, const Rational& C,
                       const CostMatrix* cost) {
    if (static_cast<int>(w.size()) != inst.n()) throw std::invalid_argument("weight vector size mismatch");
    if (w[root] != 0) throw std::invalid_argument("root weight must be 0");
    ParametricPc search(inst, root, cost, {}, w);
    BudgetTree out;
    out.q = search.budget(C, &out.degenerate);
    return out;
}

}  // namespace mlp
