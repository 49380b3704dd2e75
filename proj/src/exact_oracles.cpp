#include "mlp/exact_oracles.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <map>
#include <stdexcept>

namespace mlp {

namespace {

constexpr Cost INF = std::numeric_limits<Cost>::max() / 4;

void guard_clients(const MetricInstance& inst) {
    int m = inst.n() - static_cast<int>(inst.distinct_roots().size());
    if (m > 9) throw GuardError("exact oracle guard: " + std::to_string(m) + " clients > 9");
    if (inst.n() > 16) throw GuardError("exact oracle guard: more than 16 nodes");
}

void check_root(const MetricInstance& inst, int root) {
    if (root < 0 || root >= inst.n()) throw std::out_of_range("root index out of range");
}

std::vector<int> pool_without(int n, int root) {
    std::vector<int> pool;
    for (int v = 0; v < n; ++v)
        if (v != root) pool.push_back(v);
    return pool;
}

// Cheapest collection of start-rooted paths covering exactly the mask (path-disjoint
// apart from the start). Returns cover cost and the first part chosen per mask.
struct CoverTable {
    std::vector<Cost> cost;
    std::vector<unsigned> part;
};

CoverTable path_covers(const PathTable& t) {
    const unsigned full = 1u << t.pool.size();
    CoverTable ct{std::vector<Cost>(full, INF), std::vector<unsigned>(full, 0)};
    ct.cost[0] = 0;
    for (unsigned U = 1; U < full; ++U) {
        unsigned low = U & (~U + 1);
        unsigned rest = U ^ low;
        // enumerate T = low | sub, sub subset of rest
        for (unsigned sub = rest;; sub = (sub - 1) & rest) {
            unsigned T = low | sub;
            if (t.len[T] < INF && ct.cost[U ^ T] < INF) {
                Cost c = t.len[T] + ct.cost[U ^ T];
                if (c < ct.cost[U]) {
                    ct.cost[U] = c;
                    ct.part[U] = T;
                }
            }
            if (sub == 0) break;
        }
    }
    return ct;
}

std::vector<std::vector<int>> cover_paths(const PathTable& t, const CoverTable& ct, unsigned U) {
    std::vector<std::vector<int>> out;
    while (U) {
        unsigned T = ct.part[U];
        out.push_back(t.path(T));
        U ^= T;
    }
    return out;
}

CostMatrix metric_of(const MetricInstance& inst, const CostMatrix* cost) {
    if (!cost) return inst.cost;
    if (static_cast<int>(cost->size()) != inst.n()) throw std::invalid_argument("cost matrix size mismatch");
    return *cost;
}

}  // namespace

std::vector<int> PathTable::path(unsigned mask) const {
    std::vector<int> rev;
    int j = last[mask];
    while (mask && j >= 0) {
        rev.push_back(pool[j]);
        int p = parent[mask][j];
        mask ^= 1u << j;
        j = p;
    }
    rev.push_back(start);
    std::reverse(rev.begin(), rev.end());
    return rev;
}

PathTable build_path_table(const CostMatrix& cost, int start, const std::vector<int>& pool) {
    const int m = static_cast<int>(pool.size());
    if (m > 22) throw GuardError("path table guard: pool too large");
    const unsigned full = 1u << m;
    PathTable t;
    t.start = start;
    t.pool = pool;
    t.dp.assign(full, std::vector<Cost>(m, INF));
    t.parent.assign(full, std::vector<int>(m, -1));
    t.len.assign(full, INF);
    t.last.assign(full, -1);
    t.len[0] = 0;
    for (int j = 0; j < m; ++j) t.dp[1u << j][j] = cost[start][pool[j]];
    for (unsigned mask = 1; mask < full; ++mask) {
        for (int j = 0; j < m; ++j) {
            Cost d = t.dp[mask][j];
            if (d >= INF) continue;
            if (d < t.len[mask]) {
                t.len[mask] = d;
                t.last[mask] = j;
            }
            for (int nx = 0; nx < m; ++nx) {
                if (mask & (1u << nx)) continue;
                unsigned nm = mask | (1u << nx);
                Cost nd = d + cost[pool[j]][pool[nx]];
                if (nd < t.dp[nm][nx]) {
                    t.dp[nm][nx] = nd;
                    t.parent[nm][nx] = j;
                }
            }
        }
    }
    return t;
}

OracleResult exact_kmlp(const MetricInstance& inst) {
    guard_clients(inst);
    const auto clients = inst.clients();
    const int m = static_cast<int>(clients.size());
    const unsigned full = 1u << m;
    auto w = [&](int j) { return inst.weight[clients[j]]; };
    auto d = [&](int j) { return inst.service[clients[j]]; };
    std::vector<Cost> wsum(full, 0);
    for (unsigned A = 1; A < full; ++A) {
        int j = std::countr_zero(A);
        wsum[A] = wsum[A & (A - 1)] + w(j);
    }
    // g[A][u]: cost of nodes in A\{u} measured from the end of u's service.
    std::vector<std::vector<Cost>> g(full, std::vector<Cost>(m, INF));
    std::vector<std::vector<int>> nxt(full, std::vector<int>(m, -1));
    OracleResult res;
    for (unsigned A = 1; A < full; ++A) {
        for (int u = 0; u < m; ++u) {
            if (!(A & (1u << u))) continue;
            unsigned rest = A ^ (1u << u);
            if (!rest) {
                g[A][u] = 0;
                continue;
            }
            for (int v = 0; v < m; ++v) {
                if (!(rest & (1u << v))) continue;
                ++res.explored;
                Cost c = wsum[rest] * (inst.c(clients[u], clients[v]) + d(v)) + g[rest][v];
                if (c < g[A][u]) {
                    g[A][u] = c;
                    nxt[A][u] = v;
                }
            }
        }
    }
    const int k = inst.k();
    std::vector<unsigned> allowed_mask(k, 0);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < m; ++j)
            if (inst.allows(clients[j], i)) allowed_mask[i] |= 1u << j;
    std::vector<std::vector<Cost>> single(k, std::vector<Cost>(full, INF));
    std::vector<std::vector<int>> first(k, std::vector<int>(full, -1));
    for (int i = 0; i < k; ++i) {
        single[i][0] = 0;
        const int r = inst.roots[i];
        for (unsigned S = 1; S < full; ++S) {
            if ((S & allowed_mask[i]) != S) continue;
            for (int v = 0; v < m; ++v) {
                if (!(S & (1u << v))) continue;
                Cost c = wsum[S] * (inst.c(r, clients[v]) + d(v)) + g[S][v];
                if (c < single[i][S]) {
                    single[i][S] = c;
                    first[i][S] = v;
                }
            }
        }
    }
    // F[i][S]: best cost serving S with vehicles 0..i
    std::vector<std::vector<Cost>> F(k, std::vector<Cost>(full, INF));
    std::vector<std::vector<unsigned>> take(k, std::vector<unsigned>(full, 0));
    F[0] = single[0];
    for (unsigned S = 0; S < full; ++S) take[0][S] = S;
    for (int i = 1; i < k; ++i) {
        for (unsigned S = 0; S < full; ++S) {
            for (unsigned T = S;; T = (T - 1) & S) {
                if (single[i][T] < INF && F[i - 1][S ^ T] < INF) {
                    Cost c = single[i][T] + F[i - 1][S ^ T];
                    if (c < F[i][S]) {
                        F[i][S] = c;
                        take[i][S] = T;
                    }
                }
                if (T == 0) break;
            }
        }
    }
    if (F[k - 1][full - 1] >= INF) throw InstanceError("no feasible plan: some client has no usable depot");
    res.value = Rational(static_cast<long>(F[k - 1][full - 1]));
    res.plan.variant = natural_objective(inst);
    res.plan.routes.assign(k, {});
    unsigned S = full - 1;
    for (int i = k - 1; i >= 0; --i) {
        unsigned T = take[i][S];
        auto& route = res.plan.routes[i];
        route.push_back(inst.roots[i]);
        if (T) {
            int u = first[i][T];
            unsigned A = T;
            while (u >= 0) {
                route.push_back(clients[u]);
                int v = nxt[A][u];
                A ^= 1u << u;
                u = v;
            }
        }
        S ^= T;
    }
    res.paths = res.plan.routes;
    return res;
}

namespace {

struct StrollSearch {
    const MetricInstance& inst;
    std::vector<PathTable> tables;
    std::vector<unsigned> root_bit;
    std::vector<Cost> budgets;
    std::map<Cost, std::pair<int, std::vector<unsigned>>> memo;  // budget -> (coverage, pool masks)

    explicit StrollSearch(const MetricInstance& in) : inst(in) {
        for (int i = 0; i < inst.k(); ++i) {
            int r = inst.roots[i];
            tables.push_back(build_path_table(inst.cost, r, pool_without(inst.n(), r)));
            root_bit.push_back(1u << r);
            for (Cost l : tables.back().len)
                if (l < INF) budgets.push_back(l);
        }
        std::sort(budgets.begin(), budgets.end());
        budgets.erase(std::unique(budgets.begin(), budgets.end()), budgets.end());
    }

    unsigned node_mask(int i, unsigned pm) const {
        unsigned out = root_bit[i];
        const auto& pool = tables[i].pool;
        for (std::size_t j = 0; j < pool.size(); ++j)
            if (pm & (1u << j)) out |= 1u << pool[j];
        return out;
    }

    const std::pair<int, std::vector<unsigned>>& coverage(Cost b) {
        if (auto it = memo.find(b); it != memo.end()) return it->second;
        const int n = inst.n(), k = inst.k();
        const unsigned nfull = 1u << n;
        // reach[U] = tuple index chain; store per-layer back pointers
        std::vector<char> reach(nfull, 0);
        reach[0] = 1;
        std::vector<std::vector<std::pair<unsigned, unsigned>>> back(k);  // per layer: U -> (prevU, poolmask)
        std::vector<std::vector<unsigned>> from(k, std::vector<unsigned>(nfull, 0)), pick(k, std::vector<unsigned>(nfull, 0));
        for (int i = 0; i < k; ++i) {
            const auto& t = tables[i];
            const unsigned pfull = 1u << t.pool.size();
            std::vector<unsigned> maximal;
            for (unsigned pm = 0; pm < pfull; ++pm) {
                if (t.len[pm] > b) continue;
                bool is_max = true;
                for (std::size_t j = 0; j < t.pool.size() && is_max; ++j)
                    if (!(pm & (1u << j)) && t.len[pm | (1u << j)] <= b) is_max = false;
                if (is_max) maximal.push_back(pm);
            }
            std::vector<char> next(nfull, 0);
            for (unsigned U = 0; U < nfull; ++U) {
                if (!reach[U]) continue;
                for (unsigned pm : maximal) {
                    unsigned V = U | node_mask(i, pm);
                    if (!next[V]) {
                        next[V] = 1;
                        from[i][V] = U;
                        pick[i][V] = pm;
                    }
                }
            }
            reach.swap(next);
        }
        int best = -1;
        unsigned bestU = 0;
        for (unsigned U = 0; U < nfull; ++U)
            if (reach[U] && std::popcount(U) > best) {
                best = std::popcount(U);
                bestU = U;
            }
        std::vector<unsigned> masks(k);
        for (int i = k - 1; i >= 0; --i) {
            masks[i] = pick[i][bestU];
            bestU = from[i][bestU];
        }
        return memo[b] = {best, masks};
    }

    // smallest budget reaching coverage l
    Cost solve(int l, std::vector<unsigned>& masks) {
        std::size_t lo = 0, hi = budgets.size() - 1;
        if (coverage(budgets[hi]).first < l) throw InstanceError("coverage target unreachable");
        while (lo < hi) {
            std::size_t mid = (lo + hi) / 2;
            if (coverage(budgets[mid]).first >= l) hi = mid; else lo = mid + 1;
        }
        masks = coverage(budgets[lo]).second;
        return budgets[lo];
    }
};

}  // namespace

OracleResult exact_bottleneck_stroll(const MetricInstance& inst, int l) {
    guard_clients(inst);
    if (l < 1 || l > inst.n()) throw std::out_of_range("coverage target out of range");
    StrollSearch s(inst);
    std::vector<unsigned> masks;
    OracleResult res;
    res.value = Rational(static_cast<long>(s.solve(l, masks)));
    for (int i = 0; i < inst.k(); ++i) res.paths.push_back(s.tables[i].path(masks[i]));
    res.explored = static_cast<long long>(s.memo.size());
    return res;
}

BnsTable bnslb(const MetricInstance& inst) {
    guard_clients(inst);
    StrollSearch s(inst);
    BnsTable t;
    t.sum = 0;
    for (int l = 1; l <= inst.n(); ++l) {
        std::vector<unsigned> masks;
        Rational b(static_cast<long>(s.solve(l, masks)));
        t.b.push_back(b);
        t.sum += b;
        std::vector<std::vector<int>> w;
        for (int i = 0; i < inst.k(); ++i) w.push_back(s.tables[i].path(masks[i]));
        t.witness.push_back(std::move(w));
    }
    return t;
}

OracleResult exact_orienteering(const MetricInstance& inst, int root, const Rational& budget,
                                const std::vector<Rational>& reward) {
    check_root(inst, root);
    if (inst.n() > 12) throw GuardError("orienteering guard: n > 12");
    if (static_cast<int>(reward.size()) != inst.n()) throw std::invalid_argument("reward vector size mismatch");
    if (reward[root] != 0) throw std::invalid_argument("root reward must be 0");
    auto t = build_path_table(inst.cost, root, pool_without(inst.n(), root));
    OracleResult res;
    res.value = 0;
    unsigned best = 0;
    for (unsigned pm = 1; pm < t.len.size(); ++pm) {
        if (t.len[pm] >= INF || Rational(static_cast<long>(t.len[pm])) > budget) continue;
        ++res.explored;
        Rational r = 0;
        for (std::size_t j = 0; j < t.pool.size(); ++j)
            if (pm & (1u << j)) r += reward[t.pool[j]];
        if (r > res.value || (r == res.value && t.len[pm] < t.len[best])) {
            res.value = r;
            best = pm;
        }
    }
    res.paths.push_back(t.path(best));
    return res;
}

OracleResult exact_pc_paths(const MetricInstance& inst, int root, const std::vector<Rational>& penalty,
                            const CostMatrix* cost) {
    check_root(inst, root);
    if (inst.n() > 8) throw GuardError("prize-collecting path guard: n > 8");
    if (static_cast<int>(penalty.size()) != inst.n()) throw std::invalid_argument("penalty vector size mismatch");
    auto t = build_path_table(metric_of(inst, cost), root, pool_without(inst.n(), root));
    auto ct = path_covers(t);
    OracleResult res;
    bool set = false;
    unsigned bestU = 0;
    for (unsigned U = 0; U < ct.cost.size(); ++U) {
        if (ct.cost[U] >= INF) continue;
        ++res.explored;
        Rational v(static_cast<long>(ct.cost[U]));
        for (std::size_t j = 0; j < t.pool.size(); ++j)
            if (!(U & (1u << j))) v += penalty[t.pool[j]];
        if (!set || v < res.value) {
            set = true;
            res.value = v;
            bestU = U;
        }
    }
    res.paths = cover_paths(t, ct, bestU);
    return res;
}

Rational exact_min_cover_cost(const MetricInstance& inst, int root, int B, const CostMatrix* cost) {
    check_root(inst, root);
    if (inst.n() > 8) throw GuardError("prize-collecting path guard: n > 8");
    if (B < 0 || B > inst.n()) throw std::out_of_range("coverage target out of range");
    auto t = build_path_table(metric_of(inst, cost), root, pool_without(inst.n(), root));
    auto ct = path_covers(t);
    Cost best = INF;
    for (unsigned U = 0; U < ct.cost.size(); ++U)
        if (std::popcount(U) + 1 >= B) best = std::min(best, ct.cost[U]);
    return Rational(static_cast<long>(best));
}

Rational exact_max_cover_weight(const MetricInstance& inst, int root, const std::vector<Rational>& w,
                                const Rational& C, const CostMatrix* cost) {
    check_root(inst, root);
    if (inst.n() > 8) throw GuardError("prize-collecting path guard: n > 8");
    if (static_cast<int>(w.size()) != inst.n()) throw std::invalid_argument("weight vector size mismatch");
    auto t = build_path_table(metric_of(inst, cost), root, pool_without(inst.n(), root));
    auto ct = path_covers(t);
    Rational best = 0;
    for (unsigned U = 0; U < ct.cost.size(); ++U) {
        if (ct.cost[U] >= INF || Rational(static_cast<long>(ct.cost[U])) > C) continue;
        Rational s = 0;
        for (std::size_t j = 0; j < t.pool.size(); ++j)
            if (U & (1u << j)) s += w[t.pool[j]];
        best = std::max(best, s);
    }
    return best;
}

}  // namespace mlp
