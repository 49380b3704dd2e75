#include "mlp/formulations.hpp"

#include "mlp/maxflow.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <stdexcept>

namespace mlp {

const char* lp_kind_name(LpKind k) {
    switch (k) {
        case LpKind::pclp: return "PC-LP";
        case LpKind::lp1: return "LP1";
        case LpKind::lp2: return "LP2";
        case LpKind::lp3: return "LP3";
    }
    return "?";
}

Rational LpSolution::x(int copy, int v, int t) const {
    if (t < 0 || t >= static_cast<int>(xvar[copy][v].size())) return 0;
    return value(xvar[copy][v][t]);
}

Rational LpSolution::x_total(int v, int t) const {
    Rational s = 0;
    for (int c = 0; c < copies(); ++c) s += x(c, v, t);
    return s;
}

bool LpSolution::recheck() const {
    if (max_violation(lp, values) != 0) return false;
    return !separator || separator(values).empty();
}

CostMatrix service_arc_costs(const MetricInstance& inst) {
    CostMatrix c = inst.cost;
    for (int u = 0; u < inst.n(); ++u)
        for (int v = 0; v < inst.n(); ++v)
            if (u != v) c[u][v] += inst.service[v];
    return c;
}

CostMatrix doubled_service_metric(const MetricInstance& inst) {
    CostMatrix c = inst.cost;
    for (int u = 0; u < inst.n(); ++u)
        for (int v = 0; v < inst.n(); ++v)
            c[u][v] = u == v ? 0 : 2 * c[u][v] + inst.service[u] + inst.service[v];
    return c;
}

namespace {

std::string var_name(const char* p, int a, int b, int c) {
    return std::string(p) + "_" + std::to_string(a) + "_" + std::to_string(b) + "_" + std::to_string(c);
}

// Bidirected arcs of a copy rooted at r; arcs entering r never help and are left out.
std::vector<std::pair<int, int>> copy_arcs(int n, int r) {
    std::vector<std::pair<int, int>> arcs;
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v)
            if (u != v && v != r) arcs.emplace_back(u, v);
    return arcs;
}

// Min-cut test for one sink. Returns the sink side of a violated cut, or empty.
std::vector<bool> violated_cut(const std::vector<std::vector<Rational>>& cap, int r, int v, const Rational& need) {
    auto f = max_flow<Rational>(cap, r, v, &need);
    if (f.value >= need) return {};
    std::vector<bool> sink_side(cap.size());
    for (std::size_t u = 0; u < cap.size(); ++u) sink_side[u] = !f.source_side[u];
    return sink_side;
}

std::vector<std::vector<Rational>> capacities(int n, const std::vector<std::pair<int, int>>& arcs,
                                              const std::vector<int>& vars, const std::vector<Rational>& x) {
    std::vector<std::vector<Rational>> cap(n, std::vector<Rational>(n, Rational(0)));
    for (std::size_t a = 0; a < arcs.size(); ++a) cap[arcs[a].first][arcs[a].second] = x[vars[a]];
    return cap;
}

void add_in_cut_terms(Constraint& c, const std::vector<std::pair<int, int>>& arcs, const std::vector<int>& vars,
                      const std::vector<bool>& in_set) {
    for (std::size_t a = 0; a < arcs.size(); ++a)
        if (!in_set[arcs[a].first] && in_set[arcs[a].second]) c.terms.push_back({vars[a], 1});
}

LpSolution finish(LpSolution sol, const LpOptions& opt) {
    LpResult res = sol.separator ? solve_with_cuts(sol.lp, sol.separator, opt) : solve_lp(sol.lp, opt);
    sol.values = std::move(res.x);
    sol.objective = res.objective;
    sol.cut_rounds = res.cut_rounds;
    sol.cuts_added = res.cuts_added;
    if (opt.exact && max_violation(sol.lp, sol.values) != 0)
        throw std::logic_error("LP solution violates its own constraints");
    return sol;
}

// Index of the first time step at which a node can carry x for a copy.
int first_time(Cost dist, Cost scale) { return static_cast<int>(std::max<Cost>(1, (dist + scale - 1) / scale)); }

}  // namespace

LpSolution build_and_solve_pclp(const MetricInstance& inst, int root, const std::vector<Rational>& penalty,
                                const CostMatrix* cost, const LpOptions& opt) {
    const int n = inst.n();
    if (root < 0 || root >= n) throw std::out_of_range("root index out of range");
    if (static_cast<int>(penalty.size()) != n) throw std::invalid_argument("penalty vector size mismatch");
    for (int v = 0; v < n; ++v)
        if (v != root && penalty[v] < 0) throw std::invalid_argument("negative penalty");
    const CostMatrix& c = cost ? *cost : inst.cost;
    LpSolution sol;
    sol.which = LpKind::pclp;
    sol.copy_root = {root};
    sol.arcs = {copy_arcs(n, root)};
    const auto& arcs = sol.arcs[0];
    sol.zvar.assign(1, std::vector<std::vector<int>>(1));
    for (auto [u, v] : arcs) sol.zvar[0][0].push_back(sol.lp.add_variable(var_name("x", u, v, 0), Rational(static_cast<long>(c[u][v]))));
    sol.penalty_var.assign(n, -1);
    for (int v = 0; v < n; ++v)
        if (v != root) sol.penalty_var[v] = sol.lp.add_variable("z_" + std::to_string(v), penalty[v]);
    const auto& xv = sol.zvar[0][0];
    for (int v = 0; v < n; ++v) {
        if (v == root) continue;
        Constraint deg, single;
        deg.sense = Sense::ge;
        single.sense = Sense::ge;
        single.rhs = 1;
        for (std::size_t a = 0; a < arcs.size(); ++a) {
            if (arcs[a].second == v) {
                deg.terms.push_back({xv[a], 1});
                single.terms.push_back({xv[a], 1});
            } else if (arcs[a].first == v) {
                deg.terms.push_back({xv[a], -1});
            }
        }
        single.terms.push_back({sol.penalty_var[v], 1});
        sol.lp.add_constraint(deg);
        sol.lp.add_constraint(single);
    }
    auto pv = sol.penalty_var;
    sol.separator = [n, root, arcs, xv, pv](const std::vector<Rational>& x) {
        std::vector<Constraint> cuts;
        auto cap = capacities(n, arcs, xv, x);
        for (int v = 0; v < n; ++v) {
            if (v == root) continue;
            Rational need = 1 - x[pv[v]];
            if (need <= 0) continue;
            auto S = violated_cut(cap, root, v, need);
            if (S.empty()) continue;
            Constraint cut;
            cut.sense = Sense::ge;
            cut.rhs = 1;
            add_in_cut_terms(cut, arcs, xv, S);
            cut.terms.push_back({pv[v], 1});
            cuts.push_back(std::move(cut));
        }
        return cuts;
    };
    return finish(std::move(sol), opt);
}

LpSolution build_and_solve_lp3(const MetricInstance& inst, int T, const LpOptions& opt) {
    if (T < 1) throw std::invalid_argument("time horizon must be >= 1");
    const int n = inst.n(), k = inst.k();
    const CostMatrix c = inst.has_service ? service_arc_costs(inst) : inst.cost;
    LpSolution sol;
    sol.which = LpKind::lp3;
    sol.T = T;
    sol.aggregated = inst.single_depot();
    const int copies = sol.aggregated ? 1 : k;
    const long budget_scale = sol.aggregated ? k : 1;
    for (int i = 0; i < copies; ++i) sol.copy_root.push_back(inst.roots[i]);
    const auto clients = inst.clients();
    sol.xvar.assign(copies, std::vector<std::vector<int>>(n, std::vector<int>(T + 1, -1)));
    sol.zvar.assign(copies, std::vector<std::vector<int>>(T + 1));
    for (int i = 0; i < copies; ++i) {
        const int r = sol.copy_root[i];
        sol.arcs.push_back(copy_arcs(n, r));
        for (int v : clients) {
            if (!inst.allows(v, i)) continue;  // aggregated copies only arise with a single depot
            for (int t = first_time(c[r][v], 1); t <= T; ++t)
                sol.xvar[i][v][t] = sol.lp.add_variable(var_name("x", i, v, t), Rational(static_cast<long>(t * inst.weight[v])));
        }
        for (int t = 1; t <= T; ++t)
            for (auto [u, v] : sol.arcs[i]) sol.zvar[i][t].push_back(sol.lp.add_variable(var_name("z", i, u * n + v, t), 0));
    }
    for (int v : clients) {
        Constraint asg;
        asg.sense = Sense::ge;
        asg.rhs = 1;
        for (int i = 0; i < copies; ++i)
            for (int t = 1; t <= T; ++t)
                if (sol.xvar[i][v][t] >= 0) asg.terms.push_back({sol.xvar[i][v][t], 1});
        if (asg.terms.empty())
            throw LpError(LpStatus::infeasible, "time horizon too small: node " + inst.nodes[v] + " cannot be reached");
        sol.lp.add_constraint(asg);
    }
    for (int i = 0; i < copies; ++i) {
        const auto& arcs = sol.arcs[i];
        for (int t = 1; t <= T; ++t) {
            const auto& zv = sol.zvar[i][t];
            Constraint bud;
            bud.sense = Sense::le;
            bud.rhs = Rational(budget_scale * t);
            for (std::size_t a = 0; a < arcs.size(); ++a)
                if (c[arcs[a].first][arcs[a].second] != 0)
                    bud.terms.push_back({zv[a], Rational(static_cast<long>(c[arcs[a].first][arcs[a].second]))});
            sol.lp.add_constraint(bud);
            for (int v : clients) {
                Constraint deg;
                deg.sense = Sense::ge;
                for (std::size_t a = 0; a < arcs.size(); ++a) {
                    if (arcs[a].second == v) deg.terms.push_back({zv[a], 1});
                    else if (arcs[a].first == v) deg.terms.push_back({zv[a], -1});
                }
                sol.lp.add_constraint(deg);
                // singleton cut: z(in(v)) >= x up to t
                Constraint single;
                single.sense = Sense::ge;
                for (int tp = 1; tp <= t; ++tp)
                    if (sol.xvar[i][v][tp] >= 0) single.terms.push_back({sol.xvar[i][v][tp], -1});
                if (single.terms.empty()) continue;
                for (std::size_t a = 0; a < arcs.size(); ++a)
                    if (arcs[a].second == v) single.terms.push_back({zv[a], 1});
                sol.lp.add_constraint(single);
            }
        }
    }
    auto xvar = sol.xvar;
    auto zvar = sol.zvar;
    auto all_arcs = sol.arcs;
    auto roots = sol.copy_root;
    sol.separator = [n, T, clients, xvar, zvar, all_arcs, roots](const std::vector<Rational>& x) {
        std::vector<Constraint> cuts;
        for (std::size_t i = 0; i < roots.size(); ++i) {
            const auto& arcs = all_arcs[i];
            for (int t = 1; t <= T; ++t) {
                std::vector<std::vector<Rational>> cap;
                for (int v : clients) {
                    Rational need = 0;
                    for (int tp = 1; tp <= t; ++tp)
                        if (xvar[i][v][tp] >= 0) need += x[xvar[i][v][tp]];
                    if (need <= 0) continue;
                    if (cap.empty()) cap = capacities(n, arcs, zvar[i][t], x);
                    auto S = violated_cut(cap, roots[i], v, need);
                    if (S.empty()) continue;
                    Constraint cut;
                    cut.sense = Sense::ge;
                    add_in_cut_terms(cut, arcs, zvar[i][t], S);
                    for (int tp = 1; tp <= t; ++tp)
                        if (xvar[i][v][tp] >= 0) cut.terms.push_back({xvar[i][v][tp], -1});
                    cuts.push_back(std::move(cut));
                }
            }
        }
        return cuts;
    };
    return finish(std::move(sol), opt);
}

namespace {

struct CopyPaths {
    int root;
    std::vector<int> pool;  // clients usable by the copy
    PathTable table;
};

// Scaled metric for path formulations and its scale factor.
std::pair<CostMatrix, Cost> path_metric(const MetricInstance& inst) {
    if (inst.has_service) return {doubled_service_metric(inst), 2};
    return {inst.cost, 1};
}

std::vector<unsigned> maximal_masks(const PathTable& t, Cost limit) {
    std::vector<unsigned> out;
    const std::size_t m = t.pool.size();
    for (unsigned mask = 0; mask < t.len.size(); ++mask) {
        if (t.len[mask] > limit) continue;
        bool is_max = true;
        for (std::size_t j = 0; j < m && is_max; ++j)
            if (!(mask & (1u << j)) && t.len[mask | (1u << j)] <= limit) is_max = false;
        if (is_max) out.push_back(mask);
    }
    return out;
}

std::vector<int> mask_nodes(const std::vector<int>& pool, unsigned mask) {
    std::vector<int> out;
    for (std::size_t j = 0; j < pool.size(); ++j)
        if (mask & (1u << j)) out.push_back(pool[j]);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<CopyPaths> copy_tables(const MetricInstance& inst, const CostMatrix& metric, int copies,
                                   std::size_t cap, Cost limit) {
    std::vector<CopyPaths> out;
    std::size_t states = 0;
    for (int i = 0; i < copies; ++i) {
        CopyPaths cp;
        cp.root = inst.roots[i];
        for (int v : inst.clients())
            if (inst.allows(v, i)) cp.pool.push_back(v);
        if (cp.pool.size() > 20 || (std::size_t{1} << cp.pool.size()) * std::max<std::size_t>(1, cp.pool.size()) > cap)
            throw GuardError("instance too large for enumeration");
        cp.table = build_path_table(metric, cp.root, cp.pool);
        for (const auto& row : cp.table.dp)
            for (Cost d : row)
                if (d <= limit) ++states;
        if (states > cap) throw GuardError("instance too large for enumeration");
        out.push_back(std::move(cp));
    }
    return out;
}

// Adds the coverage rows shared by LP1 and LP2 for one (copy, t).
void add_cover_rows(LpSolution& sol, int copy, int t, const std::vector<int>& clients,
                    const std::vector<std::pair<int, std::vector<int>>>& cols) {
    for (int v : clients) {
        Constraint cov;
        cov.sense = Sense::ge;
        for (int tp = 1; tp <= t; ++tp)
            if (sol.xvar[copy][v][tp] >= 0) cov.terms.push_back({sol.xvar[copy][v][tp], -1});
        if (cov.terms.empty()) continue;
        for (const auto& [var, covered] : cols)
            if (std::binary_search(covered.begin(), covered.end(), v)) cov.terms.push_back({var, 1});
        sol.lp.add_constraint(cov);
    }
}

void add_assignment_rows(LpSolution& sol, const MetricInstance& inst) {
    for (int v : inst.clients()) {
        Constraint asg;
        asg.sense = Sense::ge;
        asg.rhs = 1;
        for (int i = 0; i < sol.copies(); ++i)
            for (int t = 1; t <= sol.T; ++t)
                if (sol.xvar[i][v][t] >= 0) asg.terms.push_back({sol.xvar[i][v][t], 1});
        if (asg.terms.empty())
            throw LpError(LpStatus::infeasible, "time horizon too small: node " + inst.nodes[v] + " cannot be reached");
        sol.lp.add_constraint(asg);
    }
}

}  // namespace

LpSolution build_and_solve_lp1(const MetricInstance& inst, int T, const EnumerationCaps& caps, const LpOptions& opt) {
    if (T < 1) throw std::invalid_argument("time horizon must be >= 1");
    const int n = inst.n(), k = inst.k();
    auto [metric, scale] = path_metric(inst);
    LpSolution sol;
    sol.which = LpKind::lp1;
    sol.T = T;
    sol.aggregated = inst.single_depot();
    const int copies = sol.aggregated ? 1 : k;
    for (int i = 0; i < copies; ++i) sol.copy_root.push_back(inst.roots[i]);
    auto tables = copy_tables(inst, metric, copies, caps.lp1, scale * T);
    sol.xvar.assign(copies, std::vector<std::vector<int>>(n, std::vector<int>(T + 1, -1)));
    std::size_t ncols = 0;
    for (int i = 0; i < copies; ++i) {
        const auto& cp = tables[i];
        for (std::size_t j = 0; j < cp.pool.size(); ++j) {
            int v = cp.pool[j];
            for (int t = first_time(cp.table.len[1u << j], scale); t <= T; ++t)
                sol.xvar[i][v][t] = sol.lp.add_variable(var_name("x", i, v, t), Rational(static_cast<long>(t * inst.weight[v])));
        }
        for (int t = 1; t <= T; ++t) {
            std::vector<std::pair<int, std::vector<int>>> cols;
            Constraint one;
            one.sense = Sense::le;
            one.rhs = sol.aggregated ? k : 1;
            for (unsigned mask : maximal_masks(cp.table, scale * t)) {
                if (++ncols > caps.lp1) throw GuardError("instance too large for enumeration");
                PathColumn col;
                col.copy = i;
                col.t = t;
                col.path = cp.table.path(mask);
                col.covered = mask_nodes(cp.pool, mask);
                col.var = sol.lp.add_variable(var_name("P", i, static_cast<int>(sol.paths.size()), t), 0);
                one.terms.push_back({col.var, 1});
                cols.emplace_back(col.var, col.covered);
                sol.paths.push_back(std::move(col));
            }
            sol.lp.add_constraint(one);
            add_cover_rows(sol, i, t, inst.clients(), cols);
        }
    }
    add_assignment_rows(sol, inst);
    return finish(std::move(sol), opt);
}

LpSolution build_and_solve_lp2(const MetricInstance& inst, int T, const EnumerationCaps& caps, const LpOptions& opt) {
    if (T < 1) throw std::invalid_argument("time horizon must be >= 1");
    const int n = inst.n(), k = inst.k();
    auto [metric, scale] = path_metric(inst);
    LpSolution sol;
    sol.which = LpKind::lp2;
    sol.T = T;
    sol.copy_root = {inst.roots[0]};
    auto tables = copy_tables(inst, metric, k, caps.lp2, scale * T);
    const auto clients = inst.clients();
    std::vector<int> bit(n, -1);
    for (std::size_t j = 0; j < clients.size(); ++j) bit[clients[j]] = static_cast<int>(j);
    auto global = [&](int i, unsigned pm) {
        unsigned g = 0;
        for (std::size_t j = 0; j < tables[i].pool.size(); ++j)
            if (pm & (1u << j)) g |= 1u << bit[tables[i].pool[j]];
        return g;
    };
    sol.xvar.assign(1, std::vector<std::vector<int>>(n, std::vector<int>(T + 1, -1)));
    std::size_t work = 0;
    for (int t = 1; t <= T; ++t) {
        // unions of per-vehicle maximal sets, built one vehicle at a time
        std::map<unsigned, std::vector<unsigned>> reach{{0u, {}}};
        for (int i = 0; i < k; ++i) {
            auto maxi = maximal_masks(tables[i].table, scale * t);
            std::map<unsigned, std::vector<unsigned>> next;
            for (const auto& [U, pick] : reach) {
                for (unsigned pm : maxi) {
                    if (++work > caps.lp2) throw GuardError("instance too large for enumeration");
                    unsigned V = U | global(i, pm);
                    if (next.count(V)) continue;
                    auto p = pick;
                    p.push_back(pm);
                    next.emplace(V, std::move(p));
                }
            }
            reach.swap(next);
        }
        Constraint one;
        one.sense = Sense::le;
        one.rhs = 1;
        std::vector<std::pair<int, std::vector<int>>> cols;
        unsigned any = 0;
        for (const auto& [U, pick] : reach) {
            bool dominated = false;
            for (const auto& other : reach)
                if (other.first != U && (other.first & U) == U) dominated = true;
            if (dominated) continue;
            any |= U;
            ConfigColumn col;
            col.t = t;
            for (int i = 0; i < k; ++i) col.paths.push_back(tables[i].table.path(pick[i]));
            for (std::size_t j = 0; j < clients.size(); ++j)
                if (U & (1u << j)) col.covered.push_back(clients[j]);
            col.var = sol.lp.add_variable("C_" + std::to_string(sol.configs.size()) + "_" + std::to_string(t), 0);
            one.terms.push_back({col.var, 1});
            cols.emplace_back(col.var, col.covered);
            sol.configs.push_back(std::move(col));
        }
        for (std::size_t j = 0; j < clients.size(); ++j)
            if (any & (1u << j))
                sol.xvar[0][clients[j]][t] = sol.lp.add_variable(var_name("x", 0, clients[j], t),
                                                                 Rational(static_cast<long>(t * inst.weight[clients[j]])));
        sol.lp.add_constraint(one);
        add_cover_rows(sol, 0, t, clients, cols);
    }
    add_assignment_rows(sol, inst);
    return finish(std::move(sol), opt);
}

}  // namespace mlp
