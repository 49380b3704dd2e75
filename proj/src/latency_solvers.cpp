#include "mlp/latency_solvers.hpp"

#include "mlp/arb_packing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace mlp {

void SolverConfig::validate() const {
    if (growth) {
        double c = to_double(*growth);
        if (!(*growth > 1) || !(c < std::exp(1.0))) throw std::invalid_argument("growth must lie in (1, e)");
    }
    if (epsilon <= 0) throw std::invalid_argument("epsilon must be positive");
    if (kappa < 1) throw std::invalid_argument("kappa must be >= 1");
}

std::vector<int> tree_preorder(const RootedTree& tree) {
    const int n = static_cast<int>(tree.parent.size());
    std::vector<std::vector<int>> children(n);
    for (int v = 0; v < n; ++v)
        if (tree.parent[v] >= 0 && v != tree.root) children[tree.parent[v]].push_back(v);
    std::vector<int> order, stack{tree.root};
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        order.push_back(u);
        for (auto it = children[u].rbegin(); it != children[u].rend(); ++it) stack.push_back(*it);
    }
    return order;
}

namespace {

// Non-root nodes of the preorder that belong to `keep`; throws if keep leaves the tree.
std::vector<int> restricted_order(const RootedTree& tree, const std::vector<int>& keep) {
    std::vector<char> in(tree.parent.size(), 0);
    for (int v : keep) {
        if (v < 0 || v >= static_cast<int>(tree.parent.size()) || !tree.contains(v))
            throw std::invalid_argument("node subset must lie inside the tree");
        in[v] = 1;
    }
    std::vector<int> out;
    for (int v : tree_preorder(tree))
        if (v != tree.root && in[v]) out.push_back(v);
    return out;
}

std::vector<Cycle> pad(std::vector<Cycle> cycles, int k, int root) {
    if (static_cast<int>(cycles.size()) > k) throw std::logic_error("more cycles than vehicles");
    while (static_cast<int>(cycles.size()) < k) cycles.push_back({root});
    return cycles;
}

}  // namespace

std::vector<Cycle> split_tree_into_k_tours(const RootedTree& tree, int k, const std::vector<int>& keep,
                                           const CostMatrix& cost) {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    if (std::find(keep.begin(), keep.end(), tree.root) == keep.end())
        throw std::invalid_argument("kept nodes must include the root");
    auto seq = restricted_order(tree, keep);
    const Rational limit = Rational(2 * static_cast<long>(tree.cost(cost))) / k;
    std::vector<Cycle> cycles;
    Cost inside = 0;
    for (std::size_t p = 0; p < seq.size(); ++p) {
        if (p > 0 && Rational(static_cast<long>(inside + cost[seq[p - 1]][seq[p]])) <= limit) {
            inside += cost[seq[p - 1]][seq[p]];
            cycles.back().push_back(seq[p]);
            continue;
        }
        cycles.push_back({tree.root, seq[p]});
        inside = 0;
    }
    return pad(std::move(cycles), k, tree.root);
}

std::vector<Cycle> break_cycle_with_service(const RootedTree& tree, const std::vector<int>& S, int k,
                                            const std::vector<Cost>& d, const CostMatrix& cost) {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    std::vector<int> P{tree.root};
    for (int v : restricted_order(tree, S)) P.push_back(v);
    const int m = static_cast<int>(P.size()) - 1;
    if (m == 0) return pad({}, k, tree.root);
    Cost dq = 0;
    for (int v : tree.nodes()) dq += d[v];
    const Rational twoM = Rational(2 * static_cast<long>(tree.cost(cost) + dq)) / k;
    // prefix sums along P
    std::vector<Cost> len(m + 1, 0), ds(m + 1, 0);
    ds[0] = d[P[0]];
    for (int i = 1; i <= m; ++i) {
        len[i] = len[i - 1] + cost[P[i - 1]][P[i]];
        ds[i] = ds[i - 1] + d[P[i]];
    }
    auto charge = [&](int a, int b) {  // c(P_ab) + 2d(V(P_ab)) - d_a - d_b
        Cost dsum = ds[b] - (a > 0 ? ds[a - 1] : 0);
        return Rational(static_cast<long>(len[b] - len[a] + 2 * dsum - d[P[a]] - d[P[b]]));
    };
    std::vector<std::pair<int, int>> segs;
    int a = 0;
    while (true) {
        int found = -1;
        bool snip_before = false;
        for (int b = a + 1; b <= m; ++b) {
            Rational ch = charge(a, b);
            if (ch > twoM) {
                found = b;
                snip_before = true;
                break;
            }
            if (ch + static_cast<long>(d[P[b]]) > twoM) {
                found = b;
                break;
            }
        }
        if (found < 0) {
            segs.emplace_back(a, m);
            break;
        }
        if (snip_before) {
            segs.emplace_back(a, found - 1);
            a = found;
        } else {
            segs.emplace_back(a, found);
            if (found == m) break;
            a = found + 1;
        }
    }
    std::vector<Cycle> cycles;
    for (auto [x, y] : segs) {
        Cycle z{tree.root};
        for (int i = std::max(x, 1); i <= y; ++i) z.push_back(P[i]);
        cycles.push_back(std::move(z));
    }
    return pad(std::move(cycles), k, tree.root);
}

namespace {

// Arrival time (service of the node included) of every non-root node on the cycle.
std::vector<std::pair<int, Cost>> arrivals(const MetricInstance& inst, const Cycle& z, bool reverse) {
    std::vector<int> order(z.begin() + 1, z.end());
    if (reverse) std::reverse(order.begin(), order.end());
    std::vector<std::pair<int, Cost>> out;
    Cost time = 0;
    int prev = z[0];
    for (int v : order) {
        time += inst.c(prev, v) + inst.service[v];
        out.emplace_back(v, time);
        prev = v;
    }
    return out;
}

Cost duration(const MetricInstance& inst, const Cycle& z) {
    Cost total = 0;
    for (std::size_t p = 1; p < z.size(); ++p) total += inst.c(z[p - 1], z[p]) + inst.service[z[p]];
    if (z.size() > 1) total += inst.c(z.back(), z[0]);
    return total;
}

}  // namespace

Stitched stitch_stages(const MetricInstance& inst, const std::vector<Stage>& stages, bool derandomize,
                       std::mt19937_64& rng) {
    const int n = inst.n(), k = inst.k();
    const int ns = static_cast<int>(stages.size());
    for (const auto& st : stages) {
        if (static_cast<int>(st.size()) != k) throw std::invalid_argument("stage needs one cycle per vehicle");
        for (int i = 0; i < k; ++i)
            if (st[i].empty() || st[i][0] != inst.roots[i]) throw std::invalid_argument("cycle must start at its depot");
    }
    std::vector<int> first(n, -1);
    std::vector<std::vector<int>> cand(n);
    for (int s = 0; s < ns; ++s)
        for (int i = 0; i < k; ++i)
            for (std::size_t p = 1; p < stages[s][i].size(); ++p) {
                int v = stages[s][i][p];
                if (inst.is_root(v) || !inst.allows(v, i)) continue;
                if (first[v] == -1) first[v] = s;
                if (first[v] == s && std::find(cand[v].begin(), cand[v].end(), i) == cand[v].end()) cand[v].push_back(i);
            }
    std::vector<std::vector<Cost>> start(ns, std::vector<Cost>(k, 0));
    std::vector<Cost> clock(k, 0);
    for (int s = 0; s < ns; ++s)
        for (int i = 0; i < k; ++i) {
            start[s][i] = clock[i];
            clock[i] += duration(inst, stages[s][i]);
        }
    // direction per cycle, judged on the nodes tentatively charged to it
    std::vector<std::vector<char>> rev(ns, std::vector<char>(k, 0));
    std::vector<std::vector<std::vector<Cost>>> pos(ns, std::vector<std::vector<Cost>>(k));
    for (int s = 0; s < ns; ++s)
        for (int i = 0; i < k; ++i) {
            const Cycle& z = stages[s][i];
            if (derandomize) {
                Cost sum[2] = {0, 0};
                for (int r = 0; r < 2; ++r)
                    for (auto [v, at] : arrivals(inst, z, r == 1))
                        if (!inst.is_root(v) && first[v] == s && !cand[v].empty() && cand[v][0] == i)
                            sum[r] += inst.weight[v] * at;
                rev[s][i] = sum[1] < sum[0];
            } else {
                rev[s][i] = static_cast<char>(rng() & 1u);
            }
            pos[s][i].assign(n, -1);
            for (auto [v, at] : arrivals(inst, z, rev[s][i]))
                if (pos[s][i][v] < 0) pos[s][i][v] = at;
        }
    std::vector<int> owner(n, -1);
    Stitched out;
    for (int v = 0; v < n; ++v) {
        if (first[v] < 0) continue;
        const int s = first[v];
        Cost best = std::numeric_limits<Cost>::max();
        for (int i : cand[v]) {
            Cost lat = start[s][i] + pos[s][i][v];
            if (lat < best) {
                best = lat;
                owner[v] = i;
            }
        }
        out.walk_latency += inst.weight[v] * best;
    }
    out.plan.variant = natural_objective(inst);
    out.plan.routes.assign(k, {});
    for (int i = 0; i < k; ++i) {
        auto& route = out.plan.routes[i];
        route.push_back(inst.roots[i]);
        for (int s = 0; s < ns; ++s)
            for (auto [v, at] : arrivals(inst, stages[s][i], rev[s][i]))
                if (owner[v] == i && first[v] == s && std::find(route.begin(), route.end(), v) == route.end())
                    route.push_back(v);
    }
    return out;
}

namespace {

bool all_clients_covered(const MetricInstance& inst, const std::vector<char>& covered) {
    for (int v : inst.clients())
        if (!covered[v]) return false;
    return true;
}

SolverRun no_clients(const MetricInstance& inst) {
    SolverRun run;
    run.plan.variant = natural_objective(inst);
    for (int r : inst.roots) run.plan.routes.push_back({r});
    run.cost = 0;
    run.walk_latency = 0;
    return run;
}

void finish(const MetricInstance& inst, SolverRun& run, const SolverConfig& cfg, std::mt19937_64& rng) {
    auto st = stitch_stages(inst, run.stages, cfg.derandomize, rng);
    run.plan = std::move(st.plan);
    run.walk_latency = Rational(static_cast<long>(st.walk_latency));
    // nodes the truncated sampling never reached go to the nearest allowed depot
    std::vector<char> served(inst.n(), 0);
    for (const auto& r : run.plan.routes)
        for (int v : r) served[v] = 1;
    std::vector<std::pair<Cost, int>> late;
    std::vector<int> target(inst.n(), -1);
    for (int v : inst.clients()) {
        if (served[v]) continue;
        Cost best = std::numeric_limits<Cost>::max();
        for (int i = 0; i < inst.k(); ++i)
            if (inst.allows(v, i) && inst.c(inst.roots[i], v) < best) {
                best = inst.c(inst.roots[i], v);
                target[v] = i;
            }
        late.emplace_back(best, v);
    }
    std::sort(late.begin(), late.end());
    for (auto [dist, v] : late) run.plan.routes[target[v]].push_back(v);
    run.leftovers = static_cast<int>(late.size());
    run.cost = evaluate_plan(inst, run.plan);
}

struct TimePoints {
    double h = 1, c = 2;
    long long rounds = 0;  // last admissible round index

    Cost at(long long j, Cost T) const {
        double t = h * std::pow(c, static_cast<double>(j));
        if (!(t < static_cast<double>(T))) return T;
        return std::clamp<Cost>(static_cast<Cost>(std::floor(t)), 1, T);
    }
};

TimePoints time_points(const MetricInstance& inst, const SolverConfig& cfg, double growth, Cost T,
                       std::mt19937_64& rng) {
    TimePoints tp;
    tp.c = growth;
    double gamma = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    tp.h = std::pow(growth, gamma);
    long long D = 0;
    while (tp.h * std::pow(growth, static_cast<double>(D)) < static_cast<double>(T)) ++D;
    Cost wmax = 1;
    for (int v : inst.clients()) wmax = std::max(wmax, inst.weight[v]);
    double tail = to_double(cfg.kappa) *
                  std::log(static_cast<double>(inst.n()) * static_cast<double>(T) * static_cast<double>(wmax) /
                           to_double(cfg.epsilon));
    tp.rounds = D + static_cast<long long>(std::ceil(std::max(0.0, tail)));
    return tp;
}

// Index into `probs` drawn with the given probabilities; -1 for the residual mass.
int draw(const std::vector<double>& probs, std::mt19937_64& rng) {
    double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (u < probs[i]) return static_cast<int>(i);
        u -= probs[i];
    }
    return -1;
}

Cost horizon_or_throw(const MetricInstance& inst) { return time_horizon(inst).T; }

}  // namespace

SolverRun solve_multidepot(const MetricInstance& inst, const SolverConfig& cfg) {
    if (inst.clients().empty()) return no_clients(inst);
    auto lp = build_and_solve_lp1(inst, static_cast<int>(horizon_or_throw(inst)), cfg.caps);
    return solve_multidepot(inst, lp, cfg);
}

SolverRun solve_multidepot(const MetricInstance& inst, const LpSolution& lp, const SolverConfig& cfg) {
    cfg.validate();
    if (lp.which != LpKind::lp1) throw SolverError("solution is not a path LP solution");
    for (int i = 0; i < lp.copies(); ++i)
        if (lp.copy_root[i] != inst.roots[i] || lp.aggregated != inst.single_depot())
            throw SolverError("solution does not match the instance");
    if (inst.clients().empty()) return no_clients(inst);
    const Cost T = lp.T;
    const int k = inst.k();
    const Rational norm = (lp.aggregated ? Rational(k) : Rational(1)) * cfg.kappa;
    // columns by (copy, t)
    std::map<std::pair<int, int>, std::pair<std::vector<double>, std::vector<const PathColumn*>>> cols;
    for (const auto& col : lp.paths) {
        Rational z = lp.value(col.var);
        if (z == 0) continue;
        auto& [p, c] = cols[{col.copy, col.t}];
        p.push_back(to_double(z / norm));
        c.push_back(&col);
    }
    std::mt19937_64 rng(cfg.seed);
    auto tp = time_points(inst, cfg, to_double(cfg.growth.value_or(make_rational(1616, 1000))), T, rng);
    SolverRun run;
    run.lp_value = lp.objective;
    std::vector<char> covered(inst.n(), 0);
    long long j = 0;
    for (; j <= tp.rounds && !all_clients_covered(inst, covered); ++j) {
        const int t = static_cast<int>(tp.at(j, T));
        Stage st;
        for (int i = 0; i < k; ++i) {
            Cycle z{inst.roots[i]};
            auto it = cols.find({lp.aggregated ? 0 : i, t});
            if (it != cols.end()) {
                int pick = draw(it->second.first, rng);
                if (pick >= 0) z = it->second.second[pick]->path;
            }
            for (std::size_t p = 1; p < z.size(); ++p)
                if (inst.allows(z[p], i)) covered[z[p]] = 1;
            st.push_back(std::move(z));
        }
        run.stages.push_back(std::move(st));
    }
    run.rounds = static_cast<int>(j);
    finish(inst, run, cfg, rng);
    return run;
}

namespace {

void require_single_depot(const MetricInstance& inst) {
    if (!inst.single_depot()) throw SolverError("single-depot algorithm on multi-depot instance");
}

void require_plain(const MetricInstance& inst, const char* what) {
    if (inst.has_weights || inst.has_service) throw SolverError(std::string(what) + " supports the plain objective only");
}

// Envelope points keyed by exact coordinates; the first witness found is kept.
class PointSet {
public:
    void add(const Rational& x, const Rational& y, const RootedTree& tree, const Rational& t, int prefix) {
        Point p{x, y};
        if (!wit_.count(p)) wit_.emplace(p, CornerWitness{x, y, tree, t, prefix});
    }
    std::vector<Point> points() const {
        std::vector<Point> out;
        for (const auto& [p, w] : wit_) out.push_back(p);
        return out;
    }
    const CornerWitness& at(const Point& p) const { return wit_.at(p); }

private:
    std::map<Point, CornerWitness> wit_;
};

// Shortest concatenation path over the envelope of `ps`; fills s, concat and used.
void select_corners(SolverRun& run, const PointSet& ps) {
    auto f = lower_envelope(ps.points());
    auto path = shortest_concat_path(f);
    const int N = path.nodes.back();
    for (int l = 1; l <= N; ++l) run.s.push_back(f.eval(Rational(l)));
    for (std::size_t p = 1; p < path.nodes.size(); ++p) {
        Rational x(path.nodes[p]);
        run.used.push_back(ps.at({x, f.eval(x)}));
    }
    run.concat = std::move(path);
}

SolverRun lp_rounding(const MetricInstance& inst, const SolverConfig& cfg, bool one_vehicle, const LpSolution* given) {
    cfg.validate();
    require_single_depot(inst);
    if (one_vehicle && inst.k() != 1) throw SolverError("single-vehicle algorithm needs k = 1");
    if (inst.clients().empty()) return no_clients(inst);
    const Cost T = horizon_or_throw(inst);
    const int k = inst.k(), n = inst.n(), r = inst.roots[0];
    std::optional<LpSolution> own;
    if (!given) own = build_and_solve_lp3(inst, static_cast<int>(T));
    else if (given->which != LpKind::lp3 || given->T != T || given->copies() != 1 || given->copy_root[0] != r ||
             static_cast<int>(given->xvar[0].size()) != n)
        throw SolverError("solution does not match the instance");
    const LpSolution& lp = given ? *given : *own;
    const CostMatrix mixed = inst.has_service ? service_arc_costs(inst) : inst.cost;
    const auto& arcs = lp.arcs[0];
    PointSet ps;
    ps.add(Rational(static_cast<long>(inst.weight[r])), 0, RootedTree::trivial(n, r), 0, 0);
    std::vector<Rational> reach(n, 0);  // sum of x' up to the current t
    for (int t = 1; t <= T; ++t) {
        for (int v = 0; v < n; ++v) reach[v] += lp.x_total(v, t);
        mpz_class K = 1;
        bool any = false;
        for (std::size_t a = 0; a < arcs.size(); ++a) {
            Rational z = lp.z_arc(0, t, static_cast<int>(a));
            if (z != 0) any = true;
            lcm_denominator(K, z);
        }
        if (!any) continue;
        if (K > mpz_class(std::numeric_limits<Weight>::max() / 64)) throw PackingError("scaling factor too large");
        WeightedDigraph D(n, r);
        for (std::size_t a = 0; a < arcs.size(); ++a) {
            Rational z = lp.z_arc(0, t, static_cast<int>(a)) * K;
            if (z != 0) D.add(arcs[a].first, arcs[a].second, z.get_num().get_si());
        }
        auto fam = pack_arborescences(D, K.get_si());
        for (const auto& [gamma, F] : fam.members) {
            if (gamma <= 0) continue;
            RootedTree q{r, F.parent};
            Rational x = 0;
            for (int v : q.nodes())
                if (v == r || reach[v] > 0) x += static_cast<long>(inst.weight[v]);
            Rational len(static_cast<long>(q.cost(mixed)));
            Rational y = one_vehicle ? Rational(2 * len) : Rational(2 * len / k + 2 * t);
            ps.add(x, y, q, Rational(t), 0);
        }
    }
    SolverRun run;
    run.lp_value = lp.objective;
    select_corners(run, ps);
    for (const auto& w : run.used) {
        const Cost t = floor_int(w.t);
        std::vector<int> keep;
        for (int v : w.tree.nodes()) {
            Rational y = 0;
            for (int tp = 1; tp <= t; ++tp) y += lp.x_total(v, tp);
            if (v == r || y > 0) keep.push_back(v);
        }
        std::vector<Cycle> cycles;
        if (one_vehicle) {
            Cycle z{r};
            for (int v : restricted_order(w.tree, keep)) z.push_back(v);
            cycles.push_back(std::move(z));
        } else if (inst.has_service) {
            cycles = break_cycle_with_service(w.tree, keep, k, inst.service, inst.cost);
        } else {
            cycles = split_tree_into_k_tours(w.tree, k, keep, inst.cost);
        }
        run.stages.push_back(std::move(cycles));
    }
    std::mt19937_64 rng(cfg.seed);
    finish(inst, run, cfg, rng);
    return run;
}

}  // namespace

SolverRun solve_kmlp_lp(const MetricInstance& inst, const SolverConfig& cfg) {
    return lp_rounding(inst, cfg, false, nullptr);
}
SolverRun solve_kmlp_lp(const MetricInstance& inst, const LpSolution& lp3, const SolverConfig& cfg) {
    return lp_rounding(inst, cfg, false, &lp3);
}

SolverRun solve_mlp_lp(const MetricInstance& inst, const SolverConfig& cfg) {
    return lp_rounding(inst, cfg, true, nullptr);
}
SolverRun solve_mlp_lp(const MetricInstance& inst, const LpSolution& lp3, const SolverConfig& cfg) {
    return lp_rounding(inst, cfg, true, &lp3);
}

SolverRun solve_kmlp_combinatorial(const MetricInstance& inst, const SolverConfig& cfg) {
    cfg.validate();
    require_single_depot(inst);
    require_plain(inst, "combinatorial algorithm");
    if (inst.clients().empty()) return no_clients(inst);
    const int n = inst.n(), k = inst.k(), r = inst.roots[0];
    std::vector<int> order;
    for (int v = 0; v < n; ++v) order.push_back(v);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        if ((a == r) != (b == r)) return a == r;
        return inst.c(r, a) < inst.c(r, b);
    });
    PointSet ps;
    for (int j = 1; j <= n; ++j) {
        std::vector<int> prefix(order.begin(), order.begin() + j);
        ParametricPc search(inst, r, nullptr, prefix);
        const Rational reach(static_cast<long>(inst.c(r, order[j - 1])));
        for (int l = 1; l <= j; ++l) {
            auto q = search.coverage(l);
            for (const RootedTree* t : {&q.t1, &q.t2}) {
                if (t == &q.t2 && q.single()) break;
                Rational y = 2 * Rational(static_cast<long>(t->cost(inst.cost))) / k + 2 * reach;
                ps.add(Rational(t->size()), y, *t, reach, j);
            }
        }
    }
    SolverRun run;
    select_corners(run, ps);
    for (const auto& w : run.used) run.stages.push_back(split_tree_into_k_tours(w.tree, k, w.tree.nodes(), inst.cost));
    std::mt19937_64 rng(cfg.seed);
    finish(inst, run, cfg, rng);
    return run;
}

SolverRun round_lp2(const MetricInstance& inst, const LpSolution& lp2, const SolverConfig& cfg) {
    cfg.validate();
    const int k = inst.k();
    if (lp2.which != LpKind::lp2) throw SolverError("solution is not a configuration LP solution");
    for (const auto& col : lp2.configs) {
        if (static_cast<int>(col.paths.size()) != k) throw SolverError("solution does not match the instance");
        for (int i = 0; i < k; ++i)
            if (col.paths[i].empty() || col.paths[i][0] != inst.roots[i])
                throw SolverError("solution does not match the instance");
    }
    if (inst.clients().empty()) return no_clients(inst);
    const Cost T = lp2.T;
    std::map<int, std::pair<std::vector<double>, std::vector<const ConfigColumn*>>> cols;
    for (const auto& col : lp2.configs) {
        Rational z = lp2.value(col.var);
        if (z == 0) continue;
        auto& [p, c] = cols[col.t];
        p.push_back(to_double(z / cfg.kappa));
        c.push_back(&col);
    }
    std::mt19937_64 rng(cfg.seed);
    const double growth = cfg.growth ? to_double(*cfg.growth) : mu_star();
    auto tp = time_points(inst, cfg, growth, T, rng);
    SolverRun run;
    run.lp_value = lp2.objective;
    std::vector<char> covered(inst.n(), 0);
    long long j = 0;
    for (; j <= tp.rounds && !all_clients_covered(inst, covered); ++j) {
        Stage st;
        for (int i = 0; i < k; ++i) st.push_back({inst.roots[i]});
        auto it = cols.find(static_cast<int>(tp.at(j, T)));
        if (it != cols.end()) {
            int pick = draw(it->second.first, rng);
            if (pick >= 0)
                for (int i = 0; i < k; ++i) st[i] = it->second.second[pick]->paths[i];
        }
        for (int i = 0; i < k; ++i)
            for (std::size_t p = 1; p < st[i].size(); ++p)
                if (inst.allows(st[i][p], i)) covered[st[i][p]] = 1;
        run.stages.push_back(std::move(st));
    }
    run.rounds = static_cast<int>(j);
    finish(inst, run, cfg, rng);
    return run;
}

SolverRun round_lp2(const MetricInstance& inst, const SolverConfig& cfg) {
    if (inst.clients().empty()) return no_clients(inst);
    auto lp2 = build_and_solve_lp2(inst, static_cast<int>(horizon_or_throw(inst)), cfg.caps);
    return round_lp2(inst, lp2, cfg);
}

SolverRun bnslb_construction(const MetricInstance& inst, const BnsTable& table, const SolverConfig& cfg) {
    cfg.validate();
    require_plain(inst, "BNSLB construction");
    if (inst.has_allowed) throw SolverError("BNSLB construction needs unrestricted depots");
    const int n = inst.n(), k = inst.k();
    if (static_cast<int>(table.b.size()) != n || static_cast<int>(table.witness.size()) != n)
        throw SolverError("missing witnesses");
    for (const auto& w : table.witness) {
        if (static_cast<int>(w.size()) != k) throw SolverError("missing witnesses");
        for (int i = 0; i < k; ++i)
            if (w[i].empty() || w[i][0] != inst.roots[i]) throw SolverError("witness path does not start at its depot");
    }
    SolverRun run;
    for (const auto& b : table.b) run.s.push_back(2 * b);
    run.concat = shortest_concat_path(run.s);
    for (std::size_t p = 1; p < run.concat->nodes.size(); ++p) {
        const auto& w = table.witness[run.concat->nodes[p] - 1];
        run.stages.push_back(Stage(w.begin(), w.end()));
    }
    std::mt19937_64 rng(cfg.seed);
    finish(inst, run, cfg, rng);
    return run;
}

}  // namespace mlp
