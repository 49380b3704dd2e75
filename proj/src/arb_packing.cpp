#include "mlp/arb_packing.hpp"
#include "mlp/maxflow.hpp"

#include <algorithm>
#include <map>
#include <ostream>

namespace mlp {

void WeightedDigraph::add(int u, int v, Weight x) {
    if (u == v) return;
    w[u][v] += x;
}

Weight WeightedDigraph::in_degree(int u) const {
    Weight s = 0;
    for (int a = 0; a < n(); ++a)
        if (a != u) s += w[a][u];
    return s;
}

Weight WeightedDigraph::out_degree(int u) const {
    Weight s = 0;
    for (int b = 0; b < n(); ++b)
        if (b != u) s += w[u][b];
    return s;
}

int Arborescence::size() const {
    int c = 0;
    for (int p : parent) c += p >= 0;
    return c;
}

std::vector<std::pair<int, int>> Arborescence::arcs() const {
    std::vector<std::pair<int, int>> out;
    for (int v = 0; v < static_cast<int>(parent.size()); ++v)
        if (parent[v] >= 0 && parent[v] != v) out.emplace_back(parent[v], v);
    std::sort(out.begin(), out.end());
    return out;
}

Weight connectivity(const WeightedDigraph& D, int x, int y) {
    if (x < 0 || y < 0 || x >= D.n() || y >= D.n()) throw PackingError("unknown node");
    return max_flow(D.w, x, y).value;
}

WeightedDigraph eulerianize(const WeightedDigraph& D) {
    WeightedDigraph E = D;
    for (int u = 0; u < D.n(); ++u) {
        E.w[u][u] = 0;
        if (u == D.root) continue;
        Weight in = D.in_degree(u), out = D.out_degree(u);
        if (in < out)
            throw PackingError("in-degree " + std::to_string(in) + " < out-degree " + std::to_string(out) +
                               " at node " + std::to_string(u));
        if (in > out) E.w[u][D.root] += in - out;
    }
    return E;
}

namespace {

void apply_split(std::vector<std::vector<Weight>>& w, int t, int u, int v, Weight x) {
    w[t][u] -= x;
    w[u][v] -= x;
    if (t != v) w[t][v] += x;  // a split producing a loop just drops the weight
}

bool requirements_hold(const std::vector<std::vector<Weight>>& w, const std::vector<Requirement>& protect) {
    for (const auto& r : protect) {
        if (r.need <= 0) continue;
        if (max_flow(w, r.a, r.b, &r.need).value < r.need) return false;
    }
    return true;
}

}  // namespace

Weight max_splittable(const WeightedDigraph& D, int t, int u, int v, const std::vector<Requirement>& protect) {
    if (t == u || u == v) throw PackingError("split arcs must share a distinct middle node");
    if (D.w[t][u] <= 0 || D.w[u][v] <= 0) throw PackingError("split arcs must have positive weight");
    Weight hi = std::min(D.w[t][u], D.w[u][v]);
    auto feasible = [&](Weight x) {
        auto w = D.w;
        apply_split(w, t, u, v, x);
        return requirements_hold(w, protect);
    };
    if (feasible(hi)) return hi;
    Weight lo = 0;  // feasible
    while (hi - lo > 1) {
        Weight mid = lo + (hi - lo) / 2;
        if (feasible(mid)) lo = mid; else hi = mid;
    }
    return lo;
}

namespace {

struct SplitRecord {
    int t, u, v;
    Weight x;
    Weight need_u;  // min{K, lambda(r,u)} in the graph before this split
};

using Family = std::vector<std::pair<Weight, Arborescence>>;

// Moves `amount` of member i into a new member (same tree), returns its index.
std::size_t carve(Family& fam, std::size_t i, Weight amount) {
    if (amount == fam[i].first) return i;
    fam[i].first -= amount;
    fam.emplace_back(amount, fam[i].second);
    return fam.size() - 1;
}

Weight coverage(const Family& fam, int u) {
    Weight c = 0;
    for (const auto& [g, F] : fam)
        if (F.contains(u)) c += g;
    return c;
}

Weight arc_use(const Family& fam, int a, int b) {
    Weight c = 0;
    for (const auto& [g, F] : fam)
        if (F.has_arc(a, b)) c += g;
    return c;
}

bool on_root_path(const Arborescence& F, int root, int u, int t, int v) {
    for (int x = u; x != root; x = F.parent[x])
        if (x == v && F.parent[x] == t) return true;
    return false;
}

void unsplit(Family& fam, std::vector<std::vector<Weight>>& w, int root, const SplitRecord& s, std::ostream* trace) {
    const int t = s.t, u = s.u, v = s.v;
    w[t][u] += s.x;
    w[u][v] += s.x;
    if (t != v) w[t][v] -= s.x;

    // Give arc g=(t,v) back by routing trees that use it through u.
    if (t != v && v != root) {
        Weight budget = std::min(s.x, arc_use(fam, t, v));
        for (std::size_t i = 0; i < fam.size() && budget > 0; ++i) {
            if (!fam[i].second.has_arc(t, v)) continue;
            std::size_t j = carve(fam, i, std::min(budget, fam[i].first));
            budget -= fam[j].first;
            Arborescence& F = fam[j].second;
            if (!F.contains(u)) {
                F.parent[u] = t;
                F.parent[v] = u;
            } else if (!on_root_path(F, root, u, t, v)) {
                F.parent[v] = u;
            } else {
                F.parent[u] = t;  // drops the old last arc into u
                F.parent[v] = u;
            }
        }
    }

    // Raise coverage of u to its requirement using spare in-arcs of u.
    Weight deficit = s.need_u - coverage(fam, u);
    while (deficit > 0) {
        bool progress = false;
        for (int a = 0; a < static_cast<int>(w.size()) && deficit > 0; ++a) {
            if (a == u || w[a][u] <= 0) continue;
            Weight spare = w[a][u] - arc_use(fam, a, u);
            for (std::size_t i = 0; i < fam.size() && spare > 0 && deficit > 0; ++i) {
                const Arborescence& F = fam[i].second;
                if (!F.contains(a) || F.contains(u)) continue;
                Weight take = std::min({spare, deficit, fam[i].first});
                std::size_t j = carve(fam, i, take);
                fam[j].second.parent[u] = a;
                spare -= take;
                deficit -= take;
                progress = true;
            }
        }
        if (!progress) throw PackingError("cannot restore coverage of node " + std::to_string(u));
    }
    if (trace)
        *trace << "unsplit t=" << t << " u=" << u << " v=" << v << " x=" << s.x << " members=" << fam.size() << "\n";
}

void merge_identical(Family& fam) {
    std::map<std::vector<int>, Weight> acc;
    for (auto& [g, F] : fam)
        if (g > 0) acc[F.parent] += g;
    fam.clear();
    for (auto& [p, g] : acc) fam.push_back({g, Arborescence{p}});
}

}  // namespace

ArbFamily pack_arborescences(const WeightedDigraph& D, Weight K, const PackingOptions& opt) {
    if (K < 0) throw PackingError("K must be nonnegative");
    const int n = D.n();
    const int r = D.root;
    WeightedDigraph E = eulerianize(D);
    ArbFamily out;
    out.K = K;
    if (K == 0) return out;

    auto w = E.w;
    auto degree = [&](int u) {
        Weight s = 0;
        for (int a = 0; a < n; ++a)
            if (a != u) s += w[a][u] + w[u][a];
        return s;
    };
    auto cap = [&](int a, int b) {
        return std::min(K, max_flow(w, a, b, &K).value);
    };

    std::vector<SplitRecord> splits;
    int center = -1;
    std::vector<Requirement> protect;
    while (true) {
        if (center < 0 || degree(center) == 0) {
            center = -1;
            Weight best = 0;
            for (int v = 0; v < n; ++v) {
                if (v == r || degree(v) == 0) continue;
                Weight lam = cap(r, v);
                if (center < 0 || lam < best) {
                    center = v;
                    best = lam;
                }
            }
            if (center < 0) break;
            protect.clear();
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) {
                    if (a == b || a == center || b == center) continue;
                    if (a != r && degree(a) == 0) continue;
                    if (degree(b) == 0) continue;
                    Weight need = cap(a, b);
                    if (need > 0) protect.push_back({a, b, need});
                }
            if (opt.trace) *opt.trace << "center " << center << " lambda(r,center)=" << best << "\n";
        }
        int u = center;
        int v = -1;
        for (int b = 0; b < n && v < 0; ++b)
            if (b != u && w[u][b] > 0) v = b;
        if (v < 0) throw PackingError("unbalanced node during splitting");
        Weight need_u = cap(r, u);
        WeightedDigraph cur(n, r);
        cur.w = w;
        bool done = false;
        for (int t = 0; t < n && !done; ++t) {
            if (t == u || w[t][u] <= 0) continue;
            Weight x = max_splittable(cur, t, u, v, protect);
            if (x <= 0) continue;
            apply_split(w, t, u, v, x);
            splits.push_back({t, u, v, x, need_u});
            if (opt.trace) *opt.trace << "split t=" << t << " u=" << u << " v=" << v << " x=" << x << "\n";
            if (opt.check_splits && !requirements_hold(w, protect))
                throw PackingError("split broke a protected connectivity");
            done = true;
        }
        if (!done) throw PackingError("no splittable pair at node " + std::to_string(u));
    }

    Family fam;
    Arborescence base;
    base.parent.assign(n, -1);
    base.parent[r] = r;
    fam.push_back({K, base});
    for (auto it = splits.rbegin(); it != splits.rend(); ++it) unsplit(fam, w, r, *it, opt.trace);
    merge_identical(fam);
    out.members = std::move(fam);
    return out;
}

PackingReport verify_packing(const WeightedDigraph& D, Weight K, const ArbFamily& family) {
    PackingReport rep;
    auto fail = [&](std::string m) {
        rep.ok = false;
        rep.problems.push_back(std::move(m));
    };
    const int n = D.n();
    const int r = D.root;
    Weight total = 0;
    std::vector<std::vector<Weight>> use(n, std::vector<Weight>(n, 0));
    std::vector<Weight> cover(n, 0);
    for (std::size_t i = 0; i < family.members.size(); ++i) {
        const auto& [g, F] = family.members[i];
        if (g <= 0) fail("member " + std::to_string(i) + " has nonpositive weight");
        total += g;
        if (static_cast<int>(F.parent.size()) != n || F.parent[r] != r) {
            fail("member " + std::to_string(i) + " is not rooted at r");
            continue;
        }
        bool good = true;
        for (int v = 0; v < n && good; ++v) {
            if (F.parent[v] < 0 || v == r) continue;
            int x = v, steps = 0;
            while (x != r && steps <= n) {
                x = F.parent[x];
                if (x < 0 || x == F.parent[x] && x != r) break;
                ++steps;
            }
            if (x != r || steps > n) {
                fail("member " + std::to_string(i) + ": node " + std::to_string(v) + " not reachable from r");
                good = false;
            }
        }
        if (!good) continue;
        for (int v = 0; v < n; ++v) {
            if (F.parent[v] < 0) continue;
            cover[v] += g;
            if (v != r) use[F.parent[v]][v] += g;
        }
    }
    if (total != K) fail("weight total " + std::to_string(total) + " != K=" + std::to_string(K));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (use[a][b] > (a == b ? 0 : D.w[a][b]))
                fail("arc (" + std::to_string(a) + "," + std::to_string(b) + ") used " + std::to_string(use[a][b]) +
                     " > capacity " + std::to_string(D.w[a][b]));
    for (int v = 0; v < n; ++v) {
        if (v == r) continue;
        Weight need = std::min(K, connectivity(D, r, v));
        if (cover[v] < need)
            fail("node " + std::to_string(v) + " covered " + std::to_string(cover[v]) + " < " + std::to_string(need));
    }
    return rep;
}

}  // namespace mlp
