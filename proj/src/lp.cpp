#include "mlp/lp.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <ostream>
#include <set>

namespace mlp {

int LinearProgram::add_variable(std::string name, Rational c) {
    names.push_back(std::move(name));
    cost.push_back(std::move(c));
    return static_cast<int>(cost.size()) - 1;
}

void LinearProgram::add_constraint(Constraint c) {
    for (const auto& t : c.terms)
        if (t.var < 0 || t.var >= num_vars()) throw std::invalid_argument("constraint references undeclared variable");
    rows.push_back(std::move(c));
}

void LinearProgram::write_lp_format(std::ostream& os) const {
    auto term = [&](const Rational& a, int j) {
        os << (a < 0 ? " - " : " + ") << to_double(abs(a)) << " " << names[j];
    };
    os << "Minimize\n obj:";
    for (int j = 0; j < num_vars(); ++j)
        if (cost[j] != 0) term(cost[j], j);
    os << "\nSubject To\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        os << " c" << i << ":";
        for (const auto& t : rows[i].terms) term(t.coef, t.var);
        os << (rows[i].sense == Sense::le ? " <= " : rows[i].sense == Sense::ge ? " >= " : " = ")
           << to_double(rows[i].rhs) << "\n";
    }
    os << "End\n";
}

Rational max_violation(const LinearProgram& lp, const std::vector<Rational>& x) {
    Rational worst = 0;
    for (int j = 0; j < lp.num_vars(); ++j)
        if (-x[j] > worst) worst = -x[j];
    for (const auto& r : lp.rows) {
        Rational lhs = 0;
        for (const auto& t : r.terms) lhs += t.coef * x[t.var];
        Rational v = 0;
        if (r.sense != Sense::ge && lhs > r.rhs) v = lhs - r.rhs;
        if (r.sense != Sense::le && lhs < r.rhs) v = r.rhs - lhs;
        if (v > worst) worst = v;
    }
    return worst;
}

namespace {

using SparseVec = std::vector<std::pair<int, Rational>>;  // sorted by index

// row_i -= f * row_p
void axpy(SparseVec& a, const Rational& f, const SparseVec& p) {
    SparseVec out;
    out.reserve(a.size() + p.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < p.size()) {
        if (j == p.size() || (i < a.size() && a[i].first < p[j].first)) {
            out.push_back(std::move(a[i++]));
        } else if (i == a.size() || p[j].first < a[i].first) {
            out.emplace_back(p[j].first, -f * p[j].second);
            ++j;
        } else {
            Rational v = a[i].second - f * p[j].second;
            if (v != 0) out.emplace_back(a[i].first, std::move(v));
            ++i;
            ++j;
        }
    }
    a = std::move(out);
}

const Rational* find_entry(const SparseVec& r, int col) {
    auto it = std::lower_bound(r.begin(), r.end(), col, [](const auto& e, int c) { return e.first < c; });
    return (it != r.end() && it->first == col) ? &it->second : nullptr;
}

// Solves M z = rhs for a square sparse matrix given by rows. nullopt if singular.
std::optional<std::vector<Rational>> sparse_solve(std::vector<SparseVec> rows, std::vector<Rational> rhs) {
    const int m = static_cast<int>(rows.size());
    std::vector<int> colcount(m, 0);
    for (const auto& r : rows)
        for (const auto& e : r) ++colcount[e.first];
    std::vector<bool> active(m, true), col_done(m, false);
    std::vector<std::pair<int, int>> order;  // (row, col)
    for (int step = 0; step < m; ++step) {
        int p = -1;
        for (int i = 0; i < m; ++i)
            if (active[i] && (p < 0 || rows[i].size() < rows[p].size())) p = i;
        if (rows[p].empty()) return std::nullopt;
        int q = -1;
        for (const auto& e : rows[p])
            if (q < 0 || colcount[e.first] < colcount[q]) q = e.first;
        active[p] = false;
        col_done[q] = true;
        for (const auto& e : rows[p]) --colcount[e.first];
        Rational piv = *find_entry(rows[p], q);
        for (int i = 0; i < m; ++i) {
            if (!active[i]) continue;
            const Rational* a = find_entry(rows[i], q);
            if (!a) continue;
            Rational f = *a / piv;
            for (const auto& e : rows[i]) --colcount[e.first];
            axpy(rows[i], f, rows[p]);
            for (const auto& e : rows[i]) ++colcount[e.first];
            rhs[i] -= f * rhs[p];
        }
        order.emplace_back(p, q);
    }
    std::vector<Rational> z(m);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        auto [p, q] = *it;
        Rational s = rhs[p];
        Rational piv;
        for (const auto& e : rows[p]) {
            if (e.first == q) piv = e.second;
            else s -= e.second * z[e.first];
        }
        z[q] = s / piv;
    }
    return z;
}

// Internal column numbering: [0,N) structural, N+i slack of row i, N+m+i artificial of row i.
struct Model {
    const LinearProgram& lp;
    int N, m;
    std::vector<SparseVec> acol;  // structural columns
    std::vector<int> sigma;       // slack sign per row (0 for equality rows)

    explicit Model(const LinearProgram& p) : lp(p), N(p.num_vars()), m(static_cast<int>(p.rows.size())) {
        acol.assign(N, {});
        sigma.assign(m, 0);
        for (int i = 0; i < m; ++i) {
            for (const auto& t : lp.rows[i].terms)
                if (t.coef != 0) acol[t.var].emplace_back(i, t.coef);
            sigma[i] = lp.rows[i].sense == Sense::le ? 1 : lp.rows[i].sense == Sense::ge ? -1 : 0;
        }
        for (auto& c : acol) {
            std::sort(c.begin(), c.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
            // merge duplicates
            SparseVec merged;
            for (auto& e : c) {
                if (!merged.empty() && merged.back().first == e.first) merged.back().second += e.second;
                else merged.push_back(e);
            }
            std::erase_if(merged, [](const auto& e) { return e.second == 0; });
            c = std::move(merged);
        }
    }
    bool is_artificial(int j) const { return j >= N + m; }
    bool is_slack(int j) const { return j >= N && j < N + m; }
    SparseVec column(int j) const {
        if (j < N) return acol[j];
        if (j < N + m) return {{j - N, Rational(sigma[j - N])}};
        return {{j - N - m, Rational(1)}};
    }
    Rational cost(int j) const { return j < N ? lp.cost[j] : Rational(0); }
};

// ---------------- floating-point dense tableau ----------------

struct DoubleSimplex {
    const Model& M;
    int m, ncols;  // ncols = N + 2m
    std::vector<double> T;  // (m+1) rows x (ncols+1)
    std::vector<int> basis;
    double tol;

    double& at(int r, int c) { return T[static_cast<std::size_t>(r) * (ncols + 1) + c]; }

    DoubleSimplex(const Model& model, double t) : M(model), m(model.m), ncols(model.N + 2 * model.m), tol(t) {
        T.assign(static_cast<std::size_t>(m + 1) * (ncols + 1), 0.0);
        basis.assign(m, -1);
        for (int j = 0; j < M.N; ++j)
            for (const auto& [i, v] : M.acol[j]) at(i, j) = v.get_d();
        for (int i = 0; i < m; ++i) {
            at(i, ncols) = M.lp.rows[i].rhs.get_d();
            if (M.sigma[i] != 0) at(i, M.N + i) = M.sigma[i];
            double sign = at(i, ncols) < 0 ? -1.0 : 1.0;
            if (sign < 0)
                for (int c = 0; c <= ncols; ++c) at(i, c) = -at(i, c);
            if (M.sigma[i] != 0 && at(i, M.N + i) > 0) {
                basis[i] = M.N + i;
            } else {
                at(i, M.N + m + i) = 1.0;
                basis[i] = M.N + m + i;
            }
        }
    }

    void pivot(int r, int c) {
        double p = at(r, c);
        double* prow = &T[static_cast<std::size_t>(r) * (ncols + 1)];
        nz.clear();
        for (int j = 0; j <= ncols; ++j) {
            if (prow[j] == 0.0) continue;
            prow[j] /= p;
            nz.push_back(j);
        }
        // the tableau stays sparse on these LPs; only touch the pivot row's support
        for (int i = 0; i <= m; ++i) {
            if (i == r) continue;
            double* row = &T[static_cast<std::size_t>(i) * (ncols + 1)];
            double f = row[c];
            if (f == 0.0) continue;
            for (int j : nz) row[j] -= f * prow[j];
            row[c] = 0.0;
        }
        basis[r] = c;
    }
    std::vector<int> nz;

    void set_objective(const std::vector<double>& c) {
        for (int j = 0; j <= ncols; ++j) at(m, j) = j < ncols ? c[j] : 0.0;
        for (int i = 0; i < m; ++i) {
            double cb = c[basis[i]];
            if (cb == 0.0) continue;
            for (int j = 0; j <= ncols; ++j) at(m, j) -= cb * at(i, j);
        }
    }

    // returns false if unbounded
    bool run(const std::vector<bool>& enterable) {
        int degenerate = 0;
        const long long cap = 200LL * (m + ncols) + 10000;
        for (long long it = 0; it < cap; ++it) {
            bool bland = degenerate > 50;
            int c = -1;
            double best = -1e-9;
            for (int j = 0; j < ncols; ++j) {
                if (!enterable[j]) continue;
                double d = at(m, j);
                if (d < best) {
                    c = j;
                    if (bland) break;
                    best = d;
                }
            }
            if (c < 0) return true;
            int r = -1;
            double ratio = 0;
            for (int i = 0; i < m; ++i) {
                double a = at(i, c);
                if (a <= 1e-9) continue;
                double q = std::max(0.0, at(i, ncols)) / a;
                if (r < 0 || q < ratio - 1e-12 ||
                    (q <= ratio + 1e-12 && (bland ? basis[i] < basis[r] : a > at(r, c)))) {
                    r = i;
                    ratio = q;
                }
            }
            if (r < 0) return false;
            degenerate = ratio <= 1e-12 ? degenerate + 1 : 0;
            pivot(r, c);
        }
        throw std::runtime_error("simplex iteration limit reached");
    }

    // Phase 1 + Phase 2. Returns status.
    LpStatus solve() {
        std::vector<double> c1(ncols, 0.0);
        std::vector<bool> enter(ncols, false);
        for (int j = 0; j < M.N; ++j) enter[j] = true;
        for (int i = 0; i < m; ++i) {
            c1[M.N + m + i] = 1.0;
            if (M.sigma[i] != 0) enter[M.N + i] = true;
        }
        set_objective(c1);
        run(enter);
        if (-at(m, ncols) > tol * std::max(1.0, 1.0)) return LpStatus::infeasible;
        // drive artificials out of the basis where possible
        for (int i = 0; i < m; ++i) {
            if (!M.is_artificial(basis[i])) continue;
            int c = -1;
            for (int j = 0; j < ncols; ++j)
                if (enter[j] && std::fabs(at(i, j)) > 1e-7 && (c < 0 || std::fabs(at(i, j)) > std::fabs(at(i, c)))) c = j;
            if (c >= 0) pivot(i, c);
        }
        std::vector<double> c2(ncols, 0.0);
        for (int j = 0; j < M.N; ++j) c2[j] = M.lp.cost[j].get_d();
        set_objective(c2);
        return run(enter) ? LpStatus::optimal : LpStatus::unbounded;
    }
};

// ---------------- exact certification and repair ----------------

struct ExactState {
    std::vector<Rational> xB;
    std::vector<Rational> y;
    bool primal_ok = false;
};

std::optional<ExactState> exact_point(const Model& M, const std::vector<int>& basis) {
    const int m = M.m;
    std::vector<SparseVec> rows(m), cols(m);
    for (int k = 0; k < m; ++k) {
        cols[k] = M.column(basis[k]);
        for (const auto& [i, v] : cols[k]) rows[i].emplace_back(k, v);
    }
    std::vector<Rational> b(m);
    for (int i = 0; i < m; ++i) b[i] = M.lp.rows[i].rhs;
    auto xB = sparse_solve(rows, b);
    if (!xB) return std::nullopt;
    std::vector<Rational> cB(m);
    for (int k = 0; k < m; ++k) cB[k] = M.cost(basis[k]);
    auto y = sparse_solve(cols, cB);  // B^T y = cB: row k of B^T is column k of B
    if (!y) return std::nullopt;
    ExactState s;
    s.xB = std::move(*xB);
    s.y = std::move(*y);
    s.primal_ok = true;
    for (int k = 0; k < m; ++k) {
        if (s.xB[k] < 0) s.primal_ok = false;
        if (M.is_artificial(basis[k]) && s.xB[k] != 0) s.primal_ok = false;
    }
    return s;
}

Rational reduced_cost(const Model& M, const std::vector<Rational>& y, int j) {
    Rational d = M.cost(j);
    for (const auto& [i, v] : M.column(j)) d -= y[i] * v;
    return d;
}

// Exact primal simplex (Bland) from a primal-feasible basis. Returns false on unboundedness.
bool exact_primal(const Model& M, std::vector<int>& basis, ExactState& st, int& pivots) {
    const int m = M.m;
    const int last = M.N + m;  // artificials never enter
    while (true) {
        std::vector<bool> in_basis(M.N + 2 * m, false);
        for (int j : basis) in_basis[j] = true;
        int enter = -1;
        for (int j = 0; j < last && enter < 0; ++j) {
            if (in_basis[j]) continue;
            if (M.is_slack(j) && M.sigma[j - M.N] == 0) continue;
            if (reduced_cost(M, st.y, j) < 0) enter = j;
        }
        if (enter < 0) return true;
        std::vector<SparseVec> rows(m);
        for (int k = 0; k < m; ++k)
            for (const auto& [i, v] : M.column(basis[k])) rows[i].emplace_back(k, v);
        std::vector<Rational> a(m);
        for (const auto& [i, v] : M.column(enter)) a[i] = v;
        auto w = sparse_solve(rows, a);
        if (!w) throw std::runtime_error("singular basis in exact simplex");
        int leave = -1;
        Rational ratio;
        for (int k = 0; k < m; ++k) {
            Rational q;
            if (M.is_artificial(basis[k])) {
                if ((*w)[k] == 0) continue;
                q = 0;
            } else {
                if ((*w)[k] <= 0) continue;
                q = st.xB[k] / (*w)[k];
            }
            if (leave < 0 || q < ratio || (q == ratio && basis[k] < basis[leave])) {
                leave = k;
                ratio = q;
            }
        }
        if (leave < 0) return false;
        basis[leave] = enter;
        ++pivots;
        auto next = exact_point(M, basis);
        if (!next) throw std::runtime_error("singular basis in exact simplex");
        st = std::move(*next);
    }
}

LpResult assemble(const Model& M, const std::vector<int>& basis, const std::vector<Rational>& xB) {
    LpResult res;
    res.x.assign(M.N, Rational(0));
    for (int k = 0; k < M.m; ++k)
        if (basis[k] < M.N) res.x[basis[k]] = xB[k];
    res.objective = 0;
    for (int j = 0; j < M.N; ++j) res.objective += M.lp.cost[j] * res.x[j];
    return res;
}

}  // namespace

LpResult solve_lp(const LinearProgram& lp, const LpOptions& opt) {
    if (lp.num_vars() < 1) throw std::invalid_argument("LP has no variables");
    Model M(lp);
    DoubleSimplex ds(M, opt.tolerance);
    LpStatus st;
    try {
        st = ds.solve();
    } catch (const std::runtime_error&) {
        return solve_lp_reference(lp);
    }
    // floating-point verdicts other than optimal are confirmed exactly
    if (st != LpStatus::optimal) return solve_lp_reference(lp);
    if (!opt.exact) {
        LpResult res;
        res.x.assign(M.N, Rational(0));
        for (int i = 0; i < M.m; ++i)
            if (ds.basis[i] < M.N) res.x[ds.basis[i]] = Rational(std::max(0.0, ds.at(i, ds.ncols)));
        res.objective = 0;
        for (int j = 0; j < M.N; ++j) res.objective += lp.cost[j] * res.x[j];
        return res;
    }
    std::vector<int> basis = ds.basis;
    auto point = exact_point(M, basis);
    if (!point || !point->primal_ok) return solve_lp_reference(lp);
    int pivots = 0;
    if (!exact_primal(M, basis, *point, pivots)) throw LpError(LpStatus::unbounded, "LP is unbounded");
    LpResult res = assemble(M, basis, point->xB);
    res.exact_pivots = pivots;
    return res;
}

LpResult solve_lp_reference(const LinearProgram& lp) {
    if (lp.num_vars() < 1) throw std::invalid_argument("LP has no variables");
    Model M(lp);
    const int m = M.m, N = M.N, ncols = N + 2 * m;
    std::vector<std::vector<Rational>> T(m + 1, std::vector<Rational>(ncols + 1));
    std::vector<int> basis(m);
    for (int j = 0; j < N; ++j)
        for (const auto& [i, v] : M.acol[j]) T[i][j] = v;
    for (int i = 0; i < m; ++i) {
        T[i][ncols] = lp.rows[i].rhs;
        if (M.sigma[i] != 0) T[i][N + i] = M.sigma[i];
        if (T[i][ncols] < 0)
            for (auto& v : T[i]) v = -v;
        if (M.sigma[i] != 0 && T[i][N + i] > 0) {
            basis[i] = N + i;
        } else {
            T[i][N + m + i] = 1;
            basis[i] = N + m + i;
        }
    }
    auto pivot = [&](int r, int c) {
        Rational p = T[r][c];
        for (auto& v : T[r]) v /= p;
        for (int i = 0; i <= m; ++i) {
            if (i == r || T[i][c] == 0) continue;
            Rational f = T[i][c];
            for (int j = 0; j <= ncols; ++j)
                if (T[r][j] != 0) T[i][j] -= f * T[r][j];
        }
        basis[r] = c;
    };
    auto set_obj = [&](const std::vector<Rational>& c) {
        for (int j = 0; j <= ncols; ++j) T[m][j] = j < ncols ? c[j] : Rational(0);
        for (int i = 0; i < m; ++i) {
            Rational cb = c[basis[i]];
            if (cb == 0) continue;
            for (int j = 0; j <= ncols; ++j) T[m][j] -= cb * T[i][j];
        }
    };
    std::vector<bool> enter(ncols, false);
    for (int j = 0; j < N; ++j) enter[j] = true;
    for (int i = 0; i < m; ++i)
        if (M.sigma[i] != 0) enter[N + i] = true;
    auto run = [&]() {
        while (true) {
            int c = -1;
            for (int j = 0; j < ncols && c < 0; ++j)
                if (enter[j] && T[m][j] < 0) c = j;
            if (c < 0) return true;
            int r = -1;
            Rational ratio;
            for (int i = 0; i < m; ++i) {
                if (T[i][c] <= 0) continue;
                Rational q = T[i][ncols] / T[i][c];
                if (r < 0 || q < ratio || (q == ratio && basis[i] < basis[r])) {
                    r = i;
                    ratio = q;
                }
            }
            if (r < 0) return false;
            pivot(r, c);
        }
    };
    std::vector<Rational> c1(ncols, Rational(0));
    for (int i = 0; i < m; ++i) c1[N + m + i] = 1;
    set_obj(c1);
    run();
    if (T[m][ncols] != 0) throw LpError(LpStatus::infeasible, "LP is infeasible");
    for (int i = 0; i < m; ++i) {
        if (!M.is_artificial(basis[i])) continue;
        for (int j = 0; j < ncols; ++j)
            if (enter[j] && T[i][j] != 0) {
                pivot(i, j);
                break;
            }
    }
    std::vector<Rational> c2(ncols, Rational(0));
    for (int j = 0; j < N; ++j) c2[j] = lp.cost[j];
    set_obj(c2);
    if (!run()) throw LpError(LpStatus::unbounded, "LP is unbounded");
    std::vector<Rational> xB(m);
    for (int i = 0; i < m; ++i) xB[i] = T[i][ncols];
    return assemble(M, basis, xB);
}

namespace {

bool same_constraint(const Constraint& a, const Constraint& b) {
    if (a.sense != b.sense || a.rhs != b.rhs || a.terms.size() != b.terms.size()) return false;
    for (std::size_t i = 0; i < a.terms.size(); ++i)
        if (a.terms[i].var != b.terms[i].var || a.terms[i].coef != b.terms[i].coef) return false;
    return true;
}

}  // namespace

LpResult solve_with_cuts(LinearProgram& lp, const Separator& sep, const LpOptions& opt) {
    int added = 0, rounds = 0;
    while (true) {
        LpResult res = solve_lp(lp, opt);
        ++rounds;
        auto cuts = sep(res.x);
        if (cuts.empty()) {
            res.cut_rounds = rounds;
            res.cuts_added = added;
            return res;
        }
        for (auto& c : cuts) {
            std::sort(c.terms.begin(), c.terms.end(), [](const Term& a, const Term& b) { return a.var < b.var; });
            for (const auto& r : lp.rows)
                if (same_constraint(r, c)) throw std::runtime_error("cutting-plane loop made no progress");
            lp.add_constraint(c);
            if (++added > opt.max_cuts) throw std::runtime_error("cut limit exceeded");
        }
    }
}

}  // namespace mlp
