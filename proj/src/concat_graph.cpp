#include "mlp/concat_graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace mlp {

double mu_star(double tolerance) {
    static std::mutex mu;
    static std::map<double, double> cache;
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find(tolerance); it != cache.end()) return it->second;
    auto g = [](double m) { return m * std::log(m) - m - 1.0; };
    double lo = 3.0, hi = 4.0, mid = 3.5;
    for (int it = 0; it < 200; ++it) {
        mid = 0.5 * (lo + hi);
        double v = g(mid);
        if (std::fabs(v) <= tolerance) break;
        if (v < 0) lo = mid; else hi = mid;
    }
    cache[tolerance] = mid;
    return mid;
}

Rational EnvelopeCurve::eval(const Rational& x) const {
    if (corners.empty() || x < lo() || x > hi()) throw std::out_of_range("envelope evaluated outside its domain");
    for (std::size_t i = 0; i + 1 < corners.size(); ++i) {
        const auto& [x0, y0] = corners[i];
        const auto& [x1, y1] = corners[i + 1];
        if (x <= x1) return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
    }
    return corners.back().second;
}

EnvelopeCurve lower_envelope(std::vector<Point> points) {
    if (points.empty()) throw std::invalid_argument("empty point set");
    EnvelopeCurve f;
    f.points = points;
    std::sort(points.begin(), points.end());
    std::vector<Point> hull;
    for (const auto& p : points) {
        if (!hull.empty() && hull.back().first == p.first) continue;  // lower y kept by sort order
        while (hull.size() >= 2) {
            const auto& a = hull[hull.size() - 2];
            const auto& b = hull.back();
            // drop b unless slope(a,b) < slope(b,p)
            Rational lhs = (b.second - a.second) * (p.first - b.first);
            Rational rhs = (p.second - b.second) * (b.first - a.first);
            if (lhs >= rhs) hull.pop_back(); else break;
        }
        hull.push_back(p);
    }
    f.corners = std::move(hull);
    return f;
}

Rational envelope_integral(const EnvelopeCurve& f, const Rational& lo, const Rational& hi) {
    if (lo > hi || lo < f.lo() || hi > f.hi()) throw std::out_of_range("integration range outside domain");
    Rational total = 0;
    for (std::size_t i = 0; i + 1 < f.corners.size(); ++i) {
        Rational a = std::max(lo, f.corners[i].first);
        Rational b = std::min(hi, f.corners[i + 1].first);
        if (a >= b) continue;
        total += (f.eval(a) + f.eval(b)) * (b - a) / 2;
    }
    return total;
}

Rational edge_length(const std::vector<Rational>& C, int n, int o, int l) {
    if (o < 1 || l <= o || l > n || n > static_cast<int>(C.size()))
        throw std::out_of_range("concatenation edge index out of range");
    return C[l - 1] * (Rational(n) - make_rational(o + l, 2));
}

namespace {

struct Label {
    bool set = false;
    Rational length;
    std::vector<int> seq;
};

bool better(const Rational& len, const std::vector<int>& seq, const Label& cur) {
    if (!cur.set) return true;
    if (len != cur.length) return len < cur.length;
    if (seq.size() != cur.seq.size()) return seq.size() < cur.seq.size();
    return seq < cur.seq;
}

// DP over candidate node ids (sorted, first = 1, last = N); value(l) gives C_l.
template <class Value>
ConcatPath dp_over(const std::vector<int>& cand, int N, Value value) {
    std::vector<Label> lab(cand.size());
    lab[0].set = true;
    lab[0].length = 0;
    lab[0].seq = {cand[0]};
    for (std::size_t j = 1; j < cand.size(); ++j) {
        Rational cl = value(cand[j]);
        for (std::size_t i = 0; i < j; ++i) {
            Rational len = lab[i].length + cl * (Rational(N) - make_rational(cand[i] + cand[j], 2));
            std::vector<int> seq = lab[i].seq;
            seq.push_back(cand[j]);
            if (better(len, seq, lab[j])) {
                lab[j].set = true;
                lab[j].length = len;
                lab[j].seq = std::move(seq);
            }
        }
    }
    return {lab.back().seq, lab.back().length};
}

}  // namespace

ConcatPath shortest_concat_path(const std::vector<Rational>& C) {
    if (C.empty()) throw std::invalid_argument("empty cost sequence");
    if (C[0] != 0) throw std::invalid_argument("C_1 must be 0");
    const int n = static_cast<int>(C.size());
    std::vector<Point> pts;
    for (int l = 1; l <= n; ++l) pts.emplace_back(Rational(l), C[l - 1]);
    auto f = lower_envelope(pts);
    std::vector<int> cand;
    for (const auto& c : f.corners) {
        int l = static_cast<int>(c.first.get_num().get_si());
        if (c.second == C[l - 1]) cand.push_back(l);
    }
    if (cand.front() != 1) cand.insert(cand.begin(), 1);
    if (cand.back() != n) cand.push_back(n);
    return dp_over(cand, n, [&](int l) { return C[l - 1]; });
}

ConcatPath shortest_concat_path(const EnvelopeCurve& f) {
    if (f.lo() != 1 || f.corners.front().second != 0) throw std::invalid_argument("curve must start at (1,0)");
    if (!is_integer(f.hi())) throw std::invalid_argument("curve domain must end at an integer");
    std::vector<int> cand;
    for (const auto& c : f.corners) {
        if (!is_integer(c.first)) throw std::invalid_argument("curve corners must have integer coverage");
        cand.push_back(static_cast<int>(c.first.get_num().get_si()));
    }
    const int N = cand.back();
    return dp_over(cand, N, [&](int l) { return f.eval(Rational(l)); });
}

ConcatPath shortest_concat_path_all_nodes(const std::vector<Rational>& C) {
    if (C.empty() || C[0] != 0) throw std::invalid_argument("C_1 must be 0");
    const int n = static_cast<int>(C.size());
    std::vector<int> cand;
    for (int l = 1; l <= n; ++l) cand.push_back(l);
    return dp_over(cand, n, [&](int l) { return C[l - 1]; });
}

}  // namespace mlp
