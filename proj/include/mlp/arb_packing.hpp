#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mlp {

using Weight = std::int64_t;

class PackingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Nodes 0..n-1, arc weights in a dense matrix (w[u][v] = 0 means no arc).
struct WeightedDigraph {
    int root = 0;
    std::vector<std::vector<Weight>> w;

    WeightedDigraph() = default;
    WeightedDigraph(int n, int r) : root(r), w(n, std::vector<Weight>(n, 0)) {}
    int n() const { return static_cast<int>(w.size()); }
    void add(int u, int v, Weight x);
    Weight in_degree(int u) const;
    Weight out_degree(int u) const;
};

// parent[v] = -1 if v is not spanned; parent[root] = root.
struct Arborescence {
    std::vector<int> parent;

    bool contains(int v) const { return parent[v] >= 0; }
    bool has_arc(int a, int b) const { return parent[b] == a && a != b; }
    int size() const;
    std::vector<std::pair<int, int>> arcs() const;  // sorted
};

struct ArbFamily {
    Weight K = 0;
    std::vector<std::pair<Weight, Arborescence>> members;
};

struct Requirement {
    int a, b;
    Weight need;
};

Weight connectivity(const WeightedDigraph& D, int x, int y);

// Adds (u,root) arcs so every node is balanced. Throws PackingError if some
// non-root node has in-degree < out-degree.
WeightedDigraph eulerianize(const WeightedDigraph& D);

// Largest x <= min(w(t,u), w(u,v)) such that moving x onto (t,v) keeps every
// requirement satisfied.
Weight max_splittable(const WeightedDigraph& D, int t, int u, int v, const std::vector<Requirement>& protect);

struct PackingOptions {
    std::ostream* trace = nullptr;   // split/unsplit log
    bool check_splits = false;       // re-verify protected pairs after each split
};

ArbFamily pack_arborescences(const WeightedDigraph& D, Weight K, const PackingOptions& opt = {});

struct PackingReport {
    bool ok = true;
    std::vector<std::string> problems;
};

PackingReport verify_packing(const WeightedDigraph& D, Weight K, const ArbFamily& family);

}  // namespace mlp
