#include "mlp/generators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mlp {

MetricKind parse_metric_kind(const std::string& s) {
    if (s == "random") return MetricKind::random;
    if (s == "euclid-line") return MetricKind::euclid_line;
    if (s == "euclid-plane") return MetricKind::euclid_plane;
    throw std::invalid_argument("unknown metric kind '" + s + "'");
}

namespace {

std::vector<std::string> default_names(int n, int depots) {
    std::vector<std::string> names;
    for (int v = 0; v < n; ++v) names.push_back(v < depots ? "r" + std::to_string(v + 1) : "v" + std::to_string(v - depots + 1));
    return names;
}

}  // namespace

MetricInstance random_instance(const GeneratorSpec& spec, std::mt19937_64& rng) {
    if (spec.n < 1 || spec.k < 1 || spec.max_cost < 1) throw std::invalid_argument("bad generator parameters");
    const int depots = spec.single_depot ? 1 : std::min(spec.k, spec.n);
    const int n = spec.n;
    std::vector<std::vector<Cost>> c(n, std::vector<Cost>(n, 0));
    std::uniform_int_distribution<Cost> pick(1, spec.max_cost);
    if (spec.kind == MetricKind::random) {
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v) c[u][v] = c[v][u] = pick(rng);
        for (int m = 0; m < n; ++m)
            for (int u = 0; u < n; ++u)
                for (int v = 0; v < n; ++v) c[u][v] = std::min(c[u][v], c[u][m] + c[m][v]);
    } else {
        // points on a grid; depots and clients never share a location
        std::vector<std::pair<Cost, Cost>> pos;
        std::uniform_int_distribution<Cost> coord(0, std::max<Cost>(spec.max_cost, n));
        while (static_cast<int>(pos.size()) < n) {
            std::pair<Cost, Cost> p{coord(rng), spec.kind == MetricKind::euclid_plane ? coord(rng) : 0};
            if (std::find(pos.begin(), pos.end(), p) != pos.end()) continue;
            pos.push_back(p);
        }
        for (int u = 0; u < n; ++u)
            for (int v = 0; v < n; ++v) {
                double dx = static_cast<double>(pos[u].first - pos[v].first);
                double dy = static_cast<double>(pos[u].second - pos[v].second);
                // ceil of a metric is a metric
                c[u][v] = static_cast<Cost>(std::ceil(std::sqrt(dx * dx + dy * dy)));
            }
    }
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v)
            if (u != v && c[u][v] == 0) c[u][v] = 1;
    std::vector<int> roots;
    for (int i = 0; i < spec.k; ++i) roots.push_back(spec.single_depot ? 0 : i % depots);
    return make_instance(default_names(n, depots), roots, c);
}

MetricInstance line_instance(const std::vector<Cost>& positions, const std::vector<int>& root_idx) {
    const int n = static_cast<int>(positions.size());
    std::vector<std::vector<Cost>> c(n, std::vector<Cost>(n));
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v) c[u][v] = std::llabs(positions[u] - positions[v]);
    std::vector<std::string> names;
    int client = 0, root = 0;
    for (int v = 0; v < n; ++v) {
        bool is_root = std::find(root_idx.begin(), root_idx.end(), v) != root_idx.end();
        names.push_back(is_root ? (root_idx.size() == 1 ? std::string("r") : "r" + std::to_string(++root))
                                : std::string(1, static_cast<char>('a' + client++)));
    }
    return make_instance(names, root_idx, c);
}

MetricInstance fixture_a() { return line_instance({0, 1, 3}, {0}); }

MetricInstance fixture_b() { return line_instance({0, 1, 3, 4}, {0, 3}); }

}  // namespace mlp
