#pragma once

#include "mlp/instance.hpp"

#include <random>
#include <string>

namespace mlp {

enum class MetricKind { random, euclid_line, euclid_plane };

MetricKind parse_metric_kind(const std::string& s);

struct GeneratorSpec {
    int n = 5;          // total nodes including depots
    int k = 1;          // vehicles
    bool single_depot = true;
    int max_cost = 6;
    MetricKind kind = MetricKind::random;
};

// Integer metric built constructively (metric closure or point placement).
// Every client ends up at distance >= 1 from every depot.
MetricInstance random_instance(const GeneratorSpec& spec, std::mt19937_64& rng);

// Fixture instances: a line at 0,1,3 with one depot, and a line at 0,1,3,4
// with depots at both ends.
MetricInstance line_instance(const std::vector<Cost>& positions, const std::vector<int>& root_positions_idx);
MetricInstance fixture_a();
MetricInstance fixture_b();

}  // namespace mlp
