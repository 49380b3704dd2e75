#pragma once

#include "mlp/rational.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace mlp {

class InstanceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Complete metric graph with k depot slots. Node indices are positions in `nodes`.
struct MetricInstance {
    std::vector<std::string> nodes;
    std::vector<int> roots;                 // depot node of each vehicle, duplicates allowed
    std::vector<std::vector<Cost>> cost;
    std::vector<Cost> weight;               // 1 unless weights given; roots always 1
    std::vector<Cost> service;              // 0 unless service times given; roots always 0
    std::vector<std::vector<int>> allowed;  // per node: allowed depot nodes (sorted); empty for roots
    bool has_weights = false;
    bool has_service = false;
    bool has_allowed = false;

    int n() const { return static_cast<int>(nodes.size()); }
    int k() const { return static_cast<int>(roots.size()); }
    Cost c(int u, int v) const { return cost[u][v]; }
    bool is_root(int v) const;
    bool single_depot() const;
    // true if vehicle i may serve node v
    bool allows(int v, int vehicle) const;
    std::vector<int> clients() const;
    std::vector<int> distinct_roots() const;
    int index_of(const std::string& name) const;
    Cost total_weight() const;  // over distinct nodes; roots count 1 each (distinct)
};

// Builds an instance from raw data and validates it. Throws InstanceError.
MetricInstance make_instance(std::vector<std::string> nodes, std::vector<int> roots,
                             std::vector<std::vector<Cost>> cost);
void validate(const MetricInstance& inst);

MetricInstance parse_instance(const std::string& text);
std::string instance_to_json(const MetricInstance& inst);

enum class Objective { plain, weighted, service, weighted_service };

Objective natural_objective(const MetricInstance& inst);
const char* objective_name(Objective o);

struct RoutePlan {
    std::vector<std::vector<int>> routes;  // route i starts at roots[i]
    Objective variant = Objective::plain;
};

// Turns raw walks (which may revisit nodes or pass through depots) into simple
// routes: every client keeps only its earliest permitted visit.
RoutePlan shortcut_plan(const MetricInstance& inst, const std::vector<std::vector<int>>& walks,
                        Objective variant);

// Latency per node index (0 for depots). Throws InstanceError on infeasible plans.
std::vector<Rational> per_node_latency(const MetricInstance& inst, const RoutePlan& plan);
Rational evaluate_plan(const MetricInstance& inst, const RoutePlan& plan);

struct TimeHorizon {
    Cost T = 0;
    RoutePlan plan;
};

TimeHorizon time_horizon(const MetricInstance& inst);

}  // namespace mlp
