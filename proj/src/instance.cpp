#include "mlp/instance.hpp"

#include "json.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>

namespace mlp {

using nlohmann::json;

bool MetricInstance::is_root(int v) const {
    return std::find(roots.begin(), roots.end(), v) != roots.end();
}

bool MetricInstance::single_depot() const {
    for (int r : roots)
        if (r != roots.front()) return false;
    return true;
}

bool MetricInstance::allows(int v, int vehicle) const {
    if (!has_allowed) return true;
    const auto& a = allowed[v];
    return std::binary_search(a.begin(), a.end(), roots[vehicle]);
}

std::vector<int> MetricInstance::clients() const {
    std::vector<int> out;
    for (int v = 0; v < n(); ++v)
        if (!is_root(v)) out.push_back(v);
    return out;
}

std::vector<int> MetricInstance::distinct_roots() const {
    std::vector<int> r = roots;
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
    return r;
}

int MetricInstance::index_of(const std::string& name) const {
    auto it = std::find(nodes.begin(), nodes.end(), name);
    if (it == nodes.end()) throw InstanceError("unknown node '" + name + "'");
    return static_cast<int>(it - nodes.begin());
}

Cost MetricInstance::total_weight() const {
    Cost w = 0;
    for (int v = 0; v < n(); ++v) w += weight[v];
    return w;
}

MetricInstance make_instance(std::vector<std::string> nodes, std::vector<int> roots,
                             std::vector<std::vector<Cost>> cost) {
    MetricInstance inst;
    inst.nodes = std::move(nodes);
    inst.roots = std::move(roots);
    inst.cost = std::move(cost);
    inst.weight.assign(inst.n(), 1);
    inst.service.assign(inst.n(), 0);
    inst.allowed.assign(inst.n(), {});
    auto dr = inst.distinct_roots();
    for (int v = 0; v < inst.n(); ++v)
        if (!inst.is_root(v)) inst.allowed[v] = dr;
    validate(inst);
    return inst;
}

void validate(const MetricInstance& inst) {
    const int n = inst.n();
    if (n == 0) throw InstanceError("instance has no nodes");
    if (inst.roots.empty()) throw InstanceError("instance has no roots");
    {
        std::set<std::string> seen(inst.nodes.begin(), inst.nodes.end());
        if (static_cast<int>(seen.size()) != n) throw InstanceError("duplicate node identifier");
    }
    for (int r : inst.roots)
        if (r < 0 || r >= n) throw InstanceError("root index out of range");
    if (static_cast<int>(inst.cost.size()) != n) throw InstanceError("cost matrix has wrong size");
    for (const auto& row : inst.cost)
        if (static_cast<int>(row.size()) != n) throw InstanceError("cost matrix has wrong size");
    for (int u = 0; u < n; ++u) {
        if (inst.cost[u][u] != 0) throw InstanceError("nonzero diagonal at " + inst.nodes[u]);
        for (int v = 0; v < n; ++v) {
            if (inst.cost[u][v] < 0)
                throw InstanceError("negative cost " + inst.nodes[u] + "-" + inst.nodes[v]);
            if (inst.cost[u][v] != inst.cost[v][u])
                throw InstanceError("asymmetric cost " + inst.nodes[u] + "-" + inst.nodes[v]);
        }
    }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int m = 0; m < n; ++m)
                if (inst.cost[a][b] > inst.cost[a][m] + inst.cost[m][b])
                    throw InstanceError("triangle inequality violated: " + inst.nodes[a] + "," +
                                        inst.nodes[m] + "," + inst.nodes[b]);
    for (int v = 0; v < n; ++v) {
        if (inst.is_root(v)) continue;
        for (int r : inst.roots)
            if (inst.cost[r][v] < 1)
                throw InstanceError("root distance < 1 to client " + inst.nodes[v]);
        if (inst.weight[v] < 0) throw InstanceError("negative weight at " + inst.nodes[v]);
        if (inst.service[v] < 0) throw InstanceError("negative service time at " + inst.nodes[v]);
        if (inst.allowed[v].empty()) throw InstanceError("empty depot set at " + inst.nodes[v]);
        for (int r : inst.allowed[v])
            if (!inst.is_root(r)) throw InstanceError("allowed depot is not a root at " + inst.nodes[v]);
    }
}

namespace {

std::string node_key(const json& j) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_number_integer()) return std::to_string(j.get<long long>());
    throw InstanceError("node identifiers must be strings or integers");
}

Cost int_field(const json& j, const char* what) {
    if (!j.is_number_integer()) throw InstanceError(std::string(what) + " must be an integer");
    return j.get<Cost>();
}

}  // namespace

MetricInstance parse_instance(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InstanceError(std::string("malformed instance: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("nodes") || !doc.contains("roots") || !doc.contains("costs"))
        throw InstanceError("instance needs nodes, roots and costs");
    MetricInstance inst;
    for (const auto& x : doc["nodes"]) inst.nodes.push_back(node_key(x));
    for (const auto& x : doc["roots"]) inst.roots.push_back(inst.index_of(node_key(x)));
    for (const auto& row : doc["costs"]) {
        if (!row.is_array()) throw InstanceError("costs must be a matrix");
        std::vector<Cost> r;
        for (const auto& c : row) r.push_back(int_field(c, "cost"));
        inst.cost.push_back(std::move(r));
    }
    const int n = inst.n();
    inst.weight.assign(n, 1);
    inst.service.assign(n, 0);
    inst.allowed.assign(n, {});
    auto dr = inst.distinct_roots();
    for (int v = 0; v < n; ++v)
        if (!inst.is_root(v)) inst.allowed[v] = dr;
    if (doc.contains("weights")) {
        inst.has_weights = true;
        for (const auto& [key, val] : doc["weights"].items()) {
            int v = inst.index_of(key);
            if (!inst.is_root(v)) inst.weight[v] = int_field(val, "weight");
        }
    }
    if (doc.contains("service_times")) {
        inst.has_service = true;
        for (const auto& [key, val] : doc["service_times"].items()) {
            int v = inst.index_of(key);
            if (!inst.is_root(v)) inst.service[v] = int_field(val, "service time");
        }
    }
    if (doc.contains("allowed_depots")) {
        inst.has_allowed = true;
        for (const auto& [key, val] : doc["allowed_depots"].items()) {
            int v = inst.index_of(key);
            if (inst.is_root(v)) continue;
            std::vector<int> a;
            for (const auto& x : val) a.push_back(inst.index_of(node_key(x)));
            std::sort(a.begin(), a.end());
            a.erase(std::unique(a.begin(), a.end()), a.end());
            inst.allowed[v] = a;
        }
    }
    validate(inst);
    return inst;
}

std::string instance_to_json(const MetricInstance& inst) {
    json doc;
    doc["nodes"] = inst.nodes;
    json roots = json::array();
    for (int r : inst.roots) roots.push_back(inst.nodes[r]);
    doc["roots"] = roots;
    doc["costs"] = inst.cost;
    if (inst.has_weights) {
        json w = json::object();
        for (int v : inst.clients()) w[inst.nodes[v]] = inst.weight[v];
        doc["weights"] = w;
    }
    if (inst.has_service) {
        json d = json::object();
        for (int v : inst.clients()) d[inst.nodes[v]] = inst.service[v];
        doc["service_times"] = d;
    }
    if (inst.has_allowed) {
        json a = json::object();
        for (int v : inst.clients()) {
            json l = json::array();
            for (int r : inst.allowed[v]) l.push_back(inst.nodes[r]);
            a[inst.nodes[v]] = l;
        }
        doc["allowed_depots"] = a;
    }
    return doc.dump();
}

Objective natural_objective(const MetricInstance& inst) {
    if (inst.has_weights && inst.has_service) return Objective::weighted_service;
    if (inst.has_weights) return Objective::weighted;
    if (inst.has_service) return Objective::service;
    return Objective::plain;
}

const char* objective_name(Objective o) {
    switch (o) {
        case Objective::plain: return "plain";
        case Objective::weighted: return "weighted";
        case Objective::service: return "service";
        case Objective::weighted_service: return "weighted+service";
    }
    return "?";
}

namespace {

bool uses_service(Objective o) { return o == Objective::service || o == Objective::weighted_service; }
bool uses_weights(Objective o) { return o == Objective::weighted || o == Objective::weighted_service; }

}  // namespace

RoutePlan shortcut_plan(const MetricInstance& inst, const std::vector<std::vector<int>>& walks,
                        Objective variant) {
    const int n = inst.n();
    const bool svc = uses_service(variant);
    // earliest arrival of each client over all walks, restricted to allowed vehicles
    std::vector<Cost> best(n, std::numeric_limits<Cost>::max());
    std::vector<int> owner(n, -1);
    std::vector<std::size_t> position(n, 0);
    for (int i = 0; i < static_cast<int>(walks.size()); ++i) {
        Cost time = 0;
        int prev = inst.roots[i];
        for (std::size_t p = 0; p < walks[i].size(); ++p) {
            int v = walks[i][p];
            time += inst.c(prev, v);
            prev = v;
            if (inst.is_root(v) || !inst.allows(v, i)) continue;
            if (time < best[v]) {
                best[v] = time;
                owner[v] = i;
                position[v] = p;
            }
            if (svc) time += inst.service[v];
        }
    }
    RoutePlan plan;
    plan.variant = variant;
    plan.routes.assign(inst.k(), {});
    for (int i = 0; i < inst.k(); ++i) {
        plan.routes[i].push_back(inst.roots[i]);
        if (i >= static_cast<int>(walks.size())) continue;
        for (std::size_t p = 0; p < walks[i].size(); ++p) {
            int v = walks[i][p];
            if (!inst.is_root(v) && owner[v] == i && position[v] == p) plan.routes[i].push_back(v);
        }
    }
    return plan;
}

std::vector<Rational> per_node_latency(const MetricInstance& inst, const RoutePlan& plan) {
    const int n = inst.n();
    if (static_cast<int>(plan.routes.size()) != inst.k())
        throw InstanceError("plan has " + std::to_string(plan.routes.size()) + " routes, expected " +
                            std::to_string(inst.k()));
    const bool svc = uses_service(plan.variant);
    std::vector<Cost> lat(n, 0);
    std::vector<bool> seen(n, false);
    for (int i = 0; i < inst.k(); ++i) {
        const auto& route = plan.routes[i];
        if (route.empty() || route.front() != inst.roots[i])
            throw InstanceError("route " + std::to_string(i) + " does not start at its depot");
        Cost time = 0;
        for (std::size_t p = 1; p < route.size(); ++p) {
            int v = route[p];
            if (v < 0 || v >= n) throw InstanceError("route references unknown node");
            time += inst.c(route[p - 1], v);
            if (inst.is_root(v)) continue;
            if (seen[v]) throw InstanceError("node visited twice: " + inst.nodes[v]);
            if (!inst.allows(v, i))
                throw InstanceError("node served from a disallowed depot: " + inst.nodes[v]);
            seen[v] = true;
            if (svc) time += inst.service[v];
            lat[v] = time;
        }
    }
    std::vector<Rational> out(n);
    for (int v = 0; v < n; ++v) {
        if (!inst.is_root(v) && !seen[v]) throw InstanceError("uncovered node: " + inst.nodes[v]);
        out[v] = make_rational(lat[v]);
    }
    return out;
}

Rational evaluate_plan(const MetricInstance& inst, const RoutePlan& plan) {
    auto lat = per_node_latency(inst, plan);
    const bool wt = uses_weights(plan.variant);
    Rational total = 0;
    for (int v = 0; v < inst.n(); ++v) total += (wt ? make_rational(inst.weight[v]) : Rational(1)) * lat[v];
    return total;
}

TimeHorizon time_horizon(const MetricInstance& inst) {
    const int k = inst.k();
    const bool svc = inst.has_service;
    // assign every client to its nearest allowed depot node
    std::map<int, std::vector<int>> groups;
    for (int v : inst.clients()) {
        int best = -1;
        for (int r : inst.allowed[v])
            if (best < 0 || inst.c(r, v) < inst.c(best, v)) best = r;
        groups[best].push_back(v);
    }
    std::vector<std::vector<int>> routes(k);
    std::vector<Cost> clock(k, 0);
    for (int i = 0; i < k; ++i) routes[i].push_back(inst.roots[i]);
    for (auto& [depot, members] : groups) {
        std::vector<int> vehicles;
        for (int i = 0; i < k; ++i)
            if (inst.roots[i] == depot) vehicles.push_back(i);
        std::vector<bool> done(members.size(), false);
        for (std::size_t step = 0; step < members.size(); ++step) {
            // the vehicle that is earliest in time extends to its nearest open client
            int veh = vehicles.front();
            for (int i : vehicles)
                if (clock[i] < clock[veh]) veh = i;
            int here = routes[veh].back();
            std::size_t pick = members.size();
            for (std::size_t m = 0; m < members.size(); ++m) {
                if (done[m]) continue;
                if (pick == members.size() || inst.c(here, members[m]) < inst.c(here, members[pick])) pick = m;
            }
            done[pick] = true;
            int v = members[pick];
            clock[veh] += inst.c(here, v) + (svc ? inst.service[v] : 0);
            routes[veh].push_back(v);
        }
    }
    TimeHorizon th;
    th.plan.routes = routes;
    th.plan.variant = svc ? Objective::service : Objective::plain;
    auto lat = per_node_latency(inst, th.plan);
    for (const auto& l : lat) th.T = std::max<Cost>(th.T, floor_int(l));
    th.plan.variant = natural_objective(inst);
    return th;
}

}  // namespace mlp
