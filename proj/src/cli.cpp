#include "mlp/cli.hpp"

#include "mlp/arb_packing.hpp"
#include "mlp/concat_graph.hpp"
#include "mlp/exact_oracles.hpp"
#include "mlp/formulations.hpp"
#include "mlp/generators.hpp"
#include "mlp/lp.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <fstream>
#include <future>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace mlp {

using nlohmann::ordered_json;

namespace {

const double multidepot_ratio = 8.4965;
const double multidepot_service_ratio = 8.9965;

ordered_json number(const Rational& q) {
    if (is_integer(q) && q.get_num().fits_slong_p()) return q.get_num().get_si();
    return to_double(q);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ordered_json names(const MetricInstance& inst, const std::vector<int>& route) {
    ordered_json r = ordered_json::array();
    for (int v : route) r.push_back(inst.nodes[v]);
    return r;
}

std::shared_ptr<spdlog::logger> logger() {
    static auto log = [] {
        auto l = spdlog::stderr_color_st("mlp");
        const char* env = std::getenv("MLP_LOG");
        l->set_level(env ? spdlog::level::from_str(env) : spdlog::level::warn);
        return l;
    }();
    return log;
}

// Lower bounds computed once per instance and shared by the solvers that can reuse them.
struct Precomputed {
    std::optional<LpSolution> lp1, lp2, lp3;
    std::optional<BnsTable> table;
};

SolverRun run_with(const std::string& alg, const MetricInstance& inst, const SolverConfig& cfg, const Precomputed& pre) {
    if (alg == "multidepot") return pre.lp1 ? solve_multidepot(inst, *pre.lp1, cfg) : solve_multidepot(inst, cfg);
    if (alg == "kmlp-lp") return pre.lp3 ? solve_kmlp_lp(inst, *pre.lp3, cfg) : solve_kmlp_lp(inst, cfg);
    if (alg == "mlp-lp") return pre.lp3 ? solve_mlp_lp(inst, *pre.lp3, cfg) : solve_mlp_lp(inst, cfg);
    if (alg == "kmlp-comb") return solve_kmlp_combinatorial(inst, cfg);
    if (alg == "lp2-round") return pre.lp2 ? round_lp2(inst, *pre.lp2, cfg) : round_lp2(inst, cfg);
    if (alg == "bnslb-construct") return bnslb_construction(inst, pre.table ? *pre.table : bnslb(inst), cfg);
    throw std::invalid_argument("unknown algorithm '" + alg + "'");
}

bool randomized(const std::string& alg) { return alg == "multidepot" || alg == "lp2-round"; }

// Denominator each algorithm's guarantee is stated against.
const char* natural_bound(const std::string& alg) {
    if (alg == "multidepot") return "lp1";
    if (alg == "lp2-round") return "lp2";
    if (alg == "kmlp-lp" || alg == "mlp-lp") return "lp3";
    return "bnslb";
}

std::optional<Rational> bound_of(const Bounds& b, const std::string& name) {
    if (name == "opt") return b.opt;
    if (name == "bnslb") return b.bnslb;
    if (name == "lp1") return b.lp1;
    if (name == "lp2") return b.lp2;
    if (name == "lp3") return b.lp3;
    throw std::invalid_argument("unknown bound '" + name + "'");
}

ordered_json bounds_json(const Bounds& b) {
    ordered_json j = ordered_json::object();
    for (const char* name : {"opt", "bnslb", "lp1", "lp2", "lp3"})
        if (auto v = bound_of(b, name)) j[name] = number(*v);
    return j;
}

int cmd_solve(const MetricInstance& inst, const std::string& alg, const SolverConfig& cfg, bool seed_given,
              const std::string& out_path, std::ostream& out) {
    logger()->info("solving with {} (n = {}, k = {})", alg, inst.n(), inst.k());
    auto run = run_algorithm(alg, inst, cfg);
    Bounds b;
    if (run.lp_value) {
        std::string which = natural_bound(alg);
        if (which == "lp1") b.lp1 = run.lp_value;
        if (which == "lp2") b.lp2 = run.lp_value;
        if (which == "lp3") b.lp3 = run.lp_value;
    }
    if (alg == "bnslb-construct" && run.concat) {
        Rational s = 0;
        for (const auto& c : run.s) s += c;
        b.bnslb = s / 2;
    }
    std::optional<std::uint64_t> seed;
    if (seed_given || randomized(alg) || !cfg.derandomize) seed = cfg.seed;
    logger()->info("cost {} after {} rounds, {} appended", to_string(run.cost), run.rounds, run.leftovers);
    auto text = solution_json(inst, alg, seed, run.plan, b);
    if (out_path.empty()) {
        out << text << "\n";
    } else {
        std::ofstream f(out_path);
        if (!f) throw std::invalid_argument("cannot write " + out_path);
        f << text << "\n";
    }
    return exit_ok;
}

int cmd_oracle(const MetricInstance& inst, const std::string& what, const std::string& root_name,
               const Rational& lambda, const Rational& budget, std::ostream& out) {
    ordered_json j;
    j["what"] = what;
    const int root = root_name.empty() ? inst.roots[0] : inst.index_of(root_name);
    if (root < 0 || !inst.is_root(root)) throw std::invalid_argument("--root must name a depot");
    auto paths_json = [&](const std::vector<std::vector<int>>& paths) {
        ordered_json p = ordered_json::array();
        for (const auto& path : paths) p.push_back(names(inst, path));
        return p;
    };
    if (what == "opt") {
        auto res = exact_kmlp(inst);
        j["value"] = number(res.value);
        ordered_json routes = ordered_json::array();
        for (const auto& r : res.plan.routes) routes.push_back(names(inst, r));
        j["routes"] = routes;
    } else if (what == "bnslb") {
        auto t = bnslb(inst);
        j["value"] = number(t.sum);
        ordered_json tab = ordered_json::array();
        for (const auto& b : t.b) tab.push_back(number(b));
        j["table"] = tab;
    } else if (what == "lp1" || what == "lp2" || what == "lp3") {
        const int T = static_cast<int>(time_horizon(inst).T);
        auto lp = what == "lp1" ? build_and_solve_lp1(inst, T)
                  : what == "lp2" ? build_and_solve_lp2(inst, T)
                                  : build_and_solve_lp3(inst, T);
        j["value"] = number(lp.objective);
        j["exact"] = to_string(lp.objective);
        j["T"] = T;
        j["variables"] = lp.lp.num_vars();
        j["rows"] = lp.lp.rows.size();
        j["cut_rounds"] = lp.cut_rounds;
    } else if (what == "pc-paths") {
        std::vector<Rational> pi(inst.n(), lambda);
        pi[root] = 0;
        auto res = exact_pc_paths(inst, root, pi);
        j["value"] = number(res.value);
        j["paths"] = paths_json(res.paths);
    } else if (what == "orienteering") {
        std::vector<Rational> reward(inst.n(), 1);
        for (int r : inst.distinct_roots()) reward[r] = 0;
        auto res = exact_orienteering(inst, root, budget, reward);
        j["value"] = number(res.value);
        j["paths"] = paths_json(res.paths);
    } else {
        throw std::invalid_argument("unknown oracle '" + what + "'");
    }
    out << j.dump(2) << "\n";
    return exit_ok;
}

int cmd_verify(const MetricInstance& inst, const std::string& sol_path, const std::string& against,
               std::ostream& out) {
    auto sol = parse_solution(inst, read_file(sol_path));
    ordered_json j;
    j["algorithm"] = sol.algorithm;
    Rational cost;
    try {
        cost = evaluate_plan(inst, sol.plan);
    } catch (const InstanceError& e) {
        j["feasible"] = false;
        j["pass"] = false;
        j["message"] = e.what();
        out << j.dump(2) << "\n";
        return exit_violation;
    }
    j["feasible"] = true;
    j["total_latency"] = number(cost);
    bool pass = true;
    if (!against.empty()) {
        Bounds b;
        if (against == "opt") b.opt = exact_kmlp(inst).value;
        else if (against == "bnslb") b.bnslb = bnslb(inst).sum;
        else {
            const int T = static_cast<int>(time_horizon(inst).T);
            if (against == "lp1") b.lp1 = build_and_solve_lp1(inst, T).objective;
            else if (against == "lp2") b.lp2 = build_and_solve_lp2(inst, T).objective;
            else if (against == "lp3") b.lp3 = build_and_solve_lp3(inst, T).objective;
            else throw std::invalid_argument("unknown bound '" + against + "'");
        }
        Rational lb = *bound_of(b, against);
        j["against"] = against;
        j["bound"] = number(lb);
        auto g = guaranteed_ratio(sol.algorithm, against, inst);
        if (lb > 0) j["ratio"] = to_double(cost / lb);
        if (g) {
            j["guarantee"] = *g;
            pass = cost <= Rational(*g) * lb * (1 + make_rational(1, 1000000000));
        } else {
            j["message"] = "no stated guarantee for this pair";
        }
    }
    j["pass"] = pass;
    out << j.dump(2) << "\n";
    return pass ? exit_ok : exit_violation;
}

struct BenchRow {
    Bounds bounds;
    std::map<std::string, Rational> cost;
    std::map<std::string, std::string> error;
};

BenchRow bench_trial(const MetricInstance& inst, const std::vector<std::string>& algs, std::uint64_t seed) {
    BenchRow row;
    Precomputed pre;
    auto guarded = [&](const char* what, auto&& f) {
        try {
            f();
        } catch (const std::exception& e) {
            logger()->info("bench: {} unavailable: {}", what, e.what());
        }
    };
    const int T = static_cast<int>(time_horizon(inst).T);
    guarded("opt", [&] { row.bounds.opt = exact_kmlp(inst).value; });
    guarded("bnslb", [&] {
        pre.table = bnslb(inst);
        row.bounds.bnslb = pre.table->sum;
    });
    guarded("lp1", [&] {
        pre.lp1 = build_and_solve_lp1(inst, T);
        row.bounds.lp1 = pre.lp1->objective;
    });
    guarded("lp2", [&] {
        pre.lp2 = build_and_solve_lp2(inst, T);
        row.bounds.lp2 = pre.lp2->objective;
    });
    guarded("lp3", [&] {
        pre.lp3 = build_and_solve_lp3(inst, T);
        row.bounds.lp3 = pre.lp3->objective;
    });
    for (const auto& alg : algs) {
        if (!algorithm_applies(alg, inst)) continue;
        SolverConfig cfg;
        cfg.seed = seed;
        try {
            row.cost[alg] = run_with(alg, inst, cfg, pre).cost;
        } catch (const std::exception& e) {
            row.error[alg] = e.what();
        }
    }
    return row;
}

int cmd_bench(const GeneratorSpec& spec, int trials, std::uint64_t seed, const std::string& metric,
              std::vector<std::string> algs, const std::string& format, std::ostream& out) {
    if (trials < 0) throw std::invalid_argument("--trials must be >= 0");
    if (spec.n < 1 || spec.k < 1 || spec.max_cost < 1) throw std::invalid_argument("invalid generator parameters");
    if (algs.empty()) algs = algorithm_names();
    for (const auto& a : algs)
        if (std::find(algorithm_names().begin(), algorithm_names().end(), a) == algorithm_names().end())
            throw std::invalid_argument("unknown algorithm '" + a + "'");
    std::mt19937_64 rng(seed);
    std::vector<MetricInstance> instances;
    for (int t = 0; t < trials; ++t) instances.push_back(random_instance(spec, rng));
    std::vector<std::future<BenchRow>> tasks;
    for (int t = 0; t < trials; ++t)
        tasks.push_back(std::async(std::launch::async, bench_trial, std::cref(instances[t]), std::cref(algs),
                                   seed + static_cast<std::uint64_t>(t)));
    std::vector<BenchRow> rows;
    for (auto& f : tasks) rows.push_back(f.get());

    ordered_json j;
    j["n"] = spec.n;
    j["k"] = spec.k;
    j["single_depot"] = spec.single_depot;
    j["metric"] = metric;
    j["trials"] = trials;
    j["seed"] = seed;
    j["algorithms"] = algs;
    ordered_json jr = ordered_json::array();
    std::map<std::string, std::vector<double>> ratios;
    for (int t = 0; t < trials; ++t) {
        const auto& row = rows[t];
        ordered_json r;
        r["trial"] = t;
        r["solver_seed"] = seed + static_cast<std::uint64_t>(t);
        r["bounds"] = bounds_json(row.bounds);
        ordered_json res = ordered_json::object();
        for (const auto& alg : algs) {
            ordered_json a;
            if (auto it = row.error.find(alg); it != row.error.end()) {
                a["error"] = it->second;
            } else if (auto c = row.cost.find(alg); c != row.cost.end()) {
                a["cost"] = number(c->second);
                std::string den = natural_bound(alg);
                a["denominator"] = den;
                auto lb = bound_of(row.bounds, den);
                if (lb && *lb > 0) {
                    double ratio = to_double(c->second / *lb);
                    a["ratio"] = ratio;
                    ratios[alg].push_back(ratio);
                }
                if (auto g = guaranteed_ratio(alg, den, instances[t])) a["guarantee"] = *g;
            } else {
                continue;
            }
            res[alg] = a;
        }
        r["results"] = res;
        jr.push_back(r);
    }
    j["rows"] = jr;
    ordered_json agg = ordered_json::object();
    for (const auto& alg : algs) {
        if (!ratios.count(alg)) continue;
        const auto& v = ratios[alg];
        double sum = 0, mx = 0;
        for (double x : v) {
            sum += x;
            mx = std::max(mx, x);
        }
        agg[alg] = {{"runs", v.size()}, {"mean_ratio", sum / v.size()}, {"max_ratio", mx}};
    }
    j["aggregate"] = agg;

    if (format == "json") {
        out << j.dump(2) << "\n";
        return exit_ok;
    }
    auto cell = [](const ordered_json& v) {
        if (v.is_null()) return std::string("-");
        std::ostringstream s;
        if (v.is_number_integer()) s << v.get<long long>();
        else s << std::setprecision(4) << v.get<double>();
        return s.str();
    };
    std::vector<std::string> cols{"trial", "opt", "bnslb", "lp1", "lp2", "lp3"};
    for (const auto& a : algs) cols.push_back(a);
    std::vector<std::vector<std::string>> table{cols};
    for (const auto& r : jr) {
        std::vector<std::string> line{std::to_string(r["trial"].get<int>())};
        for (const char* b : {"opt", "bnslb", "lp1", "lp2", "lp3"})
            line.push_back(r["bounds"].contains(b) ? cell(r["bounds"][b]) : "-");
        for (const auto& a : algs) {
            if (!r["results"].contains(a)) {
                line.push_back("-");
                continue;
            }
            const auto& x = r["results"][a];
            if (x.contains("error")) line.push_back("error");
            else line.push_back(cell(x["cost"]) + (x.contains("ratio") ? " (" + cell(x["ratio"]) + ")" : ""));
        }
        table.push_back(line);
    }
    std::vector<std::size_t> width(cols.size(), 0);
    for (const auto& line : table)
        for (std::size_t c = 0; c < line.size(); ++c) width[c] = std::max(width[c], line[c].size());
    for (const auto& line : table) {
        for (std::size_t c = 0; c < line.size(); ++c)
            out << (c ? "  " : "") << std::setw(static_cast<int>(width[c])) << line[c];
        out << "\n";
    }
    for (const auto& [alg, a] : agg.items())
        out << alg << ": mean " << cell(a["mean_ratio"]) << ", max " << cell(a["max_ratio"]) << " over "
            << a["runs"].get<int>() << " runs\n";
    return exit_ok;
}

}  // namespace

const std::vector<std::string>& algorithm_names() {
    static const std::vector<std::string> all{"multidepot", "kmlp-lp", "kmlp-comb",
                                              "mlp-lp", "lp2-round", "bnslb-construct"};
    return all;
}

bool algorithm_applies(const std::string& alg, const MetricInstance& inst) {
    const bool plain = !inst.has_weights && !inst.has_service;
    if (alg == "multidepot" || alg == "lp2-round") return true;
    if (alg == "kmlp-lp") return inst.single_depot();
    if (alg == "mlp-lp") return inst.single_depot() && inst.k() == 1;
    if (alg == "kmlp-comb") return inst.single_depot() && plain;
    if (alg == "bnslb-construct") return plain && !inst.has_allowed;
    return false;
}

SolverRun run_algorithm(const std::string& alg, const MetricInstance& inst, const SolverConfig& cfg) {
    return run_with(alg, inst, cfg, {});
}

std::optional<double> guaranteed_ratio(const std::string& alg, const std::string& against, const MetricInstance& inst) {
    const double mu = mu_star();
    if (against != "opt" && against != natural_bound(alg)) return std::nullopt;
    if (alg == "multidepot") return inst.has_service ? multidepot_service_ratio : multidepot_ratio;
    if (alg == "kmlp-lp" || alg == "kmlp-comb") return 2 * mu;
    if (alg == "mlp-lp" || alg == "lp2-round" || alg == "bnslb-construct") return mu;
    return std::nullopt;
}

std::string solution_json(const MetricInstance& inst, const std::string& alg, std::optional<std::uint64_t> seed,
                          const RoutePlan& plan, const Bounds& bounds) {
    auto lat = per_node_latency(inst, plan);
    ordered_json j;
    j["algorithm"] = alg;
    if (seed) j["seed"] = *seed;
    ordered_json routes = ordered_json::array();
    for (const auto& r : plan.routes) routes.push_back(names(inst, r));
    j["routes"] = routes;
    j["total_latency"] = number(evaluate_plan(inst, plan));
    ordered_json per = ordered_json::object();
    for (int v = 0; v < inst.n(); ++v)
        if (!inst.is_root(v)) per[inst.nodes[v]] = number(lat[v]);
    j["per_node_latency"] = per;
    j["bounds"] = bounds_json(bounds);
    return j.dump(2);
}

ParsedSolution parse_solution(const MetricInstance& inst, const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        throw InstanceError(std::string("solution is not valid JSON: ") + e.what());
    }
    if (!doc.contains("routes") || !doc["routes"].is_array()) throw InstanceError("solution has no routes");
    ParsedSolution s;
    s.algorithm = doc.value("algorithm", std::string());
    s.plan.variant = natural_objective(inst);
    if (static_cast<int>(doc["routes"].size()) != inst.k())
        throw InstanceError("solution has " + std::to_string(doc["routes"].size()) + " routes, instance has " +
                            std::to_string(inst.k()) + " vehicles");
    for (const auto& r : doc["routes"]) {
        std::vector<int> route;
        for (const auto& name : r) {
            int v = inst.index_of(name.get<std::string>());
            if (v < 0) throw InstanceError("unknown node in solution: " + name.get<std::string>());
            route.push_back(v);
        }
        s.plan.routes.push_back(std::move(route));
    }
    return s;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Solvers and exact oracles for multi-depot k-vehicle minimum latency"};
    app.require_subcommand(1);

    std::string input, alg, out_path, what, root, solution, against, metric = "random", format = "json";
    std::uint64_t seed = 0;
    std::string epsilon = "1/100", growth, lambda = "1", budget = "0";
    bool no_derandomize = false, multi_depot = false;
    GeneratorSpec spec;
    int trials = 0;
    std::vector<std::string> algs;

    auto* solve = app.add_subcommand("solve", "run one algorithm and print a solution");
    solve->add_option("--alg", alg, "algorithm")->required()->check(CLI::IsMember(algorithm_names()));
    solve->add_option("--input", input, "instance JSON")->required();
    auto* seed_opt = solve->add_option("--seed", seed, "RNG seed");
    solve->add_option("--epsilon", epsilon, "truncation parameter");
    solve->add_option("--growth", growth, "growth of the geometric time points");
    solve->add_flag("--no-derandomize", no_derandomize, "random cycle directions");
    solve->add_option("--out", out_path, "write the solution here instead of stdout");

    auto* oracle = app.add_subcommand("oracle", "exact lower bounds and LP values");
    oracle->add_option("--what", what, "quantity")
        ->required()
        ->check(CLI::IsMember({"opt", "bnslb", "lp1", "lp2", "lp3", "pc-paths", "orienteering"}));
    oracle->add_option("--input", input, "instance JSON")->required();
    oracle->add_option("--root", root, "depot name (pc-paths, orienteering)");
    oracle->add_option("--lambda", lambda, "uniform penalty (pc-paths)");
    oracle->add_option("--budget", budget, "length budget (orienteering)");

    auto* verify = app.add_subcommand("verify", "re-evaluate a solution and check its guarantee");
    verify->add_option("--input", input, "instance JSON")->required();
    verify->add_option("--solution", solution, "solution JSON")->required();
    verify->add_option("--against", against, "lower bound")->check(CLI::IsMember({"opt", "bnslb", "lp1", "lp2", "lp3"}));

    auto* bench = app.add_subcommand("bench", "random instances, algorithms and ratio tables");
    bench->add_option("--n", spec.n, "nodes including depots")->required();
    bench->add_option("--k", spec.k, "vehicles")->required();
    bench->add_option("--trials", trials, "number of instances")->required();
    bench->add_option("--seed", seed, "generator seed")->required();
    bench->add_option("--metric", metric, "metric kind")->check(CLI::IsMember({"random", "euclid-line", "euclid-plane"}));
    bench->add_option("--algs", algs, "comma-separated algorithms")->delimiter(',');
    bench->add_option("--max-cost", spec.max_cost, "largest generated edge cost");
    bench->add_flag("--multi-depot", multi_depot, "one depot per vehicle");
    bench->add_option("--format", format, "json or text")->check(CLI::IsMember({"json", "text"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    MetricInstance inst;
    SolverConfig cfg;
    try {
        if (!bench->parsed()) inst = parse_instance(read_file(input));
        cfg.seed = seed;
        cfg.epsilon = parse_rational(epsilon);
        if (!growth.empty()) cfg.growth = parse_rational(growth);
        cfg.derandomize = !no_derandomize;
        cfg.validate();
        spec.single_depot = !multi_depot;
        spec.kind = parse_metric_kind(metric);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    }

    try {
        if (solve->parsed()) return cmd_solve(inst, alg, cfg, seed_opt->count() > 0, out_path, out);
        if (oracle->parsed()) return cmd_oracle(inst, what, root, parse_rational(lambda), parse_rational(budget), out);
        if (verify->parsed()) return cmd_verify(inst, solution, against, out);
        return cmd_bench(spec, trials, seed, metric, algs, format, out);
    } catch (const GuardError& e) {
        err << "error: " << e.what() << "\n";
        return exit_guard;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const InstanceError& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_solver;
    }
}

}  // namespace mlp
