#pragma once

#include "mlp/instance.hpp"
#include "mlp/latency_solvers.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mlp {

// Exit codes of the command-line front end.
enum ExitCode { exit_ok = 0, exit_violation = 1, exit_usage = 2, exit_solver = 3, exit_guard = 4 };

struct Bounds {
    std::optional<Rational> opt, bnslb, lp1, lp2, lp3;
};

const std::vector<std::string>& algorithm_names();
bool algorithm_applies(const std::string& alg, const MetricInstance& inst);
SolverRun run_algorithm(const std::string& alg, const MetricInstance& inst, const SolverConfig& cfg);

// Guaranteed ratio of `alg` against the lower bound `against`, if one is stated.
std::optional<double> guaranteed_ratio(const std::string& alg, const std::string& against, const MetricInstance& inst);

std::string solution_json(const MetricInstance& inst, const std::string& alg, std::optional<std::uint64_t> seed,
                          const RoutePlan& plan, const Bounds& bounds);

struct ParsedSolution {
    std::string algorithm;
    RoutePlan plan;
};
// Routes by node name; throws InstanceError on unknown names.
ParsedSolution parse_solution(const MetricInstance& inst, const std::string& text);

// Entry point; argv[0] is the program name.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mlp
