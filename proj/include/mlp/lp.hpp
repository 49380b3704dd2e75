#pragma once

#include "mlp/rational.hpp"

#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace mlp {

enum class Sense { le, ge, eq };

struct Term {
    int var;
    Rational coef;
};

struct Constraint {
    std::vector<Term> terms;
    Sense sense = Sense::ge;
    Rational rhs;
};

// min c.x subject to rows, x >= 0
struct LinearProgram {
    std::vector<std::string> names;
    std::vector<Rational> cost;
    std::vector<Constraint> rows;

    int add_variable(std::string name, Rational c);
    void add_constraint(Constraint c);
    int num_vars() const { return static_cast<int>(cost.size()); }
    void write_lp_format(std::ostream& os) const;
};

enum class LpStatus { optimal, infeasible, unbounded };

class LpError : public std::runtime_error {
public:
    LpError(LpStatus s, const std::string& what) : std::runtime_error(what), status(s) {}
    LpStatus status;
};

struct LpOptions {
    bool exact = true;             // certify the final basis in rational arithmetic
    double tolerance = 1e-7;       // floating-point mode feasibility tolerance
    int max_cuts = 10000;
};

struct LpResult {
    std::vector<Rational> x;
    Rational objective;
    int cut_rounds = 0;
    int cuts_added = 0;
    int exact_pivots = 0;  // rational pivots needed after the floating-point phase
};

// Throws LpError on infeasible / unbounded input.
LpResult solve_lp(const LinearProgram& lp, const LpOptions& opt = {});

// Dense rational two-phase simplex with Bland's rule. Slow; used as an
// independent reference and as a last-resort fallback.
LpResult solve_lp_reference(const LinearProgram& lp);

// Returns violated constraints for x, or nothing when x is feasible.
using Separator = std::function<std::vector<Constraint>(const std::vector<Rational>& x)>;

// Solve, separate, add cuts, repeat. Throws LpError / std::runtime_error on a
// stalled oracle or when more than opt.max_cuts cuts were needed.
LpResult solve_with_cuts(LinearProgram& lp, const Separator& sep, const LpOptions& opt = {});

// Largest violation of the explicit rows (0 when feasible).
Rational max_violation(const LinearProgram& lp, const std::vector<Rational>& x);

}  // namespace mlp
