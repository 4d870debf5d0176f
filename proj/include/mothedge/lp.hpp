#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace mothedge::lp {

enum class Sense { minimize, maximize };
enum class Relation { le, eq, ge };
enum class Status { optimal, infeasible, unbounded };

struct ToleranceSet {
    double feasibility = 1e-8;
    double pivot = 1e-10;
    double duality_gap = 1e-8;
};

// Dense LP: optimize cost.x subject to row relations and per-variable bounds.
// Default bounds are x >= 0; lower = -inf marks a free variable.
struct LpProblem {
    Sense sense = Sense::minimize;
    std::vector<double> cost;
    std::vector<std::vector<double>> rows;
    std::vector<Relation> relations;
    std::vector<double> rhs;
    std::vector<double> lower;
    std::vector<double> upper;
    ToleranceSet tol;

    LpProblem(Sense s, std::size_t nvars);

    std::size_t num_vars() const { return cost.size(); }
    std::size_t num_rows() const { return rows.size(); }

    void add_row(std::vector<double> coeffs, Relation rel, double b);
    void set_free(std::size_t j);
    void set_bounds(std::size_t j, double lo, double hi);
};

struct LpSolution {
    Status status = Status::optimal;
    std::vector<double> x;
    double objective = 0.0;
    std::vector<double> dual;          // one multiplier per row
    std::vector<double> reduced_cost;  // one per variable
    int iterations = 0;
};

// Numerical breakdown (singular basis after anti-cycling exhaustion,
// iteration cap, inconsistent dimensions).
struct SolverFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Two-phase dense revised simplex. Deterministic: Dantzig pricing with
// lowest-index tie breaks, switching to Bland's rule after 10*(m+n)
// degenerate pivots.
LpSolution solve(const LpProblem& problem);

}  // namespace mothedge::lp
