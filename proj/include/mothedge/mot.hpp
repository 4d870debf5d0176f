#pragma once

#include <filesystem>
#include <functional>
#include <stdexcept>
#include <vector>

#include "mothedge/lp.hpp"
#include "mothedge/marginals.hpp"

namespace mothedge::mot {

using Payoff = std::function<double(double, double)>;

struct Coupling {
    std::vector<double> x_atoms, y_atoms;
    std::vector<std::vector<double>> p;  // p[i][j]

    std::vector<double> row_masses() const;
    std::vector<double> col_masses() const;
    double expectation(const Payoff& c) const;
};

struct InfeasibleMarginals : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One-sided discrete MOT solve over the martingale coupling polytope:
// optimize sum_ij p_ij cells[i][j] subject to marginal and martingale rows.
struct MotSolution {
    double value = 0.0;
    Coupling coupling;
    lp::LpSolution lp;  // duals ordered: N1 row-sum, N2 col-sum, N1 martingale
};

MotSolution solve_mot(const marginals::DiscreteMeasure& mu, const marginals::DiscreteMeasure& nu,
                      const std::vector<std::vector<double>>& cells, lp::Sense sense);

struct PriceBounds {
    double lower = 0.0, upper = 0.0;
    Coupling argmin, argmax;
};

PriceBounds price_bounds(const marginals::DiscreteMeasure& mu, const marginals::DiscreteMeasure& nu,
                         const Payoff& payoff);

// Static super-replication potentials: phi on x-atoms (t1 claims), psi on
// y-atoms (T claims), h on x-atoms (stock position entered at t1), with
// phi(x) + psi(y) + h(x)(y - x) >= c(x, y) cell-wise and price = upper bound.
// Gauge: phi is shifted so phi(x_1) = 0 (the transfer is absorbed by psi).
struct DualPotentials {
    std::vector<double> phi, psi, h;
    double price = 0.0;
};

DualPotentials extract_dual_potentials(const marginals::DiscreteMeasure& mu,
                                       const marginals::DiscreteMeasure& nu,
                                       const std::vector<std::vector<double>>& cells,
                                       const MotSolution& upper);
DualPotentials dual_potentials(const marginals::DiscreteMeasure& mu, const marginals::DiscreteMeasure& nu,
                               const Payoff& payoff);

// cash + stock + calls replicating a piecewise-linear function on a grid;
// beyond the last atom the function continues with its final slope
struct HedgePortfolio {
    double cash = 0.0;
    double stock = 0.0;
    std::vector<std::pair<double, double>> call_weights;  // (strike, weight)

    double value_at(double s) const;
};

HedgePortfolio decompose_pwl(const std::vector<double>& atoms, const std::vector<double>& values);

// the tradable two-leg form of the dual potentials
struct SuperHedge {
    DualPotentials potentials;
    HedgePortfolio leg_t1;  // phi, maturity t1
    HedgePortfolio leg_T;   // psi, maturity T
    std::vector<double> x_atoms;
    double price = 0.0;
};

SuperHedge super_hedge(const marginals::DiscreteMeasure& mu, const marginals::DiscreteMeasure& nu,
                       const Payoff& payoff);

void write_coupling_csv(const std::filesystem::path& path, const Coupling& c);
void write_portfolio_csv(const std::filesystem::path& path, const HedgePortfolio& leg_t1, double t1,
                         const HedgePortfolio& leg_T, double T);

}  // namespace mothedge::mot
