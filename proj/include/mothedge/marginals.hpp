#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "mothedge/quotes.hpp"

namespace mothedge::marginals {

// atoms strictly increasing, masses nonnegative summing to 1, mean = spot
struct DiscreteMeasure {
    std::vector<double> atoms;
    std::vector<double> masses;

    std::size_t size() const { return atoms.size(); }
    double total_mass() const;
    double mean() const;
    double call_price(double k) const;  // E (X - k)+
    double cdf(double t) const;         // right-continuous
};

inline constexpr double kMassClamp = 1e-12;
inline constexpr double kMeasureTol = 1e-10;

// Second-difference-of-slopes mass recovery for a compactly supported curve
// (last quoted price must be zero). Boundary slope conventions: -1 left of
// strike 0, 0 beyond the last strike.
DiscreteMeasure build_bounded(const quotes::QuoteCurve& curve);

// Unbounded-support scheme: both curves may end at positive prices; each call
// function is continued linearly to its extrapolated zero, with the later
// maturity flattened to the larger zero so the pair stays in convex order.
std::pair<DiscreteMeasure, DiscreteMeasure> build_unbounded_pair(const quotes::QuoteSurface& surface);

// mass formula applied to an explicit piecewise-linear call function
DiscreteMeasure measure_from_call_knots(const std::vector<double>& knots, const std::vector<double>& values);

// true iff E_mu (X-k)+ <= E_nu (X-k)+ + tol at every atom of both supports;
// throws when the means differ (martingale-relevant case only)
bool check_convex_order(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

// exact L1 distance between the CDFs over the merged support
double wasserstein(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

// an evaluable continuous marginal (CDF and call price function)
struct MarginalModel {
    std::function<double(double)> cdf;
    std::function<double(double)> call;
};

// |F_model - F_measure| integrated by adaptive quadrature plus the exact tail
// term beyond the last atom
double wasserstein_to_model(const MarginalModel& model, const DiscreteMeasure& measure);

struct WassersteinBoundReport {
    double distance = 0.0;
    double bound = 0.0;
    std::vector<std::pair<std::string, double>> components;
};

WassersteinBoundReport wasserstein_bound_mu(const MarginalModel& model, const std::vector<double>& grid,
                                            double k_mu0, const DiscreteMeasure& approx);
WassersteinBoundReport wasserstein_bound_nu(const MarginalModel& model, const std::vector<double>& grid,
                                            double k_mu0, double k_nu0, const DiscreteMeasure& approx);

// build quotes from the two models on the grid, run the unbounded scheme and
// report distance-vs-bound for both marginals
std::pair<WassersteinBoundReport, WassersteinBoundReport> wasserstein_bound_unbounded(
    const MarginalModel& mu_model, const MarginalModel& nu_model, const std::vector<double>& grid);

void write_measure_csv(const std::filesystem::path& path, const DiscreteMeasure& m);
DiscreteMeasure read_measure_csv(const std::filesystem::path& path);

}  // namespace mothedge::marginals
