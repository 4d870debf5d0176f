#include "mothedge/marginals.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mothedge/csv.hpp"

namespace mothedge::marginals {

double DiscreteMeasure::total_mass() const {
    double s = 0.0;
    for (double m : masses) s += m;
    return s;
}

double DiscreteMeasure::mean() const {
    double s = 0.0;
    for (std::size_t i = 0; i < atoms.size(); ++i) s += atoms[i] * masses[i];
    return s;
}

double DiscreteMeasure::call_price(double k) const {
    double s = 0.0;
    for (std::size_t i = 0; i < atoms.size(); ++i)
        if (atoms[i] > k) s += masses[i] * (atoms[i] - k);
    return s;
}

double DiscreteMeasure::cdf(double t) const {
    double s = 0.0;
    for (std::size_t i = 0; i < atoms.size() && atoms[i] <= t; ++i) s += masses[i];
    return s;
}

DiscreteMeasure measure_from_call_knots(const std::vector<double>& knots, const std::vector<double>& values) {
    const std::size_t n = knots.size();
    if (n < 2 || values.size() != n) throw std::invalid_argument("measure_from_call_knots: need >= 2 knots");
    DiscreteMeasure out;
    for (std::size_t j = 0; j < n; ++j) {
        const double left =
            j == 0 ? -1.0 : (values[j] - values[j - 1]) / (knots[j] - knots[j - 1]);
        const double right =
            j + 1 == n ? 0.0 : (values[j + 1] - values[j]) / (knots[j + 1] - knots[j]);
        const double mass = right - left;
        if (mass < -kMassClamp)
            throw std::invalid_argument("measure_from_call_knots: negative mass (call function not convex)");
        if (mass <= kMassClamp) continue;  // numerical dust: drop the atom
        out.atoms.push_back(knots[j]);
        out.masses.push_back(mass);
    }
    return out;
}

DiscreteMeasure build_bounded(const quotes::QuoteCurve& curve) {
    const auto rep = quotes::validate_curve(curve);
    if (!rep.ok()) throw std::invalid_argument("build_bounded: invalid quotes\n" + rep.to_string());
    if (curve.prices.back() > kMeasureTol)
        throw std::invalid_argument(
            "build_bounded: last quoted price is positive; use build_unbounded_pair");
    std::vector<double> vals = curve.prices;
    vals.back() = 0.0;
    return measure_from_call_knots(curve.strikes, vals);
}

std::pair<DiscreteMeasure, DiscreteMeasure> build_unbounded_pair(const quotes::QuoteSurface& surface) {
    const auto rep = quotes::validate_quotes(surface);
    if (!rep.ok()) throw std::invalid_argument("build_unbounded_pair: invalid quotes\n" + rep.to_string());

    const double k_mu0 = quotes::extrapolation_zero(surface.curve_t1);
    const double k_nu0 = quotes::extrapolation_zero(surface.curve_T);
    const double k_last = surface.curve_t1.strikes.back();

    auto extended = [&](const quotes::QuoteCurve& c, double zero_at) {
        std::vector<double> knots = c.strikes;
        std::vector<double> vals = c.prices;
        if (zero_at > k_last + kMeasureTol) {
            knots.push_back(zero_at);
            vals.push_back(0.0);
        } else {
            vals.back() = 0.0;
        }
        return measure_from_call_knots(knots, vals);
    };

    DiscreteMeasure mu = extended(surface.curve_t1, k_mu0);
    // the later maturity's continuation must not die before the earlier one's,
    // otherwise the interpolated call functions would cross
    DiscreteMeasure nu = extended(surface.curve_T, std::max(k_nu0, k_mu0));
    return {std::move(mu), std::move(nu)};
}

bool check_convex_order(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
    if (std::fabs(mu.mean() - nu.mean()) > kMeasureTol)
        throw std::invalid_argument("check_convex_order: means differ");
    std::vector<double> ks;
    ks.reserve(mu.size() + nu.size());
    ks.insert(ks.end(), mu.atoms.begin(), mu.atoms.end());
    ks.insert(ks.end(), nu.atoms.begin(), nu.atoms.end());
    std::sort(ks.begin(), ks.end());
    for (double k : ks)
        if (mu.call_price(k) > nu.call_price(k) + kMeasureTol) return false;
    return true;
}

double wasserstein(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
    std::vector<double> ts;
    ts.reserve(mu.size() + nu.size());
    ts.insert(ts.end(), mu.atoms.begin(), mu.atoms.end());
    ts.insert(ts.end(), nu.atoms.begin(), nu.atoms.end());
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    double dist = 0.0;
    std::size_t imu = 0, inu = 0;
    double fmu = 0.0, fnu = 0.0;
    for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
        while (imu < mu.size() && mu.atoms[imu] <= ts[i]) fmu += mu.masses[imu++];
        while (inu < nu.size() && nu.atoms[inu] <= ts[i]) fnu += nu.masses[inu++];
        dist += std::fabs(fmu - fnu) * (ts[i + 1] - ts[i]);
    }
    return dist;
}

namespace {

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm,
                        double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    if (b <= a) return 0.0;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 40);
}

double max_spacing(const std::vector<double>& grid) {
    double h = 0.0;
    for (std::size_t j = 1; j < grid.size(); ++j) h = std::max(h, grid[j] - grid[j - 1]);
    return h;
}

}  // namespace

double wasserstein_to_model(const MarginalModel& model, const DiscreteMeasure& measure) {
    if (measure.size() == 0) throw std::invalid_argument("wasserstein_to_model: empty measure");
    double total = 0.0;
    double cum = 0.0;
    double prev = 0.0;
    for (std::size_t i = 0; i < measure.size(); ++i) {
        const double a = measure.atoms[i];
        if (a > prev) {
            const double level = cum;
            total += integrate([&](double t) { return std::fabs(model.cdf(t) - level); }, prev, a, 1e-9);
        }
        cum += measure.masses[i];
        prev = a;
    }
    // beyond the last atom the discrete CDF is 1, so the remainder integrates
    // the model's survival function: exactly the model call price there
    total += model.call(prev);
    return total;
}

WassersteinBoundReport wasserstein_bound_mu(const MarginalModel& model, const std::vector<double>& grid,
                                            double k_mu0, const DiscreteMeasure& approx) {
    WassersteinBoundReport rep;
    const double h = max_spacing(grid);
    const double cdf_term = model.cdf(grid.back()) * h;
    const double tail_term = 2.0 * model.call(k_mu0);
    rep.components = {{"cdf_times_spacing", cdf_term}, {"tail_price_term", tail_term}};
    rep.bound = cdf_term + tail_term;
    rep.distance = wasserstein_to_model(model, approx);
    return rep;
}

WassersteinBoundReport wasserstein_bound_nu(const MarginalModel& model, const std::vector<double>& grid,
                                            double k_mu0, double k_nu0, const DiscreteMeasure& approx) {
    WassersteinBoundReport rep;
    const double h = max_spacing(grid);
    const double k_last = grid.back();
    const double kappa = std::max(k_mu0, k_nu0);
    const double cdf_term = model.cdf(k_last) * h;
    rep.components.push_back({"cdf_times_spacing", cdf_term});
    double bound = cdf_term + model.call(kappa);
    rep.components.push_back({"tail_price_term", model.call(kappa)});
    rep.distance = wasserstein_to_model(model, approx);
    if (k_mu0 <= k_nu0) {
        bound += model.call(kappa);
        rep.components.push_back({"tail_price_indicator_term", model.call(kappa)});
    } else {
        // h_nu compares the true and discrete CDFs at the last grid point
        const bool h_nu = model.cdf(k_last) >= approx.cdf(k_last);
        if (h_nu) {
            bound += model.call(kappa);
            rep.components.push_back({"tail_price_indicator_term", model.call(kappa)});
        } else {
            // right derivative of the true call function is F - 1
            const double deriv_gap = model.cdf(k_mu0) - model.cdf(k_last);
            const double term = (k_mu0 - k_last) * deriv_gap;
            bound += term;
            rep.components.push_back({"derivative_gap_term", term});
        }
    }
    rep.bound = bound;
    return rep;
}

std::pair<WassersteinBoundReport, WassersteinBoundReport> wasserstein_bound_unbounded(
    const MarginalModel& mu_model, const MarginalModel& nu_model, const std::vector<double>& grid) {
    quotes::QuoteSurface s;
    s.curve_t1.maturity = 0.5;
    s.curve_T.maturity = 1.0;
    for (double k : grid) {
        s.curve_t1.strikes.push_back(k);
        s.curve_t1.prices.push_back(mu_model.call(k));
        s.curve_T.strikes.push_back(k);
        s.curve_T.prices.push_back(nu_model.call(k));
    }
    s.curve_t1.spot = s.curve_t1.prices.front();
    s.curve_T.spot = s.curve_T.prices.front();
    const double k_mu0 = quotes::extrapolation_zero(s.curve_t1);
    const double k_nu0 = quotes::extrapolation_zero(s.curve_T);
    auto [mu, nu] = build_unbounded_pair(s);
    return {wasserstein_bound_mu(mu_model, grid, k_mu0, mu),
            wasserstein_bound_nu(nu_model, grid, k_mu0, k_nu0, nu)};
}

void write_measure_csv(const std::filesystem::path& path, const DiscreteMeasure& m) {
    csv::Writer w(path);
    w.row({"atom", "mass"});
    for (std::size_t i = 0; i < m.size(); ++i) w.numeric_row({m.atoms[i], m.masses[i]});
}

DiscreteMeasure read_measure_csv(const std::filesystem::path& path) {
    const csv::Table t = csv::read_file(path);
    const std::size_t ca = t.column("atom");
    const std::size_t cm = t.column("mass");
    DiscreteMeasure m;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        m.atoms.push_back(t.number(r, ca));
        m.masses.push_back(t.number(r, cm));
    }
    return m;
}

}  // namespace mothedge::marginals
