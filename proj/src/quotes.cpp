#include "mothedge/quotes.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "mothedge/csv.hpp"

namespace mothedge::quotes {

namespace {

void check_structure(const QuoteCurve& c) {
    if (c.strikes.size() != c.prices.size())
        throw StructuralError("strike and price lists differ in length");
    if (c.strikes.size() < 2) throw StructuralError("need at least two quotes per maturity");
    for (std::size_t j = 1; j < c.strikes.size(); ++j)
        if (!(c.strikes[j] > c.strikes[j - 1])) throw StructuralError("strikes not strictly increasing");
}

std::string at_index(const char* what, std::size_t j, double lhs, double rhs) {
    std::ostringstream os;
    os << what << " at index " << j << " (" << lhs << " vs " << rhs << ")";
    return os.str();
}

}  // namespace

std::string ValidationReport::to_string() const {
    std::ostringstream os;
    for (const auto& v : violations) os << v.name << "[" << v.index << "]: " << v.detail << "\n";
    return os.str();
}

ValidationReport validate_curve(const QuoteCurve& c) {
    check_structure(c);
    ValidationReport rep;
    auto add = [&](const std::string& name, std::size_t j, const std::string& detail) {
        rep.violations.push_back({name, j, detail});
    };
    const double tol = kValidationSlack;
    if (std::fabs(c.strikes.front()) > tol) add("first_strike_nonzero", 0, "strikes[0] must be 0");
    if (c.spot <= 0.0) add("nonpositive_spot", 0, "spot must be positive");
    if (std::fabs(c.prices.front() - c.spot) > tol)
        add("spot_mismatch", 0, at_index("prices[0] != spot", 0, c.prices.front(), c.spot));
    for (std::size_t j = 0; j < c.prices.size(); ++j) {
        if (c.prices[j] < -tol) add("negative_price", j, at_index("price < 0", j, c.prices[j], 0.0));
        const double intrinsic = std::max(c.spot - c.strikes[j], 0.0);
        if (c.prices[j] < intrinsic - tol)
            add("below_intrinsic", j, at_index("price below (spot-k)+", j, c.prices[j], intrinsic));
    }
    double prev_slope = -1.0;  // convention left of strike 0
    for (std::size_t j = 1; j < c.prices.size(); ++j) {
        if (c.prices[j] > c.prices[j - 1] + tol)
            add("not_nonincreasing", j, at_index("price increased", j, c.prices[j], c.prices[j - 1]));
        const double slope = (c.prices[j] - c.prices[j - 1]) / (c.strikes[j] - c.strikes[j - 1]);
        if (slope < -1.0 - tol) add("slope_below_minus_one", j, at_index("slope < -1", j, slope, -1.0));
        if (slope < prev_slope - tol)
            add("not_convex", j, at_index("slope decreased", j, slope, prev_slope));
        prev_slope = slope;
    }
    return rep;
}

ValidationReport validate_quotes(const QuoteSurface& s) {
    check_structure(s.curve_t1);
    check_structure(s.curve_T);
    ValidationReport rep = validate_curve(s.curve_t1);
    {
        ValidationReport repT = validate_curve(s.curve_T);
        for (auto& v : repT.violations) {
            v.name = "T_" + v.name;
            rep.violations.push_back(std::move(v));
        }
    }
    const double tol = kValidationSlack;
    if (!(s.curve_t1.maturity < s.curve_T.maturity))
        rep.violations.push_back({"maturities_not_increasing", 0, "require t1 < T"});
    if (std::fabs(s.curve_t1.spot - s.curve_T.spot) > tol)
        rep.violations.push_back({"spot_differs", 0, "both maturities must share the spot"});
    if (s.curve_t1.strikes.size() != s.curve_T.strikes.size()) {
        rep.violations.push_back({"grid_mismatch", 0, "strike grids differ in length"});
        return rep;
    }
    for (std::size_t j = 0; j < s.curve_t1.strikes.size(); ++j) {
        if (std::fabs(s.curve_t1.strikes[j] - s.curve_T.strikes[j]) > tol) {
            rep.violations.push_back({"grid_mismatch", j, "strike grids must coincide"});
            break;
        }
    }
    for (std::size_t j = 0; j < s.curve_t1.prices.size() && j < s.curve_T.prices.size(); ++j) {
        if (s.curve_t1.prices[j] > s.curve_T.prices[j] + tol)
            rep.violations.push_back(
                {"convex_order_violated", j,
                 at_index("C_t1 > C_T", j, s.curve_t1.prices[j], s.curve_T.prices[j])});
    }
    return rep;
}

double interpolate_call(const QuoteCurve& c, double k) {
    check_structure(c);
    if (k < 0.0 || k > c.strikes.back() + 1e-12)
        throw DomainError("interpolate_call: strike outside [0, max strike]");
    k = std::min(k, c.strikes.back());
    const auto it = std::upper_bound(c.strikes.begin(), c.strikes.end(), k);
    if (it == c.strikes.begin()) return c.prices.front();
    const std::size_t hi = std::min<std::size_t>(it - c.strikes.begin(), c.strikes.size() - 1);
    const std::size_t lo = hi - 1;
    const double t = (k - c.strikes[lo]) / (c.strikes[hi] - c.strikes[lo]);
    return (1.0 - t) * c.prices[lo] + t * c.prices[hi];
}

double extrapolation_zero(const QuoteCurve& c) {
    check_structure(c);
    const std::size_t n = c.strikes.size() - 1;
    if (c.prices[n] <= kValidationSlack) return c.strikes[n];
    const double slope = (c.prices[n] - c.prices[n - 1]) / (c.strikes[n] - c.strikes[n - 1]);
    if (slope >= -kValidationSlack)
        throw DomainError("extrapolation_zero: no finite extrapolated zero (terminal slope >= 0)");
    return c.strikes[n] - c.prices[n] / slope;
}

void write_quotes_csv(const std::filesystem::path& path, const QuoteSurface& s) {
    csv::Writer w(path);
    w.row({"maturity", "strike", "price"});
    for (const QuoteCurve* c : {&s.curve_t1, &s.curve_T})
        for (std::size_t j = 0; j < c->strikes.size(); ++j)
            w.numeric_row({c->maturity, c->strikes[j], c->prices[j]});
}

QuoteSurface read_quotes_csv(const std::filesystem::path& path) {
    const csv::Table t = read_file(path);
    const std::size_t cm = t.column("maturity");
    const std::size_t ck = t.column("strike");
    const std::size_t cp = t.column("price");
    std::map<double, std::vector<std::pair<double, double>>> by_maturity;
    for (std::size_t r = 0; r < t.rows.size(); ++r)
        by_maturity[t.number(r, cm)].push_back({t.number(r, ck), t.number(r, cp)});
    if (by_maturity.size() != 2)
        throw StructuralError("quote file must contain exactly two maturities");
    QuoteSurface s;
    QuoteCurve* curves[2] = {&s.curve_t1, &s.curve_T};
    std::size_t idx = 0;
    for (auto& [mat, quotes] : by_maturity) {
        std::sort(quotes.begin(), quotes.end());
        QuoteCurve& c = *curves[idx++];
        c.maturity = mat;
        for (auto& [k, p] : quotes) {
            c.strikes.push_back(k);
            c.prices.push_back(p);
        }
        if (c.strikes.empty() || std::fabs(c.strikes.front()) > kValidationSlack)
            throw StructuralError("quote file must carry the strike-0 (spot) row per maturity");
        c.spot = c.prices.front();
    }
    return s;
}

}  // namespace mothedge::quotes
