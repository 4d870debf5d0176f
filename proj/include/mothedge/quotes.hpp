#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace mothedge::quotes {

// Call quotes for one maturity. Strikes start at 0 and the strike-0 price is
// the spot (C(0) = S0 with r = 0).
struct QuoteCurve {
    double maturity = 0.0;
    std::vector<double> strikes;
    std::vector<double> prices;
    double spot = 1.0;
};

// Two maturities on a shared strike grid.
struct QuoteSurface {
    QuoteCurve curve_t1;
    QuoteCurve curve_T;
};

struct Violation {
    std::string name;
    std::size_t index = 0;
    std::string detail;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
    std::string to_string() const;
};

// Raised when the inputs are too malformed to check invariant by invariant
// (mismatched lengths, unsorted strikes).
struct StructuralError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// absolute slack on all inequality checks; quotes are treated as exact
inline constexpr double kValidationSlack = 1e-10;

ValidationReport validate_curve(const QuoteCurve& curve);
ValidationReport validate_quotes(const QuoteSurface& surface);

// exact linear interpolation on [0, max strike]; DomainError outside
double interpolate_call(const QuoteCurve& curve, double k);

// smallest zero of the continuation of the last price segment; equals the
// last strike when the last price is already zero
double extrapolation_zero(const QuoteCurve& curve);

void write_quotes_csv(const std::filesystem::path& path, const QuoteSurface& surface);
QuoteSurface read_quotes_csv(const std::filesystem::path& path);

}  // namespace mothedge::quotes
