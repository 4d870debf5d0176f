#include "mothedge/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mothedge::lp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Column-major dense matrix of the standardized problem.
struct Tableau {
    std::size_t m = 0;
    std::vector<double> cols;  // m * ncols
    std::size_t ncols = 0;

    void add_col(const std::vector<double>& c) {
        cols.insert(cols.end(), c.begin(), c.end());
        ++ncols;
    }
    const double* col(std::size_t j) const { return cols.data() + j * m; }
};

struct Standardized {
    Tableau A;                      // structural + slack + artificial columns
    std::vector<double> b;          // nonnegative
    std::vector<double> c;          // phase-2 costs (minimization)
    std::vector<double> row_sign;   // +-1 applied to user rows
    std::size_t n_user_rows = 0;    // leading rows correspond to user rows
    std::size_t n_struct = 0;       // structural columns (before slacks)
    std::size_t first_artificial = 0;
    // per user variable: structural column of the positive part, the
    // negative part (or npos), and the additive shift x = x' + shift
    std::vector<std::size_t> col_plus, col_minus;
    std::vector<double> shift;
};

constexpr std::size_t npos = static_cast<std::size_t>(-1);

Standardized standardize(const LpProblem& p) {
    const std::size_t n = p.num_vars();
    Standardized s;
    s.col_plus.assign(n, npos);
    s.col_minus.assign(n, npos);
    s.shift.assign(n, 0.0);

    const double sgn = p.sense == Sense::minimize ? 1.0 : -1.0;

    std::size_t ncols = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (!std::isfinite(p.lower[j])) {
            s.col_plus[j] = ncols++;
            s.col_minus[j] = ncols++;
        } else {
            s.col_plus[j] = ncols++;
            s.shift[j] = p.lower[j];
        }
    }
    s.n_struct = ncols;

    // user rows, then one <= row per finite upper bound
    struct Row {
        std::vector<double> a;
        Relation rel;
        double b;
    };
    std::vector<Row> rows;
    rows.reserve(p.num_rows() + n);
    for (std::size_t i = 0; i < p.num_rows(); ++i) {
        Row r;
        r.a.assign(ncols, 0.0);
        double bi = p.rhs[i];
        for (std::size_t j = 0; j < n; ++j) {
            const double aij = p.rows[i][j];
            if (aij == 0.0) continue;
            r.a[s.col_plus[j]] += aij;
            if (s.col_minus[j] != npos) r.a[s.col_minus[j]] -= aij;
            bi -= aij * s.shift[j];
        }
        r.rel = p.relations[i];
        r.b = bi;
        rows.push_back(std::move(r));
    }
    s.n_user_rows = rows.size();
    for (std::size_t j = 0; j < n; ++j) {
        if (!std::isfinite(p.upper[j])) continue;
        if (!std::isfinite(p.lower[j]))
            throw SolverFailure("finite upper bound on a free variable is not supported");
        Row r;
        r.a.assign(ncols, 0.0);
        r.a[s.col_plus[j]] = 1.0;
        r.rel = Relation::le;
        r.b = p.upper[j] - p.lower[j];
        if (r.b < 0.0) throw SolverFailure("upper bound below lower bound");
        rows.push_back(std::move(r));
    }

    const std::size_t m = rows.size();
    s.row_sign.assign(m, 1.0);
    for (std::size_t i = 0; i < m; ++i) {
        if (rows[i].b < 0.0) {
            s.row_sign[i] = -1.0;
            rows[i].b = -rows[i].b;
            for (double& v : rows[i].a) v = -v;
            if (rows[i].rel == Relation::le)
                rows[i].rel = Relation::ge;
            else if (rows[i].rel == Relation::ge)
                rows[i].rel = Relation::le;
        }
    }

    s.A.m = m;
    s.b.resize(m);
    {
        // structural columns
        std::vector<double> col(m);
        for (std::size_t j = 0; j < ncols; ++j) {
            for (std::size_t i = 0; i < m; ++i) col[i] = rows[i].a[j];
            s.A.add_col(col);
        }
        for (std::size_t i = 0; i < m; ++i) s.b[i] = rows[i].b;
        // slack / surplus
        for (std::size_t i = 0; i < m; ++i) {
            if (rows[i].rel == Relation::eq) continue;
            std::fill(col.begin(), col.end(), 0.0);
            col[i] = rows[i].rel == Relation::le ? 1.0 : -1.0;
            s.A.add_col(col);
        }
        // artificials for ge / eq rows
        s.first_artificial = s.A.ncols;
        for (std::size_t i = 0; i < m; ++i) {
            if (rows[i].rel == Relation::le) continue;
            std::fill(col.begin(), col.end(), 0.0);
            col[i] = 1.0;
            s.A.add_col(col);
        }
    }

    s.c.assign(s.A.ncols, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        const double cj = sgn * p.cost[j];
        s.c[s.col_plus[j]] += cj;
        if (s.col_minus[j] != npos) s.c[s.col_minus[j]] -= cj;
    }
    return s;
}

// Gauss-Jordan inverse with partial pivoting; returns false when singular.
bool invert(std::vector<double>& a, std::size_t m, double tol) {
    std::vector<double> inv(m * m, 0.0);
    for (std::size_t i = 0; i < m; ++i) inv[i * m + i] = 1.0;
    for (std::size_t k = 0; k < m; ++k) {
        std::size_t piv = k;
        double best = std::fabs(a[k * m + k]);
        for (std::size_t i = k + 1; i < m; ++i) {
            const double v = std::fabs(a[i * m + k]);
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        if (best <= tol) return false;
        if (piv != k) {
            for (std::size_t j = 0; j < m; ++j) {
                std::swap(a[piv * m + j], a[k * m + j]);
                std::swap(inv[piv * m + j], inv[k * m + j]);
            }
        }
        const double d = 1.0 / a[k * m + k];
        for (std::size_t j = 0; j < m; ++j) {
            a[k * m + j] *= d;
            inv[k * m + j] *= d;
        }
        for (std::size_t i = 0; i < m; ++i) {
            if (i == k) continue;
            const double f = a[i * m + k];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < m; ++j) {
                a[i * m + j] -= f * a[k * m + j];
                inv[i * m + j] -= f * inv[k * m + j];
            }
        }
    }
    a = std::move(inv);
    return true;
}

class Simplex {
  public:
    Simplex(const Standardized& s, const ToleranceSet& tol) : s_(s), tol_(tol) {
        m_ = s.A.m;
        basis_.resize(m_);
        in_basis_.assign(s.A.ncols, false);
        binv_.assign(m_ * m_, 0.0);
        xb_.assign(m_, 0.0);
    }

    std::size_t m() const { return m_; }
    const std::vector<std::size_t>& basis() const { return basis_; }
    const std::vector<double>& xb() const { return xb_; }

    void set_basis(std::vector<std::size_t> basis) {
        basis_ = std::move(basis);
        std::fill(in_basis_.begin(), in_basis_.end(), false);
        for (std::size_t j : basis_) in_basis_[j] = true;
        refactorize();
    }

    // minimizes cost over the current feasible basis; artificial columns at or
    // beyond `entering_limit` never enter
    Status run(const std::vector<double>& cost, std::size_t entering_limit, int& iterations) {
        const std::size_t width = s_.A.ncols;
        const std::size_t degenerate_cap = 10 * (m_ + width);
        std::size_t degenerate = 0;
        bool bland = false;
        const long iter_cap = 2000 + 200 * static_cast<long>(m_ + width);

        std::vector<double> y(m_), u(m_);
        for (long iter = 0;; ++iter) {
            if (iter > iter_cap)
                throw SolverFailure("simplex iteration cap exceeded (" + std::to_string(iter_cap) + ")");
            // y = cB . Binv
            for (std::size_t i = 0; i < m_; ++i) {
                double acc = 0.0;
                for (std::size_t r = 0; r < m_; ++r) acc += cost[basis_[r]] * binv_[r * m_ + i];
                y[i] = acc;
            }
            // entering column
            std::size_t enter = npos;
            double best = -enter_tol();
            for (std::size_t j = 0; j < entering_limit; ++j) {
                if (in_basis_[j]) continue;
                const double* aj = s_.A.col(j);
                double d = cost[j];
                for (std::size_t i = 0; i < m_; ++i) d -= y[i] * aj[i];
                if (bland) {
                    if (d < -enter_tol()) {
                        enter = j;
                        break;
                    }
                } else if (d < best) {
                    best = d;
                    enter = j;
                }
            }
            if (enter == npos) {
                iterations += static_cast<int>(iter);
                return Status::optimal;
            }
            // u = Binv . A_enter
            const double* ae = s_.A.col(enter);
            for (std::size_t i = 0; i < m_; ++i) {
                double acc = 0.0;
                for (std::size_t r = 0; r < m_; ++r) acc += binv_[i * m_ + r] * ae[r];
                u[i] = acc;
            }
            // ratio test; basic artificials must not increase
            std::size_t leave = npos;
            double t = kInf;
            for (std::size_t i = 0; i < m_; ++i) {
                double ratio;
                if (u[i] > tol_.pivot)
                    ratio = xb_[i] / u[i];
                else if (u[i] < -tol_.pivot && basis_[i] >= s_.first_artificial)
                    ratio = 0.0;
                else
                    continue;
                if (ratio < t - tol_.pivot ||
                    (ratio < t + tol_.pivot && (leave == npos || basis_[i] < basis_[leave]))) {
                    t = std::min(t, ratio);
                    leave = i;
                }
            }
            if (leave == npos) {
                iterations += static_cast<int>(iter);
                return Status::unbounded;
            }
            if (t <= tol_.pivot) {
                if (++degenerate > degenerate_cap) bland = true;
            } else {
                degenerate = 0;
            }
            pivot(enter, leave, u, t);
            if (++since_refactor_ >= 64) refactorize();
        }
    }

    // pivot a basic artificial out of row r if any structural/slack column has
    // a usable entry; returns false when the row is redundant
    bool drive_out_artificial(std::size_t r) {
        std::vector<double> u(m_);
        for (std::size_t j = 0; j < s_.first_artificial; ++j) {
            if (in_basis_[j]) continue;
            const double* aj = s_.A.col(j);
            double v = 0.0;
            for (std::size_t k = 0; k < m_; ++k) v += binv_[r * m_ + k] * aj[k];
            if (std::fabs(v) > 1e3 * tol_.pivot) {
                for (std::size_t i = 0; i < m_; ++i) {
                    double acc = 0.0;
                    for (std::size_t k = 0; k < m_; ++k) acc += binv_[i * m_ + k] * aj[k];
                    u[i] = acc;
                }
                pivot(j, r, u, 0.0);
                return true;
            }
        }
        return false;
    }

    std::vector<double> duals(const std::vector<double>& cost) const {
        std::vector<double> y(m_);
        for (std::size_t i = 0; i < m_; ++i) {
            double acc = 0.0;
            for (std::size_t r = 0; r < m_; ++r) acc += cost[basis_[r]] * binv_[r * m_ + i];
            y[i] = acc;
        }
        return y;
    }

    void refactorize() {
        std::vector<double> bmat(m_ * m_);
        for (std::size_t r = 0; r < m_; ++r) {
            const double* aj = s_.A.col(basis_[r]);
            for (std::size_t i = 0; i < m_; ++i) bmat[i * m_ + r] = aj[i];
        }
        if (m_ > 0 && !invert(bmat, m_, tol_.pivot))
            throw SolverFailure("singular basis during refactorization");
        binv_ = std::move(bmat);
        for (std::size_t i = 0; i < m_; ++i) {
            double acc = 0.0;
            for (std::size_t r = 0; r < m_; ++r) acc += binv_[i * m_ + r] * s_.b[r];
            xb_[i] = std::max(acc, 0.0);
        }
        since_refactor_ = 0;
    }

  private:
    double enter_tol() const { return 10.0 * tol_.pivot; }

    void pivot(std::size_t enter, std::size_t leave, const std::vector<double>& u, double t) {
        in_basis_[basis_[leave]] = false;
        in_basis_[enter] = true;
        basis_[leave] = enter;
        const double d = 1.0 / u[leave];
        for (std::size_t k = 0; k < m_; ++k) binv_[leave * m_ + k] *= d;
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == leave) continue;
            const double f = u[i];
            if (f == 0.0) continue;
            for (std::size_t k = 0; k < m_; ++k) binv_[i * m_ + k] -= f * binv_[leave * m_ + k];
        }
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == leave) continue;
            xb_[i] = std::max(xb_[i] - t * u[i], 0.0);
        }
        xb_[leave] = t;
    }

    const Standardized& s_;
    ToleranceSet tol_;
    std::size_t m_ = 0;
    std::vector<std::size_t> basis_;
    std::vector<bool> in_basis_;
    std::vector<double> binv_;
    std::vector<double> xb_;
    int since_refactor_ = 0;
};

}  // namespace

LpProblem::LpProblem(Sense s, std::size_t nvars) : sense(s) {
    cost.assign(nvars, 0.0);
    lower.assign(nvars, 0.0);
    upper.assign(nvars, kInf);
}

void LpProblem::add_row(std::vector<double> coeffs, Relation rel, double b) {
    if (coeffs.size() != num_vars()) throw SolverFailure("row length does not match variable count");
    rows.push_back(std::move(coeffs));
    relations.push_back(rel);
    rhs.push_back(b);
}

void LpProblem::set_free(std::size_t j) { lower[j] = -kInf; }

void LpProblem::set_bounds(std::size_t j, double lo, double hi) {
    lower[j] = lo;
    upper[j] = hi;
}

LpSolution solve(const LpProblem& p) {
    for (std::size_t i = 0; i < p.num_rows(); ++i)
        if (p.rows[i].size() != p.num_vars()) throw SolverFailure("inconsistent row width");
    for (double v : p.cost)
        if (!std::isfinite(v)) throw SolverFailure("non-finite cost entry");
    for (const auto& r : p.rows)
        for (double v : r)
            if (!std::isfinite(v)) throw SolverFailure("non-finite matrix entry");
    for (double v : p.rhs)
        if (!std::isfinite(v)) throw SolverFailure("non-finite right-hand side");

    Standardized s = standardize(p);
    const std::size_t m = s.A.m;
    Simplex splx(s, p.tol);

    LpSolution out;

    // phase 1: start from slacks on <= rows, artificials elsewhere
    {
        std::vector<std::size_t> basis(m, npos);
        // identify slack/surplus and artificial columns per row by inspection
        for (std::size_t j = s.n_struct; j < s.first_artificial; ++j) {
            const double* col = s.A.col(j);
            for (std::size_t i = 0; i < m; ++i) {
                if (col[i] == 1.0) {
                    basis[i] = j;  // plain slack, feasible start
                    break;
                }
                if (col[i] == -1.0) break;  // surplus, needs artificial
            }
        }
        for (std::size_t j = s.first_artificial; j < s.A.ncols; ++j) {
            const double* col = s.A.col(j);
            for (std::size_t i = 0; i < m; ++i) {
                if (col[i] == 1.0) {
                    basis[i] = j;
                    break;
                }
            }
        }
        for (std::size_t i = 0; i < m; ++i)
            if (basis[i] == npos) throw SolverFailure("internal: no starting basis column for a row");

        bool need_phase1 = false;
        for (std::size_t i = 0; i < m; ++i)
            if (basis[i] >= s.first_artificial) need_phase1 = true;

        splx.set_basis(std::move(basis));

        if (need_phase1) {
            std::vector<double> c1(s.A.ncols, 0.0);
            for (std::size_t j = s.first_artificial; j < s.A.ncols; ++j) c1[j] = 1.0;
            const Status st = splx.run(c1, s.first_artificial, out.iterations);
            if (st == Status::unbounded) throw SolverFailure("phase-1 subproblem reported unbounded");
            double infeas = 0.0;
            for (std::size_t i = 0; i < m; ++i)
                if (splx.basis()[i] >= s.first_artificial) infeas += splx.xb()[i];
            double bmax = 0.0;
            for (double v : s.b) bmax = std::max(bmax, v);
            if (infeas > 1e-9 * (1.0 + bmax)) {
                out.status = Status::infeasible;
                return out;
            }
            for (std::size_t i = 0; i < m; ++i)
                if (splx.basis()[i] >= s.first_artificial) splx.drive_out_artificial(i);
        }
    }

    // phase 2
    const Status st = splx.run(s.c, s.first_artificial, out.iterations);
    if (st == Status::unbounded) {
        out.status = Status::unbounded;
        return out;
    }
    splx.refactorize();

    // map the solution back
    const std::size_t n = p.num_vars();
    std::vector<double> xi(s.A.ncols, 0.0);
    for (std::size_t i = 0; i < m; ++i) xi[splx.basis()[i]] = splx.xb()[i];
    out.x.assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        double v = xi[s.col_plus[j]] + s.shift[j];
        if (s.col_minus[j] != npos) v -= xi[s.col_minus[j]];
        out.x[j] = v;
    }
    out.objective = 0.0;
    for (std::size_t j = 0; j < n; ++j) out.objective += p.cost[j] * out.x[j];

    const double dual_sign = p.sense == Sense::minimize ? 1.0 : -1.0;
    const std::vector<double> y = splx.duals(s.c);
    out.dual.assign(p.num_rows(), 0.0);
    for (std::size_t i = 0; i < p.num_rows(); ++i) out.dual[i] = dual_sign * s.row_sign[i] * y[i];
    out.reduced_cost.assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        double d = p.cost[j];
        for (std::size_t i = 0; i < p.num_rows(); ++i) d -= out.dual[i] * p.rows[i][j];
        out.reduced_cost[j] = d;
    }
    out.status = Status::optimal;
    return out;
}

}  // namespace mothedge::lp
