// SPDX-License-Identifier: Apache-2.0
//
// cfsat: energy-efficiency toolkit for satellite-assisted UAV cell-free networks
// Copyright (C) 2026 The cfsat Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "cfsat/conic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <ostream>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/OrderingMethods>

#include "cfsat/linalg.hpp"

namespace cfsat::conic {

// ---------------------------------------------------------------------------
// Problem container

int ConicProblem::add_variable(std::string name, double lower, double upper) {
    vars_.push_back({std::move(name), lower, upper});
    return static_cast<int>(vars_.size()) - 1;
}

void ConicProblem::set_bounds(int var, double lower, double upper) {
    auto& v = vars_.at(static_cast<std::size_t>(var));
    v.lower = lower;
    v.upper = upper;
}

void ConicProblem::set_objective(Sense sense, SparseTerms terms) {
    sense_ = sense;
    objective_ = std::move(terms);
}

void ConicProblem::add_affine_le(SparseTerms coeffs, double rhs, std::string tag) {
    affine_.push_back({std::move(coeffs), rhs, std::move(tag)});
}

void ConicProblem::add_affine_ge(SparseTerms coeffs, double rhs, std::string tag) {
    for (auto& [idx, c] : coeffs) c = -c;
    add_affine_le(std::move(coeffs), -rhs, std::move(tag));
}

void ConicProblem::add_quadratic_le(SparseMat factor, SparseTerms linear, double rhs,
                                    std::string tag) {
    if (factor.cols() != num_variables())
        throw std::invalid_argument("add_quadratic_le: factor must have one column per variable");
    factor.makeCompressed();
    quadratic_.push_back({std::move(factor), std::move(linear), rhs, std::move(tag)});
}

void ConicProblem::add_quadratic_le(const Mat& Q, const std::vector<int>& vars, SparseTerms linear,
                                    double rhs, std::string tag) {
    if (Q.rows() != Q.cols() || Q.rows() != static_cast<Eigen::Index>(vars.size()))
        throw std::invalid_argument("add_quadratic_le: Q does not match the variable list");
    const Mat F = psd_factor(Q); // throws on indefinite Q
    std::vector<Eigen::Triplet<double>> trip;
    for (Eigen::Index r = 0; r < F.cols(); ++r)
        for (Eigen::Index c = 0; c < F.rows(); ++c)
            if (F(c, r) != 0.0) trip.emplace_back(static_cast<int>(r), vars[static_cast<std::size_t>(c)], F(c, r));
    SparseMat factor(F.cols(), num_variables());
    factor.setFromTriplets(trip.begin(), trip.end());
    add_quadratic_le(std::move(factor), std::move(linear), rhs, std::move(tag));
}

namespace {

double dot_terms(const SparseTerms& terms, const Vec& x) {
    double acc = 0.0;
    for (const auto& [idx, c] : terms) acc += c * x(idx);
    return acc;
}

} // namespace

double ConicProblem::objective_value(const Vec& x) const { return dot_terms(objective_, x); }

double ConicProblem::max_violation(const Vec& x) const {
    double worst = 0.0;
    for (int j = 0; j < num_variables(); ++j) {
        const auto& v = vars_[static_cast<std::size_t>(j)];
        worst = std::max({worst, v.lower - x(j), x(j) - v.upper});
    }
    for (const auto& a : affine_) worst = std::max(worst, dot_terms(a.coeffs, x) - a.rhs);
    for (const auto& q : quadratic_)
        worst = std::max(worst, (q.factor * x).squaredNorm() + dot_terms(q.linear, x) - q.rhs);
    return worst;
}

double ConicProblem::constraint_slack(const std::string& tag, const Vec& x) const {
    for (const auto& a : affine_)
        if (a.tag == tag) return dot_terms(a.coeffs, x) - a.rhs;
    for (const auto& q : quadratic_)
        if (q.tag == tag) return (q.factor * x).squaredNorm() + dot_terms(q.linear, x) - q.rhs;
    throw std::out_of_range("constraint_slack: unknown tag " + tag);
}

void ConicProblem::dump(std::ostream& os) const {
    const auto old_prec = os.precision(17);
    os << "# cfsat conic problem: " << num_variables() << " variables, " << affine_.size()
       << " affine, " << quadratic_.size() << " quadratic\n";
    os << "sense " << (sense_ == Sense::Maximize ? "max" : "min") << '\n';
    Vec obj = Vec::Zero(num_variables());
    for (const auto& [idx, c] : objective_) obj(idx) += c;
    for (int j = 0; j < num_variables(); ++j) {
        const auto& v = vars_[static_cast<std::size_t>(j)];
        os << "var " << j << ' ' << v.name << " lb " << v.lower << " ub " << v.upper << " obj "
           << obj(j) << '\n';
    }
    auto terms = [&os](const SparseTerms& t) {
        for (const auto& [idx, c] : t) os << ' ' << idx << ':' << c;
    };
    for (const auto& a : affine_) {
        os << "lin " << a.tag << " :";
        terms(a.coeffs);
        os << " <= " << a.rhs << '\n';
    }
    for (const auto& q : quadratic_) {
        os << "quad " << q.tag << " rows " << q.factor.rows() << " F";
        for (int col = 0; col < q.factor.outerSize(); ++col)
            for (SparseMat::InnerIterator it(q.factor, col); it; ++it)
                os << ' ' << it.row() << ',' << it.col() << ':' << it.value();
        os << " q";
        terms(q.linear);
        os << " <= " << q.rhs << '\n';
    }
    os.precision(old_prec);
}

const char* to_string(SolveStatus status) {
    switch (status) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::MaxIter: return "max_iter";
    case SolveStatus::NumericalError: return "numerical_error";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Standard form: min c'x  s.t.  G x + s = h,  s in R+^l x Q^{q1} x ... x Q^{qp}

namespace {

struct Cones {
    int orthant = 0;
    std::vector<int> soc_start;
    std::vector<int> soc_dim;
    int rows() const { return orthant + (soc_dim.empty() ? 0 : soc_start.back() + soc_dim.back() - orthant); }
    int degree() const { return orthant + static_cast<int>(soc_dim.size()); }
};

struct StandardForm {
    int n = 0;
    SparseMat G;
    Vec h;
    Vec c;
    Cones cones;
    std::vector<int> reduced_index; // original -> reduced, -1 if fixed
    Vec fixed_x;                    // original-size, holds fixed values
    double sign = 1.0;              // +1 minimize, -1 maximize
    bool trivially_infeasible = false;
    Vec col_scale;
    Vec row_scale;
};

StandardForm to_standard_form(const ConicProblem& p) {
    StandardForm sf;
    const int n0 = p.num_variables();
    sf.reduced_index.assign(static_cast<std::size_t>(n0), -1);
    sf.fixed_x = Vec::Zero(n0);
    for (int j = 0; j < n0; ++j) {
        const auto& v = p.variables()[static_cast<std::size_t>(j)];
        if (v.lower > v.upper) sf.trivially_infeasible = true;
        if (v.lower == v.upper) {
            sf.fixed_x(j) = v.lower;
        } else {
            sf.reduced_index[static_cast<std::size_t>(j)] = sf.n++;
        }
    }
    const int n = sf.n;
    sf.sign = p.sense() == Sense::Maximize ? -1.0 : 1.0;
    sf.c = Vec::Zero(n);
    for (const auto& [idx, coef] : p.objective()) {
        const int r = sf.reduced_index[static_cast<std::size_t>(idx)];
        if (r >= 0) sf.c(r) += sf.sign * coef;
    }

    std::vector<Eigen::Triplet<double>> trip;
    std::vector<double> h;
    int row = 0;

    auto add_linear_row = [&](const SparseTerms& coeffs, double rhs) {
        double constant = 0.0;
        bool any = false;
        for (const auto& [idx, coef] : coeffs) {
            const int r = sf.reduced_index[static_cast<std::size_t>(idx)];
            if (r >= 0) {
                if (coef != 0.0) {
                    trip.emplace_back(row, r, coef);
                    any = true;
                }
            } else {
                constant += coef * sf.fixed_x(idx);
            }
        }
        if (!any) {
            if (constant > rhs + 1e-12 * std::max(1.0, std::abs(rhs))) sf.trivially_infeasible = true;
            // Drop rows without free variables; remove any triplets we may have staged.
            return;
        }
        h.push_back(rhs - constant);
        ++row;
    };

    for (const auto& a : p.affine()) add_linear_row(a.coeffs, a.rhs);
    for (int j = 0; j < n0; ++j) {
        const auto& v = p.variables()[static_cast<std::size_t>(j)];
        if (sf.reduced_index[static_cast<std::size_t>(j)] < 0) continue;
        if (std::isfinite(v.lower)) add_linear_row({{j, -1.0}}, -v.lower);
        if (std::isfinite(v.upper)) add_linear_row({{j, 1.0}}, v.upper);
    }
    sf.cones.orthant = row;

    for (const auto& q : p.quadratic()) {
        // Split the factor into free and fixed parts: ||F x + f0||^2 + q'x <= r.
        const Eigen::Index fr = q.factor.rows();
        Vec f0 = Vec::Zero(fr);
        std::vector<Eigen::Triplet<double>> ftrip;
        for (int col = 0; col < q.factor.outerSize(); ++col) {
            const int r = sf.reduced_index[static_cast<std::size_t>(col)];
            for (SparseMat::InnerIterator it(q.factor, col); it; ++it) {
                if (r >= 0) {
                    ftrip.emplace_back(static_cast<int>(it.row()), r, it.value());
                } else {
                    f0(it.row()) += it.value() * sf.fixed_x(col);
                }
            }
        }
        double rhs = q.rhs;
        Vec lin = Vec::Zero(n);
        for (const auto& [idx, coef] : q.linear) {
            const int r = sf.reduced_index[static_cast<std::size_t>(idx)];
            if (r >= 0) lin(r) += coef;
            else rhs -= coef * sf.fixed_x(idx);
        }
        double scale = std::max(std::abs(rhs), lin.cwiseAbs().maxCoeff());
        if (!(scale > 0.0)) scale = 1.0;
        const double inv = 1.0 / scale;
        const double root = std::sqrt(inv);
        const double rs = rhs * inv;

        // s0 = rs + 1 - q'x, s1 = rs - 1 - q'x, s_rest = 2 (F x + f0); all scaled.
        const int start = row;
        for (int j = 0; j < n; ++j) {
            if (lin(j) != 0.0) {
                trip.emplace_back(start, j, lin(j) * inv);
                trip.emplace_back(start + 1, j, lin(j) * inv);
            }
        }
        h.push_back(rs + 1.0);
        h.push_back(rs - 1.0);
        for (const auto& t : ftrip) trip.emplace_back(start + 2 + t.row(), t.col(), -2.0 * root * t.value());
        for (Eigen::Index i = 0; i < fr; ++i) h.push_back(2.0 * root * f0(i));
        sf.cones.soc_start.push_back(start);
        sf.cones.soc_dim.push_back(static_cast<int>(fr + 2));
        row += static_cast<int>(fr + 2);
    }

    sf.G.resize(row, n);
    sf.G.setFromTriplets(trip.begin(), trip.end());
    sf.G.makeCompressed();
    sf.h = Eigen::Map<Vec>(h.data(), static_cast<Eigen::Index>(h.size()));
    return sf;
}

// Ruiz-style equilibration respecting cone blocks: one scale per orthant row,
// one per second-order-cone block, one per column.
void equilibrate(StandardForm& sf, int passes) {
    const int m = static_cast<int>(sf.G.rows());
    const int n = sf.n;
    sf.row_scale = Vec::Ones(m);
    sf.col_scale = Vec::Ones(n);
    if (m == 0 || n == 0) return;

    std::vector<int> block_of(static_cast<std::size_t>(m));
    for (int i = 0; i < sf.cones.orthant; ++i) block_of[static_cast<std::size_t>(i)] = i;
    for (std::size_t b = 0; b < sf.cones.soc_dim.size(); ++b)
        for (int i = 0; i < sf.cones.soc_dim[b]; ++i)
            block_of[static_cast<std::size_t>(sf.cones.soc_start[b] + i)] = sf.cones.orthant + static_cast<int>(b);
    const int nblocks = sf.cones.degree();

    for (int pass = 0; pass < passes; ++pass) {
        Vec colmax = Vec::Zero(n);
        Vec blockmax = Vec::Zero(nblocks);
        for (int col = 0; col < sf.G.outerSize(); ++col) {
            for (SparseMat::InnerIterator it(sf.G, col); it; ++it) {
                const double a = std::abs(it.value());
                colmax(col) = std::max(colmax(col), a);
                const int blk = block_of[static_cast<std::size_t>(it.row())];
                blockmax(blk) = std::max(blockmax(blk), a);
            }
        }
        Vec dcol(n);
        for (int j = 0; j < n; ++j) dcol(j) = colmax(j) > 0.0 ? 1.0 / std::sqrt(colmax(j)) : 1.0;
        Vec drow(m);
        for (int i = 0; i < m; ++i) {
            const double bm = blockmax(block_of[static_cast<std::size_t>(i)]);
            drow(i) = bm > 0.0 ? 1.0 / std::sqrt(bm) : 1.0;
        }
        sf.G = drow.asDiagonal() * sf.G * dcol.asDiagonal();
        sf.row_scale.array() *= drow.array();
        sf.col_scale.array() *= dcol.array();
    }
    sf.h.array() *= sf.row_scale.array();
    sf.c.array() *= sf.col_scale.array();
    sf.G.makeCompressed();
}

// ---------------------------------------------------------------------------
// Cone algebra

struct NtScaling {
    Vec orth;                 // W = diag(orth)
    std::vector<double> beta; // per SOC block
    std::vector<Vec> v;       // per SOC block, v'Jv = 1
};

class ConeOps {
public:
    explicit ConeOps(const Cones& c) : c_(c) {}

    Vec identity() const {
        Vec e = Vec::Zero(c_.rows());
        e.head(c_.orthant).setOnes();
        for (std::size_t b = 0; b < c_.soc_dim.size(); ++b) e(c_.soc_start[b]) = 1.0;
        return e;
    }

    // Smallest "eigenvalue" of x; x is interior iff it is positive.
    double min_eig(const Vec& x) const {
        double m = kInf;
        for (int i = 0; i < c_.orthant; ++i) m = std::min(m, x(i));
        for (std::size_t b = 0; b < c_.soc_dim.size(); ++b) {
            const auto seg = x.segment(c_.soc_start[b], c_.soc_dim[b]);
            m = std::min(m, seg(0) - seg.tail(seg.size() - 1).norm());
        }
        return m;
    }

    Vec jordan(const Vec& u, const Vec& w) const {
        Vec r(u.size());
        r.head(c_.orthant) = u.head(c_.orthant).cwiseProduct(w.head(c_.orthant));
        for (std::size_t b = 0; b < c_.soc_dim.size(); ++b) {
            const int s = c_.soc_start[b], d = c_.soc_dim[b];
            r(s) = u.segment(s, d).dot(w.segment(s, d));
            r.segment(s + 1, d - 1) = u(s) * w.segment(s + 1, d - 1) + w(s) * u.segment(s + 1, d - 1);
        }
        return r;
    }

    // Solves lambda o x = y.
    Vec jordan_div(const Vec& lambda, const Vec& y) const {
        Vec x(y.size());
        x.head(c_.orthant) = y.head(c_.orthant).cwiseQuotient(lambda.head(c_.orthant));
        for (std::size_t b = 0; b < c_.soc_dim.size(); ++b) {
            const int s = c_.soc_start[b], d = c_.soc_dim[b];
            const double l0 = lambda(s);
            const auto l1 = lambda.segment(s + 1, d - 1);
            const double det = l0 * l0 - l1.squaredNorm();
            const double x0 = (l0 * y(s) - l1.dot(y.segment(s + 1, d - 1))) / det;
            x(s) = x0;
            x.segment(s + 1, d - 1) = (y.segment(s + 1, d - 1) - l1 * x0) / l0;
        }
        return x;
    }

    // sqrt(x0^2 - |x1|^2) without cancellation.
    static double soc_norm(const Vec& x) {
        const double r = x.tail(x.size() - 1).norm();
        return std::sqrt(std::max((x(0) - r) * (x(0) + r), 1e-300));
    }

    NtScaling scaling(const Vec& s, const Vec& z) const {
        NtScaling w;
        w.orth = (s.head(c_.orthant).array() / z.head(c_.orthant).array()).sqrt();
        for (std::size_t b = 0; b < c_.soc_dim.size(); ++b) {
            const int st = c_.soc_start[b], d = c_.soc_dim[b];
            const Vec sb = s.segment(st, d);
            const Vec zb = z.segment(st, d);
            const double a = soc_norm(sb);
            const double bz = soc_norm(zb);
            const Vec sn = sb / a;
            const Vec zn = zb / bz;
            const double gamma = std::sqrt(std::max((1.0 + sn.dot(zn)) / 2.0, 1e-300));
            Vec wbar(d);
            wbar(0) = (sn(0) + zn(0)) / (2.0 * gamma);
            wbar.tail(d - 1) = (sn.tail(d - 1) - zn.tail(d - 1)) / (2.0 * gamma);
            Vec v = wbar;
            v(0) += 1.0;
            v /= std::sqrt(2.0 * (wbar(0) + 1.0));
            w.beta.push_back(std::sqrt(a / bz));
            w.v.push_back(std::move(v));
        }
        return w;
    }

    // W x
    Vec apply(const NtScaling& w, const Vec& x) const { return apply_impl(w, x, false); }
    // W^{-1} x
    Vec apply_inv(const NtScaling& w, const Vec& x) const { return apply_impl(w, x, true); }

    // Largest step t with x + t dx in the cone (kInf if unbounded).
    double max_step(const Vec& x, const Vec& dx) const {
        double t = kInf;
        for (int i = 0; i < c_.orthant; ++i)
            if (dx(i) < 0.0) t = std::min(t, -x(i) / dx(i));
        for (std::size_t b = 0; b < c_.soc_dim.size(); ++b) {
            const int s = c_.soc_start[b], d = c_.soc_dim[b];
            const double x0 = x(s), d0 = dx(s);
            const auto x1 = x.segment(s + 1, d - 1);
            const auto d1 = dx.segment(s + 1, d - 1);
            const double A = d0 * d0 - d1.squaredNorm();
            const double B = x0 * d0 - x1.dot(d1);
            const double C = std::max(x0 * x0 - x1.squaredNorm(), 0.0);
            double root = kInf;
            if (std::abs(A) <= 1e-300) {
                if (B < 0.0) root = -C / (2.0 * B);
            } else {
                const double disc = B * B - A * C;
                if (disc >= 0.0) {
                    const double sq = std::sqrt(disc);
                    const double qv = -(B + (B >= 0.0 ? sq : -sq));
                    const double r1 = qv / A;
                    const double r2 = qv != 0.0 ? C / qv : kInf;
                    for (double r : {r1, r2})
                        if (r > 0.0) root = std::min(root, r);
                }
            }
            if (d0 < 0.0) root = std::min(root, -x0 / d0);
            t = std::min(t, root);
        }
        return t;
    }

    const Cones& cones() const { return c_; }

private:
    Vec apply_impl(const NtScaling& w, const Vec& x, bool inverse) const {
        Vec r(x.size());
        r.head(c_.orthant) = inverse ? Vec(x.head(c_.orthant).cwiseQuotient(w.orth))
                                     : Vec(x.head(c_.orthant).cwiseProduct(w.orth));
        for (std::size_t b = 0; b < c_.soc_dim.size(); ++b) {
            const int s = c_.soc_start[b], d = c_.soc_dim[b];
            const auto xb = x.segment(s, d);
            Vec u = w.v[b];
            if (inverse) u.tail(d - 1) = -u.tail(d - 1); // J v
            Vec jx = xb;
            jx.tail(d - 1) = -jx.tail(d - 1);
            const double f = inverse ? 1.0 / w.beta[b] : w.beta[b];
            r.segment(s, d) = f * (2.0 * u * u.dot(xb) - jx);
        }
        return r;
    }

    const Cones& c_;
};

// ---------------------------------------------------------------------------
// Sparse LDL' for quasi-definite matrices. Pivots whose sign disagrees with the
// expected inertia (or that vanish) are replaced by +-delta.

class QuasiDefiniteLdl {
public:
    // `lower` holds the lower triangle; sign(i) is +1 or -1.
    void analyze(const SparseMat& lower, const Eigen::VectorXi& sign) {
        const int n = static_cast<int>(lower.rows());
        SparseMat sym;
        sym = lower.selfadjointView<Eigen::Lower>();
        Eigen::AMDOrdering<int> amd;
        amd(sym, pinv_);
        perm_ = pinv_.inverse();
        sign_.resize(n);
        for (int i = 0; i < n; ++i) sign_(perm_.indices()(i)) = sign(i);
        permute(lower);

        parent_.assign(static_cast<std::size_t>(n), -1);
        std::vector<int> mark(static_cast<std::size_t>(n), -1);
        std::vector<int> count(static_cast<std::size_t>(n), 0);
        for (int j = 0; j < n; ++j) {
            mark[static_cast<std::size_t>(j)] = j;
            for (SparseMat::InnerIterator it(upper_, j); it; ++it) {
                int i = static_cast<int>(it.row());
                if (i >= j) continue;
                while (mark[static_cast<std::size_t>(i)] != j) {
                    if (parent_[static_cast<std::size_t>(i)] == -1) parent_[static_cast<std::size_t>(i)] = j;
                    ++count[static_cast<std::size_t>(i)];
                    mark[static_cast<std::size_t>(i)] = j;
                    i = parent_[static_cast<std::size_t>(i)];
                }
            }
        }
        Lp_.assign(static_cast<std::size_t>(n) + 1, 0);
        for (int i = 0; i < n; ++i) Lp_[static_cast<std::size_t>(i) + 1] = Lp_[static_cast<std::size_t>(i)] + count[static_cast<std::size_t>(i)];
        Li_.assign(static_cast<std::size_t>(Lp_.back()), 0);
        Lx_.assign(static_cast<std::size_t>(Lp_.back()), 0.0);
        D_.resize(n);
        n_ = n;
    }

    void factorize(const SparseMat& lower, double eps, double delta) {
        permute(lower);
        const auto n = static_cast<std::size_t>(n_);
        std::vector<double> y(n, 0.0);
        std::vector<char> used(n, 0);
        std::vector<int> pattern(n), stack(n);
        std::vector<int> next(Lp_.begin(), Lp_.end() - 1);
        regularized_ = 0;
        for (int k = 0; k < n_; ++k) {
            int top = 0;
            double dk = 0.0;
            for (SparseMat::InnerIterator it(upper_, k); it; ++it) {
                const int b = static_cast<int>(it.row());
                if (b == k) {
                    dk = it.value();
                    continue;
                }
                y[static_cast<std::size_t>(b)] = it.value();
                if (used[static_cast<std::size_t>(b)]) continue;
                int len = 0;
                for (int i = b; i != -1 && i < k && !used[static_cast<std::size_t>(i)]; i = parent_[static_cast<std::size_t>(i)]) {
                    used[static_cast<std::size_t>(i)] = 1;
                    stack[static_cast<std::size_t>(len++)] = i;
                }
                while (len > 0) pattern[static_cast<std::size_t>(top++)] = stack[static_cast<std::size_t>(--len)];
            }
            for (int t = top - 1; t >= 0; --t) {
                const auto c = static_cast<std::size_t>(pattern[static_cast<std::size_t>(t)]);
                const double yc = y[c];
                const int end = next[c];
                for (int q = Lp_[c]; q < end; ++q) y[static_cast<std::size_t>(Li_[static_cast<std::size_t>(q)])] -= Lx_[static_cast<std::size_t>(q)] * yc;
                const double l = yc / D_(static_cast<Eigen::Index>(c));
                Li_[static_cast<std::size_t>(end)] = k;
                Lx_[static_cast<std::size_t>(end)] = l;
                dk -= yc * l;
                ++next[c];
                y[c] = 0.0;
                used[c] = 0;
            }
            if (dk * sign_(k) <= eps) {
                dk = sign_(k) * delta;
                ++regularized_;
            }
            D_(k) = dk;
        }
    }

    Vec solve(const Vec& b) const {
        Vec x = perm_ * b;
        for (int i = 0; i < n_; ++i)
            for (int q = Lp_[static_cast<std::size_t>(i)]; q < Lp_[static_cast<std::size_t>(i) + 1]; ++q)
                x(Li_[static_cast<std::size_t>(q)]) -= Lx_[static_cast<std::size_t>(q)] * x(i);
        x.array() /= D_.array();
        for (int i = n_ - 1; i >= 0; --i)
            for (int q = Lp_[static_cast<std::size_t>(i)]; q < Lp_[static_cast<std::size_t>(i) + 1]; ++q)
                x(i) -= Lx_[static_cast<std::size_t>(q)] * x(Li_[static_cast<std::size_t>(q)]);
        return pinv_ * x;
    }

    int regularized() const { return regularized_; }

private:
    void permute(const SparseMat& lower) {
        upper_.resize(lower.rows(), lower.cols());
        upper_.selfadjointView<Eigen::Upper>() = lower.selfadjointView<Eigen::Lower>().twistedBy(perm_);
    }

    int n_ = 0;
    Eigen::PermutationMatrix<Eigen::Dynamic, Eigen::Dynamic, int> perm_, pinv_;
    Eigen::VectorXi sign_;
    SparseMat upper_;
    std::vector<int> parent_, Lp_, Li_;
    std::vector<double> Lx_;
    Vec D_;
    int regularized_ = 0;
};

// ---------------------------------------------------------------------------
// Interior-point iteration

class HsdeSolver {
public:
    HsdeSolver(const StandardForm& sf, const SolverOptions& opt) : sf_(sf), opt_(opt), ops_(sf.cones) {
        const int m = static_cast<int>(sf.G.rows());
        const Cones& cn = sf.cones;
        Gt_ = sf.G.transpose();
        G_orth_ = sf.G.topRows(cn.orthant);
        G_orth_t_ = G_orth_.transpose();
        for (std::size_t b = 0; b < cn.soc_dim.size(); ++b) {
            SparseMat Gb = sf.G.middleRows(cn.soc_start[b], cn.soc_dim[b]);
            SparseMat GbT = Gb.transpose();
            SparseMat GtG = GbT * Gb;
            std::vector<int> cols;
            for (int col = 0; col < Gb.outerSize(); ++col)
                if (SparseMat::InnerIterator(Gb, col)) cols.push_back(col);
            soc_G_.push_back(std::move(Gb));
            soc_Gt_.push_back(std::move(GbT));
            soc_GtG_.push_back(std::move(GtG));
            soc_cols_.push_back(std::move(cols));
        }
        double dense_entries = 0.0;
        for (int d : cn.soc_dim) dense_entries += static_cast<double>(d) * d;
        augmented_ = dense_entries + static_cast<double>(sf.G.nonZeros()) <= kAugmentedLimit;
        (void)m;
    }

    ConicSolution run();

private:
    static constexpr double kAugmentedLimit = 4e6;
    static constexpr double kStaticReg = 1e-10;
    static constexpr double kDynamicEps = 1e-13;
    static constexpr double kDynamicReg = 1e-7;

    void factor(const NtScaling& w) {
        normal_ready_ = !augmented_;
        if (augmented_) factor_augmented(w);
        else form_normal_matrix(w);
    }

    // Lower triangle of [dI G'; G -(W^2 + dI)] with the x block first.
    void factor_augmented(const NtScaling& w) {
        const int n = sf_.n;
        const Cones& cn = sf_.cones;
        const int m = static_cast<int>(sf_.G.rows());
        std::vector<Eigen::Triplet<double>> trip;
        trip.reserve(static_cast<std::size_t>(n + m + sf_.G.nonZeros()));
        for (int j = 0; j < n; ++j) trip.emplace_back(j, j, kStaticReg);
        for (int col = 0; col < sf_.G.outerSize(); ++col)
            for (SparseMat::InnerIterator it(sf_.G, col); it; ++it)
                trip.emplace_back(n + static_cast<int>(it.row()), col, it.value());
        for (int i = 0; i < cn.orthant; ++i) trip.emplace_back(n + i, n + i, -(w.orth(i) * w.orth(i) + kStaticReg));
        for (std::size_t b = 0; b < cn.soc_dim.size(); ++b) {
            const int st = cn.soc_start[b], d = cn.soc_dim[b];
            const Vec& v = w.v[b];
            Vec jv = v;
            jv.tail(d - 1) = -jv.tail(d - 1);
            const double b2 = w.beta[b] * w.beta[b];
            const double vv4 = 4.0 * v.squaredNorm();
            for (int c = 0; c < d; ++c) {
                for (int r = c; r < d; ++r) {
                    double val = vv4 * v(r) * v(c) - 2.0 * (v(r) * jv(c) + jv(r) * v(c));
                    if (r == c) val += 1.0;
                    val = -b2 * val;
                    if (r == c) val -= kStaticReg;
                    trip.emplace_back(n + st + r, n + st + c, val);
                }
            }
        }
        K_.resize(n + m, n + m);
        K_.setFromTriplets(trip.begin(), trip.end());
        if (!analyzed_) {
            Eigen::VectorXi sign(n + m);
            sign.head(n).setOnes();
            sign.tail(m).setConstant(-1);
            ldl_.analyze(K_, sign);
            analyzed_ = true;
        }
        ldl_.factorize(K_, kDynamicEps, kDynamicReg);
        factor_ok_ = true;
    }

    // H = G' W^{-2} G
    void form_normal_matrix(const NtScaling& w) {
        const int n = sf_.n;
        const Cones& cn = sf_.cones;
        H_.setZero(n, n);
        if (cn.orthant > 0) {
            const Vec d = w.orth.cwiseInverse().cwiseAbs2();
            SparseMat t = G_orth_t_ * d.asDiagonal() * G_orth_;
            for (int col = 0; col < t.outerSize(); ++col)
                for (SparseMat::InnerIterator it(t, col); it; ++it) H_(it.row(), it.col()) += it.value();
        }
        for (std::size_t b = 0; b < cn.soc_dim.size(); ++b) {
            const int d = cn.soc_dim[b];
            const double ib2 = 1.0 / (w.beta[b] * w.beta[b]);
            const Vec& v = w.v[b];
            Vec u = v;
            u.tail(d - 1) = -u.tail(d - 1);
            const Vec gu = soc_Gt_[b] * u;
            const Vec gv = soc_Gt_[b] * v;
            for (int col = 0; col < soc_GtG_[b].outerSize(); ++col)
                for (SparseMat::InnerIterator it(soc_GtG_[b], col); it; ++it)
                    H_(it.row(), it.col()) += ib2 * it.value();
            const double vv4 = 4.0 * v.squaredNorm();
            for (int a : soc_cols_[b]) {
                for (int c : soc_cols_[b]) {
                    H_(a, c) += ib2 * (vv4 * gu(a) * gu(c) - 2.0 * (gu(a) * gv(c) + gv(a) * gu(c)));
                }
            }
        }
        // Jacobi-scaled factorization with a small shift; refinement corrects for it.
        dscale_ = H_.diagonal().cwiseMax(1e-300).cwiseSqrt().cwiseInverse();
        double shift = 1e-14;
        for (int attempt = 0; attempt < 8; ++attempt) {
            Mat Hs = dscale_.asDiagonal() * H_ * dscale_.asDiagonal();
            Hs.diagonal().array() += shift;
            llt_.compute(Hs);
            if (llt_.info() == Eigen::Success) return;
            shift *= 100.0;
        }
        factor_ok_ = false;
    }

    // H x = r, refined against the unassembled operator G' W^{-2} G.
    Vec solve_normal(const NtScaling& w, const Vec& r) const {
        auto base = [&](const Vec& rhs) -> Vec {
            return dscale_.cwiseProduct(llt_.solve(dscale_.cwiseProduct(rhs)));
        };
        Vec x = base(r);
        for (int k = 0; k < 3; ++k) {
            const Vec res = r - Gt_ * ops_.apply_inv(w, ops_.apply_inv(w, sf_.G * x));
            x += base(res);
        }
        return x;
    }

    // [0 G'; G -W^2] [dx; dz] = [bx; bz]
    void solve_kkt(const NtScaling& w, const Vec& bx, const Vec& bz, Vec& dx, Vec& dz) {
        if (augmented_) solve_augmented(w, bx, bz, dx, dz);
        else solve_normal_kkt(w, bx, bz, dx, dz);
    }

    void solve_normal_kkt(const NtScaling& w, const Vec& bx, const Vec& bz, Vec& dx, Vec& dz) const {
        const Vec wbz = ops_.apply_inv(w, ops_.apply_inv(w, bz));
        dx = solve_normal(w, bx + Gt_ * wbz);
        dz = ops_.apply_inv(w, ops_.apply_inv(w, sf_.G * dx - bz));
    }

    // Regularized factor, refined against the exact operator.
    void solve_augmented(const NtScaling& w, const Vec& bx, const Vec& bz, Vec& dx, Vec& dz) {
        const int n = sf_.n;
        const int m = static_cast<int>(sf_.G.rows());
        Vec b(n + m);
        b << bx, bz;
        Vec sol = ldl_.solve(b);
        auto residual = [&](const Vec& y) -> Vec {
            const auto yx = y.head(n);
            const auto yz = y.tail(m);
            Vec r(n + m);
            r.head(n) = bx - Gt_ * yz;
            r.tail(m) = bz - (sf_.G * yx - ops_.apply(w, ops_.apply(w, Vec(yz))));
            return r;
        };
        Vec res = residual(sol);
        double rn = res.lpNorm<Eigen::Infinity>();
        const double target = 1e-15 * std::max(1.0, b.lpNorm<Eigen::Infinity>());
        for (int k = 0; k < 10 && rn > target; ++k) {
            const Vec cand = sol + ldl_.solve(res);
            const Vec cres = residual(cand);
            const double cn = cres.lpNorm<Eigen::Infinity>();
            if (!(cn < rn)) break;
            sol = cand;
            res = cres;
            rn = cn;
        }
        if (!sol.allFinite() || !(rn <= 1e-8 * std::max(1.0, b.lpNorm<Eigen::Infinity>()))) {
            // Fall back to the normal equations for this scaling.
            if (!normal_ready_) {
                form_normal_matrix(w);
                normal_ready_ = true;
            }
            if (factor_ok_) {
                Vec fx, fz;
                solve_normal_kkt(w, bx, bz, fx, fz);
                Vec alt(n + m);
                alt << fx, fz;
                const double an = residual(alt).lpNorm<Eigen::Infinity>();
                if (alt.allFinite() && (!sol.allFinite() || an < rn)) sol = alt;
            }
        }
        dx = sol.head(n);
        dz = sol.tail(m);
    }

    struct Direction {
        Vec dx, dz, ds;
        double dtau = 0.0, dkappa = 0.0;
    };

    Direction newton(const NtScaling& w, const Vec& rhs_x, const Vec& rhs_z, double rhs_t,
                     const Vec& q, double rhs_k, const Vec& x2, const Vec& z2) {
        Direction d;
        Vec x1, z1;
        const Vec wq = ops_.apply(w, q);
        solve_kkt(w, rhs_x, rhs_z - wq, x1, z1);
        const double num = rhs_t - rhs_k / tau_ - sf_.c.dot(x1) - sf_.h.dot(z1);
        const double den = sf_.c.dot(x2) + sf_.h.dot(z2) - kappa_ / tau_;
        d.dtau = num / den;
        d.dx = x1 + d.dtau * x2;
        d.dz = z1 + d.dtau * z2;
        d.ds = wq - ops_.apply(w, ops_.apply(w, d.dz));
        d.dkappa = (rhs_k - kappa_ * d.dtau) / tau_;
        return d;
    }

    double step_length(const Direction& d) const {
        double a = std::min(ops_.max_step(s_, d.ds), ops_.max_step(z_, d.dz));
        if (d.dtau < 0.0) a = std::min(a, -tau_ / d.dtau);
        if (d.dkappa < 0.0) a = std::min(a, -kappa_ / d.dkappa);
        return a;
    }

    void initialize();

    const StandardForm& sf_;
    const SolverOptions& opt_;
    ConeOps ops_;
    SparseMat Gt_, G_orth_, G_orth_t_;
    std::vector<SparseMat> soc_G_, soc_Gt_, soc_GtG_;
    std::vector<std::vector<int>> soc_cols_;
    bool augmented_ = true;
    bool analyzed_ = false;
    bool normal_ready_ = false;
    SparseMat K_;
    QuasiDefiniteLdl ldl_;
    Mat H_;
    Vec dscale_;
    Eigen::LLT<Mat> llt_;
    bool factor_ok_ = true;

    Vec x_, s_, z_;
    double tau_ = 1.0, kappa_ = 1.0;
};

void HsdeSolver::initialize() {
    const int n = sf_.n;
    const Cones& cn = sf_.cones;
    NtScaling id;
    id.orth = Vec::Ones(cn.orthant);
    for (int d : cn.soc_dim) {
        Vec v = Vec::Zero(d);
        v(0) = 1.0; // W = 2 e e' - J = I
        id.v.push_back(v);
        id.beta.push_back(1.0);
    }
    factor(id);
    Vec dz;
    if (opt_.warm_start && opt_.warm_start->size() == n) {
        x_ = *opt_.warm_start;
    } else {
        solve_kkt(id, Vec::Zero(n), sf_.h, x_, dz); // least-squares primal start
    }
    s_ = sf_.h - sf_.G * x_;
    Vec xz;
    solve_kkt(id, -sf_.c, Vec::Zero(sf_.G.rows()), xz, z_); // minimum-norm z with G'z = -c

    const Vec e = ops_.identity();
    const double as = -ops_.min_eig(s_);
    if (as >= -1e-8 * std::max(1.0, s_.norm())) s_ += (1.0 + std::max(as, 0.0)) * e;
    const double az = -ops_.min_eig(z_);
    if (az >= -1e-8 * std::max(1.0, z_.norm())) z_ += (1.0 + std::max(az, 0.0)) * e;
    tau_ = 1.0;
    kappa_ = 1.0;
}

ConicSolution HsdeSolver::run() {
    ConicSolution out;
    const int n = sf_.n;
    const int m = static_cast<int>(sf_.G.rows());
    const double resx0 = std::max(1.0, sf_.c.norm());
    const double resz0 = std::max(1.0, sf_.h.norm());
    const double degree = sf_.cones.degree();

    if (m == 0) {
        // Only free variables: bounded iff c == 0.
        out.x = Vec::Zero(n);
        out.status = sf_.c.cwiseAbs().maxCoeff() > 0.0 ? SolveStatus::Unbounded : SolveStatus::Optimal;
        out.achieved_tolerance = 0.0;
        return out;
    }

    initialize();
    const Vec e = ops_.identity();

    for (int iter = 0; iter <= opt_.max_iter; ++iter) {
        out.iterations = iter;
        const Vec rx = Gt_ * z_ + sf_.c * tau_;
        const Vec rz = s_ + sf_.G * x_ - sf_.h * tau_;
        const double cx = sf_.c.dot(x_);
        const double hz = sf_.h.dot(z_);
        const double rt = kappa_ + cx + hz;
        const double gap = s_.dot(z_);
        const double pcost = cx / tau_;
        const double dcost = -hz / tau_;
        const double pres = rz.norm() / tau_ / resz0;
        const double dres = rx.norm() / tau_ / resx0;
        const double absgap = gap / (tau_ * tau_);
        double relgap = kInf;
        if (pcost < 0.0) relgap = absgap / -pcost;
        else if (dcost > 0.0) relgap = absgap / dcost;
        const double pinf = hz < 0.0 ? (Gt_ * z_).norm() / resx0 / -hz : kInf;
        const double dinf = cx < 0.0 ? (sf_.G * x_ + s_).norm() / resz0 / -cx : kInf;

        if (opt_.verbose)
            std::fprintf(stderr, "%3d pcost %+.6e dcost %+.6e gap %.2e pres %.2e dres %.2e tau %.2e kappa %.2e |x| %.1e |z| %.1e |s| %.1e\n",
                         iter, pcost, dcost, absgap, pres, dres, tau_, kappa_, x_.cwiseAbs().maxCoeff(),
                         z_.cwiseAbs().maxCoeff(), s_.cwiseAbs().maxCoeff());
        out.x = x_ / tau_;
        out.achieved_tolerance = std::max({pres, dres, std::min(absgap, relgap)});

        if (!std::isfinite(out.achieved_tolerance) && !std::isfinite(pinf) && !std::isfinite(dinf) &&
            (!x_.allFinite() || !z_.allFinite())) {
            out.status = SolveStatus::NumericalError;
            return out;
        }
        if (pres <= opt_.tol && dres <= opt_.tol && (absgap <= opt_.tol || relgap <= opt_.tol)) {
            out.status = SolveStatus::Optimal;
            return out;
        }
        if (pinf <= opt_.tol) {
            out.status = SolveStatus::Infeasible;
            return out;
        }
        if (dinf <= opt_.tol) {
            out.status = SolveStatus::Unbounded;
            return out;
        }
        if (iter == opt_.max_iter) break;

        const NtScaling w = ops_.scaling(s_, z_);
        const Vec lambda = ops_.apply(w, z_);
        const double mu = (gap + tau_ * kappa_) / (degree + 1.0);
        factor(w);
        if (!factor_ok_) {
            if (opt_.verbose) std::fprintf(stderr, "    factorization failed\n");
            out.status = SolveStatus::NumericalError;
            return out;
        }
        Vec x2, z2;
        solve_kkt(w, -sf_.c, sf_.h, x2, z2);

        // Predictor.
        const Direction aff = newton(w, -rx, -rz, -rt, -lambda, -tau_ * kappa_, x2, z2);
        const double a_aff = std::min(1.0, step_length(aff));
        const double sigma = std::pow(std::clamp(1.0 - a_aff, 0.0, 1.0), 3);

        // Corrector.
        const Vec corr = ops_.jordan(ops_.apply_inv(w, aff.ds), ops_.apply(w, aff.dz));
        const Vec q = ops_.jordan_div(lambda, sigma * mu * e - ops_.jordan(lambda, lambda) - corr);
        const double rk = sigma * mu - tau_ * kappa_ - aff.dtau * aff.dkappa;
        const Direction d = newton(w, -(1.0 - sigma) * rx, -(1.0 - sigma) * rz, -(1.0 - sigma) * rt,
                                   q, rk, x2, z2);
        const double alpha = std::min(1.0, 0.99 * step_length(d));
        if (!(alpha > 1e-14) || !d.dx.allFinite()) {
            if (opt_.verbose) std::fprintf(stderr, "    step failed alpha %.3e\n", alpha);
            out.status = SolveStatus::NumericalError;
            return out;
        }
        if (opt_.verbose) std::fprintf(stderr, "    a_aff %.3e sigma %.3e alpha %.3e\n", a_aff, sigma, alpha);
        x_ += alpha * d.dx;
        s_ += alpha * d.ds;
        z_ += alpha * d.dz;
        tau_ += alpha * d.dtau;
        kappa_ += alpha * d.dkappa;
    }
    out.status = SolveStatus::MaxIter;
    return out;
}

} // namespace

ConicSolution solve(const ConicProblem& problem, const SolverOptions& options) {
    StandardForm sf = to_standard_form(problem);
    ConicSolution sol;
    if (sf.trivially_infeasible) {
        sol.status = SolveStatus::Infeasible;
        sol.x = sf.fixed_x;
        return sol;
    }
    equilibrate(sf, options.equilibration_passes);

    SolverOptions inner = options;
    if (options.warm_start) {
        Vec w(sf.n);
        for (int j = 0; j < problem.num_variables(); ++j) {
            const int r = sf.reduced_index[static_cast<std::size_t>(j)];
            if (r >= 0) w(r) = (*options.warm_start)(j) / sf.col_scale(r);
        }
        inner.warm_start = w;
    }

    HsdeSolver ipm(sf, inner);
    const ConicSolution red = ipm.run();

    sol.status = red.status;
    sol.iterations = red.iterations;
    sol.achieved_tolerance = red.achieved_tolerance;
    sol.x = sf.fixed_x;
    for (int j = 0; j < problem.num_variables(); ++j) {
        const int r = sf.reduced_index[static_cast<std::size_t>(j)];
        if (r >= 0) sol.x(j) = red.x(r) * sf.col_scale(r);
    }
    sol.objective = problem.objective_value(sol.x);
    return sol;
}

} // namespace cfsat::conic
