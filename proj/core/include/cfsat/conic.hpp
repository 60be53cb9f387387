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

#pragma once

#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Sparse>

#include "cfsat/common.hpp"

namespace cfsat::conic {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

using SparseTerms = std::vector<std::pair<int, double>>;
using SparseMat = Eigen::SparseMatrix<double>;

struct Variable {
    std::string name;
    double lower = -kInf;
    double upper = kInf;
};

/// coeffs . x <= rhs
struct AffineConstraint {
    SparseTerms coeffs;
    double rhs = 0.0;
    std::string tag;
};

/// ||factor x||^2 + linear . x <= rhs. The factor has one column per variable,
/// so the quadratic form factor^T factor is PSD by construction.
struct QuadraticConstraint {
    SparseMat factor;
    SparseTerms linear;
    double rhs = 0.0;
    std::string tag;
};

enum class Sense { Minimize, Maximize };

/// Linear objective over affine and convex-quadratic constraints with variable bounds.
class ConicProblem {
public:
    int add_variable(std::string name, double lower = -kInf, double upper = kInf);
    void set_bounds(int var, double lower, double upper);
    void set_objective(Sense sense, SparseTerms terms);

    void add_affine_le(SparseTerms coeffs, double rhs, std::string tag);
    void add_affine_ge(SparseTerms coeffs, double rhs, std::string tag);
    void add_quadratic_le(SparseMat factor, SparseTerms linear, double rhs, std::string tag);
    /// Dense PSD matrix Q acting on `vars`; factored here, throws if Q is indefinite.
    void add_quadratic_le(const Mat& Q, const std::vector<int>& vars, SparseTerms linear, double rhs,
                          std::string tag);

    int num_variables() const { return static_cast<int>(vars_.size()); }
    const std::vector<Variable>& variables() const { return vars_; }
    const std::vector<AffineConstraint>& affine() const { return affine_; }
    const std::vector<QuadraticConstraint>& quadratic() const { return quadratic_; }
    Sense sense() const { return sense_; }
    const SparseTerms& objective() const { return objective_; }

    double objective_value(const Vec& x) const;
    /// Largest absolute violation of any bound or constraint at x (0 if feasible).
    double max_violation(const Vec& x) const;
    /// Value of constraint `tag`'s left side minus right side (<= 0 means satisfied).
    double constraint_slack(const std::string& tag, const Vec& x) const;

    /// Plain-text dump: header, one `var` line per variable, then one line per
    /// constraint (`lin` or `quad`).
    void dump(std::ostream& os) const;

private:
    std::vector<Variable> vars_;
    std::vector<AffineConstraint> affine_;
    std::vector<QuadraticConstraint> quadratic_;
    SparseTerms objective_;
    Sense sense_ = Sense::Minimize;
};

enum class SolveStatus { Optimal, Infeasible, Unbounded, MaxIter, NumericalError };

const char* to_string(SolveStatus status);

struct ConicSolution {
    Vec x;
    double objective = 0.0;
    SolveStatus status = SolveStatus::MaxIter;
    /// max(primal residual, dual residual, relative gap) at the returned point.
    double achieved_tolerance = kInf;
    int iterations = 0;
};

struct SolverOptions {
    double tol = 1e-8;
    int max_iter = 100;
    int equilibration_passes = 8;
    std::optional<Vec> warm_start;
    /// Per-iteration residual log to stderr.
    bool verbose = false;
};

/// Homogeneous self-dual primal-dual interior-point method with Nesterov-Todd
/// scaling; quadratic constraints are lifted to second-order cones.
ConicSolution solve(const ConicProblem& problem, const SolverOptions& options = {});

} // namespace cfsat::conic
