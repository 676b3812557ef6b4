#pragma once

#include <span>
#include <vector>

#include "secbeam/hermitian.hpp"

namespace secbeam {

/// One weighted quadratic-form term w * (c Q_var c*).
struct ConstraintTerm {
  int var = 0;
  ChannelVector coeff;
  double weight = 1.0;
};

/// Affine inequality over a tuple of Hermitian variables:
///   sum_terms w * (c Q_var c*) + constant <= 0.
struct AffineHermitianConstraint {
  std::vector<ConstraintTerm> terms;
  double constant = 0.0;
};

/// Constraint value at the given variables; satisfied iff <= tolerance.
double residual(const AffineHermitianConstraint& con,
                std::span<const HermitianMatrix> vars);

/// Feasibility instance over `arity` Hermitian dim x dim PSD variables with a
/// shared trace budget. Scalar power variables are the dim == 1 case: the PSD
/// cone is the half-line P >= 0 and the budget is sum P_i <= trace_budget.
struct FeasibilityProblem {
  int arity = 1;
  Eigen::Index dim = 1;
  std::vector<AffineHermitianConstraint> constraints;
  double trace_budget = 1.0;
};

enum class FeasStatus { Feasible, Infeasible, Inconclusive };

struct FeasibilityOutcome {
  FeasStatus status = FeasStatus::Inconclusive;
  std::vector<HermitianMatrix> witness;  // populated iff status == Feasible
  double margin = 0.0;                   // best achieved slack, min over constraints of -residual
  int iterations = 0;
};

struct FeasibilityOptions {
  double tol = 1e-7;
  int max_iter = 20000;  // cap on total Newton iterations
  // A witness must clear this slack on every row, so bisection never
  // certifies boundary-only points.
  double strict_margin = 1e-9;
};

/// Margin-maximizing feasibility oracle: log-barrier path following with
/// damped Newton steps on the phase-1 problem (maximize the common slack of
/// all rows over the PSD cones and the trace budget). Feasible outcomes carry
/// a strictly interior witness that re-checks exactly; Infeasible outcomes
/// are certified through the barrier suboptimality bound. Deterministic for
/// fixed inputs.
FeasibilityOutcome solve_feasibility(const FeasibilityProblem& p,
                                     const FeasibilityOptions& opts,
                                     const std::vector<HermitianMatrix>* warm_start = nullptr);
FeasibilityOutcome solve_feasibility(const FeasibilityProblem& p, double tol = 1e-7,
                                     int max_iter = 20000);

/// Exact feasibility for one or two scalar power variables by 2-D vertex
/// enumeration of the constraint polygon. More than two variables is
/// unsupported.
FeasibilityOutcome solve_feasibility_scalar(const FeasibilityProblem& p);

}  // namespace secbeam
