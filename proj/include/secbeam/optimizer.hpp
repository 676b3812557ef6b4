#pragma once

#include <limits>
#include <stdexcept>
#include <vector>

#include "secbeam/feasibility.hpp"
#include "secbeam/rates.hpp"

namespace secbeam {

struct SolveOptions {
  double zeta = 1e-3;    // bisection gap, enforced on the ratio and on its log2
  int m_steps = 200;     // grid resolution of the noise-assisted outer search
  double feas_tol = 1e-7;
  int max_iter = 20000;
  double v_gap = 1e-4;   // inner bisection gap on the eavesdropper ratio factor

  void validate() const;
};

enum class SolveMode { NoAn, Rank1, An };

struct ProbeRecord {
  double primary;    // ratio threshold t, or u for the noise-assisted search
  double secondary;  // v for the noise-assisted search, NaN otherwise
  FeasStatus status;
};

/// The requested common-message rate exceeds what any covariance can deliver
/// to every terminal under the power budget.
class InfeasibleCommonRate : public std::runtime_error {
 public:
  InfeasibleCommonRate(double r0, std::vector<ProbeRecord> trace);
  double r0() const { return r0_; }
  const std::vector<ProbeRecord>& trace() const { return trace_; }

 private:
  double r0_;
  std::vector<ProbeRecord> trace_;
};

struct SolveResult {
  SolveMode mode = SolveMode::NoAn;
  double r0 = 0.0;
  double secrecy_rate = 0.0;  // bits per channel use, floored at 0
  double t_max = 1.0;         // certified ratio; u_opt * v_opt when mode == An
  double u_opt = std::numeric_limits<double>::quiet_NaN();
  double v_opt = std::numeric_limits<double>::quiet_NaN();
  CovarianceTriple covariances;
  std::vector<ProbeRecord> trace;
  bool rank1_polished = false;  // whether the returned witness was reduced to rank 1
};

/// Constraint rows of the fixed-ratio secrecy problem without artificial
/// noise: K*J ratio rows at threshold t plus the common-rate rows, over
/// variables (Q0, Q1).
FeasibilityProblem build_no_an_problem(const SystemInstance& inst, double r0, double t);

/// Constraint rows of the noise-assisted problem at fixed (u, v) over
/// variables (Q0, Q1, Q2). v may be 0 (the v rows are then vacuous).
FeasibilityProblem build_an_problem(const SystemInstance& inst, double r0, double u,
                                    double v);

/// Maximum secrecy rate without artificial noise: bisection on the worst-case
/// user/eavesdropper ratio with a semidefinite feasibility probe per step.
/// Throws InfeasibleCommonRate when r0 itself is unachievable.
SolveResult max_secrecy_no_an(const SystemInstance& inst, double r0,
                              const SolveOptions& opts = {});

/// Largest common-message rate deliverable to every terminal with the whole
/// budget spent on the common message.
double r0_max(const SystemInstance& inst, const SolveOptions& opts = {});

struct Rank1Directions {
  Eigen::VectorXcd phi0, phi1;  // unit-norm columns
  bool phi0_degenerate = false;  // input was (near-)zero; e1 returned
  bool phi1_degenerate = false;
};

/// Top eigendirections of q0 and q1 under a deterministic phase convention
/// (first significant component made real-positive).
Rank1Directions rank1_directions(const CovarianceTriple& c);

/// Secrecy-rate maximization restricted to fixed unit-norm transmit
/// directions; the feasibility probes reduce to exact two-variable power
/// checks.
SolveResult max_secrecy_rank1(const SystemInstance& inst, double r0,
                              const Eigen::VectorXcd& phi0, const Eigen::VectorXcd& phi1,
                              const SolveOptions& opts = {});

/// Maximum secrecy rate with artificial noise: sweeps the user-side ratio
/// factor u over a grid and maximizes the eavesdropper-side factor v by
/// bisection at each grid point, keeping the best product.
SolveResult max_secrecy_with_an(const SystemInstance& inst, double r0,
                                const SolveOptions& opts = {});

}  // namespace secbeam
