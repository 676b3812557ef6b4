#include "secbeam/optimizer.hpp"

#include <cmath>
#include <sstream>

#include "secbeam/errors.hpp"

namespace secbeam {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double common_rate_factor(double r0) { return std::exp2(r0) - 1.0; }

double min_user_gain(const SystemInstance& inst) {
  double g = std::numeric_limits<double>::infinity();
  for (const auto& h : inst.users()) g = std::min(g, h.squaredNorm());
  return g;
}

double max_user_gain(const SystemInstance& inst) {
  double g = 0.0;
  for (const auto& h : inst.users()) g = std::max(g, h.squaredNorm());
  return g;
}

void push_row(FeasibilityProblem& p, std::vector<ConstraintTerm> terms, double constant) {
  AffineHermitianConstraint con;
  for (auto& t : terms)
    if (t.weight != 0.0) con.terms.push_back(std::move(t));
  con.constant = constant;
  if (con.terms.empty() && con.constant == 0.0) return;  // identically-zero row
  p.constraints.push_back(std::move(con));
}

// Common-rate rows alone, with the secret and noise covariances pinned to
// zero: decides whether r0 is deliverable at all.
FeasibilityProblem build_common_only_problem(const SystemInstance& inst, double r0) {
  FeasibilityProblem p;
  p.arity = 1;
  p.dim = inst.n();
  p.trace_budget = inst.power_budget();
  const double rho = common_rate_factor(r0);
  const double n0 = inst.noise_power();
  for (const auto& h : inst.users()) push_row(p, {{0, h, -1.0}}, rho * n0);
  for (const auto& z : inst.eves()) push_row(p, {{0, z, -1.0}}, rho * n0);
  return p;
}

// Scalar power rows for transmission restricted to fixed directions phi0, phi1
// at ratio threshold t.
FeasibilityProblem build_rank1_problem(const SystemInstance& inst, double r0,
                                       const Eigen::VectorXcd& phi0,
                                       const Eigen::VectorXcd& phi1, double t) {
  FeasibilityProblem p;
  p.arity = 2;
  p.dim = 1;
  p.trace_budget = inst.power_budget();
  const double rho = common_rate_factor(r0);
  const double n0 = inst.noise_power();
  ChannelVector one(1);
  one << Complex(1.0, 0.0);

  auto gain = [](const ChannelVector& c, const Eigen::VectorXcd& phi) {
    return std::norm((c * phi).value());
  };

  for (const auto& h : inst.users()) {
    const double gh1 = gain(h, phi1);
    for (const auto& z : inst.eves())
      push_row(p, {{1, one, t * gain(z, phi1) - gh1}}, (t - 1.0) * n0);
  }
  for (const auto& h : inst.users())
    push_row(p, {{1, one, rho * gain(h, phi1)}, {0, one, -gain(h, phi0)}}, rho * n0);
  for (const auto& z : inst.eves())
    push_row(p, {{1, one, rho * gain(z, phi1)}, {0, one, -gain(z, phi0)}}, rho * n0);
  return p;
}

// Scalar power rows for the noise-assisted problem at fixed (u, v) with the
// noise covariance held at q2 and transmission restricted to phi0, phi1.
FeasibilityProblem build_an_rank1_problem(const SystemInstance& inst, double r0,
                                          const Eigen::VectorXcd& phi0,
                                          const Eigen::VectorXcd& phi1,
                                          const HermitianMatrix& q2, double u, double v,
                                          double budget_remaining) {
  FeasibilityProblem p;
  p.arity = 2;
  p.dim = 1;
  p.trace_budget = budget_remaining;
  const double rho = common_rate_factor(r0);
  const double n0 = inst.noise_power();
  ChannelVector one(1);
  one << Complex(1.0, 0.0);

  auto gain = [](const ChannelVector& c, const Eigen::VectorXcd& phi) {
    return std::norm((c * phi).value());
  };

  for (const auto& h : inst.users()) {
    const double base = n0 + quadratic_form(h, q2);
    push_row(p, {{1, one, -gain(h, phi1)}}, (u - 1.0) * base);
    push_row(p, {{1, one, rho * gain(h, phi1)}, {0, one, -gain(h, phi0)}}, rho * base);
  }
  for (const auto& z : inst.eves()) {
    const double base = n0 + quadratic_form(z, q2);
    push_row(p, {{1, one, v * gain(z, phi1)}}, (v - 1.0) * base);
    push_row(p, {{1, one, rho * gain(z, phi1)}, {0, one, -gain(z, phi0)}}, rho * base);
  }
  return p;
}

// A probe trace is sound when no point certified feasible sits above a point
// classified infeasible; the probed sets only shrink as the threshold grows.
void check_trace_monotone(const std::vector<ProbeRecord>& trace, bool grouped_by_primary) {
  for (const auto& f : trace) {
    if (f.status != FeasStatus::Feasible) continue;
    for (const auto& i : trace) {
      if (i.status != FeasStatus::Infeasible) continue;
      if (grouped_by_primary) {
        if (f.primary == i.primary && f.secondary > i.secondary)
          throw NumericalFailure("bisection trace is not monotone in v");
      } else {
        if (f.primary > i.primary)
          throw NumericalFailure("bisection trace is not monotone in t");
      }
    }
  }
}

FeasibilityOptions feas_options(const SolveOptions& opts) {
  FeasibilityOptions fo;
  fo.tol = opts.feas_tol;
  fo.max_iter = opts.max_iter;
  return fo;
}

Eigen::VectorXcd principal_direction(const HermitianMatrix& q, bool& degenerate) {
  const Eigen::Index n = q.dim();
  Eigen::VectorXcd fallback = Eigen::VectorXcd::Zero(n);
  fallback(0) = Complex(1.0, 0.0);

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(q.mat());
  if (es.info() != Eigen::Success)
    throw NumericalFailure("rank1_directions: eigensolver did not converge");
  const Eigen::VectorXd& lam = es.eigenvalues();  // ascending
  const double top = lam(n - 1);
  if (top <= 1e-12 * std::max(1.0, std::abs(q.trace()))) {
    degenerate = true;
    return fallback;
  }
  // Repeated top eigenvalue: earliest column wins.
  Eigen::Index pick = n - 1;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (lam(i) >= top - 1e-12 * std::max(1.0, top)) {
      pick = i;
      break;
    }
  }
  Eigen::VectorXcd v = es.eigenvectors().col(pick);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(v(i)) > 1e-9) {
      v *= std::conj(v(i)) / std::abs(v(i));
      break;
    }
  }
  degenerate = false;
  return v;
}

ComplexMatrix direction_covariance(double power, const Eigen::VectorXcd& phi) {
  return power * (phi * phi.adjoint());
}

}  // namespace

void SolveOptions::validate() const {
  if (!(zeta > 0.0) || !std::isfinite(zeta))
    throw std::invalid_argument("SolveOptions: zeta must be positive");
  if (m_steps < 1) throw std::invalid_argument("SolveOptions: m_steps must be at least 1");
  if (!(feas_tol > 0.0)) throw std::invalid_argument("SolveOptions: feas_tol must be positive");
  if (max_iter < 1) throw std::invalid_argument("SolveOptions: max_iter must be at least 1");
  if (!(v_gap > 0.0)) throw std::invalid_argument("SolveOptions: v_gap must be positive");
}

InfeasibleCommonRate::InfeasibleCommonRate(double r0, std::vector<ProbeRecord> trace)
    : std::runtime_error([r0] {
        std::ostringstream os;
        os << "common-message rate r0=" << r0
           << " is not achievable under the power budget; choose r0 below the instance's "
              "maximum common rate";
        return os.str();
      }()),
      r0_(r0),
      trace_(std::move(trace)) {}

FeasibilityProblem build_no_an_problem(const SystemInstance& inst, double r0, double t) {
  if (t < 1.0) throw std::invalid_argument("build_no_an_problem: t must be at least 1");
  if (r0 < 0.0) throw std::invalid_argument("build_no_an_problem: r0 must be nonnegative");
  FeasibilityProblem p;
  p.arity = 2;
  p.dim = inst.n();
  p.trace_budget = inst.power_budget();
  const double rho = common_rate_factor(r0);
  const double n0 = inst.noise_power();

  for (const auto& h : inst.users())
    for (const auto& z : inst.eves())
      push_row(p, {{1, z, t}, {1, h, -1.0}}, (t - 1.0) * n0);
  for (const auto& h : inst.users())
    push_row(p, {{1, h, rho}, {0, h, -1.0}}, rho * n0);
  for (const auto& z : inst.eves())
    push_row(p, {{1, z, rho}, {0, z, -1.0}}, rho * n0);
  return p;
}

FeasibilityProblem build_an_problem(const SystemInstance& inst, double r0, double u, double v) {
  if (u < 1.0) throw std::invalid_argument("build_an_problem: u must be at least 1");
  if (v < 0.0 || v > 1.0) throw std::invalid_argument("build_an_problem: v must be in [0, 1]");
  if (r0 < 0.0) throw std::invalid_argument("build_an_problem: r0 must be nonnegative");
  FeasibilityProblem p;
  p.arity = 3;
  p.dim = inst.n();
  p.trace_budget = inst.power_budget();
  const double rho = common_rate_factor(r0);
  const double n0 = inst.noise_power();

  for (const auto& h : inst.users())
    push_row(p, {{2, h, rho}, {1, h, rho}, {0, h, -1.0}}, rho * n0);
  for (const auto& z : inst.eves())
    push_row(p, {{2, z, rho}, {1, z, rho}, {0, z, -1.0}}, rho * n0);
  for (const auto& h : inst.users())
    push_row(p, {{2, h, u - 1.0}, {1, h, -1.0}}, (u - 1.0) * n0);
  for (const auto& z : inst.eves())
    push_row(p, {{2, z, v - 1.0}, {1, z, v}}, (v - 1.0) * n0);
  return p;
}

SolveResult max_secrecy_no_an(const SystemInstance& inst, double r0, const SolveOptions& opts) {
  opts.validate();
  if (r0 < 0.0 || !std::isfinite(r0))
    throw std::invalid_argument("max_secrecy_no_an: r0 must be nonnegative");
  const FeasibilityOptions fo = feas_options(opts);
  const Eigen::Index n = inst.n();
  std::vector<ProbeRecord> trace;

  // Fail fast when the common rate alone is unachievable.
  std::vector<HermitianMatrix> witness;
  if (r0 > 0.0) {
    const auto probe = solve_feasibility(build_common_only_problem(inst, r0), fo);
    trace.push_back({1.0, kNaN, probe.status});
    if (probe.status != FeasStatus::Feasible) throw InfeasibleCommonRate(r0, trace);
    witness = {probe.witness[0], HermitianMatrix::Zero(n)};
  } else {
    trace.push_back({1.0, kNaN, FeasStatus::Feasible});
    witness = {HermitianMatrix::Zero(n), HermitianMatrix::Zero(n)};
  }

  double t_lo = 1.0;
  double t_hi = 1.0 + inst.power_budget() * min_user_gain(inst) / inst.noise_power();
  int guard = 0;
  while (t_hi - t_lo > opts.zeta ||
         std::log2(t_hi) - std::log2(t_lo) > opts.zeta) {
    if (++guard > 200) throw NumericalFailure("max_secrecy_no_an: bisection did not terminate");
    const double t = 0.5 * (t_lo + t_hi);
    const auto out = solve_feasibility(build_no_an_problem(inst, r0, t), fo, &witness);
    trace.push_back({t, kNaN, out.status});
    if (out.status == FeasStatus::Feasible) {
      t_lo = t;
      witness = out.witness;
    } else {
      t_hi = t;
    }
  }
  check_trace_monotone(trace, false);

  SolveResult res;
  res.mode = SolveMode::NoAn;
  res.r0 = r0;
  res.t_max = t_lo;
  res.secrecy_rate = std::max(0.0, std::log2(t_lo));
  res.covariances = {witness[0], witness[1], HermitianMatrix::Zero(n)};
  res.trace = std::move(trace);

  // Prefer a rank-1 witness when one certifies the same ratio.
  const auto dirs = rank1_directions(res.covariances);
  const auto polish =
      solve_feasibility_scalar(build_rank1_problem(inst, r0, dirs.phi0, dirs.phi1, t_lo));
  if (polish.status == FeasStatus::Feasible) {
    const double p0 = polish.witness[0].trace();
    const double p1 = polish.witness[1].trace();
    res.covariances = {HermitianMatrix(direction_covariance(p0, dirs.phi0)),
                       HermitianMatrix(direction_covariance(p1, dirs.phi1)),
                       HermitianMatrix::Zero(n)};
    res.rank1_polished = true;
  }
  return res;
}

double r0_max(const SystemInstance& inst, const SolveOptions& opts) {
  opts.validate();
  const FeasibilityOptions fo = feas_options(opts);
  double lo = 0.0;
  double hi = std::log2(1.0 + inst.power_budget() * max_user_gain(inst) / inst.noise_power());
  if (hi <= 0.0) return 0.0;

  std::vector<HermitianMatrix> witness;
  int guard = 0;
  while (hi - lo > opts.zeta) {
    if (++guard > 200) throw NumericalFailure("r0_max: bisection did not terminate");
    const double c = 0.5 * (lo + hi);
    const auto out = solve_feasibility(build_common_only_problem(inst, c), fo,
                                       witness.empty() ? nullptr : &witness);
    if (out.status == FeasStatus::Feasible) {
      lo = c;
      witness = out.witness;
    } else {
      hi = c;
    }
  }
  return lo;
}

Rank1Directions rank1_directions(const CovarianceTriple& c) {
  Rank1Directions d;
  d.phi0 = principal_direction(c.q0, d.phi0_degenerate);
  d.phi1 = principal_direction(c.q1, d.phi1_degenerate);
  return d;
}

SolveResult max_secrecy_rank1(const SystemInstance& inst, double r0,
                              const Eigen::VectorXcd& phi0, const Eigen::VectorXcd& phi1,
                              const SolveOptions& opts) {
  opts.validate();
  if (r0 < 0.0 || !std::isfinite(r0))
    throw std::invalid_argument("max_secrecy_rank1: r0 must be nonnegative");
  if (phi0.size() != inst.n() || phi1.size() != inst.n())
    throw std::invalid_argument("max_secrecy_rank1: direction dimension mismatch");
  if (std::abs(phi0.norm() - 1.0) > 1e-6 || std::abs(phi1.norm() - 1.0) > 1e-6)
    throw std::invalid_argument("max_secrecy_rank1: directions must be unit norm");

  std::vector<ProbeRecord> trace;
  const auto at_one = solve_feasibility_scalar(build_rank1_problem(inst, r0, phi0, phi1, 1.0));
  trace.push_back({1.0, kNaN, at_one.status});
  if (at_one.status != FeasStatus::Feasible) throw InfeasibleCommonRate(r0, trace);

  double p0 = at_one.witness[0].trace();
  double p1 = at_one.witness[1].trace();
  double t_lo = 1.0;
  double t_hi = 1.0 + inst.power_budget() * min_user_gain(inst) / inst.noise_power();
  int guard = 0;
  while (t_hi - t_lo > opts.zeta ||
         std::log2(t_hi) - std::log2(t_lo) > opts.zeta) {
    if (++guard > 200) throw NumericalFailure("max_secrecy_rank1: bisection did not terminate");
    const double t = 0.5 * (t_lo + t_hi);
    const auto out = solve_feasibility_scalar(build_rank1_problem(inst, r0, phi0, phi1, t));
    trace.push_back({t, kNaN, out.status});
    if (out.status == FeasStatus::Feasible) {
      t_lo = t;
      p0 = out.witness[0].trace();
      p1 = out.witness[1].trace();
    } else {
      t_hi = t;
    }
  }
  check_trace_monotone(trace, false);

  SolveResult res;
  res.mode = SolveMode::Rank1;
  res.r0 = r0;
  res.t_max = t_lo;
  res.secrecy_rate = std::max(0.0, std::log2(t_lo));
  res.covariances = {HermitianMatrix(direction_covariance(p0, phi0)),
                     HermitianMatrix(direction_covariance(p1, phi1)),
                     HermitianMatrix::Zero(inst.n())};
  res.trace = std::move(trace);
  res.rank1_polished = true;
  return res;
}

SolveResult max_secrecy_with_an(const SystemInstance& inst, double r0,
                                const SolveOptions& opts) {
  opts.validate();
  if (r0 < 0.0 || !std::isfinite(r0))
    throw std::invalid_argument("max_secrecy_with_an: r0 must be nonnegative");
  const FeasibilityOptions fo = feas_options(opts);
  const Eigen::Index n = inst.n();
  std::vector<ProbeRecord> trace;

  std::vector<HermitianMatrix> warm;
  if (r0 > 0.0) {
    const auto probe = solve_feasibility(build_common_only_problem(inst, r0), fo);
    trace.push_back({1.0, 0.0, probe.status});
    if (probe.status != FeasStatus::Feasible) throw InfeasibleCommonRate(r0, trace);
    warm = {probe.witness[0], HermitianMatrix::Zero(n), HermitianMatrix::Zero(n)};
  } else {
    trace.push_back({1.0, 0.0, FeasStatus::Feasible});
    warm = {HermitianMatrix::Zero(n), HermitianMatrix::Zero(n), HermitianMatrix::Zero(n)};
  }

  const double u_limit = 1.0 + inst.power_budget() * min_user_gain(inst) / inst.noise_power();
  const double du = (u_limit - 1.0) / opts.m_steps;
  double v_cap = 1.0;  // the largest feasible v only shrinks as u grows
  double best_product = 0.0;
  double best_u = kNaN, best_v = kNaN;
  std::vector<HermitianMatrix> best_witness;

  for (int i = 1; i <= opts.m_steps; ++i) {
    const double u = 1.0 + i * du;
    const auto base = solve_feasibility(build_an_problem(inst, r0, u, 0.0), fo, &warm);
    trace.push_back({u, 0.0, base.status});
    if (base.status != FeasStatus::Feasible) break;  // later grid points only tighten
    std::vector<HermitianMatrix> warm_u = base.witness;

    double v_lo = 0.0;
    double v_hi = v_cap;
    while (v_hi - v_lo > opts.v_gap) {
      const double v = 0.5 * (v_lo + v_hi);
      const auto out = solve_feasibility(build_an_problem(inst, r0, u, v), fo, &warm_u);
      trace.push_back({u, v, out.status});
      if (out.status == FeasStatus::Feasible) {
        v_lo = v;
        warm_u = out.witness;
      } else {
        v_hi = v;
      }
    }
    v_cap = std::min(1.0, v_lo + opts.v_gap);

    if (v_lo > 0.0 && u * v_lo > best_product) {
      best_product = u * v_lo;
      best_u = u;
      best_v = v_lo;
      best_witness = warm_u;
    }
    warm = std::move(warm_u);
  }
  check_trace_monotone(trace, true);

  if (best_product <= 0.0) throw InfeasibleCommonRate(r0, trace);

  SolveResult res;
  res.mode = SolveMode::An;
  res.r0 = r0;
  res.u_opt = best_u;
  res.v_opt = best_v;
  res.t_max = best_product;
  res.secrecy_rate = std::max(0.0, std::log2(best_product));
  res.covariances = {best_witness[0], best_witness[1], best_witness[2]};
  res.trace = std::move(trace);

  const double budget_remaining = inst.power_budget() - res.covariances.q2.trace();
  if (budget_remaining > 1e-12) {
    const auto dirs = rank1_directions(res.covariances);
    const auto polish = solve_feasibility_scalar(build_an_rank1_problem(
        inst, r0, dirs.phi0, dirs.phi1, res.covariances.q2, best_u, best_v, budget_remaining));
    if (polish.status == FeasStatus::Feasible) {
      const double p0 = polish.witness[0].trace();
      const double p1 = polish.witness[1].trace();
      res.covariances.q0 = HermitianMatrix(direction_covariance(p0, dirs.phi0));
      res.covariances.q1 = HermitianMatrix(direction_covariance(p1, dirs.phi1));
      res.rank1_polished = true;
    }
  }
  return res;
}

}  // namespace secbeam
