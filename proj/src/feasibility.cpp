#include "secbeam/feasibility.hpp"

#include <array>
#include <cmath>
#include <limits>

#include "secbeam/errors.hpp"

namespace secbeam {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate_problem(const FeasibilityProblem& p) {
  if (p.arity < 1 || p.arity > 3)
    throw std::invalid_argument("FeasibilityProblem: arity must be 1, 2 or 3");
  if (p.dim < 1) throw std::invalid_argument("FeasibilityProblem: dim must be at least 1");
  if (!(p.trace_budget > 0.0) || !std::isfinite(p.trace_budget))
    throw std::invalid_argument("FeasibilityProblem: trace budget must be positive");
  for (const auto& con : p.constraints) {
    if (con.terms.empty() && con.constant == 0.0)
      throw std::invalid_argument("FeasibilityProblem: constraint with no terms and zero constant");
    if (!std::isfinite(con.constant))
      throw std::invalid_argument("FeasibilityProblem: non-finite constraint constant");
    for (const auto& t : con.terms) {
      if (t.var < 0 || t.var >= p.arity)
        throw std::invalid_argument("FeasibilityProblem: term variable index out of range");
      if (t.coeff.size() != p.dim)
        throw std::invalid_argument("FeasibilityProblem: term coefficient dimension mismatch");
      if (!t.coeff.allFinite() || !std::isfinite(t.weight))
        throw std::invalid_argument("FeasibilityProblem: non-finite term");
    }
  }
}

// Real coordinates for Hermitian N x N matrices: the diagonal, then for each
// i < j the symmetric and antisymmetric off-diagonal parts.
struct HermitianBasis {
  Eigen::Index n;
  std::vector<ComplexMatrix> elems;

  explicit HermitianBasis(Eigen::Index n_) : n(n_) {
    for (Eigen::Index i = 0; i < n; ++i) {
      ComplexMatrix e = ComplexMatrix::Zero(n, n);
      e(i, i) = 1.0;
      elems.push_back(e);
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i + 1; j < n; ++j) {
        ComplexMatrix s = ComplexMatrix::Zero(n, n);
        s(i, j) = 1.0;
        s(j, i) = 1.0;
        elems.push_back(s);
        ComplexMatrix a = ComplexMatrix::Zero(n, n);
        a(i, j) = Complex(0.0, 1.0);
        a(j, i) = Complex(0.0, -1.0);
        elems.push_back(a);
      }
    }
  }

  Eigen::Index size() const { return static_cast<Eigen::Index>(elems.size()); }

  ComplexMatrix assemble(const Eigen::VectorXd& x, Eigen::Index offset) const {
    ComplexMatrix q = ComplexMatrix::Zero(n, n);
    for (Eigen::Index a = 0; a < size(); ++a) q += x(offset + a) * elems[a];
    return q;
  }
};

struct LinearRow {
  Eigen::VectorXd coeff;  // over all variable coordinates
  double constant = 0.0;
};

// Coefficient vectors of the constraint rows and the trace functional in the
// Hermitian-basis coordinates.
struct CompiledProblem {
  Eigen::Index n_per_var;
  Eigen::Index n_total;
  std::vector<LinearRow> rows;
  Eigen::VectorXd trace_coeff;
};

CompiledProblem compile(const FeasibilityProblem& p, const HermitianBasis& basis) {
  CompiledProblem c;
  c.n_per_var = basis.size();
  c.n_total = c.n_per_var * p.arity;
  c.trace_coeff = Eigen::VectorXd::Zero(c.n_total);
  for (int v = 0; v < p.arity; ++v)
    for (Eigen::Index i = 0; i < p.dim; ++i) c.trace_coeff(v * c.n_per_var + i) = 1.0;

  for (const auto& con : p.constraints) {
    std::array<ComplexMatrix, 3> grad;
    std::array<bool, 3> used{};
    for (const auto& t : con.terms) {
      if (t.weight == 0.0) continue;
      if (!used[t.var]) {
        grad[t.var] = ComplexMatrix::Zero(p.dim, p.dim);
        used[t.var] = true;
      }
      grad[t.var] += t.weight * (t.coeff.adjoint() * t.coeff);
    }
    LinearRow row;
    row.constant = con.constant;
    row.coeff = Eigen::VectorXd::Zero(c.n_total);
    for (int v = 0; v < p.arity; ++v) {
      if (!used[v]) continue;
      for (Eigen::Index a = 0; a < c.n_per_var; ++a)
        row.coeff(v * c.n_per_var + a) = hdot(grad[v], basis.elems[a]);
    }
    c.rows.push_back(std::move(row));
  }
  return c;
}

}  // namespace

double residual(const AffineHermitianConstraint& con, std::span<const HermitianMatrix> vars) {
  double v = con.constant;
  for (const auto& t : con.terms) {
    if (t.var < 0 || t.var >= static_cast<int>(vars.size()))
      throw std::invalid_argument("residual: variable index out of range");
    v += t.weight * quadratic_form(t.coeff, vars[t.var]);
  }
  return v;
}

FeasibilityOutcome solve_feasibility(const FeasibilityProblem& p, double tol, int max_iter) {
  FeasibilityOptions opts;
  opts.tol = tol;
  opts.max_iter = max_iter;
  return solve_feasibility(p, opts, nullptr);
}

// Phase-1 margin maximization: maximize s subject to row(X) + s <= 0, each
// variable PSD and the shared trace budget, via log-barrier path following
// with damped Newton steps. The barrier iterate is strictly interior, so any
// accepted witness re-verifies exactly; infeasibility is certified through
// the suboptimality bound s* <= s_t + m/t of the barrier path.
FeasibilityOutcome solve_feasibility(const FeasibilityProblem& p, const FeasibilityOptions& opts,
                                     const std::vector<HermitianMatrix>* warm_start) {
  validate_problem(p);
  const HermitianBasis basis(p.dim);
  const CompiledProblem c = compile(p, basis);
  const Eigen::Index nv = c.n_total;     // matrix coordinates
  const Eigen::Index dim = nv + 1;       // plus the margin variable
  const std::size_t m_rows = c.rows.size();
  const double barrier_count =
      static_cast<double>(m_rows) + static_cast<double>(p.arity) * p.dim + 1.0;

  // Strictly interior start: scaled identities, margin below every row slack.
  Eigen::VectorXd y = Eigen::VectorXd::Zero(dim);
  const double ident = p.trace_budget / (2.0 * static_cast<double>(p.arity) * p.dim);
  for (int v = 0; v < p.arity; ++v)
    for (Eigen::Index i = 0; i < p.dim; ++i) y(v * c.n_per_var + i) = ident;
  if (warm_start && static_cast<int>(warm_start->size()) == p.arity &&
      (*warm_start)[0].dim() == p.dim) {
    // Blend toward the identity so the start stays strictly positive definite.
    for (int v = 0; v < p.arity; ++v) {
      const ComplexMatrix q = 0.9 * (*warm_start)[v].mat() +
                              (0.1 * ident) * ComplexMatrix::Identity(p.dim, p.dim);
      for (Eigen::Index a = 0; a < c.n_per_var; ++a)
        y(v * c.n_per_var + a) = hdot(q, basis.elems[a]) / hdot(basis.elems[a], basis.elems[a]);
    }
    const double tr = c.trace_coeff.dot(y.head(nv));
    if (tr >= p.trace_budget)
      y.head(nv) *= 0.9 * p.trace_budget / tr;
  }
  double worst = -kInf;
  for (const auto& r : c.rows) worst = std::max(worst, r.coeff.dot(y.head(nv)) + r.constant);
  y(nv) = std::isfinite(worst) ? -worst - 1.0 : 0.0;

  auto assemble_all = [&](const Eigen::VectorXd& yy) {
    std::vector<ComplexMatrix> mats;
    mats.reserve(p.arity);
    for (int v = 0; v < p.arity; ++v)
      mats.push_back(basis.assemble(yy, v * c.n_per_var));
    return mats;
  };

  // Strict interior test; also yields the matrices for barrier derivatives.
  auto interior = [&](const Eigen::VectorXd& yy, std::vector<ComplexMatrix>* mats_out) {
    for (std::size_t r = 0; r < m_rows; ++r)
      if (c.rows[r].coeff.dot(yy.head(nv)) + c.rows[r].constant + yy(nv) >= 0.0) return false;
    if (c.trace_coeff.dot(yy.head(nv)) >= p.trace_budget) return false;
    auto mats = assemble_all(yy);
    for (const auto& q : mats) {
      Eigen::LLT<ComplexMatrix> llt(q);
      if (llt.info() != Eigen::Success) return false;
    }
    if (mats_out) *mats_out = std::move(mats);
    return true;
  };

  auto barrier_value = [&](const Eigen::VectorXd& yy, double t,
                           const std::vector<ComplexMatrix>& mats) {
    double val = t * yy(nv);
    for (std::size_t r = 0; r < m_rows; ++r) {
      const double f = c.rows[r].coeff.dot(yy.head(nv)) + c.rows[r].constant + yy(nv);
      val += std::log(-f);
    }
    val += std::log(p.trace_budget - c.trace_coeff.dot(yy.head(nv)));
    for (const auto& q : mats) {
      Eigen::PartialPivLU<ComplexMatrix> lu(q);
      double ld = 0.0;
      for (Eigen::Index i = 0; i < p.dim; ++i) ld += std::log(std::abs(lu.matrixLU()(i, i)));
      val += ld;
    }
    return val;
  };

  if (m_rows == 0) {
    std::vector<HermitianMatrix> witness(p.arity, HermitianMatrix::Zero(p.dim));
    return {FeasStatus::Feasible, std::move(witness), kInf, 0};
  }

  std::vector<ComplexMatrix> mats;
  if (!interior(y, &mats))
    throw NumericalFailure("solve_feasibility: failed to construct an interior start");

  int newton_total = 0;
  double t = 1.0;
  const double mu = 10.0;
  const int max_outer = 24;

  Eigen::VectorXd grad(dim);
  Eigen::MatrixXd hess(dim, dim);

  for (int outer = 0; outer < max_outer; ++outer) {
    bool centered = false;
    for (int step = 0; step < 80; ++step) {
      if (newton_total >= opts.max_iter) break;
      ++newton_total;

      grad.setZero();
      hess.setZero();
      grad(nv) += t;

      for (std::size_t r = 0; r < m_rows; ++r) {
        const double f = c.rows[r].coeff.dot(y.head(nv)) + c.rows[r].constant + y(nv);
        Eigen::VectorXd a(dim);
        a.head(nv) = c.rows[r].coeff;
        a(nv) = 1.0;
        grad += a / f;
        hess -= (a * a.transpose()) / (f * f);
      }
      {
        const double f = c.trace_coeff.dot(y.head(nv)) - p.trace_budget;
        Eigen::VectorXd a = Eigen::VectorXd::Zero(dim);
        a.head(nv) = c.trace_coeff;
        grad += a / f;
        hess -= (a * a.transpose()) / (f * f);
      }
      for (int v = 0; v < p.arity; ++v) {
        const ComplexMatrix inv = mats[v].inverse();
        const Eigen::Index off = v * c.n_per_var;
        std::vector<ComplexMatrix> inv_e(c.n_per_var);
        for (Eigen::Index a = 0; a < c.n_per_var; ++a) {
          inv_e[a] = inv * basis.elems[a];
          grad(off + a) += inv_e[a].trace().real();
        }
        for (Eigen::Index a = 0; a < c.n_per_var; ++a)
          for (Eigen::Index b = a; b < c.n_per_var; ++b) {
            const double h = -(inv_e[a] * inv_e[b]).trace().real();
            hess(off + a, off + b) += h;
            if (a != b) hess(off + b, off + a) += h;
          }
      }

      Eigen::LDLT<Eigen::MatrixXd> ldlt(-hess);
      Eigen::VectorXd delta = ldlt.solve(grad);
      if (!delta.allFinite()) break;
      const double decrement = grad.dot(delta);
      if (decrement < 1e-11) {
        centered = true;
        break;
      }

      const double base_val = barrier_value(y, t, mats);
      double alpha = 1.0;
      bool moved = false;
      for (int ls = 0; ls < 60; ++ls) {
        Eigen::VectorXd trial = y + alpha * delta;
        std::vector<ComplexMatrix> trial_mats;
        if (interior(trial, &trial_mats) &&
            barrier_value(trial, t, trial_mats) > base_val + 0.25 * alpha * decrement) {
          y = std::move(trial);
          mats = std::move(trial_mats);
          moved = true;
          break;
        }
        alpha *= 0.5;
      }
      if (!moved) break;
    }

    // Exact witness check on the strictly interior iterate.
    std::vector<HermitianMatrix> witness;
    witness.reserve(p.arity);
    for (const auto& q : mats) witness.emplace_back(q);
    double margin = kInf;
    for (const auto& con : p.constraints) margin = std::min(margin, -residual(con, witness));
    if (margin >= opts.strict_margin &&
        c.trace_coeff.dot(y.head(nv)) <= p.trace_budget * (1.0 + opts.tol))
      return {FeasStatus::Feasible, std::move(witness), margin, newton_total};

    // The suboptimality bound s* <= s_t + m/t holds at a converged center.
    if (centered && y(nv) + barrier_count / t < -opts.tol)
      return {FeasStatus::Infeasible, {}, y(nv), newton_total};

    if (!centered) break;  // Newton stalled; classify with what we have
    if (barrier_count / t < 0.1 * opts.strict_margin) break;
    if (newton_total >= opts.max_iter) break;
    t *= mu;
  }

  // Without a certified bound the remaining band is undecidable.
  return {FeasStatus::Inconclusive, {}, y(nv), newton_total};
}

FeasibilityOutcome solve_feasibility_scalar(const FeasibilityProblem& p) {
  validate_problem(p);
  if (p.dim != 1)
    throw std::invalid_argument("solve_feasibility_scalar: variables must be scalars");
  if (p.arity > 2)
    throw std::invalid_argument(
        "solve_feasibility_scalar: more than two scalar variables is unsupported");

  struct Line {
    double a, b, c;  // a*p0 + b*p1 + c <= 0
  };
  std::vector<Line> lines;
  lines.push_back({-1.0, 0.0, 0.0});  // p0 >= 0
  lines.push_back({0.0, -1.0, 0.0});  // p1 >= 0
  if (p.arity == 1) lines.push_back({0.0, 1.0, 0.0});  // pin p1 = 0
  lines.push_back({1.0, p.arity == 2 ? 1.0 : 0.0, -p.trace_budget});

  for (const auto& con : p.constraints) {
    Line l{0.0, 0.0, con.constant};
    for (const auto& t : con.terms) {
      const double g = t.weight * std::norm(t.coeff(0));
      if (t.var == 0)
        l.a += g;
      else
        l.b += g;
    }
    lines.push_back(l);
  }

  constexpr double kFeasTol = 1e-9;
  bool found = false;
  double best_p0 = 0.0, best_p1 = 0.0, best_slack = -kInf;
  double best_infeasible = -kInf;
  int vertices = 0;

  const std::size_t m = lines.size();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const double det = lines[i].a * lines[j].b - lines[j].a * lines[i].b;
      if (std::abs(det) <= 1e-12) continue;
      const double p0 = (lines[i].b * lines[j].c - lines[j].b * lines[i].c) / det;
      const double p1 = (lines[j].a * lines[i].c - lines[i].a * lines[j].c) / det;
      if (!std::isfinite(p0) || !std::isfinite(p1)) continue;
      ++vertices;
      double slack = kInf;
      for (const auto& l : lines) slack = std::min(slack, -(l.a * p0 + l.b * p1 + l.c));
      if (slack >= -kFeasTol) {
        if (!found || slack > best_slack) {
          found = true;
          best_slack = slack;
          best_p0 = p0;
          best_p1 = p1;
        }
      } else {
        best_infeasible = std::max(best_infeasible, slack);
      }
    }
  }

  if (!found) return {FeasStatus::Infeasible, {}, best_infeasible, vertices};

  std::vector<HermitianMatrix> witness;
  witness.emplace_back(ComplexMatrix::Constant(1, 1, Complex(std::max(0.0, best_p0), 0.0)));
  if (p.arity == 2)
    witness.emplace_back(ComplexMatrix::Constant(1, 1, Complex(std::max(0.0, best_p1), 0.0)));
  return {FeasStatus::Feasible, std::move(witness), best_slack, vertices};
}

}  // namespace secbeam
