#include "secbeam/rates.hpp"

#include <cmath>

namespace secbeam {

bool covariances_valid(const SystemInstance& inst, const CovarianceTriple& c, double tol) {
  for (const HermitianMatrix* q : {&c.q0, &c.q1, &c.q2}) {
    if (q->dim() != inst.n()) return false;
    if (min_eigenvalue(*q) < -tol) return false;
  }
  return c.trace_sum() <= inst.power_budget() * (1.0 + tol);
}

double rate_common_user(const SystemInstance& inst, int k, const CovarianceTriple& c) {
  const ChannelVector& h = inst.user(k);
  const double signal = quadratic_form(h, c.q0);
  const double interference =
      inst.noise_power() + quadratic_form(h, c.q1) + quadratic_form(h, c.q2);
  return std::log2(1.0 + signal / interference);
}

double rate_common_eve(const SystemInstance& inst, int j, const CovarianceTriple& c) {
  const ChannelVector& z = inst.eve(j);
  const double signal = quadratic_form(z, c.q0);
  const double interference =
      inst.noise_power() + quadratic_form(z, c.q1) + quadratic_form(z, c.q2);
  return std::log2(1.0 + signal / interference);
}

double rate_secret_user(const SystemInstance& inst, int k, const CovarianceTriple& c) {
  const ChannelVector& h = inst.user(k);
  return std::log2(1.0 + quadratic_form(h, c.q1) /
                             (inst.noise_power() + quadratic_form(h, c.q2)));
}

double rate_secret_eve(const SystemInstance& inst, int j, const CovarianceTriple& c) {
  const ChannelVector& z = inst.eve(j);
  return std::log2(1.0 + quadratic_form(z, c.q1) /
                             (inst.noise_power() + quadratic_form(z, c.q2)));
}

double secrecy_rate(const SystemInstance& inst, const CovarianceTriple& c) {
  double worst = std::numeric_limits<double>::infinity();
  for (int k = 0; k < inst.k(); ++k) {
    const double user = rate_secret_user(inst, k, c);
    for (int j = 0; j < inst.j(); ++j)
      worst = std::min(worst, user - rate_secret_eve(inst, j, c));
  }
  return std::max(0.0, worst);
}

bool common_constraints_met(const SystemInstance& inst, double r0, const CovarianceTriple& c,
                            double tol) {
  for (int k = 0; k < inst.k(); ++k)
    if (rate_common_user(inst, k, c) < r0 - tol) return false;
  for (int j = 0; j < inst.j(); ++j)
    if (rate_common_eve(inst, j, c) < r0 - tol) return false;
  return true;
}

}  // namespace secbeam
