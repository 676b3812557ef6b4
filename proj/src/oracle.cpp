#include "secbeam/oracle.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "secbeam/errors.hpp"

namespace secbeam {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<Eigen::Vector2cd> beam_grid(int angle_steps) {
  std::vector<Eigen::Vector2cd> beams;
  beams.reserve(1 + static_cast<std::size_t>(angle_steps - 1) * angle_steps);
  beams.emplace_back(Complex(1.0, 0.0), Complex(0.0, 0.0));  // theta = 0
  for (int ti = 1; ti < angle_steps; ++ti) {
    const double theta = 0.5 * std::numbers::pi * ti / (angle_steps - 1);
    const double ct = std::cos(theta);
    const double st = std::sin(theta);
    for (int m = 0; m < angle_steps; ++m) {
      const double phi = 2.0 * std::numbers::pi * m / angle_steps;
      beams.emplace_back(Complex(ct, 0.0),
                         Complex(st * std::cos(phi), st * std::sin(phi)));
    }
  }
  return beams;
}

// Gain vectors that are componentwise-maximal among the beam grid; the
// admissible common power is monotone in every gain, so only these can
// certify the common-rate constraints.
struct ParetoPoint {
  std::vector<double> g;
  std::size_t beam;
};

std::vector<ParetoPoint> pareto_front(const std::vector<std::vector<double>>& gains) {
  std::vector<ParetoPoint> front;
  for (std::size_t b = 0; b < gains.size(); ++b) {
    const auto& g = gains[b];
    bool dominated = false;
    for (const auto& p : front) {
      bool all = true;
      for (std::size_t c = 0; c < g.size(); ++c)
        if (p.g[c] < g[c]) {
          all = false;
          break;
        }
      if (all) {
        dominated = true;
        break;
      }
    }
    if (dominated) continue;
    std::erase_if(front, [&g](const ParetoPoint& p) {
      for (std::size_t c = 0; c < g.size(); ++c)
        if (p.g[c] > g[c]) return false;
      return true;
    });
    front.push_back({g, b});
  }
  return front;
}

}  // namespace

std::optional<double> grid_rank1_search(const SystemInstance& inst, double r0,
                                        const GridSpec& spec) {
  if (inst.n() != 2)
    throw std::invalid_argument("grid_rank1_search: only two-antenna instances supported");
  if (spec.angle_steps < 2 || spec.power_steps < 2)
    throw std::invalid_argument("grid_rank1_search: grid must have at least 2 steps per axis");
  if (r0 < 0.0 || !std::isfinite(r0))
    throw std::invalid_argument("grid_rank1_search: r0 must be nonnegative");

  const double n0 = inst.noise_power();
  const double budget = inst.power_budget();
  const double rho = std::exp2(r0) - 1.0;
  const int k_count = inst.k();
  const int j_count = inst.j();
  const int terminals = k_count + j_count;

  const auto beams = beam_grid(spec.angle_steps);
  const std::size_t nb = beams.size();

  // |c w|^2 for every terminal, per beam; users first.
  std::vector<std::vector<double>> gains(nb, std::vector<double>(terminals));
  for (std::size_t b = 0; b < nb; ++b) {
    for (int k = 0; k < k_count; ++k)
      gains[b][k] = std::norm((inst.user(k) * beams[b]).value());
    for (int j = 0; j < j_count; ++j)
      gains[b][k_count + j] = std::norm((inst.eve(j) * beams[b]).value());
  }

  std::vector<ParetoPoint> front;
  if (rho > 0.0) {
    front = pareto_front(gains);
    // The secret power is capped by the common constraints at P1 = 0; if even
    // the full budget on the common message cannot reach r0, nothing can.
    bool deliverable = false;
    for (const auto& p : front) {
      double worst = kInf;
      for (int c = 0; c < terminals; ++c) worst = std::min(worst, budget * p.g[c]);
      if (worst >= rho * n0 - 1e-12) {
        deliverable = true;
        break;
      }
    }
    if (!deliverable) return std::nullopt;
  }

  // Largest admissible secret power for a given secret beam: best over common
  // beams of the worst-terminal power cap. Monotone in the front gains.
  auto secret_power_cap = [&](const std::vector<double>& secret_gain,
                              std::size_t* best_beam) {
    double best = -kInf;
    for (const auto& p : front) {
      double cap = kInf;
      for (int c = 0; c < terminals; ++c) {
        const double denom = p.g[c] + rho * secret_gain[c];
        double cap_c;
        if (denom <= 0.0)
          cap_c = rho > 0.0 ? -kInf : kInf;
        else
          cap_c = (budget * p.g[c] - rho * n0) / denom;
        if (cap_c < cap) {
          cap = cap_c;
          if (cap <= best) break;
        }
      }
      if (cap > best) {
        best = cap;
        if (best_beam) *best_beam = p.beam;
      }
    }
    return best;
  };

  const double power_step = budget / (spec.power_steps - 1);
  double best_rate = 0.0;
  std::size_t best_secret_beam = 0;
  int best_power_index = 0;

  for (std::size_t b = 0; b < nb; ++b) {
    const auto& g = gains[b];
    int l_max = spec.power_steps - 1;
    if (rho > 0.0) {
      const double cap = secret_power_cap(g, nullptr);
      if (cap < 0.0) continue;
      l_max = std::min(l_max, static_cast<int>(std::floor(cap / power_step + 1e-12)));
    }
    for (int l = 1; l <= l_max; ++l) {
      const double p1 = l * power_step;
      double num = kInf, den = 0.0;
      for (int k = 0; k < k_count; ++k) num = std::min(num, n0 + p1 * g[k]);
      for (int j = 0; j < j_count; ++j) den = std::max(den, n0 + p1 * g[k_count + j]);
      const double rate = std::log2(num / den);
      if (rate > best_rate) {
        best_rate = rate;
        best_secret_beam = b;
        best_power_index = l;
      }
    }
  }

  // Reconstruct and re-verify the best point through the rate formulas.
  const double p1 = best_power_index * power_step;
  CovarianceTriple triple = CovarianceTriple::zero(2);
  triple.q1 = HermitianMatrix(p1 * (beams[best_secret_beam] * beams[best_secret_beam].adjoint()));
  if (rho > 0.0) {
    std::size_t common_beam = 0;
    secret_power_cap(gains[best_secret_beam], &common_beam);
    const double p0 = budget - p1;
    triple.q0 = HermitianMatrix(p0 * (beams[common_beam] * beams[common_beam].adjoint()));
  }
  if (!common_constraints_met(inst, r0, triple))
    throw NumericalFailure("grid_rank1_search: best grid point failed re-verification");
  return secrecy_rate(inst, triple);
}

double wiretap_closed_form(const ChannelVector& h, const ChannelVector& z, double power,
                           double noise) {
  if (h.size() == 0 || h.norm() <= 0.0)
    throw std::invalid_argument("wiretap_closed_form: nonzero user channel required");
  if (z.size() != h.size())
    throw std::invalid_argument("wiretap_closed_form: channel dimension mismatch");
  if (!(noise > 0.0) || !(power >= 0.0))
    throw std::invalid_argument("wiretap_closed_form: power and noise must be valid");

  const Eigen::Index n = h.size();
  const double snr = power / noise;
  const ComplexMatrix a = ComplexMatrix::Identity(n, n) + snr * (h.adjoint() * h);
  const ComplexMatrix b = ComplexMatrix::Identity(n, n) + snr * (z.adjoint() * z);

  const EigenDecomposition eb = eig_hermitian(HermitianMatrix(b));
  const Eigen::VectorXd inv_sqrt = eb.eigenvalues.cwiseSqrt().cwiseInverse();
  const ComplexMatrix b_half_inv =
      eb.eigenvectors * inv_sqrt.asDiagonal() * eb.eigenvectors.adjoint();
  const EigenDecomposition em = eig_hermitian(HermitianMatrix(b_half_inv * a * b_half_inv));
  return std::max(0.0, std::log2(em.eigenvalues(0)));
}

}  // namespace secbeam
