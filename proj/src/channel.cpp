#include "secbeam/channel.hpp"

#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace secbeam {

namespace {

void check_channel(const ChannelVector& v, int n, const std::string& label, std::size_t idx) {
  if (v.size() != n)
    throw std::invalid_argument("SystemInstance: " + label + "[" + std::to_string(idx) +
                                "] has length " + std::to_string(v.size()) + ", expected " +
                                std::to_string(n));
  if (!v.allFinite())
    throw std::invalid_argument("SystemInstance: " + label + "[" + std::to_string(idx) +
                                "] has non-finite entries");
}

}  // namespace

SystemInstance::SystemInstance(int n_antennas, std::vector<ChannelVector> users,
                               std::vector<ChannelVector> eves, double noise_power,
                               double power_budget)
    : n_(n_antennas),
      users_(std::move(users)),
      eves_(std::move(eves)),
      noise_(noise_power),
      budget_(power_budget) {
  if (n_ <= 0) throw std::invalid_argument("SystemInstance: antenna count must be positive");
  if (users_.empty()) throw std::invalid_argument("SystemInstance: at least one user required");
  if (eves_.empty())
    throw std::invalid_argument("SystemInstance: at least one eavesdropper required");
  for (std::size_t i = 0; i < users_.size(); ++i) check_channel(users_[i], n_, "users", i);
  for (std::size_t i = 0; i < eves_.size(); ++i) check_channel(eves_[i], n_, "eves", i);
  if (!(noise_ > 0.0) || !std::isfinite(noise_))
    throw std::invalid_argument("SystemInstance: noise_power must be positive");
  if (!(budget_ > 0.0) || !std::isfinite(budget_))
    throw std::invalid_argument("SystemInstance: power_budget must be positive");
}

const ChannelVector& SystemInstance::user(int k) const {
  if (k < 0 || k >= this->k()) throw std::invalid_argument("SystemInstance: user index out of range");
  return users_[k];
}

const ChannelVector& SystemInstance::eve(int j) const {
  if (j < 0 || j >= this->j()) throw std::invalid_argument("SystemInstance: eve index out of range");
  return eves_[j];
}

SystemInstance SystemInstance::with_power_budget(double power_budget) const {
  return SystemInstance(n_, users_, eves_, noise_, power_budget);
}

SystemInstance paper_instance(int j_count, double power_budget) {
  if (j_count < 1 || j_count > 3)
    throw std::invalid_argument("paper_instance: j_count must be 1, 2 or 3");

  ChannelVector h(2), z1(2), z2(2), z3(2);
  h << Complex(2.0824, -1.7215), Complex(0.0788, -0.0583);
  z1 << Complex(-0.3989, -0.0923), Complex(-0.6770, 0.3371);
  z2 << Complex(0.0910, -0.8258), Complex(0.6642, -0.3257);
  z3 << Complex(-0.2784, -1.3995), Complex(-1.4867, 0.9877);

  std::vector<ChannelVector> eves{z1, z2, z3};
  eves.resize(j_count);
  return SystemInstance(2, {h}, std::move(eves), 1.0, power_budget);
}

SystemInstance random_instance(std::uint64_t seed, int n, int k, int j) {
  if (n < 1 || k < 1 || j < 1)
    throw std::invalid_argument("random_instance: n, k, j must be at least 1");

  std::mt19937_64 rng(seed);
  auto unit_open = [&rng]() {
    // (0, 1), independent of the standard library's distribution internals
    return (static_cast<double>(rng() >> 11) + 1.0) / 9007199254740993.0;
  };
  auto gaussian_pair = [&](double& g0, double& g1) {
    const double u1 = unit_open();
    const double u2 = unit_open();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    g0 = r * std::cos(a);
    g1 = r * std::sin(a);
  };
  auto draw_vector = [&](int len) {
    ChannelVector v(len);
    const double scale = std::sqrt(0.5);  // unit variance per complex entry
    for (int i = 0; i < len; ++i) {
      double re, im;
      gaussian_pair(re, im);
      v(i) = Complex(scale * re, scale * im);
    }
    return v;
  };

  std::vector<ChannelVector> users, eves;
  users.reserve(k);
  eves.reserve(j);
  for (int i = 0; i < k; ++i) users.push_back(draw_vector(n));
  for (int i = 0; i < j; ++i) eves.push_back(draw_vector(n));
  return SystemInstance(n, std::move(users), std::move(eves), 1.0, 10.0);
}

}  // namespace secbeam
