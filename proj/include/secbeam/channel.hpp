#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "secbeam/hermitian.hpp"

namespace secbeam {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double p) { return 10.0 * std::log10(p); }

/// A broadcast problem instance: channels from the N-antenna source to K users
/// and J eavesdroppers, per-receiver noise power N0 and the total transmit
/// power budget P_T. Powers are carried in linear units; dB appears only at
/// the boundaries. Immutable after construction.
class SystemInstance {
 public:
  SystemInstance(int n_antennas, std::vector<ChannelVector> users,
                 std::vector<ChannelVector> eves, double noise_power,
                 double power_budget);

  int n() const { return n_; }
  int k() const { return static_cast<int>(users_.size()); }
  int j() const { return static_cast<int>(eves_.size()); }
  const std::vector<ChannelVector>& users() const { return users_; }
  const std::vector<ChannelVector>& eves() const { return eves_; }
  const ChannelVector& user(int k) const;
  const ChannelVector& eve(int j) const;
  double noise_power() const { return noise_; }
  double power_budget() const { return budget_; }

  SystemInstance with_power_budget(double power_budget) const;

 private:
  int n_;
  std::vector<ChannelVector> users_;
  std::vector<ChannelVector> eves_;
  double noise_;
  double budget_;
};

/// Built-in two-antenna, single-user reference channels used by the bundled
/// experiments, with the first j_count of three fixed eavesdropper channels.
/// N0 = 1; the power budget defaults to 9 dB over the noise floor.
SystemInstance paper_instance(int j_count, double power_budget = db_to_linear(9.0));

/// Deterministic instance with i.i.d. circularly symmetric complex Gaussian
/// channel entries of unit variance (mt19937_64 driving a Box-Muller
/// transform). N0 = 1, P_T = 10.
SystemInstance random_instance(std::uint64_t seed, int n, int k, int j);

}  // namespace secbeam
