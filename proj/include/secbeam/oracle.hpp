#pragma once

#include <optional>

#include "secbeam/rates.hpp"

namespace secbeam {

struct GridSpec {
  int angle_steps = 181;  // per angular dimension
  int power_steps = 101;
};

/// Brute-force validation search over rank-1 transmit covariances for
/// two-antenna instances: unit beamformers [cos(theta), sin(theta) e^{i phi}]
/// on an angle grid, powers on a budget grid, common constraints checked
/// directly. Returns the best achievable secrecy rate, or nullopt when no
/// grid point can deliver the common rate. Evaluation goes through the rate
/// formulas only; no solver machinery is shared.
std::optional<double> grid_rank1_search(const SystemInstance& inst, double r0,
                                        const GridSpec& spec = {});

/// Single-user, single-eavesdropper baseline without a common message:
/// log2 of the largest generalized eigenvalue of the pencil
/// (I + (p/n0) h*h, I + (p/n0) z*z), floored at 0.
double wiretap_closed_form(const ChannelVector& h, const ChannelVector& z, double power,
                           double noise);

}  // namespace secbeam
