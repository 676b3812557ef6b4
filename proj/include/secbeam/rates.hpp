#pragma once

#include "secbeam/channel.hpp"

namespace secbeam {

/// Transmit covariances of the common message (q0), secret message (q1) and
/// artificial noise (q2).
struct CovarianceTriple {
  HermitianMatrix q0, q1, q2;

  double trace_sum() const { return q0.trace() + q1.trace() + q2.trace(); }
  static CovarianceTriple zero(Eigen::Index n) {
    return {HermitianMatrix::Zero(n), HermitianMatrix::Zero(n), HermitianMatrix::Zero(n)};
  }
};

/// Each covariance PSD within tol and total power within budget * (1 + tol).
bool covariances_valid(const SystemInstance& inst, const CovarianceTriple& c,
                       double tol = 1e-8);

// Achievable information rates, in bits per channel use. The common-message
// rates treat the secret message and artificial noise as noise; the
// secret-message rates assume the common message is already decoded.
double rate_common_user(const SystemInstance& inst, int k, const CovarianceTriple& c);
double rate_common_eve(const SystemInstance& inst, int j, const CovarianceTriple& c);
double rate_secret_user(const SystemInstance& inst, int k, const CovarianceTriple& c);
double rate_secret_eve(const SystemInstance& inst, int j, const CovarianceTriple& c);

/// max(0, min over user/eavesdropper pairs of secret-rate differences).
double secrecy_rate(const SystemInstance& inst, const CovarianceTriple& c);

/// True iff every user and eavesdropper decodes the common message at rate
/// >= r0 - tol (inclusive boundary).
bool common_constraints_met(const SystemInstance& inst, double r0,
                            const CovarianceTriple& c, double tol = 1e-7);

}  // namespace secbeam
