#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <stdexcept>

#include "secbeam/errors.hpp"

namespace secbeam {

using Complex = std::complex<double>;
using ChannelVector = Eigen::RowVectorXcd;  // 1 x N channel gains
using ComplexMatrix = Eigen::MatrixXcd;

/// Frobenius inner product of two Hermitian matrices; real by symmetry.
inline double hdot(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a.cwiseProduct(b.conjugate()).sum().real();
}

/// N x N complex Hermitian matrix. Construction stores (A + A*)/2, so the
/// Hermitian property is structural rather than trusted, and rejects
/// non-finite entries. The diagonal is exactly real after construction.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;

  explicit HermitianMatrix(const ComplexMatrix& a) {
    if (a.rows() != a.cols())
      throw std::invalid_argument("HermitianMatrix: input must be square");
    if (!a.allFinite())
      throw std::invalid_argument("HermitianMatrix: input has non-finite entries");
    m_ = 0.5 * (a + a.adjoint());
  }

  static HermitianMatrix Zero(Eigen::Index n) {
    return HermitianMatrix(ComplexMatrix::Zero(n, n));
  }
  static HermitianMatrix Identity(Eigen::Index n) {
    return HermitianMatrix(ComplexMatrix::Identity(n, n));
  }

  const ComplexMatrix& mat() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }
  double trace() const { return m_.trace().real(); }

 private:
  ComplexMatrix m_;
};

inline HermitianMatrix operator+(const HermitianMatrix& a, const HermitianMatrix& b) {
  return HermitianMatrix(a.mat() + b.mat());
}
inline HermitianMatrix operator-(const HermitianMatrix& a, const HermitianMatrix& b) {
  return HermitianMatrix(a.mat() - b.mat());
}
inline HermitianMatrix operator*(double s, const HermitianMatrix& a) {
  return HermitianMatrix(s * a.mat());
}

/// v* v for a 1 x N row vector: PSD, rank <= 1, trace = ||v||^2.
inline HermitianMatrix outer(const ChannelVector& v) {
  if (v.size() == 0) throw std::invalid_argument("outer: empty vector");
  return HermitianMatrix(v.adjoint() * v);
}

/// c Q c* as a real scalar. Values in [-1e-10, 0) are rounding debris of PSD
/// quadratic forms and are clamped to 0 so downstream log arguments stay >= 1.
template <typename DerivedC, typename DerivedQ>
double quadratic_form(const Eigen::MatrixBase<DerivedC>& c,
                      const Eigen::MatrixBase<DerivedQ>& q) {
  if (c.rows() != 1 || c.cols() != q.rows() || q.rows() != q.cols())
    throw std::invalid_argument("quadratic_form: dimension mismatch");
  const Complex s = (c * q * c.adjoint()).eval()(0, 0);
  double v = s.real();
  if (v < 0.0 && v >= -1e-10) v = 0.0;
  return v;
}

inline double quadratic_form(const ChannelVector& c, const HermitianMatrix& q) {
  return quadratic_form(c, q.mat());
}

struct EigenDecomposition {
  Eigen::VectorXd eigenvalues;  // descending
  ComplexMatrix eigenvectors;   // unit-norm columns, paired with eigenvalues
};

inline EigenDecomposition eig_hermitian(const HermitianMatrix& a) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(a.mat());
  if (es.info() != Eigen::Success)
    throw NumericalFailure("eig_hermitian: eigensolver did not converge");
  EigenDecomposition d;
  d.eigenvalues = es.eigenvalues().reverse();
  d.eigenvectors = es.eigenvectors().rowwise().reverse();
  return d;
}

/// Frobenius-nearest PSD matrix: negative eigenvalues clipped to zero. Idempotent.
inline HermitianMatrix project_psd(const HermitianMatrix& a) {
  if (a.dim() == 0) return a;
  const EigenDecomposition d = eig_hermitian(a);
  if (d.eigenvalues(d.eigenvalues.size() - 1) >= 0.0) return a;
  const Eigen::VectorXd clipped = d.eigenvalues.cwiseMax(0.0);
  return HermitianMatrix(d.eigenvectors * clipped.asDiagonal() * d.eigenvectors.adjoint());
}

inline double min_eigenvalue(const HermitianMatrix& a) {
  if (a.dim() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(a.mat(), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw NumericalFailure("min_eigenvalue: eigensolver did not converge");
  return es.eigenvalues()(0);
}

/// lambda2 / lambda1 of a PSD matrix; 0 for (near-)zero or 1x1 matrices.
inline double second_eigenvalue_ratio(const HermitianMatrix& a) {
  if (a.dim() < 2) return 0.0;
  const EigenDecomposition d = eig_hermitian(a);
  const double top = d.eigenvalues(0);
  if (top <= 1e-12) return 0.0;
  return std::max(0.0, d.eigenvalues(1)) / top;
}

}  // namespace secbeam
