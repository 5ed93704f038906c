#ifndef SACFV_LINALG_HPP
#define SACFV_LINALG_HPP

#include <cmath>
#include <optional>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "sacfv/assembly.hpp"
#include "sacfv/errors.hpp"
#include "sacfv/mesh.hpp"

namespace sacfv {

template <typename Scalar>
struct SolverOptions {
  Scalar rtol = Scalar(1e-12);
  // Systems with at most this many unknowns are factorized densely.
  Index dense_threshold = 64;
  // Zero means 10 * dimension.
  Index max_iterations = 0;
};

/// Jacobi-preconditioned conjugate gradients for a symmetric positive definite matrix.
/// Stops when |b - Ax|_2 <= rtol |b|_2. All scratch is local, so concurrent calls are safe.
template <typename Scalar, typename Derived>
Field<Scalar> pcg_solve(const SparseOperator<Scalar>& matrix, const Field<Scalar>& inverse_diagonal,
                        const Eigen::MatrixBase<Derived>& rhs, Scalar rtol, Index max_iterations) {
  const Index n = matrix.rows();
  Field<Scalar> x = Field<Scalar>::Zero(n);
  const Scalar rhs_norm = rhs.norm();
  if (rhs_norm == Scalar(0)) return x;
  const Scalar threshold = rtol * rhs_norm;
  Field<Scalar> r = rhs;
  Field<Scalar> z = inverse_diagonal.cwiseProduct(r);
  Field<Scalar> p = z;
  Field<Scalar> ap(n);
  Scalar rz = r.dot(z);
  for (Index it = 0; it < max_iterations; ++it) {
    ap.noalias() = matrix * p;
    const Scalar alpha = rz / p.dot(ap);
    x += alpha * p;
    r -= alpha * ap;
    if (r.norm() <= threshold) {
      // Guard against drift of the recursive residual.
      const Scalar true_residual = (rhs - matrix * x).norm();
      if (true_residual <= threshold) return x;
      r = rhs - matrix * x;
    }
    z = inverse_diagonal.cwiseProduct(r);
    const Scalar rz_next = r.dot(z);
    p = z + (rz_next / rz) * p;
    rz = rz_next;
  }
  const Scalar residual = (rhs - matrix * x).norm() / rhs_norm;
  throw NumericalFailure("conjugate gradients did not converge in " + std::to_string(max_iterations) + " iterations",
                         double(residual));
}

/// Symmetric positive definite solve: dense Cholesky for small systems, PCG otherwise.
template <typename Scalar>
class SpdSolver {
 public:
  using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  explicit SpdSolver(SparseOperator<Scalar> matrix, SolverOptions<Scalar> options = {})
      : matrix_(std::move(matrix)), options_(options) {
    const Index n = matrix_.rows();
    if (options_.max_iterations <= 0) options_.max_iterations = 10 * n;
    if (n <= options_.dense_threshold) {
      dense_.emplace(DenseMatrix(matrix_));
      if (dense_->info() != Eigen::Success) throw NumericalFailure("matrix is not positive definite", 0.0);
    } else {
      inverse_diagonal_ = matrix_.diagonal().cwiseInverse();
    }
  }

  template <typename Derived>
  Field<Scalar> solve(const Eigen::MatrixBase<Derived>& rhs) const {
    if (dense_) return dense_->solve(rhs);
    return pcg_solve<Scalar>(matrix_, inverse_diagonal_, rhs, options_.rtol, options_.max_iterations);
  }

  const SparseOperator<Scalar>& matrix() const { return matrix_; }
  bool is_dense() const { return dense_.has_value(); }

 private:
  SparseOperator<Scalar> matrix_;
  SolverOptions<Scalar> options_;
  std::optional<Eigen::LLT<DenseMatrix>> dense_;
  Field<Scalar> inverse_diagonal_;
};

/// Solves (M + tau A) x = b and applies the Markov map (M + tau A)^{-1} M.
template <typename Scalar>
class ShiftedSolver {
 public:
  ShiftedSolver(const DiagonalOperator<Scalar>& mass, const SparseOperator<Scalar>& stiffness, Scalar tau,
                SolverOptions<Scalar> options = {})
      : mass_(mass), stiffness_(stiffness), tau_(tau), system_(shifted(mass, stiffness, tau), options) {}

  template <typename Derived>
  Field<Scalar> solve_shifted(const Eigen::MatrixBase<Derived>& b) const {
    return system_.solve(b);
  }

  template <typename Derived>
  Field<Scalar> apply_markov(const Eigen::MatrixBase<Derived>& x) const {
    // Correction form x - tau (M + tau A)^{-1} A x: constants are reproduced exactly when A 1 = 0.
    const Field<Scalar> ax = stiffness_ * x;
    return x - tau_ * system_.solve(ax);
  }

  const DiagonalOperator<Scalar>& mass() const { return mass_; }
  const SparseOperator<Scalar>& stiffness() const { return stiffness_; }
  Scalar tau() const { return tau_; }
  Index size() const { return stiffness_.rows(); }
  bool is_dense() const { return system_.is_dense(); }

 private:
  static SparseOperator<Scalar> shifted(const DiagonalOperator<Scalar>& mass, const SparseOperator<Scalar>& stiffness,
                                        Scalar tau) {
    if (!(tau > 0) || !std::isfinite(double(tau))) throw ConfigError("time step tau must be positive and finite");
    SparseOperator<Scalar> m(stiffness.rows(), stiffness.cols());
    m.setIdentity();
    m = m * mass;
    SparseOperator<Scalar> result = m + tau * stiffness;
    result.makeCompressed();
    return result;
  }

  DiagonalOperator<Scalar> mass_;
  SparseOperator<Scalar> stiffness_;
  Scalar tau_;
  SpdSolver<Scalar> system_;
};

using ShiftedSolverD = ShiftedSolver<double>;

}  // namespace sacfv

#endif  // SACFV_LINALG_HPP
