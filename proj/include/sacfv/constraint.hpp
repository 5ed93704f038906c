#ifndef SACFV_CONSTRAINT_HPP
#define SACFV_CONSTRAINT_HPP

#include <cmath>

#include <Eigen/Core>

#include "sacfv/errors.hpp"
#include "sacfv/mesh.hpp"

namespace sacfv {

template <typename Scalar>
struct YosidaParams {
  Scalar epsilon;
  Scalar tau;

  YosidaParams(Scalar eps, Scalar step) : epsilon(eps), tau(step) {
    if (!(epsilon > 0) || !(tau > 0) || !std::isfinite(double(epsilon)) || !std::isfinite(double(tau))) {
      throw ConfigError("Yosida parameters epsilon and tau must be positive and finite");
    }
  }
};

/// Moreau-Yosida approximation of the subdifferential of the indicator of [0,1].
template <typename Scalar>
Scalar psi_eps(Scalar v, Scalar eps) {
  if (v < Scalar(0)) return v / eps;
  if (v > Scalar(1)) return (v - Scalar(1)) / eps;
  return Scalar(0);
}

/// (I + tau psi_eps)^{-1}(r). The endpoints r = 0 and r = 1 take the identity branch.
template <typename Scalar>
Scalar resolvent(Scalar r, Scalar tau, Scalar eps) {
  if (r < Scalar(0)) return eps * r / (eps + tau);
  if (r > Scalar(1)) return (eps * r + tau) / (eps + tau);
  return r;
}

template <typename Derived>
Field<typename Derived::Scalar> resolvent_field(const Eigen::MatrixBase<Derived>& u, typename Derived::Scalar tau,
                                                typename Derived::Scalar eps) {
  using Scalar = typename Derived::Scalar;
  return u.unaryExpr([tau, eps](Scalar r) { return resolvent(r, tau, eps); });
}

template <typename Derived>
Field<typename Derived::Scalar> psi_eps_field(const Eigen::MatrixBase<Derived>& u, typename Derived::Scalar eps) {
  using Scalar = typename Derived::Scalar;
  return u.unaryExpr([eps](Scalar v) { return psi_eps(v, eps); });
}

}  // namespace sacfv

#endif  // SACFV_CONSTRAINT_HPP
