#ifndef SACFV_SCHEME_HPP
#define SACFV_SCHEME_HPP

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "sacfv/assembly.hpp"
#include "sacfv/constraint.hpp"
#include "sacfv/errors.hpp"
#include "sacfv/linalg.hpp"
#include "sacfv/mesh.hpp"
#include "sacfv/noise.hpp"

namespace sacfv {

enum class Variant { splitting, coupled, heat };

Variant parse_variant(std::string_view name);
std::string_view to_string(Variant v);

/// epsilon as a function of the time step: fixed(eps) or power(c, p) meaning c * tau^p.
struct EpsilonSchedule {
  enum class Rule { fixed, power };

  Rule rule = Rule::power;
  double coefficient = 0.1;
  double exponent = 0.4;

  static EpsilonSchedule fixed(double eps) { return {Rule::fixed, eps, 0.0}; }
  static EpsilonSchedule power(double c, double p) { return {Rule::power, c, p}; }

  double operator()(double tau) const {
    const double eps = rule == Rule::fixed ? coefficient : coefficient * std::pow(tau, exponent);
    if (!(eps > 0) || !std::isfinite(eps)) throw ConfigError("epsilon schedule produced a non-positive epsilon");
    return eps;
  }

  /// Largest theta with tau = O(eps^(2+theta)) as tau -> 0; non-positive means the
  /// convergence coupling fails. Fixed epsilon never satisfies it.
  double coupling_theta() const { return rule == Rule::fixed ? -2.0 : 1.0 / exponent - 2.0; }
};

template <typename Scalar>
struct SchemeParams {
  Scalar horizon = Scalar(1);
  Index steps = 1;
  EpsilonSchedule epsilon_schedule{};
  Scalar amplitude = Scalar(0);
  Variant variant = Variant::splitting;

  Scalar tau() const { return horizon / Scalar(steps); }
  Scalar epsilon() const { return Scalar(epsilon_schedule(double(tau()))); }
  DiffusionCoefficient<Scalar> diffusion() const { return {amplitude}; }

  void validate() const {
    if (!(horizon > 0) || !std::isfinite(double(horizon))) throw ConfigError("T must be positive and finite");
    if (steps < 1) throw ConfigError("N must be at least 1");
    if (!(amplitude >= 0) || !std::isfinite(double(amplitude))) throw ConfigError("a must be finite and >= 0");
    (void)epsilon();
  }
};

template <typename Scalar>
struct NewtonOptions {
  // Stop when |F(u)|_inf / m_min <= tolerance.
  Scalar tolerance = Scalar(1e-11);
  int max_iterations = 100;
};

struct NewtonStats {
  int iterations = 0;
  double residual = 0.0;
};

namespace detail {

template <typename Scalar, typename Derived>
Field<Scalar> noisy_state(const Eigen::MatrixBase<Derived>& u_prev, Scalar increment,
                          const SchemeParams<Scalar>& params) {
  return u_prev + params.diffusion().apply(u_prev) * increment;
}

template <typename Scalar>
void check_solver(const SchemeParams<Scalar>& params, const ShiftedSolver<Scalar>& solver) {
  if (std::abs(double(params.tau() - solver.tau())) > 1e-14 * std::abs(double(solver.tau()))) {
    throw ConfigError("solver shift does not match the scheme time step");
  }
}

}  // namespace detail

/// Linear substep only: (M + tau A)^{-1} M (u + g(u) dW), i.e. the scheme with psi_eps = 0.
template <typename Scalar, typename Derived>
Field<Scalar> heat_step(const Eigen::MatrixBase<Derived>& u_prev, Scalar increment, const SchemeParams<Scalar>& params,
                        const ShiftedSolver<Scalar>& solver) {
  detail::check_solver(params, solver);
  return solver.apply_markov(detail::noisy_state(u_prev, increment, params));
}

/// Heat substep followed by the componentwise resolvent (I + tau psi_eps)^{-1}.
template <typename Scalar, typename Derived>
Field<Scalar> splitting_step(const Eigen::MatrixBase<Derived>& u_prev, Scalar increment,
                             const SchemeParams<Scalar>& params, const ShiftedSolver<Scalar>& solver) {
  return resolvent_field(heat_step(u_prev, increment, params, solver), params.tau(), params.epsilon());
}

/// Fully implicit step: solves (M + tau A) u + tau M psi_eps(u) = M (u_prev + g(u_prev) dW)
/// by semismooth Newton with active-set Jacobian M + tau A + (tau/eps) M D, started from the
/// splitting step. A backtracking line search on |F|_2 guards against active-set cycling.
template <typename Scalar, typename Derived>
Field<Scalar> coupled_step(const Eigen::MatrixBase<Derived>& u_prev, Scalar increment,
                           const SchemeParams<Scalar>& params, const ShiftedSolver<Scalar>& solver,
                           const NewtonOptions<Scalar>& options = {}, NewtonStats* stats = nullptr) {
  detail::check_solver(params, solver);
  const Scalar tau = params.tau();
  const Scalar eps = params.epsilon();
  const auto& mass = solver.mass().diagonal();
  const auto& stiffness = solver.stiffness();
  const Index n = solver.size();
  const Scalar min_measure = mass.minCoeff();

  const Field<Scalar> rhs = mass.cwiseProduct(detail::noisy_state(u_prev, increment, params));
  auto residual = [&](const Field<Scalar>& u) -> Field<Scalar> {
    Field<Scalar> f = mass.cwiseProduct(u + tau * psi_eps_field(u, eps)) - rhs;
    f.noalias() += tau * (stiffness * u);
    return f;
  };

  Field<Scalar> u = resolvent_field(solver.apply_markov(detail::noisy_state(u_prev, increment, params)), tau, eps);
  Field<Scalar> f = residual(u);
  const SparseOperator<Scalar> base = tau * stiffness;
  for (int it = 0;; ++it) {
    const Scalar res = f.template lpNorm<Eigen::Infinity>() / min_measure;
    if (stats) *stats = {it, double(res)};
    if (res <= options.tolerance) return u;
    if (it >= options.max_iterations) {
      throw NumericalFailure("semismooth Newton did not converge in " + std::to_string(options.max_iterations) +
                                 " iterations",
                             double(res));
    }
    SparseOperator<Scalar> jacobian = base;
    for (Index k = 0; k < n; ++k) {
      const bool active = u[k] < Scalar(0) || u[k] > Scalar(1);
      jacobian.coeffRef(k, k) += mass[k] * (Scalar(1) + (active ? tau / eps : Scalar(0)));
    }
    const Field<Scalar> step = SpdSolver<Scalar>(std::move(jacobian)).solve(-f);

    const Scalar norm0 = f.norm();
    Scalar t(1);
    Field<Scalar> trial = u + step;
    Field<Scalar> f_trial = residual(trial);
    for (int halvings = 0; halvings < 30 && f_trial.norm() > (Scalar(1) - Scalar(1e-4) * t) * norm0; ++halvings) {
      t /= Scalar(2);
      trial = u + t * step;
      f_trial = residual(trial);
    }
    u = std::move(trial);
    f = std::move(f_trial);
  }
}

/// Owns the operators and shifted solver for one (mesh, tau) pair and dispatches on the variant.
template <typename Scalar>
class TimeStepper {
 public:
  TimeStepper(const Mesh<Scalar>& mesh, SchemeParams<Scalar> params, SolverOptions<Scalar> solver_options = {})
      : params_((params.validate(), params)),
        solver_(assemble_mass(mesh), assemble_stiffness(mesh), params_.tau(), solver_options) {}

  template <typename Derived>
  Field<Scalar> step(const Eigen::MatrixBase<Derived>& u_prev, Scalar increment) const {
    switch (params_.variant) {
      case Variant::heat:
        return heat_step(u_prev, increment, params_, solver_);
      case Variant::coupled:
        return coupled_step(u_prev, increment, params_, solver_, newton_);
      case Variant::splitting:
        break;
    }
    return splitting_step(u_prev, increment, params_, solver_);
  }

  TimeStepper with_variant(Variant v) const {
    TimeStepper copy = *this;
    copy.params_.variant = v;
    return copy;
  }

  const SchemeParams<Scalar>& params() const { return params_; }
  const ShiftedSolver<Scalar>& solver() const { return solver_; }
  void set_newton_options(NewtonOptions<Scalar> o) { newton_ = o; }

 private:
  SchemeParams<Scalar> params_;
  ShiftedSolver<Scalar> solver_;
  NewtonOptions<Scalar> newton_{};
};

template <typename Scalar>
struct Trajectory {
  std::vector<Index> steps;  // time indices n of the stored states
  std::vector<Field<Scalar>> states;

  const Field<Scalar>& final_state() const { return states.back(); }
};

/// Which iterates run_trajectory keeps. The final state is always kept.
struct TrajectoryStorage {
  bool keep_all = true;
  std::vector<Index> checkpoints;

  static TrajectoryStorage all() { return {true, {}}; }
  static TrajectoryStorage at(std::vector<Index> n) { return {false, std::move(n)}; }
  static TrajectoryStorage final_only() { return {false, {}}; }
};

/// Iterates u^n = step(u^{n-1}, dW_n) for n = 1..N starting from u^0.
template <typename Scalar, typename Derived>
Trajectory<Scalar> run_trajectory(const TimeStepper<Scalar>& stepper, const Eigen::MatrixBase<Derived>& u0,
                                  const Field<Scalar>& increments,
                                  const TrajectoryStorage& storage = TrajectoryStorage::all()) {
  const Index steps = stepper.params().steps;
  if (increments.size() != steps) {
    throw ConfigError("expected " + std::to_string(steps) + " increments, got " + std::to_string(increments.size()));
  }
  Trajectory<Scalar> out;
  Field<Scalar> u = u0;
  for (Index n = 1; n <= steps; ++n) {
    u = stepper.step(u, increments[n - 1]);
    const bool keep = storage.keep_all || n == steps ||
                      std::find(storage.checkpoints.begin(), storage.checkpoints.end(), n) != storage.checkpoints.end();
    if (keep) {
      out.steps.push_back(n);
      out.states.push_back(u);
    }
  }
  return out;
}

}  // namespace sacfv

#endif  // SACFV_SCHEME_HPP
