#ifndef SACFV_ERRORS_HPP
#define SACFV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace sacfv {

/// Rejected parameters or configuration (bad L, N not dividing N_max, missing files).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A linear or nonlinear solve that did not reach its tolerance.
class NumericalFailure : public std::runtime_error {
 public:
  NumericalFailure(const std::string& what, double residual)
      : std::runtime_error(what + " (residual " + std::to_string(residual) + ")"), residual_(residual) {}

  double residual() const { return residual_; }

 private:
  double residual_;
};

}  // namespace sacfv

#endif  // SACFV_ERRORS_HPP
