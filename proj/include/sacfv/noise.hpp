#ifndef SACFV_NOISE_HPP
#define SACFV_NOISE_HPP

#include <array>
#include <cstdint>
#include <memory>

#include <Eigen/Core>

#include "sacfv/mesh.hpp"

namespace sacfv {

/// Philox4x32-10 counter-based generator (Salmon et al.). Stateless: output is a pure
/// function of (counter, key).
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter generate(Counter counter, Key key);
};

/// Uniform double in the open interval (0,1) built from the top 52 random bits.
double uniform_open(std::uint64_t bits);

/// Standard normal variate for the increment (seed, path, index); inverse-CDF transform.
double standard_normal(std::uint64_t seed, std::uint64_t path_index, std::uint64_t increment_index);

/// Brownian increments of one sample path on a uniform grid of [0, T].
///
/// The path always keeps its finest increments. A coarsened path shares them and sums
/// consecutive blocks on demand, so coarsening is exact and composes:
/// path.coarsened(n2).coarsened(n1) yields the same increments as path.coarsened(n1).
class NoisePath {
 public:
  NoisePath(Field<double> fine_increments, double horizon, std::uint64_t seed = 0, std::uint64_t path_index = 0);

  /// Increments on the current grid (steps() of them).
  Field<double> increments() const;
  NoisePath coarsened(Index steps) const;

  const Field<double>& fine_increments() const { return *fine_; }
  Index fine_steps() const { return fine_->size(); }
  Index steps() const { return steps_; }
  double horizon() const { return horizon_; }
  std::uint64_t seed() const { return seed_; }
  std::uint64_t path_index() const { return path_index_; }

 private:
  std::shared_ptr<const Field<double>> fine_;
  Index steps_;
  double horizon_;
  std::uint64_t seed_;
  std::uint64_t path_index_;
};

/// N_max i.i.d. N(0, T/N_max) increments keyed by (seed, path_index).
NoisePath sample_path(std::uint64_t seed, std::uint64_t path_index, double horizon, Index fine_steps);

/// Entry n is the sum of the path's increments over (t_{n-1}, t_n] of the coarser grid.
/// Throws ConfigError unless steps divides path.steps().
Field<double> aggregate_increments(const NoisePath& path, Index steps);

/// g(x) = a x (1 - x) on [0,1], zero elsewhere. Lipschitz constant a.
template <typename Scalar>
struct DiffusionCoefficient {
  Scalar amplitude;

  Scalar operator()(Scalar x) const {
    if (x < Scalar(0) || x > Scalar(1)) return Scalar(0);
    return amplitude * x * (Scalar(1) - x);
  }

  template <typename Derived>
  Field<Scalar> apply(const Eigen::MatrixBase<Derived>& u) const {
    return u.unaryExpr([this](Scalar x) { return (*this)(x); });
  }

  Scalar lipschitz() const { return amplitude; }
};

template <typename Scalar>
Scalar diffusion_g(Scalar x, Scalar amplitude) {
  return DiffusionCoefficient<Scalar>{amplitude}(x);
}

}  // namespace sacfv

#endif  // SACFV_NOISE_HPP
