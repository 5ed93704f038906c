#include "sacfv/noise.hpp"

#include <cmath>
#include <string>
#include <utility>

#include <boost/math/distributions/normal.hpp>

#include "sacfv/errors.hpp"

namespace sacfv {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = std::uint64_t(a) * std::uint64_t(b);
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace

Philox4x32::Counter Philox4x32::generate(Counter ctr, Key key) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

double uniform_open(std::uint64_t bits) {
  return (double(bits >> 12) + 0.5) * 0x1.0p-52;
}

double standard_normal(std::uint64_t seed, std::uint64_t path_index, std::uint64_t increment_index) {
  const Philox4x32::Counter ctr = {
      static_cast<std::uint32_t>(increment_index), static_cast<std::uint32_t>(increment_index >> 32),
      static_cast<std::uint32_t>(path_index), static_cast<std::uint32_t>(path_index >> 32)};
  const Philox4x32::Key key = {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  const auto out = Philox4x32::generate(ctr, key);
  const std::uint64_t bits = (std::uint64_t(out[0]) << 32) | out[1];
  static const boost::math::normal_distribution<double> standard;
  return boost::math::quantile(standard, uniform_open(bits));
}

NoisePath::NoisePath(Field<double> fine_increments, double horizon, std::uint64_t seed, std::uint64_t path_index)
    : fine_(std::make_shared<const Field<double>>(std::move(fine_increments))),
      steps_(fine_->size()),
      horizon_(horizon),
      seed_(seed),
      path_index_(path_index) {
  if (steps_ < 1) throw ConfigError("noise path needs at least one increment");
  if (!(horizon_ > 0)) throw ConfigError("time horizon T must be positive");
}

Field<double> NoisePath::increments() const {
  const Index block = fine_steps() / steps_;
  Field<double> coarse(steps_);
  for (Index n = 0; n < steps_; ++n) {
    double sum = 0.0;
    for (Index j = n * block; j < (n + 1) * block; ++j) sum += (*fine_)[j];
    coarse[n] = sum;
  }
  return coarse;
}

NoisePath NoisePath::coarsened(Index steps) const {
  if (steps < 1 || steps_ % steps != 0) {
    throw ConfigError("step count " + std::to_string(steps) + " does not divide " + std::to_string(steps_));
  }
  NoisePath out = *this;
  out.steps_ = steps;
  return out;
}

NoisePath sample_path(std::uint64_t seed, std::uint64_t path_index, double horizon, Index fine_steps) {
  if (fine_steps < 1) throw ConfigError("N_max must be at least 1");
  if (!(horizon > 0)) throw ConfigError("time horizon T must be positive");
  const double scale = std::sqrt(horizon / double(fine_steps));
  Field<double> dw(fine_steps);
  for (Index j = 0; j < fine_steps; ++j) dw[j] = scale * standard_normal(seed, path_index, std::uint64_t(j));
  return NoisePath(std::move(dw), horizon, seed, path_index);
}

Field<double> aggregate_increments(const NoisePath& path, Index steps) {
  return path.coarsened(steps).increments();
}

}  // namespace sacfv
