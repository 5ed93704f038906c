#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "sacfv/constraint.hpp"
#include "sacfv/golden.hpp"

using namespace sacfv;

TEST_CASE("psi_eps branches") {
  for (double eps : {1e-3, 0.05, 1.0}) {
    CHECK(psi_eps(0.5, eps) == 0.0);
    CHECK(psi_eps(0.0, eps) == 0.0);
    CHECK(psi_eps(1.0, eps) == 0.0);
    CHECK(psi_eps(-eps, eps) == doctest::Approx(-1.0));
    CHECK(psi_eps(1.0 + 2.0 * eps, eps) == doctest::Approx(2.0));
  }
}

TEST_CASE("resolvent branches") {
  for (double r : {0.0, 0.3, 1.0}) CHECK(resolvent(r, 0.2, 0.01) == r);
  CHECK(resolvent(-1.0, 0.7, 0.7) == doctest::Approx(-0.5));
  CHECK(resolvent(3.0, 1.0, 1.0) == doctest::Approx(2.0));
}

TEST_CASE("resolvent inverts I + tau psi_eps") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> value(-10.0, 11.0);
  std::uniform_real_distribution<double> log_param(-5.0, 1.0);
  for (int i = 0; i < 5000; ++i) {
    const double r = value(rng);
    const double tau = std::pow(10.0, log_param(rng));
    const double eps = std::pow(10.0, log_param(rng));
    const double x = resolvent(r, tau, eps);
    // Above 1 the map x -> x + tau psi_eps(x) amplifies the rounding of x by 1 + tau/eps.
    const double conditioning = x > 1.0 ? 1.0 + tau / eps : 1.0;
    CHECK(std::abs(x + tau * psi_eps(x, eps) - r) <= 1e-13 * std::max(1.0, std::abs(r)) * conditioning);
    // and the other way round; the image can be far larger than r
    const double image = r + tau * psi_eps(r, eps);
    CHECK(std::abs(resolvent(image, tau, eps) - r) <= 1e-13 * std::max(1.0, std::abs(image)));
  }
}

TEST_CASE("resolvent is monotone, 1-Lipschitz and close to the projection") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> value(-4.0, 5.0);
  std::uniform_real_distribution<double> log_param(-5.0, 0.0);
  for (int i = 0; i < 5000; ++i) {
    double r1 = value(rng), r2 = value(rng);
    if (r1 > r2) std::swap(r1, r2);
    const double tau = std::pow(10.0, log_param(rng));
    const double eps = std::pow(10.0, log_param(rng));
    const double x1 = resolvent(r1, tau, eps), x2 = resolvent(r2, tau, eps);
    CHECK(x1 <= x2);
    CHECK(x2 - x1 <= (r2 - r1) * (1 + 1e-15) + 1e-15);
    const double bound = eps * std::max(std::abs(r1), std::abs(r1 - 1.0)) / (eps + tau);
    CHECK(std::abs(x1 - std::clamp(r1, 0.0, 1.0)) <= bound * (1 + 1e-12) + 1e-15);
  }
}

TEST_CASE("resolvent_field acts componentwise") {
  FieldD inside(4);
  inside << 0.0, 0.25, 0.8, 1.0;
  CHECK(resolvent_field(inside, 0.3, 0.01) == inside);

  FieldD negative(3);
  negative << -1.0, -0.5, -2e-3;
  const double tau = 0.25, eps = 0.01;
  CHECK(resolvent_field(negative, tau, eps).isApprox(negative * (eps / (eps + tau))));
}

TEST_CASE("resolvent_field reproduces the second splitting row on L=2") {
  // Heat substep output from the first row, then the resolvent with tau = 1/2.
  FieldD heat(4);
  heat << -1.69747036, -1.57881501, -1.57872628, -1.69338044;
  const double tau = 0.5;
  const double eps = golden_epsilon()(tau);
  FieldD expected(4);
  expected << -0.23254276, -0.21628772, -0.21627557, -0.23198247;
  CHECK((resolvent_field(heat, tau, eps) - expected).lpNorm<Eigen::Infinity>() <= 1e-8);
}
