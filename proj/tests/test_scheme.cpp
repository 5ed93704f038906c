#include <cmath>
#include <random>

#include "doctest.h"
#include "sacfv/assembly.hpp"
#include "sacfv/golden.hpp"
#include "sacfv/scheme.hpp"

using namespace sacfv;

namespace {

SchemeParams<double> golden_params(Variant variant, Index steps) {
  SchemeParams<double> p;
  p.horizon = 1.0;
  p.steps = steps;
  p.epsilon_schedule = golden_epsilon();
  p.amplitude = 10.0;
  p.variant = variant;
  return p;
}

FieldD golden_u0(const MeshD& mesh) { return cell_average(reference_initial_datum<double>(), mesh); }

double max_row_deviation(const FieldD& u, const std::vector<double>& row) {
  double worst = 0.0;
  for (std::size_t k = 0; k < row.size(); ++k) worst = std::max(worst, std::abs(u[Index(k)] - row[k]));
  return worst;
}

}  // namespace

TEST_CASE("variant names") {
  for (Variant v : {Variant::splitting, Variant::coupled, Variant::heat}) CHECK(parse_variant(to_string(v)) == v);
  CHECK_THROWS_AS(parse_variant("implicit"), ConfigError);
}

TEST_CASE("epsilon schedules") {
  CHECK(EpsilonSchedule::fixed(0.05)(0.3) == 0.05);
  CHECK(EpsilonSchedule::power(0.1, 0.5)(0.25) == doctest::Approx(0.05));
  CHECK(EpsilonSchedule::power(0.1, 0.4).coupling_theta() == doctest::Approx(0.5));
  CHECK(EpsilonSchedule::power(0.1, 1.0 / 3.0).coupling_theta() == doctest::Approx(1.0));
  CHECK_THROWS_AS(EpsilonSchedule::fixed(0.0)(0.1), ConfigError);
  CHECK_THROWS_AS(EpsilonSchedule::fixed(-1.0)(0.1), ConfigError);
}

TEST_CASE("scheme parameters are validated") {
  auto p = golden_params(Variant::splitting, 2);
  p.steps = 0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = golden_params(Variant::splitting, 2);
  p.amplitude = -1.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = golden_params(Variant::splitting, 2);
  p.horizon = 0.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
}

TEST_CASE("first step of each reference table") {
  const MeshD mesh = build_uniform_mesh<double>(2);
  const FieldD u0 = golden_u0(mesh);
  const NoisePath path = golden_quarter_path();
  for (const auto& table : golden_tables()) {
    CAPTURE(table.name);
    const TimeStepper<double> stepper(mesh, golden_params(table.variant, table.steps));
    const FieldD u1 = stepper.step(u0, aggregate_increments(path, table.steps)[0]);
    CHECK(max_row_deviation(u1, table.rows[0]) <= 1e-6);
  }
}

TEST_CASE("full reference tables") {
  const TableReport report = reproduce_golden_tables(golden_quarter_path(), golden_epsilon());
  REQUIRE(report.tables.size() == 3);
  for (const auto& t : report.tables) {
    CAPTURE(t.name);
    CHECK(t.max_deviation <= 1e-5);
  }
}

TEST_CASE("cubic epsilon rule does not reproduce the tables") {
  const TableReport report = reproduce_golden_tables(golden_quarter_path(), EpsilonSchedule::power(0.1, 3.0));
  CHECK(report.max_deviation > 1e-2);
}

TEST_CASE("a mismatched solver is rejected") {
  const MeshD mesh = build_uniform_mesh<double>(2);
  const ShiftedSolverD solver(assemble_mass(mesh), assemble_stiffness(mesh), 0.3);
  CHECK_THROWS_AS(splitting_step(golden_u0(mesh), 0.1, golden_params(Variant::splitting, 2), solver), ConfigError);
}

TEST_CASE("coupled step matches splitting when the heat output is admissible") {
  const MeshD mesh = build_uniform_mesh<double>(2);
  const FieldD u0 = golden_u0(mesh);
  const auto params = golden_params(Variant::splitting, 2);
  const TimeStepper<double> split(mesh, params);
  const TimeStepper<double> coupled = split.with_variant(Variant::coupled);
  const double dw = aggregate_increments(golden_quarter_path(), 2)[0];
  NewtonStats stats;
  const FieldD v = coupled_step(u0, dw, params, coupled.solver(), {}, &stats);
  CHECK((v - split.step(u0, dw)).lpNorm<Eigen::Infinity>() <= 1e-12);
  CHECK(stats.iterations == 0);
}

TEST_CASE("coupled step on a single cell solves the scalar equation") {
  // With one cell A = 0, so u + tau psi_eps(u) = w and the resolvent is exact.
  const MeshD mesh = build_uniform_mesh<double>(1);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> start(-1.0, 2.0);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 200; ++trial) {
    SchemeParams<double> p;
    p.horizon = 0.1;
    p.steps = 1;
    p.epsilon_schedule = EpsilonSchedule::fixed(0.02);
    p.amplitude = 4.0;
    p.variant = Variant::coupled;
    const TimeStepper<double> stepper(mesh, p);
    FieldD u(1);
    u[0] = start(rng);
    const double dw = std::sqrt(0.1) * normal(rng);
    const double w = u[0] + diffusion_g(u[0], 4.0) * dw;
    // bisection oracle on the monotone map x -> x + tau psi_eps(x)
    double lo = -100.0, hi = 100.0;
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      (mid + 0.1 * psi_eps(mid, 0.02) < w ? lo : hi) = mid;
    }
    CHECK(std::abs(stepper.step(u, dw)[0] - 0.5 * (lo + hi)) <= 1e-12);
  }
}

TEST_CASE("coupled step satisfies its equation on larger meshes") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> value(-0.5, 1.5);
  std::normal_distribution<double> normal;
  for (Index l : {3, 6, 10}) {
    const MeshD mesh = build_uniform_mesh<double>(l);
    SchemeParams<double> p;
    p.horizon = 1.0;
    p.steps = 16;
    p.epsilon_schedule = EpsilonSchedule::power(0.1, 0.4);
    p.amplitude = 30.0;
    p.variant = Variant::coupled;
    const TimeStepper<double> stepper(mesh, p);
    FieldD u(mesh.size());
    for (Index k = 0; k < u.size(); ++k) u[k] = value(rng);
    const double dw = 0.25 * normal(rng);
    NewtonStats stats;
    const FieldD v = coupled_step(u, dw, p, stepper.solver(), {}, &stats);
    const auto& m = stepper.solver().mass().diagonal();
    FieldD w = u;
    for (Index k = 0; k < u.size(); ++k) w[k] += diffusion_g(u[k], 30.0) * dw;
    const FieldD f = m.cwiseProduct(v + p.tau() * psi_eps_field(v, p.epsilon())) +
                     p.tau() * (stepper.solver().stiffness() * v) - m.cwiseProduct(w);
    CHECK(f.lpNorm<Eigen::Infinity>() / m.minCoeff() <= 1e-11);
    CHECK(stats.iterations <= 100);
  }
}

TEST_CASE("newton iteration cap raises NumericalFailure") {
  const MeshD mesh = build_uniform_mesh<double>(4);
  SchemeParams<double> p;
  p.horizon = 1.0;
  p.steps = 1;
  p.epsilon_schedule = EpsilonSchedule::fixed(1e-3);
  p.amplitude = 0.0;
  p.variant = Variant::coupled;
  TimeStepper<double> stepper(mesh, p);
  NewtonOptions<double> opts;
  opts.max_iterations = 0;
  stepper.set_newton_options(opts);
  FieldD u = FieldD::LinSpaced(mesh.size(), -3.0, 4.0);
  CHECK_THROWS_AS(stepper.step(u, 0.0), NumericalFailure);
}

TEST_CASE("heat step conserves mass and fixes constants") {
  const MeshD mesh = build_uniform_mesh<double>(5);
  auto p = golden_params(Variant::heat, 8);
  p.amplitude = 0.0;
  const TimeStepper<double> stepper(mesh, p);
  const FieldD u0 = golden_u0(mesh);
  const FieldD u1 = stepper.step(u0, 0.3);
  const auto& m = stepper.solver().mass().diagonal();
  CHECK(m.dot(u1) == doctest::Approx(m.dot(u0)).epsilon(1e-13));
  const FieldD c = FieldD::Constant(mesh.size(), 0.4);
  CHECK((stepper.step(c, 0.0) - c).lpNorm<Eigen::Infinity>() <= 1e-13);
}

TEST_CASE("zero noise and constant data give a constant trajectory") {
  const MeshD mesh = build_uniform_mesh<double>(4);
  for (Variant v : {Variant::splitting, Variant::coupled}) {
    auto p = golden_params(v, 10);
    const TimeStepper<double> stepper(mesh, p);
    const FieldD c = FieldD::Constant(mesh.size(), 0.35);
    const auto traj = run_trajectory(stepper, c, FieldD(FieldD::Zero(10)));
    REQUIRE(traj.states.size() == 10);
    for (const auto& s : traj.states) CHECK((s - c).lpNorm<Eigen::Infinity>() <= 1e-12);
  }
}

TEST_CASE("constants stay spatially constant under noise") {
  const MeshD mesh = build_uniform_mesh<double>(6);
  std::mt19937_64 rng(11);
  std::normal_distribution<double> normal;
  for (Variant v : {Variant::splitting, Variant::coupled}) {
    const TimeStepper<double> stepper(mesh, golden_params(v, 16));
    FieldD u = FieldD::Constant(mesh.size(), 0.6);
    for (int n = 0; n < 16; ++n) {
      u = stepper.step(u, 0.25 * normal(rng));
      CHECK(u.maxCoeff() - u.minCoeff() <= 1e-10);
    }
  }
}

TEST_CASE("0 and 1 are stationary") {
  const MeshD mesh = build_uniform_mesh<double>(3);
  for (double c : {0.0, 1.0}) {
    for (Variant v : {Variant::splitting, Variant::coupled}) {
      const TimeStepper<double> stepper(mesh, golden_params(v, 4));
      const FieldD u = FieldD::Constant(mesh.size(), c);
      CHECK((stepper.step(u, 0.7) - u).lpNorm<Eigen::Infinity>() <= 1e-12);
    }
  }
}

TEST_CASE("signs are trapped outside [0,1]") {
  const MeshD mesh = build_uniform_mesh<double>(5);
  const TimeStepper<double> stepper(mesh, golden_params(Variant::splitting, 8));
  FieldD below = -FieldD::LinSpaced(mesh.size(), 0.0, 2.0);
  FieldD above = FieldD::LinSpaced(mesh.size(), 1.0, 3.0);
  for (int n = 0; n < 8; ++n) {
    below = stepper.step(below, 0.4);
    above = stepper.step(above, -0.4);
    CHECK(below.maxCoeff() <= 1e-12);
    CHECK(above.minCoeff() >= 1.0 - 1e-12);
  }
}

TEST_CASE("run_trajectory storage and increment count") {
  const MeshD mesh = build_uniform_mesh<double>(2);
  const TimeStepper<double> stepper(mesh, golden_params(Variant::splitting, 4));
  const FieldD u0 = golden_u0(mesh);
  const FieldD dw = golden_quarter_path().fine_increments();
  const auto all = run_trajectory(stepper, u0, dw);
  CHECK(all.steps == std::vector<Index>{1, 2, 3, 4});
  const auto some = run_trajectory(stepper, u0, dw, TrajectoryStorage::at({2}));
  CHECK(some.steps == std::vector<Index>{2, 4});
  CHECK(some.states[0] == all.states[1]);
  CHECK(run_trajectory(stepper, u0, dw, TrajectoryStorage::final_only()).steps == std::vector<Index>{4});
  CHECK_THROWS_AS(run_trajectory(stepper, u0, FieldD(FieldD::Zero(3))), ConfigError);
}

TEST_CASE("float instantiation runs the splitting scheme") {
  const Mesh<float> mesh = build_uniform_mesh<float>(2);
  SchemeParams<float> p;
  p.steps = 2;
  p.epsilon_schedule = golden_epsilon();
  p.amplitude = 10.0f;
  const TimeStepper<float> stepper(mesh, p);
  const Field<float> u0 = cell_average(reference_initial_datum<float>(), mesh);
  const Field<float> u1 = stepper.step(u0, 0.08910183f);
  CHECK(std::abs(u1[0] - 0.39495382f) <= 1e-5f);
}
