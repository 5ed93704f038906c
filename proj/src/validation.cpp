#include "sacfv/validation.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "sacfv/assembly.hpp"
#include "sacfv/constraint.hpp"
#include "sacfv/golden.hpp"
#include "sacfv/io.hpp"
#include "sacfv/linalg.hpp"
#include "sacfv/mesh.hpp"
#include "sacfv/scheme.hpp"

namespace sacfv {

namespace {

using Rng = std::mt19937_64;

struct RandomInstance {
  MeshD mesh;
  double tau;
  double epsilon;
  double amplitude;
  double increment;
};

double log_uniform(Rng& rng, double lo, double hi) {
  std::uniform_real_distribution<double> d(std::log(lo), std::log(hi));
  return std::exp(d(rng));
}

RandomInstance random_instance(Rng& rng) {
  std::uniform_int_distribution<Index> cells(1, 8);
  std::uniform_real_distribution<double> amp(0.0, 60.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double tau = log_uniform(rng, 1e-4, 1.0);
  return {build_uniform_mesh<double>(cells(rng)), tau, log_uniform(rng, 1e-4, 1.0), amp(rng),
          std::sqrt(tau) * normal(rng)};
}

SchemeParams<double> params_for(const RandomInstance& inst, Variant variant) {
  SchemeParams<double> p;
  p.horizon = inst.tau;
  p.steps = 1;
  p.epsilon_schedule = EpsilonSchedule::fixed(inst.epsilon);
  p.amplitude = inst.amplitude;
  p.variant = variant;
  return p;
}

FieldD random_field(Rng& rng, Index n, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  FieldD x(n);
  for (Index k = 0; k < n; ++k) x[k] = d(rng);
  return x;
}

CheckResult verdict(std::string name, double worst, double tolerance, int cases, const char* what) {
  std::ostringstream os;
  os << cases << " cases, worst " << what << " " << format_double(worst) << " (tolerance " << tolerance << ")";
  return {std::move(name), worst <= tolerance, os.str()};
}

double spread(const FieldD& u) { return u.maxCoeff() - u.minCoeff(); }

}  // namespace

CheckResult check_stiffness_properties(int cases, std::uint64_t seed) {
  Rng rng(seed);
  bool ok = true;
  double worst_row = 0.0, worst_psd = 0.0;
  for (int c = 0; c < cases; ++c) {
    const auto inst = random_instance(rng);
    const auto a = assemble_stiffness(inst.mesh);
    const Eigen::MatrixXd dense(a);
    ok = ok && dense == dense.transpose();
    for (Index i = 0; i < dense.rows(); ++i) {
      worst_row = std::max(worst_row, std::abs(dense.row(i).sum()));
      ok = ok && dense(i, i) >= 0.0;
      for (Index j = 0; j < dense.cols(); ++j) ok = ok && (i == j || dense(i, j) <= 0.0);
    }
    const FieldD x = random_field(rng, inst.mesh.size(), -1.0, 1.0);
    worst_psd = std::max(worst_psd, -x.dot(a * x) / x.squaredNorm());
  }
  std::ostringstream os;
  os << cases << " cases, symmetric+sign pattern " << (ok ? "ok" : "VIOLATED") << ", worst |row sum| "
     << format_double(worst_row) << ", worst -x'Ax/|x|^2 " << format_double(worst_psd);
  return {"stiffness symmetric, zero row sums, M-matrix signs, PSD", ok && worst_row <= 1e-12 && worst_psd <= 1e-12,
          os.str()};
}

CheckResult check_markov_positivity(int cases, std::uint64_t seed) {
  Rng rng(seed);
  std::bernoulli_distribution zero(0.3);
  double worst = 0.0;
  for (int c = 0; c < cases; ++c) {
    const auto inst = random_instance(rng);
    const ShiftedSolverD solver(assemble_mass(inst.mesh), assemble_stiffness(inst.mesh), inst.tau);
    FieldD x = random_field(rng, inst.mesh.size(), 0.0, 10.0);
    for (Index k = 0; k < x.size(); ++k)
      if (zero(rng)) x[k] = 0.0;
    worst = std::max(worst, -solver.apply_markov(x).minCoeff());
  }
  return verdict("(M + tau A)^{-1} M preserves nonnegativity", worst, 1e-12, cases, "negative part");
}

CheckResult check_markov_fixes_constants(int cases, std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> level(-5.0, 5.0);
  double worst = 0.0;
  for (int c = 0; c < cases; ++c) {
    const auto inst = random_instance(rng);
    const ShiftedSolverD solver(assemble_mass(inst.mesh), assemble_stiffness(inst.mesh), inst.tau);
    const double value = c == 0 ? 1.0 : level(rng);
    const FieldD x = FieldD::Constant(inst.mesh.size(), value);
    worst = std::max(worst, (solver.apply_markov(x) - x).lpNorm<Eigen::Infinity>() / std::max(1.0, std::abs(value)));
  }
  return verdict("(M + tau A)^{-1} M fixes constant fields", worst, 1e-10, cases, "relative deviation");
}

CheckResult check_mass_conservation(int cases, std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (int c = 0; c < cases; ++c) {
    const auto inst = random_instance(rng);
    const auto mass = assemble_mass(inst.mesh);
    const ShiftedSolverD solver(mass, assemble_stiffness(inst.mesh), inst.tau);
    const FieldD x = random_field(rng, inst.mesh.size(), -3.0, 3.0);
    const FieldD y = solver.apply_markov(x);
    const double scale = mass.diagonal().dot(x.cwiseAbs());
    worst = std::max(worst, std::abs(mass.diagonal().dot(y) - mass.diagonal().dot(x)) / scale);
  }
  return verdict("(M + tau A)^{-1} M conserves mass", worst, 1e-10, cases, "relative mass defect");
}

CheckResult check_markov_nonexpansive(int cases, std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (int c = 0; c < cases; ++c) {
    const auto inst = random_instance(rng);
    const auto mass = assemble_mass(inst.mesh);
    const ShiftedSolverD solver(mass, assemble_stiffness(inst.mesh), inst.tau);
    const FieldD d = random_field(rng, inst.mesh.size(), -3.0, 3.0) - random_field(rng, inst.mesh.size(), -3.0, 3.0);
    const FieldD md = solver.apply_markov(d);
    const double before = std::sqrt(d.dot(mass * d));
    const double after = std::sqrt(md.dot(mass * md));
    worst = std::max(worst, (after - before) / before);
  }
  return verdict("(M + tau A)^{-1} M is nonexpansive in the M-norm", worst, 1e-10, cases, "relative expansion");
}

CheckResult check_resolvent_inverse(int cases, std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> value(-5.0, 6.0);
  double worst = 0.0;
  bool monotone = true;
  for (int c = 0; c < cases; ++c) {
    const double tau = log_uniform(rng, 1e-4, 1.0);
    const double eps = log_uniform(rng, 1e-4, 1.0);
    const double r = c % 10 == 0 ? double(c / 10 % 2) : value(rng);
    const double s = value(rng);
    const double x = resolvent(r, tau, eps);
    // above 1, rounding x costs a factor 1 + tau/eps in the image
    const double conditioning = x > 1.0 ? 1.0 + tau / eps : 1.0;
    worst = std::max(worst, std::abs(x + tau * psi_eps(x, eps) - r) / (std::max(1.0, std::abs(r)) * conditioning));
    monotone = monotone && ((r <= s) == (x <= resolvent(s, tau, eps)) || r == s);
  }
  CheckResult out = verdict("resolvent inverts I + tau psi_eps and is monotone", worst, 1e-13, cases, "defect");
  out.passed = out.passed && monotone;
  if (!monotone) out.detail += ", monotonicity VIOLATED";
  return out;
}

CheckResult check_constant_propagation(int cases, std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> level(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  double worst = 0.0;
  for (int c = 0; c < cases; ++c) {
    const auto inst = random_instance(rng);
    const TimeStepper<double> split(inst.mesh, params_for(inst, Variant::splitting));
    const TimeStepper<double> coupled = split.with_variant(Variant::coupled);
    FieldD u = FieldD::Constant(inst.mesh.size(), level(rng));
    FieldD v = u;
    for (int n = 0; n < 4; ++n) {
      const double dw = std::sqrt(inst.tau) * normal(rng);
      u = split.step(u, dw);
      v = coupled.step(v, dw);
      worst = std::max({worst, spread(u), spread(v), (u - v).lpNorm<Eigen::Infinity>()});
    }
  }
  return verdict("constant data stays constant (splitting = coupled)", worst, 1e-10, cases, "spread");
}

CheckResult check_fixed_points(int cases, std::uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  double worst = 0.0;
  for (int c = 0; c < cases; ++c) {
    const auto inst = random_instance(rng);
    const TimeStepper<double> split(inst.mesh, params_for(inst, Variant::splitting));
    const TimeStepper<double> coupled = split.with_variant(Variant::coupled);
    const double level = c % 2 == 0 ? 0.0 : 1.0;
    FieldD u = FieldD::Constant(inst.mesh.size(), level);
    FieldD v = u;
    for (int n = 0; n < 4; ++n) {
      const double dw = std::sqrt(inst.tau) * normal(rng);
      u = split.step(u, dw);
      v = coupled.step(v, dw);
      worst = std::max({worst, (u.array() - level).abs().maxCoeff(), (v.array() - level).abs().maxCoeff()});
    }
  }
  return verdict("c in {0,1} is stationary", worst, 1e-12, cases, "deviation");
}

CheckResult check_sign_trapping(int cases, std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (int c = 0; c < cases; ++c) {
    const auto inst = random_instance(rng);
    const TimeStepper<double> split(inst.mesh, params_for(inst, Variant::splitting));
    if (c % 2 == 0) {
      FieldD u = random_field(rng, inst.mesh.size(), -2.0, 0.0);
      for (int n = 0; n < 3; ++n) {
        u = split.step(u, inst.increment);
        worst = std::max(worst, u.maxCoeff());
      }
    } else {
      FieldD u = random_field(rng, inst.mesh.size(), 1.0, 3.0);
      for (int n = 0; n < 3; ++n) {
        u = split.step(u, inst.increment);
        worst = std::max(worst, 1.0 - u.minCoeff());
      }
    }
  }
  return verdict("fields <= 0 stay <= 0 and fields >= 1 stay >= 1", worst, 1e-10, cases, "excursion");
}

CheckResult check_golden_tables() {
  const TableReport report = reproduce_golden_tables(golden_quarter_path(), golden_epsilon());
  std::ostringstream os;
  for (const auto& t : report.tables) os << t.name << " max dev " << format_double(t.max_deviation) << "; ";
  return {"reference tables reproduced", report.max_deviation <= 1e-5, os.str()};
}

std::vector<CheckResult> run_validation_suite(int cases, std::uint64_t seed) {
  return {check_golden_tables(),
          check_stiffness_properties(cases, seed),
          check_markov_positivity(cases, seed + 1),
          check_markov_fixes_constants(cases, seed + 2),
          check_mass_conservation(cases, seed + 3),
          check_markov_nonexpansive(cases, seed + 4),
          check_resolvent_inverse(cases, seed + 5),
          check_constant_propagation(cases, seed + 6),
          check_fixed_points(cases, seed + 7),
          check_sign_trapping(cases, seed + 8)};
}

}  // namespace sacfv
