// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any criterion fails.

#include <chrono>
#include <cmath>
#include <iostream>
#include <sstream>
#include <string>

#include "sacfv/experiments.hpp"
#include "sacfv/golden.hpp"
#include "sacfv/io.hpp"
#include "sacfv/validation.hpp"

using namespace sacfv;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

int failures = 0;

void verdict(const std::string& id, bool passed, const std::string& detail) {
  if (!passed) ++failures;
  std::cout << (passed ? "PASS " : "FAIL ") << id << ": " << detail << std::endl;
}

void info(const std::string& id, const std::string& detail) { std::cout << "INFO " << id << ": " << detail << std::endl; }

void golden_tables_criterion() {
  const auto start = Clock::now();
  const TableReport report = reproduce_golden_tables(golden_quarter_path(), golden_epsilon());
  const double elapsed = seconds_since(start);
  std::ostringstream os;
  for (const auto& t : report.tables) os << t.name << " " << format_double(t.max_deviation) << "; ";
  os << "time " << elapsed << " s";
  verdict("1 reference tables within 1e-5 in under 1 s", report.max_deviation <= 1e-5 && elapsed < 1.0, os.str());

  const TableReport cubic = reproduce_golden_tables(golden_quarter_path(), EpsilonSchedule::power(0.1, 3.0));
  info("1 eps = 0.1 tau^3 instead of 0.1 tau^(1/3)", "max dev " + format_double(cubic.max_deviation));
}

void matrix_criterion() {
  const auto start = Clock::now();
  const int cases = 1000;
  const std::uint64_t seed = 20240601;
  const CheckResult checks[] = {check_stiffness_properties(cases, seed), check_markov_positivity(cases, seed + 1),
                                check_markov_fixes_constants(cases, seed + 2), check_mass_conservation(cases, seed + 3),
                                check_markov_nonexpansive(cases, seed + 4), check_resolvent_inverse(cases, seed + 5)};
  const double elapsed = seconds_since(start);
  bool ok = elapsed < 10.0;
  std::ostringstream os;
  for (const auto& c : checks) {
    ok = ok && c.passed;
    os << (c.passed ? "" : "[failed] ") << c.name << " (" << c.detail << "); ";
  }
  os << "time " << elapsed << " s";
  verdict("2 operator and resolvent properties on 1000 random instances in under 10 s", ok, os.str());
}

void structure_criterion() {
  const int cases = 200;
  const std::uint64_t seed = 777;
  const CheckResult checks[] = {check_constant_propagation(cases, seed), check_fixed_points(cases, seed + 1),
                                check_sign_trapping(cases, seed + 2)};
  bool ok = true;
  std::ostringstream os;
  for (const auto& c : checks) {
    ok = ok && c.passed;
    os << (c.passed ? "" : "[failed] ") << c.name << " (" << c.detail << "); ";
  }
  verdict("3 structural properties of the scheme on 200 random instances", ok, os.str());
}

std::string describe(const ErrorCurve& curve) {
  std::ostringstream os;
  os << "a=" << curve.amplitude << " slope " << format_double(curve.fit.slope) << " [";
  for (const auto& p : curve.points) os << " N=" << p.steps << ":" << format_double(p.error);
  os << " ]";
  return os.str();
}

void splitting_error_criterion() {
  StudyConfig c;
  c.cells_per_axis = c.reference_cells_per_axis = 4;
  c.fine_steps = 256;
  c.step_list = {16, 32, 64, 128, 256};
  c.paths = 100;
  c.epsilon = EpsilonSchedule::fixed(0.05);
  c.seed = 4;
  const double amplitude = 13.0;
  const ErrorCurve curve = splitting_error_study(c, amplitude);
  const double m = curve.fit.slope;
  verdict("4 coupled vs splitting deviation order in [0.8, 1.3] (eps = 0.05)", m >= 0.8 && m <= 1.3, describe(curve));
}

void convergence_criterion() {
  StudyConfig c;
  c.cells_per_axis = c.reference_cells_per_axis = 4;
  c.fine_steps = 4032;
  c.step_list = {42, 56, 84, 112, 168, 252, 336, 504};
  c.paths = 200;
  c.epsilon = EpsilonSchedule::power(0.1, 0.4);
  c.seed = 2024;
  for (double a : {1.0, 5.0}) {
    const ErrorCurve curve = estimate_error_curve(c, a);
    const double m = curve.fit.slope;
    verdict("5 time convergence order in [0.8, 1.3] at a=" + format_double(a), m >= 0.8 && m <= 1.3, describe(curve));
  }
  const ErrorCurve strong = estimate_error_curve(c, 60.0);
  verdict("5 order degrades below 0.6 at a=60", strong.fit.slope < 0.6, describe(strong));
}

void drift_criterion() {
  StudyConfig c;
  c.cells_per_axis = c.reference_cells_per_axis = 5;
  c.steps = 512;
  c.paths = 1000;
  c.checkpoints = {2};
  c.epsilon = EpsilonSchedule::power(0.1, 0.4);
  c.seed = 99;
  double previous = -1.0;
  bool increasing = true;
  double initial = 0.0;
  std::ostringstream os;
  for (double a : {1.0, 3.0, 10.0, 40.0}) {
    const ExpectationResult r = estimate_expectation(c, a);
    initial = r.initial_mean;
    const double d = r.points.front().absdiff;
    increasing = increasing && d > previous;
    previous = d;
    os << "a=" << a << " |E(u0)-E(u2)|=" << format_double(d) << "; ";
  }
  os << "E(u0)=" << format_double(initial);
  const bool initial_ok = std::abs(initial - 0.29333333) <= 1e-7;
  verdict("6 mean drift at n=2 strictly increasing in a, E(u0)=0.29333333", increasing && initial_ok, os.str());
}

}  // namespace

int main() {
  try {
    golden_tables_criterion();
    matrix_criterion();
    structure_criterion();
    splitting_error_criterion();
    convergence_criterion();
    drift_criterion();
    info("7 paper-scale runs", "not executed here; use the CLI with --preset paper");
  } catch (const std::exception& e) {
    std::cout << "FAIL aborted: " << e.what() << std::endl;
    return 1;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
