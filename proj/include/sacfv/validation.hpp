#ifndef SACFV_VALIDATION_HPP
#define SACFV_VALIDATION_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace sacfv {

struct CheckResult {
  std::string name;
  bool passed;
  std::string detail;
};

/// Randomized invariant checks. Each draws `cases` instances over meshes L = 1..8 from a
/// generator seeded with `seed`.
CheckResult check_stiffness_properties(int cases, std::uint64_t seed);
CheckResult check_markov_positivity(int cases, std::uint64_t seed);
CheckResult check_markov_fixes_constants(int cases, std::uint64_t seed);
CheckResult check_mass_conservation(int cases, std::uint64_t seed);
CheckResult check_markov_nonexpansive(int cases, std::uint64_t seed);
CheckResult check_resolvent_inverse(int cases, std::uint64_t seed);

/// Spatially constant data stays spatially constant (splitting and coupled steppers).
CheckResult check_constant_propagation(int cases, std::uint64_t seed);
/// c in {0, 1} with g(c) = 0 is stationary for both steppers.
CheckResult check_fixed_points(int cases, std::uint64_t seed);
/// Fields <= 0 (or >= 1) stay <= 0 (>= 1) under the splitting step.
CheckResult check_sign_trapping(int cases, std::uint64_t seed);

/// Reference tables from the embedded quarter path.
CheckResult check_golden_tables();

/// Everything above at the given case count.
std::vector<CheckResult> run_validation_suite(int cases, std::uint64_t seed);

}  // namespace sacfv

#endif  // SACFV_VALIDATION_HPP
