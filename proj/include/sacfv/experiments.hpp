#ifndef SACFV_EXPERIMENTS_HPP
#define SACFV_EXPERIMENTS_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "sacfv/mesh.hpp"
#include "sacfv/scheme.hpp"

namespace sacfv {

/// Parameters of a Monte Carlo study.
struct StudyConfig {
  double half_width = 1.0;
  double horizon = 1.0;                // T
  Index cells_per_axis = 4;            // L
  Index reference_cells_per_axis = 4;  // L_max, must equal L
  Index steps = 2048;                  // N for single-resolution runs
  Index fine_steps = 4032;             // N_max
  std::vector<Index> step_list;        // N_list
  Index paths = 200;                   // N_p
  std::vector<double> amplitudes{1.0};
  EpsilonSchedule epsilon = EpsilonSchedule::power(0.1, 0.4);
  std::uint64_t seed = 1;
  std::vector<Index> checkpoints;
  Variant variant = Variant::splitting;
  unsigned workers = 0;  // 0: SACFV_WORKERS or hardware concurrency
  // Spatially constant initial value instead of the quartic reference datum.
  std::optional<double> constant_initial;

  /// Throws ConfigError on positivity or divisibility violations.
  void validate() const;
};

/// Worker count: explicit value, else SACFV_WORKERS, else hardware concurrency.
unsigned resolve_workers(unsigned requested);

/// Runs body(i) for i in [0, count) on a pool of workers. Exceptions are rethrown on the caller.
void parallel_for(Index count, unsigned workers, const std::function<void(Index)>& body);

/// Pairwise sum in index order; independent of how the terms were produced.
double pairwise_sum(const double* values, Index count);

/// Quartic reference datum averaged onto the mesh.
FieldD initial_field(const MeshD& mesh);

/// Initial field of a study: constant_initial if set, else initial_field(mesh).
FieldD study_initial_field(const StudyConfig& config, const MeshD& mesh);

/// Unweighted cell mean (1/|T|) sum_K u_K.
double cell_mean(const FieldD& u);

struct ExpectationPoint {
  Index step;          // checkpoint n
  FieldD cell_means;   // E_K
  double mean;         // E(u^n_N)
  double absdiff;      // |E(u^0) - E(u^n_N)|
};

struct ExpectationResult {
  double amplitude;
  Index steps;
  double initial_mean;  // E(u^0)
  std::vector<ExpectationPoint> points;
};

/// Monte Carlo means of the splitting iterates at every configured checkpoint (N = config.steps).
ExpectationResult estimate_expectation(const StudyConfig& config, double amplitude);

/// Single-checkpoint form.
ExpectationPoint estimate_expectation(const StudyConfig& config, Index checkpoint, double amplitude);

struct CurvePoint {
  Index steps;
  double tau;
  double error;
};

struct LinearFit {
  double slope;
  double intercept;
};

/// Least-squares line through (log tau, log E). Needs at least two distinct tau, all values positive.
LinearFit fit_convergence_order(const std::vector<std::pair<double, double>>& tau_error);

struct ErrorCurve {
  double amplitude;
  std::vector<CurvePoint> points;
  LinearFit fit;
};

/// (1/N_p) sum_i || u_{N_max}(omega_i) - u_N(omega_i) ||^2_{L^2}, for each N in config.step_list,
/// both trajectories driven by the same fine path. Fit is over all points with positive error.
ErrorCurve estimate_error_curve(const StudyConfig& config, double amplitude);

double estimate_error(const StudyConfig& config, Index steps, double amplitude);

/// For each N in config.step_list: sup_n E[max_K |u^n_K - u~^n_K|] between the coupled and
/// splitting steppers on shared paths (fine grid config.fine_steps). Epsilon must be fixed.
ErrorCurve splitting_error_study(const StudyConfig& config, double amplitude);

}  // namespace sacfv

#endif  // SACFV_EXPERIMENTS_HPP
