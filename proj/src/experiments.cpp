#include "sacfv/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

namespace sacfv {

void StudyConfig::validate() const {
  if (!(half_width > 0)) throw ConfigError("domain_half_width must be positive");
  if (!(horizon > 0) || !std::isfinite(horizon)) throw ConfigError("T must be positive and finite");
  if (cells_per_axis < 1) throw ConfigError("L must be at least 1");
  if (reference_cells_per_axis != cells_per_axis) {
    throw ConfigError("only L = L_max is supported for error studies");
  }
  if (steps < 1) throw ConfigError("N must be at least 1");
  if (fine_steps < 1) throw ConfigError("N_max must be at least 1");
  if (paths < 1) throw ConfigError("N_p must be at least 1");
  for (Index n : step_list) {
    if (n < 1 || fine_steps % n != 0) {
      throw ConfigError("N = " + std::to_string(n) + " does not divide N_max = " + std::to_string(fine_steps));
    }
  }
  for (double a : amplitudes) {
    if (!(a >= 0) || !std::isfinite(a)) throw ConfigError("amplitude a must be finite and >= 0");
  }
  for (Index n : checkpoints) {
    if (n < 1 || n > steps) throw ConfigError("checkpoint " + std::to_string(n) + " outside 1..N");
  }
  if (epsilon.rule == EpsilonSchedule::Rule::fixed && !(epsilon.coefficient > 0)) {
    throw ConfigError("fixed epsilon must be positive");
  }
  if (epsilon.rule == EpsilonSchedule::Rule::power && !(epsilon.coefficient > 0)) {
    throw ConfigError("eps_c must be positive");
  }
}

unsigned resolve_workers(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("SACFV_WORKERS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(Index count, unsigned workers, const std::function<void(Index)>& body) {
  workers = std::min<unsigned>(resolve_workers(workers), static_cast<unsigned>(std::max<Index>(count, 1)));
  if (workers <= 1) {
    for (Index i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<Index> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (Index i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = count;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

double pairwise_sum(const double* values, Index count) {
  if (count <= 8) {
    double s = 0.0;
    for (Index i = 0; i < count; ++i) s += values[i];
    return s;
  }
  const Index half = count / 2;
  return pairwise_sum(values, half) + pairwise_sum(values + half, count - half);
}

FieldD initial_field(const MeshD& mesh) { return cell_average(reference_initial_datum<double>(), mesh); }

FieldD study_initial_field(const StudyConfig& config, const MeshD& mesh) {
  if (config.constant_initial) return FieldD::Constant(mesh.size(), *config.constant_initial);
  return initial_field(mesh);
}

double cell_mean(const FieldD& u) { return pairwise_sum(u.data(), u.size()) / double(u.size()); }

namespace {

MeshD study_mesh(const StudyConfig& config) { return build_uniform_mesh<double>(config.cells_per_axis, config.half_width); }

SchemeParams<double> scheme_params(const StudyConfig& config, Index steps, double amplitude, Variant variant) {
  SchemeParams<double> p;
  p.horizon = config.horizon;
  p.steps = steps;
  p.epsilon_schedule = config.epsilon;
  p.amplitude = amplitude;
  p.variant = variant;
  return p;
}

// Mean over paths of values[path * stride + j], for each j.
std::vector<double> path_means(const std::vector<double>& values, Index paths, Index stride) {
  std::vector<double> column(static_cast<std::size_t>(paths));
  std::vector<double> means(static_cast<std::size_t>(stride));
  for (Index j = 0; j < stride; ++j) {
    for (Index i = 0; i < paths; ++i) column[std::size_t(i)] = values[std::size_t(i * stride + j)];
    means[std::size_t(j)] = pairwise_sum(column.data(), paths) / double(paths);
  }
  return means;
}

}  // namespace

ExpectationResult estimate_expectation(const StudyConfig& config, double amplitude) {
  config.validate();
  const MeshD mesh = study_mesh(config);
  const FieldD u0 = study_initial_field(config, mesh);
  std::vector<Index> checkpoints = config.checkpoints;
  if (checkpoints.empty()) checkpoints.push_back(config.steps);
  std::sort(checkpoints.begin(), checkpoints.end());
  checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()), checkpoints.end());
  const Index last = checkpoints.back();
  const Index cells = mesh.size();
  const Index stride = Index(checkpoints.size()) * cells;

  const TimeStepper<double> stepper(mesh, scheme_params(config, config.steps, amplitude, Variant::splitting));
  const double scale = std::sqrt(config.horizon / double(config.steps));

  std::vector<double> samples(std::size_t(config.paths * stride));
  parallel_for(config.paths, config.workers, [&](Index path) {
    FieldD u = u0;
    std::size_t slot = 0;
    for (Index n = 1; n <= last; ++n) {
      const double dw = scale * standard_normal(config.seed, std::uint64_t(path), std::uint64_t(n - 1));
      u = stepper.step(u, dw);
      if (slot < checkpoints.size() && checkpoints[slot] == n) {
        std::copy(u.data(), u.data() + cells, samples.begin() + std::ptrdiff_t(path * stride) +
                                                  std::ptrdiff_t(Index(slot) * cells));
        ++slot;
      }
    }
  });

  const std::vector<double> means = path_means(samples, config.paths, stride);
  ExpectationResult result{amplitude, config.steps, cell_mean(u0), {}};
  for (std::size_t c = 0; c < checkpoints.size(); ++c) {
    ExpectationPoint point;
    point.step = checkpoints[c];
    point.cell_means = Eigen::Map<const FieldD>(means.data() + c * std::size_t(cells), cells);
    point.mean = cell_mean(point.cell_means);
    point.absdiff = std::abs(result.initial_mean - point.mean);
    result.points.push_back(std::move(point));
  }
  return result;
}

ExpectationPoint estimate_expectation(const StudyConfig& config, Index checkpoint, double amplitude) {
  StudyConfig single = config;
  single.checkpoints = {checkpoint};
  return estimate_expectation(single, amplitude).points.front();
}

LinearFit fit_convergence_order(const std::vector<std::pair<double, double>>& tau_error) {
  if (tau_error.size() < 2) throw ConfigError("convergence fit needs at least two points");
  const double n = double(tau_error.size());
  double sx = 0, sy = 0;
  for (const auto& [tau, err] : tau_error) {
    if (!(tau > 0) || !(err > 0)) throw ConfigError("convergence fit needs positive tau and error");
    sx += std::log(tau);
    sy += std::log(err);
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (const auto& [tau, err] : tau_error) {
    const double dx = std::log(tau) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(err) - my);
  }
  if (sxx <= 1e-300) throw ConfigError("convergence fit needs at least two distinct tau values");
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

namespace {

LinearFit fit_points(const std::vector<CurvePoint>& points) {
  std::vector<std::pair<double, double>> data;
  for (const auto& p : points) {
    if (p.error > 0) data.emplace_back(p.tau, p.error);
  }
  if (data.size() < 2) return {std::nan(""), std::nan("")};
  return fit_convergence_order(data);
}

}  // namespace

ErrorCurve estimate_error_curve(const StudyConfig& config, double amplitude) {
  config.validate();
  if (config.step_list.empty()) throw ConfigError("N_list must not be empty");
  const MeshD mesh = study_mesh(config);
  const FieldD u0 = study_initial_field(config, mesh);
  const Index count = Index(config.step_list.size());

  const TimeStepper<double> reference(mesh, scheme_params(config, config.fine_steps, amplitude, config.variant));
  std::vector<TimeStepper<double>> coarse;
  for (Index n : config.step_list) coarse.emplace_back(mesh, scheme_params(config, n, amplitude, config.variant));

  std::vector<double> errors(std::size_t(config.paths * count));
  parallel_for(config.paths, config.workers, [&](Index path) {
    const NoisePath noise = sample_path(config.seed, std::uint64_t(path), config.horizon, config.fine_steps);
    const FieldD fine =
        run_trajectory(reference, u0, noise.increments(), TrajectoryStorage::final_only()).final_state();
    for (Index j = 0; j < count; ++j) {
      const Index n = config.step_list[std::size_t(j)];
      const FieldD approx = n == config.fine_steps
                                ? fine
                                : run_trajectory(coarse[std::size_t(j)], u0, aggregate_increments(noise, n),
                                                 TrajectoryStorage::final_only())
                                      .final_state();
      errors[std::size_t(path * count + j)] = squared_l2_distance(fine, approx, mesh);
    }
  });

  const std::vector<double> means = path_means(errors, config.paths, count);
  ErrorCurve curve{amplitude, {}, {}};
  for (Index j = 0; j < count; ++j) {
    const Index n = config.step_list[std::size_t(j)];
    curve.points.push_back({n, config.horizon / double(n), means[std::size_t(j)]});
  }
  curve.fit = fit_points(curve.points);
  return curve;
}

double estimate_error(const StudyConfig& config, Index steps, double amplitude) {
  StudyConfig single = config;
  single.step_list = {steps};
  return estimate_error_curve(single, amplitude).points.front().error;
}

ErrorCurve splitting_error_study(const StudyConfig& config, double amplitude) {
  config.validate();
  if (config.epsilon.rule != EpsilonSchedule::Rule::fixed) {
    throw ConfigError("splitting error study requires a fixed epsilon");
  }
  if (config.step_list.empty()) throw ConfigError("N_list must not be empty");
  const MeshD mesh = study_mesh(config);
  const FieldD u0 = study_initial_field(config, mesh);
  const Index count = Index(config.step_list.size());

  std::vector<TimeStepper<double>> splitting;
  std::vector<TimeStepper<double>> coupled;
  std::vector<Index> offsets{0};
  for (Index n : config.step_list) {
    splitting.emplace_back(mesh, scheme_params(config, n, amplitude, Variant::splitting));
    coupled.emplace_back(mesh, scheme_params(config, n, amplitude, Variant::coupled));
    offsets.push_back(offsets.back() + n);
  }
  const Index stride = offsets.back();

  // Per path and per step n: max_K |u^n_K - u~^n_K|.
  std::vector<double> deviations(std::size_t(config.paths * stride));
  parallel_for(config.paths, config.workers, [&](Index path) {
    const NoisePath noise = sample_path(config.seed, std::uint64_t(path), config.horizon, config.fine_steps);
    for (Index j = 0; j < count; ++j) {
      const Index steps = config.step_list[std::size_t(j)];
      const FieldD dw = aggregate_increments(noise, steps);
      FieldD u = u0;
      FieldD v = u0;
      for (Index n = 1; n <= steps; ++n) {
        u = coupled[std::size_t(j)].step(u, dw[n - 1]);
        v = splitting[std::size_t(j)].step(v, dw[n - 1]);
        deviations[std::size_t(path * stride + offsets[std::size_t(j)] + n - 1)] =
            (u - v).lpNorm<Eigen::Infinity>();
      }
    }
  });

  const std::vector<double> means = path_means(deviations, config.paths, stride);
  ErrorCurve curve{amplitude, {}, {}};
  for (Index j = 0; j < count; ++j) {
    const auto begin = means.begin() + std::ptrdiff_t(offsets[std::size_t(j)]);
    const auto end = means.begin() + std::ptrdiff_t(offsets[std::size_t(j) + 1]);
    const Index n = config.step_list[std::size_t(j)];
    curve.points.push_back({n, config.horizon / double(n), *std::max_element(begin, end)});
  }
  curve.fit = fit_points(curve.points);
  return curve;
}

}  // namespace sacfv
