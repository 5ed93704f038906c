#ifndef SACFV_GOLDEN_HPP
#define SACFV_GOLDEN_HPP

#include <string>
#include <vector>

#include "sacfv/mesh.hpp"
#include "sacfv/noise.hpp"
#include "sacfv/scheme.hpp"

namespace sacfv {

/// One published table of iterates on the 2 x 2 mesh.
struct GoldenTable {
  std::string name;
  Variant variant;
  Index steps;                       // N
  std::vector<std::vector<double>> rows;  // row n-1 holds u^n
};

/// The three reference tables (splitting N=2, heat N=2, splitting N=4), 8 decimals.
const std::vector<GoldenTable>& golden_tables();

/// Quarter-interval Brownian increments that drive the reference tables (T = 1).
NoisePath golden_quarter_path();

/// Initial cell averages on the 2 x 2 mesh, 8 decimals.
const std::vector<double>& golden_initial_field();

struct TableReproduction {
  std::string name;
  std::vector<FieldD> computed;  // u^1 .. u^N
  double max_deviation;
};

struct TableReport {
  std::vector<TableReproduction> tables;
  double max_deviation;
};

/// Recomputes every golden table from the given path (L = 2, a = amplitude).
TableReport reproduce_golden_tables(const NoisePath& path, const EpsilonSchedule& epsilon, double amplitude = 10.0);

/// Epsilon rule under which the published tables are reproduced: 0.1 * tau^(1/3).
EpsilonSchedule golden_epsilon();

}  // namespace sacfv

#endif  // SACFV_GOLDEN_HPP
