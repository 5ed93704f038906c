#include "sacfv/golden.hpp"

#include <algorithm>
#include <cmath>

namespace sacfv {

const std::vector<GoldenTable>& golden_tables() {
  static const std::vector<GoldenTable> tables = {
      {"table1_splitting_N2",
       Variant::splitting,
       2,
       {{0.39495382, 0.24383317, 0.64814013, 0.38692093}, {-0.23254276, -0.21628772, -0.21627557, -0.23198247}}},
      {"table2_heat_N2",
       Variant::heat,
       2,
       {{0.39495382, 0.24383317, 0.64814013, 0.38692093}, {-1.69747036, -1.57881501, -1.57872628, -1.69338044}}},
      {"table3_splitting_N4",
       Variant::splitting,
       4,
       {{-0.13385192, -0.07727270, -0.10617873, -0.13010620},
        {-0.02478902, -0.01854758, -0.02242615, -0.02428642},
        {-0.00476855, -0.00406696, -0.00458739, -0.00470111},
        {-0.00093698, -0.00085652, -0.00092635, -0.00092793}}},
  };
  return tables;
}

NoisePath golden_quarter_path() {
  FieldD dw(4);
  dw << -0.6046086559049673, 0.6937104821525855, -1.1713571186231886, 0.24606633895637547;
  return NoisePath(dw, 1.0);
}

const std::vector<double>& golden_initial_field() {
  static const std::vector<double> u0 = {0.20088542, 0.05244792, 0.72953125, 0.19046875};
  return u0;
}

EpsilonSchedule golden_epsilon() { return EpsilonSchedule::power(0.1, 1.0 / 3.0); }

TableReport reproduce_golden_tables(const NoisePath& path, const EpsilonSchedule& epsilon, double amplitude) {
  const MeshD mesh = build_uniform_mesh<double>(2);
  const FieldD u0 = cell_average(reference_initial_datum<double>(), mesh);
  TableReport report{{}, 0.0};
  for (const auto& table : golden_tables()) {
    SchemeParams<double> params;
    params.horizon = path.horizon();
    params.steps = table.steps;
    params.epsilon_schedule = epsilon;
    params.amplitude = amplitude;
    params.variant = table.variant;
    const TimeStepper<double> stepper(mesh, params);
    const auto trajectory = run_trajectory(stepper, u0, aggregate_increments(path, table.steps));
    TableReproduction rep{table.name, trajectory.states, 0.0};
    for (std::size_t n = 0; n < table.rows.size(); ++n) {
      for (std::size_t k = 0; k < table.rows[n].size(); ++k) {
        rep.max_deviation =
            std::max(rep.max_deviation, std::abs(trajectory.states[n][Index(k)] - table.rows[n][k]));
      }
    }
    report.max_deviation = std::max(report.max_deviation, rep.max_deviation);
    report.tables.push_back(std::move(rep));
  }
  return report;
}

}  // namespace sacfv
