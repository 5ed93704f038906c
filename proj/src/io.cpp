#include "sacfv/io.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

namespace sacfv {

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

void write_mesh_csv(std::ostream& os, const MeshD& mesh) {
  os << "cell,x,y,m_K\n";
  for (Index k = 0; k < mesh.size(); ++k) {
    const auto& c = mesh.cell(k);
    os << k << ',' << format_double(c.center.x()) << ',' << format_double(c.center.y()) << ','
       << format_double(c.measure) << '\n';
  }
}

void write_noise_path_csv(std::ostream& os, const NoisePath& path) {
  os << "dW\n";
  const auto& dw = path.fine_increments();
  for (Index j = 0; j < dw.size(); ++j) os << format_double(dw[j]) << '\n';
}

NoisePath read_noise_path_csv(const std::filesystem::path& file, double horizon) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open path file '" + file.string() + "'");
  std::vector<double> values;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t\r,");
    double v = 0.0;
    const char* begin = line.data() + first;
    const char* end = line.data() + last + 1;
    const auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc() || res.ptr != end) {
      if (values.empty()) continue;  // header
      throw ConfigError("malformed increment '" + line + "' in " + file.string());
    }
    values.push_back(v);
  }
  if (values.empty()) throw ConfigError("path file '" + file.string() + "' holds no increments");
  return NoisePath(Eigen::Map<const FieldD>(values.data(), Index(values.size())), horizon);
}

void write_trajectory_csv(std::ostream& os, const Trajectory<double>& trajectory, const FieldD* initial) {
  os << "n,cell,value\n";
  auto emit = [&](Index n, const FieldD& u) {
    for (Index k = 0; k < u.size(); ++k) os << n << ',' << k << ',' << format_double(u[k]) << '\n';
  };
  if (initial) emit(0, *initial);
  for (std::size_t i = 0; i < trajectory.states.size(); ++i) emit(trajectory.steps[i], trajectory.states[i]);
}

void write_expectation_csv(std::ostream& os, const std::vector<ExpectationResult>& results) {
  os << "a,n,N,E,absdiff\n";
  for (const auto& r : results) {
    for (const auto& p : r.points) {
      os << format_double(r.amplitude) << ',' << p.step << ',' << r.steps << ',' << format_double(p.mean) << ','
         << format_double(p.absdiff) << '\n';
    }
  }
}

void write_error_csv(std::ostream& os, const std::vector<ErrorCurve>& curves) {
  os << "a,N,tau,E\n";
  for (const auto& c : curves) {
    for (const auto& p : c.points) {
      os << format_double(c.amplitude) << ',' << p.steps << ',' << format_double(p.tau) << ','
         << format_double(p.error) << '\n';
    }
  }
}

void write_fit_csv(std::ostream& os, const std::vector<ErrorCurve>& curves) {
  os << "a,m,intercept\n";
  for (const auto& c : curves) {
    os << format_double(c.amplitude) << ',' << format_double(c.fit.slope) << ',' << format_double(c.fit.intercept)
       << '\n';
  }
}

}  // namespace sacfv
