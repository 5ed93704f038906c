#ifndef SACFV_IO_HPP
#define SACFV_IO_HPP

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "sacfv/experiments.hpp"
#include "sacfv/mesh.hpp"
#include "sacfv/noise.hpp"
#include "sacfv/scheme.hpp"

namespace sacfv {

/// Locale-independent shortest text that round-trips exactly.
std::string format_double(double value);

void write_mesh_csv(std::ostream& os, const MeshD& mesh);

/// Header "dW", then one fine increment per row.
void write_noise_path_csv(std::ostream& os, const NoisePath& path);

/// Reads increments written by write_noise_path_csv (header optional, '#' comments ignored).
/// Throws ConfigError if the file cannot be opened or holds no numbers.
NoisePath read_noise_path_csv(const std::filesystem::path& file, double horizon);

/// n,cell,value; includes n = 0 when initial is given.
void write_trajectory_csv(std::ostream& os, const Trajectory<double>& trajectory, const FieldD* initial = nullptr);

/// a,n,N,E,absdiff
void write_expectation_csv(std::ostream& os, const std::vector<ExpectationResult>& results);

/// a,N,tau,E
void write_error_csv(std::ostream& os, const std::vector<ErrorCurve>& curves);

/// a,m,intercept
void write_fit_csv(std::ostream& os, const std::vector<ErrorCurve>& curves);

}  // namespace sacfv

#endif  // SACFV_IO_HPP
