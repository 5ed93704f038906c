#include "sacfv/config.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <vector>

#include "sacfv/io.hpp"

namespace sacfv {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = s.find(',');
    const auto item = trim(s.substr(0, comma));
    if (!item.empty()) out.push_back(item);
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

double parse_real(std::string_view key, std::string_view text) {
  // Accepts plain decimals and simple fractions such as 1/3.
  const auto slash = text.find('/');
  if (slash != std::string_view::npos) {
    return parse_real(key, trim(text.substr(0, slash))) / parse_real(key, trim(text.substr(slash + 1)));
  }
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw ConfigError("key '" + std::string(key) + "': '" + std::string(text) + "' is not a number");
  }
  return v;
}

template <typename Int>
Int parse_int(std::string_view key, std::string_view text) {
  Int v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw ConfigError("key '" + std::string(key) + "': '" + std::string(text) + "' is not an integer");
  }
  return v;
}

std::vector<Index> parse_index_list(std::string_view key, std::string_view text) {
  std::vector<Index> out;
  for (auto item : split_list(text)) out.push_back(parse_int<Index>(key, item));
  return out;
}

std::filesystem::path resolve(const std::filesystem::path& base, std::string_view value) {
  std::filesystem::path p{std::string(value)};
  return p.is_relative() && !base.empty() ? base / p : p;
}

void apply_entry(RunConfig& config, std::string_view key, std::string_view value,
                 const std::filesystem::path& base_dir) {
  auto& s = config.study;
  if (key == "domain_half_width") {
    s.half_width = parse_real(key, value);
  } else if (key == "T") {
    s.horizon = parse_real(key, value);
  } else if (key == "L") {
    s.cells_per_axis = s.reference_cells_per_axis = parse_int<Index>(key, value);
  } else if (key == "L_max") {
    s.reference_cells_per_axis = parse_int<Index>(key, value);
  } else if (key == "N") {
    s.steps = parse_int<Index>(key, value);
  } else if (key == "N_max") {
    s.fine_steps = parse_int<Index>(key, value);
  } else if (key == "N_list") {
    s.step_list = parse_index_list(key, value);
  } else if (key == "N_p") {
    s.paths = parse_int<Index>(key, value);
  } else if (key == "a") {
    s.amplitudes.clear();
    for (auto item : split_list(value)) s.amplitudes.push_back(parse_real(key, item));
  } else if (key == "eps_rule") {
    if (value == "fixed") {
      s.epsilon.rule = EpsilonSchedule::Rule::fixed;
    } else if (value == "power") {
      s.epsilon.rule = EpsilonSchedule::Rule::power;
    } else {
      throw ConfigError("eps_rule must be 'fixed' or 'power', got '" + std::string(value) + "'");
    }
  } else if (key == "eps_c") {
    s.epsilon.coefficient = parse_real(key, value);
  } else if (key == "eps_p") {
    s.epsilon.exponent = parse_real(key, value);
  } else if (key == "seed") {
    s.seed = parse_int<std::uint64_t>(key, value);
  } else if (key == "variant") {
    s.variant = parse_variant(value);
  } else if (key == "checkpoints") {
    s.checkpoints = parse_index_list(key, value);
  } else if (key == "path_file") {
    config.path_file = resolve(base_dir, value);
  } else if (key == "out_dir") {
    config.out_dir = resolve(base_dir, value);
  } else {
    throw ConfigError("unknown configuration key '" + std::string(key) + "'");
  }
}

std::string join(const std::vector<Index>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out;
}

}  // namespace

Preset parse_preset(std::string_view name) {
  if (name == "desk") return Preset::desk;
  if (name == "paper") return Preset::paper;
  throw ConfigError("unknown preset '" + std::string(name) + "' (expected desk or paper)");
}

RunConfig preset_config(std::string_view command, Preset preset) {
  RunConfig c;
  c.command = std::string(command);
  auto& s = c.study;
  const bool paper = preset == Preset::paper;
  if (command == "table-repro") {
    s.cells_per_axis = s.reference_cells_per_axis = 2;
    s.steps = 4;
    s.fine_steps = 4;
    s.step_list = {2, 4};
    s.amplitudes = {10.0};
    s.epsilon = EpsilonSchedule::power(0.1, 1.0 / 3.0);
  } else if (command == "simulate") {
    s.cells_per_axis = s.reference_cells_per_axis = paper ? 16 : 4;
    s.steps = s.fine_steps = paper ? 40320 : 64;
    s.amplitudes = {10.0};
  } else if (command == "expectation") {
    s.cells_per_axis = s.reference_cells_per_axis = 5;
    s.steps = s.fine_steps = paper ? 2048 : 512;
    s.paths = paper ? 3000 : 1000;
    s.amplitudes = {1.0, 3.0, 10.0, 40.0};
    s.checkpoints = {2, 64, s.steps};
  } else if (command == "convergence") {
    s.cells_per_axis = s.reference_cells_per_axis = 4;
    if (paper) {
      s.fine_steps = 40320;
      s.step_list = {210, 280, 360, 504, 630, 840, 1008, 1260, 1680, 2520, 3360, 4032, 5040};
      s.paths = 9000;
    } else {
      s.fine_steps = 4032;
      s.step_list = {42, 56, 84, 112, 168, 252, 336, 504};
      s.paths = 200;
    }
    s.steps = s.fine_steps;
    s.amplitudes = {1.0, 5.0, 30.0, 60.0};
  } else if (command == "splitting-error") {
    s.cells_per_axis = s.reference_cells_per_axis = 4;
    s.epsilon = EpsilonSchedule::fixed(0.05);
    if (paper) {
      s.fine_steps = 1024;
      s.step_list = {16, 32, 64, 128, 256, 512, 1024};
      s.paths = 1000;
    } else {
      s.fine_steps = 256;
      s.step_list = {16, 32, 64, 128, 256};
      s.paths = 100;
    }
    s.steps = s.fine_steps;
    // Large enough that iterates leave [0,1] at every tau, small enough that paths do not decorrelate.
    s.amplitudes = {13.0};
  } else if (command == "validate") {
    s.paths = paper ? 1000 : 200;
  } else {
    throw ConfigError("unknown command '" + std::string(command) + "'");
  }
  return c;
}

void apply_config_text(RunConfig& config, std::string_view text, const std::filesystem::path& base_dir) {
  int line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    apply_entry(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)), base_dir);
  }
}

void apply_config_file(RunConfig& config, const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open config file '" + file.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  apply_config_text(config, buf.str(), file.parent_path());
}

std::string canonical_text(const RunConfig& config) {
  const auto& s = config.study;
  std::ostringstream os;
  os << "command = " << config.command << '\n';
  os << "domain_half_width = " << format_double(s.half_width) << '\n';
  os << "T = " << format_double(s.horizon) << '\n';
  os << "L = " << s.cells_per_axis << '\n';
  os << "L_max = " << s.reference_cells_per_axis << '\n';
  os << "N = " << s.steps << '\n';
  os << "N_max = " << s.fine_steps << '\n';
  os << "N_list = " << join(s.step_list) << '\n';
  os << "N_p = " << s.paths << '\n';
  os << "a = ";
  for (std::size_t i = 0; i < s.amplitudes.size(); ++i) os << (i ? "," : "") << format_double(s.amplitudes[i]);
  os << '\n';
  os << "eps_rule = " << (s.epsilon.rule == EpsilonSchedule::Rule::fixed ? "fixed" : "power") << '\n';
  os << "eps_c = " << format_double(s.epsilon.coefficient) << '\n';
  os << "eps_p = " << format_double(s.epsilon.exponent) << '\n';
  os << "seed = " << s.seed << '\n';
  os << "variant = " << to_string(s.variant) << '\n';
  os << "checkpoints = " << join(s.checkpoints) << '\n';
  os << "path_file = " << config.path_file.generic_string() << '\n';
  return os.str();
}

std::string run_identifier(const RunConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : canonical_text(config)) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  static const char* digits = "0123456789abcdef";
  for (int i = 15; i >= 0; --i, h >>= 4) buf[i] = digits[h & 0xf];
  buf[16] = '\0';
  return buf;
}

}  // namespace sacfv
