#ifndef SACFV_CONFIG_HPP
#define SACFV_CONFIG_HPP

#include <filesystem>
#include <string>
#include <string_view>

#include "sacfv/experiments.hpp"

namespace sacfv {

enum class Preset { desk, paper };

Preset parse_preset(std::string_view name);

/// Everything a CLI run needs: the study parameters plus file locations.
struct RunConfig {
  std::string command;
  StudyConfig study;
  std::filesystem::path path_file;
  std::filesystem::path out_dir = "out";
};

/// Defaults for a command at desk or paper scale.
RunConfig preset_config(std::string_view command, Preset preset);

/// Applies flat "key = value" lines ('#' starts a comment). Lists are comma separated.
/// Relative path_file / out_dir values are resolved against base_dir.
/// Known keys: domain_half_width, T, L, L_max, N, N_max, N_list, N_p, a, eps_rule, eps_c,
/// eps_p, seed, variant, checkpoints, path_file, out_dir.
void apply_config_text(RunConfig& config, std::string_view text, const std::filesystem::path& base_dir = {});

/// Reads and applies a config file; ConfigError if it cannot be opened.
void apply_config_file(RunConfig& config, const std::filesystem::path& file);

/// Normalized key = value listing of the effective configuration (out_dir excluded).
std::string canonical_text(const RunConfig& config);

/// 16 hex digits of FNV-1a over canonical_text.
std::string run_identifier(const RunConfig& config);

}  // namespace sacfv

#endif  // SACFV_CONFIG_HPP
