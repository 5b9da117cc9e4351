#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace calderon::cli {

// One scenario. Text form is line oriented:
//
//   # comment
//   include common.cfg
//   sigma = constant 4 0 1
//
// Later assignments override earlier ones; includes resolve against the
// including file.
struct RunConfig {
  std::string scenario = "default";
  std::string geometry = "disc";  // disc, halfplane, exterior, partial
  std::string sigma = "identity";
  int grid_n = 256;
  double grid_half_width = 2.0;
  double mesh_h = 0.02;
  int modes = 8;
  std::vector<double> kschedule{1.0, 2.0, 4.0, 8.0};
  double tol = 0.05;
  double cgo_h = 0.01;
  int cgo_modes = 40;
  std::string out;
  std::uint64_t seed = 0;

  // Directory used for relative paths in sigma; not serialized.
  std::filesystem::path base_dir;

  std::string to_text() const;
  // Every problem found, one per line; empty when valid.
  std::vector<std::string> problems() const;
  // Throws InvalidInput listing all problems.
  void validate() const;

  bool operator==(const RunConfig& o) const;
};

RunConfig parse_config_text(const std::string& text, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

std::vector<double> parse_double_list(const std::string& text);
std::string format_double(double x);

}  // namespace calderon::cli
