#pragma once

#include <filesystem>

#include "config.hpp"
#include "report.hpp"

namespace calderon::cli {

// Each command writes its artifacts under out and returns the stage records.
// forward-dtn dispatches on geometry.
RunReport cmd_forward_dtn(const RunConfig& cfg, const std::filesystem::path& out);
RunReport cmd_isotropize(const RunConfig& cfg, const std::filesystem::path& out);
RunReport cmd_cgo_recover(const RunConfig& cfg, const std::filesystem::path& out);
RunReport cmd_partial_data(const RunConfig& cfg, const std::filesystem::path& out);
RunReport cmd_halfplane(const RunConfig& cfg, const std::filesystem::path& out);
RunReport cmd_exterior(const RunConfig& cfg, const std::filesystem::path& out);
// Full invariant suite; the configured sigma is one member.
RunReport cmd_verify(const RunConfig& cfg, const std::filesystem::path& out);

// Config problems as a failed stage, for verify.
RunReport config_failure_report(const RunConfig& cfg, const std::vector<std::string>& problems);

}  // namespace calderon::cli
