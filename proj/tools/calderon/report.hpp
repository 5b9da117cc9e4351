#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace calderon::cli {

struct Check {
  std::string id;  // invariant identifier, e.g. dtn.hermitian
  double value = 0.0;
  double limit = 0.0;
  bool pass = false;
};

struct StageRecord {
  std::string name;
  double wall_seconds = 0.0;
  std::vector<std::pair<std::string, double>> metrics;
  std::vector<Check> checks;
  std::string error;  // set when the stage threw

  void metric(const std::string& key, double value) { metrics.emplace_back(key, value); }
  // pass iff value <= limit
  void check_le(const std::string& id, double value, double limit);
  void check_ge(const std::string& id, double value, double limit);
  void check(const std::string& id, bool ok);
  bool passed() const;
};

class RunReport {
 public:
  explicit RunReport(std::string scenario = {}) : scenario_(std::move(scenario)) {}

  // Runs body as a new stage, timing it and catching library errors into
  // the record. Stage names must be unique.
  StageRecord& run(const std::string& name, const std::function<void(StageRecord&)>& body);
  void merge(const RunReport& other, const std::string& prefix);

  const std::vector<StageRecord>& stages() const noexcept { return stages_; }
  const std::string& scenario() const noexcept { return scenario_; }
  bool passed() const;
  std::vector<std::string> failures() const;

  // Deterministic text: no wall times.
  std::string to_text() const;
  std::string timing_text() const;
  void write(const std::filesystem::path& dir) const;

 private:
  std::string scenario_;
  std::vector<StageRecord> stages_;
};

}  // namespace calderon::cli
