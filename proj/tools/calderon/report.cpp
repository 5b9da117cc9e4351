#include "report.hpp"

#include <chrono>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "calderon/error.hpp"

namespace calderon::cli {

void StageRecord::check_le(const std::string& id, double value, double limit) {
  checks.push_back({id, value, limit, value <= limit});
}

void StageRecord::check_ge(const std::string& id, double value, double limit) {
  checks.push_back({id, value, limit, value >= limit});
}

void StageRecord::check(const std::string& id, bool ok) { checks.push_back({id, ok ? 1.0 : 0.0, 1.0, ok}); }

bool StageRecord::passed() const {
  if (!error.empty()) return false;
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

StageRecord& RunReport::run(const std::string& name, const std::function<void(StageRecord&)>& body) {
  for (const auto& s : stages_)
    if (s.name == name) throw InvalidInput("report: stage '" + name + "' already recorded");
  stages_.push_back({});
  StageRecord& rec = stages_.back();
  rec.name = name;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(rec);
  } catch (const std::exception& e) {
    rec.error = e.what();
  }
  rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

void RunReport::merge(const RunReport& other, const std::string& prefix) {
  for (StageRecord s : other.stages_) {
    s.name = prefix + s.name;
    for (const auto& mine : stages_)
      if (mine.name == s.name) throw InvalidInput("report: stage '" + s.name + "' already recorded");
    stages_.push_back(std::move(s));
  }
}

bool RunReport::passed() const {
  for (const auto& s : stages_)
    if (!s.passed()) return false;
  return true;
}

std::vector<std::string> RunReport::failures() const {
  std::vector<std::string> out;
  for (const auto& s : stages_) {
    if (!s.error.empty()) out.push_back(s.name + ".error: " + s.error);
    for (const auto& c : s.checks)
      if (!c.pass) out.push_back(s.name + ": " + c.id);
  }
  return out;
}

std::string RunReport::to_text() const {
  std::ostringstream os;
  os << std::setprecision(6);
  os << "scenario = " << scenario_ << "\n";
  os << "verdict = " << (passed() ? "PASS" : "FAIL") << "\n";
  for (const auto& s : stages_) {
    os << "\n[stage " << s.name << "] " << (s.passed() ? "PASS" : "FAIL") << "\n";
    if (!s.error.empty()) os << "error " << s.name << ".error: " << s.error << "\n";
    for (const auto& [k, v] : s.metrics) os << "metric " << k << " = " << v << "\n";
    for (const auto& c : s.checks)
      os << "check " << c.id << " value = " << c.value << " limit = " << c.limit << " " << (c.pass ? "PASS" : "FAIL")
         << "\n";
  }
  return os.str();
}

std::string RunReport::timing_text() const {
  std::ostringstream os;
  os << std::fixed << std::setprecision(3);
  for (const auto& s : stages_) os << s.name << " " << s.wall_seconds << "\n";
  return os.str();
}

void RunReport::write(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "report.txt") << to_text();
  std::ofstream(dir / "timing.txt") << timing_text();
}

}  // namespace calderon::cli
