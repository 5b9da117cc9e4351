#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "calderon/error.hpp"
#include "commands.hpp"

namespace fs = std::filesystem;
using namespace calderon::cli;

namespace {

struct Flags {
  std::string config, out, kschedule;
  std::optional<double> tol;
  std::optional<int> modes;
  std::optional<std::uint64_t> seed;
};

void add_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "scenario config file")->check(CLI::ExistingFile);
  sub->add_option("--out", f.out, "output directory");
  sub->add_option("--tol", f.tol, "pipeline tolerance");
  sub->add_option("--modes", f.modes, "Fourier mode cutoff N");
  sub->add_option("--kschedule", f.kschedule, "comma separated k values");
  sub->add_option("--seed", f.seed, "RNG seed");
}

fs::path output_dir(const RunConfig& cfg, const Flags& f) {
  if (!f.out.empty()) return f.out;
  if (!cfg.out.empty()) {
    fs::path p = cfg.out;
    return p.is_relative() && !cfg.base_dir.empty() ? cfg.base_dir / p : p;
  }
  if (const char* root = std::getenv("CALDERON_OUT"); root && *root) return fs::path(root) / cfg.scenario;
  return fs::path("calderon-out") / cfg.scenario;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"calderon: anisotropic conductivity workbench"};
  app.require_subcommand(1);
  struct Entry {
    const char* name;
    const char* help;
    const char* geometry;
    RunReport (*fn)(const RunConfig&, const fs::path&);
  };
  const Entry entries[] = {
      {"forward-dtn", "DtN matrix of sigma on the configured geometry", nullptr, cmd_forward_dtn},
      {"isotropize", "isotropizing map F and the invariance of the DtN", nullptr, cmd_isotropize},
      {"cgo-recover", "recover F outside the disc from the DtN and close the loop", nullptr, cmd_cgo_recover},
      {"partial-data", "Cauchy data on the half disc arc against the reflected full disc", "partial", cmd_partial_data},
      {"halfplane", "half plane DtN through the Moebius chart", "halfplane", cmd_halfplane},
      {"exterior", "exterior problem through the inversion chart", "exterior", cmd_exterior},
      {"verify", "run the invariant suite", nullptr, cmd_verify},
  };
  Flags flags;
  std::vector<std::pair<CLI::App*, const Entry*>> subs;
  for (const Entry& e : entries) {
    CLI::App* sub = app.add_subcommand(e.name, e.help);
    add_flags(sub, flags);
    subs.emplace_back(sub, &e);
  }
  CLI11_PARSE(app, argc, argv);

  const Entry* chosen = nullptr;
  for (auto& [sub, e] : subs)
    if (sub->parsed()) chosen = e;

  RunConfig cfg;
  try {
    if (!flags.config.empty()) cfg = load_config(flags.config);
    if (chosen->geometry) cfg.geometry = chosen->geometry;
    if (flags.tol) cfg.tol = *flags.tol;
    if (flags.modes) cfg.modes = *flags.modes;
    if (flags.seed) cfg.seed = *flags.seed;
    if (!flags.kschedule.empty()) cfg.kschedule = parse_double_list(flags.kschedule);
  } catch (const std::exception& e) {
    std::cerr << "calderon: " << e.what() << "\n";
    return 2;
  }

  const fs::path out = output_dir(cfg, flags);
  const auto problems = cfg.problems();
  RunReport report;
  if (!problems.empty()) {
    if (std::string(chosen->name) != "verify") {
      std::cerr << "calderon: invalid configuration:\n";
      for (const auto& p : problems) std::cerr << "  " << p << "\n";
      return 2;
    }
    report = config_failure_report(cfg, problems);
  } else {
    try {
      report = chosen->fn(cfg, out);
    } catch (const std::exception& e) {
      std::cerr << "calderon: " << chosen->name << ": " << e.what() << "\n";
      return 1;
    }
  }
  fs::create_directories(out);
  std::ofstream(out / "config.txt") << cfg.to_text();
  report.write(out);
  std::cout << report.to_text();
  for (const auto& f : report.failures()) std::cerr << "FAIL " << f << "\n";
  return report.passed() ? 0 : 1;
}
