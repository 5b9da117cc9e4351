#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "calderon/dtn.hpp"
#include "calderon/error.hpp"
#include "commands.hpp"
#include "config.hpp"
#include "report.hpp"

using namespace calderon;
using namespace calderon::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "calderon_unit_cli" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("config round trips through text") {
  RunConfig c;
  c.scenario = "shear";
  c.sigma = "constant 2 1 2";
  c.mesh_h = 0.013;
  c.kschedule = {1.5, 3.0};
  c.tol = 1e-3;
  c.seed = 42;
  CHECK(parse_config_text(c.to_text()) == c);
}

TEST_CASE("includes and overrides") {
  const fs::path dir = scratch("include");
  std::ofstream(dir / "common.cfg") << "modes = 5\nsigma = isotropic 2\n";
  std::ofstream(dir / "run.cfg") << "# scenario\ninclude common.cfg\nmodes = 7\n";
  const RunConfig c = load_config(dir / "run.cfg");
  CHECK(c.modes == 7);
  CHECK(c.sigma == "isotropic 2");
}

TEST_CASE("include cycles are rejected") {
  const fs::path dir = scratch("cycle");
  std::ofstream(dir / "a.cfg") << "include b.cfg\n";
  std::ofstream(dir / "b.cfg") << "include a.cfg\n";
  CHECK_THROWS_AS(load_config(dir / "a.cfg"), InvalidInput);
}

TEST_CASE("unknown keys are rejected") { CHECK_THROWS_AS(parse_config_text("colour = red\n"), InvalidInput); }

TEST_CASE("validation lists every problem") {
  RunConfig c;
  c.grid_n = 100;
  c.modes = 0;
  c.geometry = "torus";
  CHECK(c.problems().size() == 3);
}

TEST_CASE("missing sigma file is named") {
  RunConfig c;
  c.sigma = "file nowhere/sigma";
  const auto p = c.problems();
  REQUIRE(p.size() == 1);
  CHECK(p[0].find("nowhere/sigma") != std::string::npos);
}

TEST_CASE("degenerate sigma is rejected at validation") {
  RunConfig c;
  c.sigma = "constant 1 1 1";
  CHECK_FALSE(c.problems().empty());
}

TEST_CASE("stage names are unique") {
  RunReport r("x");
  r.run("a", [](StageRecord& s) { s.check_le("a.ok", 0.0, 1.0); });
  CHECK_THROWS_AS(r.run("a", [](StageRecord&) {}), InvalidInput);
  CHECK(r.passed());
  r.run("b", [](StageRecord&) { throw NumericalFailure("boom"); });
  CHECK_FALSE(r.passed());
  CHECK(r.failures().front() == "b.error: boom");
}

TEST_CASE("forward-dtn reproduces diag(|n|) and is deterministic") {
  RunConfig c;
  c.mesh_h = 0.1;
  c.modes = 3;
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  const RunReport ra = cmd_forward_dtn(c, a);
  const RunReport rb = cmd_forward_dtn(c, b);
  CHECK(ra.passed());
  CHECK(slurp(a / "dtn.csv") == slurp(b / "dtn.csv"));
  CHECK(ra.to_text() == rb.to_text());
  const dtn::DtnMatrix l = dtn::read_dtn_csv(a / "dtn.csv");
  CHECK(std::abs(l(2, 2) - 2.0) < 0.05);
}

TEST_CASE("corrupted sigma file fails with a named invariant") {
  const fs::path dir = scratch("corrupt");
  std::ofstream(dir / "sigma.meta") << "garbage\n";
  std::ofstream(dir / "sigma.bin") << "xx";
  RunConfig c;
  c.sigma = "file sigma";
  c.base_dir = dir;
  c.mesh_h = 0.1;
  c.modes = 2;
  const RunReport r = cmd_forward_dtn(c, scratch("corrupt_out"));
  CHECK_FALSE(r.passed());
  CHECK(r.failures().front().rfind("load.error", 0) == 0);
}
