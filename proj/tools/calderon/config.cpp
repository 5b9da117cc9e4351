#include "config.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "calderon/conductivity.hpp"
#include "calderon/error.hpp"
#include "calderon/field_algebra.hpp"

namespace calderon::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& v) {
  T x{};
  const auto* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, x);
  if (ec != std::errc() || p != end) throw InvalidInput("config: bad value for " + key + ": '" + v + "'");
  return x;
}

using Assignments = std::map<std::string, std::string>;

void read_into(const std::filesystem::path& file, const std::string& text, const std::filesystem::path& base,
               Assignments& out, std::set<std::filesystem::path>& open_files) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.rfind("include ", 0) == 0) {
      std::filesystem::path inc = trim(line.substr(8));
      if (inc.is_relative()) inc = base / inc;
      inc = inc.lexically_normal();
      if (open_files.count(inc)) throw InvalidInput("config: include cycle through " + inc.string());
      std::ifstream f(inc);
      if (!f) throw InvalidInput("config: cannot open included file " + inc.string());
      std::stringstream ss;
      ss << f.rdbuf();
      open_files.insert(inc);
      read_into(inc, ss.str(), inc.parent_path(), out, open_files);
      open_files.erase(inc);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      std::ostringstream os;
      os << "config: " << (file.empty() ? std::string("<text>") : file.string()) << ":" << lineno
         << ": expected key = value";
      throw InvalidInput(os.str());
    }
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
}

RunConfig from_assignments(const Assignments& a, const std::filesystem::path& base) {
  RunConfig c;
  c.base_dir = base;
  std::vector<std::string> unknown;
  for (const auto& [k, v] : a) {
    if (k == "scenario") c.scenario = v;
    else if (k == "geometry") c.geometry = v;
    else if (k == "sigma") c.sigma = v;
    else if (k == "grid.n") c.grid_n = parse_number<int>(k, v);
    else if (k == "grid.half_width") c.grid_half_width = parse_number<double>(k, v);
    else if (k == "mesh.h") c.mesh_h = parse_number<double>(k, v);
    else if (k == "modes") c.modes = parse_number<int>(k, v);
    else if (k == "kschedule") c.kschedule = parse_double_list(v);
    else if (k == "tol") c.tol = parse_number<double>(k, v);
    else if (k == "cgo.h") c.cgo_h = parse_number<double>(k, v);
    else if (k == "cgo.modes") c.cgo_modes = parse_number<int>(k, v);
    else if (k == "out") c.out = v;
    else if (k == "seed") c.seed = parse_number<std::uint64_t>(k, v);
    else unknown.push_back(k);
  }
  if (!unknown.empty()) {
    std::string msg = "config: unknown keys:";
    for (const auto& k : unknown) msg += " " + k;
    throw InvalidInput(msg);
  }
  return c;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, p);
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back(parse_number<double>("list", item));
  }
  return out;
}

std::string RunConfig::to_text() const {
  std::ostringstream os;
  os << "scenario = " << scenario << "\n";
  os << "geometry = " << geometry << "\n";
  os << "sigma = " << sigma << "\n";
  os << "grid.n = " << grid_n << "\n";
  os << "grid.half_width = " << format_double(grid_half_width) << "\n";
  os << "mesh.h = " << format_double(mesh_h) << "\n";
  os << "modes = " << modes << "\n";
  os << "kschedule = ";
  for (std::size_t i = 0; i < kschedule.size(); ++i) os << (i ? "," : "") << format_double(kschedule[i]);
  os << "\n";
  os << "tol = " << format_double(tol) << "\n";
  os << "cgo.h = " << format_double(cgo_h) << "\n";
  os << "cgo.modes = " << cgo_modes << "\n";
  if (!out.empty()) os << "out = " << out << "\n";
  os << "seed = " << seed << "\n";
  return os.str();
}

bool RunConfig::operator==(const RunConfig& o) const {
  return scenario == o.scenario && geometry == o.geometry && sigma == o.sigma && grid_n == o.grid_n &&
         grid_half_width == o.grid_half_width && mesh_h == o.mesh_h && modes == o.modes &&
         kschedule == o.kschedule && tol == o.tol && cgo_h == o.cgo_h && cgo_modes == o.cgo_modes &&
         out == o.out && seed == o.seed;
}

std::vector<std::string> RunConfig::problems() const {
  std::vector<std::string> p;
  static const std::set<std::string> geometries{"disc", "halfplane", "exterior", "partial"};
  if (scenario.empty() || scenario.find_first_of("/\\ ") != std::string::npos)
    p.push_back("scenario: must be a non-empty name without spaces or slashes");
  if (!geometries.count(geometry)) p.push_back("geometry: '" + geometry + "' is not one of disc, halfplane, exterior, partial");
  if (grid_n < 16 || (grid_n & (grid_n - 1)) != 0) p.push_back("grid.n: must be a power of two >= 16");
  if (!(grid_half_width > 1.0)) p.push_back("grid.half_width: must exceed 1 so the box contains the disc");
  if (!(mesh_h > 0.0 && mesh_h <= 0.25)) p.push_back("mesh.h: must lie in (0, 0.25]");
  if (!(cgo_h > 0.0 && cgo_h <= 0.25)) p.push_back("cgo.h: must lie in (0, 0.25]");
  if (modes < 1) p.push_back("modes: must be >= 1");
  if (cgo_modes < 1) p.push_back("cgo.modes: must be >= 1");
  if (kschedule.empty()) p.push_back("kschedule: must list at least one k");
  for (double k : kschedule)
    if (!(k > 0.0)) {
      p.push_back("kschedule: entries must be positive");
      break;
    }
  if (!(tol > 0.0)) p.push_back("tol: must be positive");
  std::istringstream s(sigma);
  std::string kind, path;
  s >> kind;
  if (kind == "file") {
    std::getline(s, path);
    std::filesystem::path f = trim(path);
    if (f.is_relative()) f = base_dir / f;
    std::filesystem::path meta = f;
    if (meta.extension() != ".meta") meta += ".meta";
    if (!std::filesystem::exists(meta)) p.push_back("sigma: file not found: " + meta.string());
  }
  if (p.empty() || kind != "file") {
    try {
      const ConductivityModel m = parse_conductivity_spec(sigma, base_dir);
      // kappa = sup |mu1| < 1 iff the smallest eigenvalue stays positive
      const double r = m.support_radius;
      bool bad = false;
      for (int j = 0; j < 33 && !bad; ++j)
        for (int i = 0; i < 33 && !bad; ++i) {
          const Complex z(r * (-1.0 + i / 16.0), r * (-1.0 + j / 16.0));
          const auto [lo, hi] = m.tensor(z).eigenvalues();
          if (!(lo > kMinEigenvalue) || !(hi < kMaxEigenvalue)) {
            std::ostringstream os;
            os << "sigma: not uniformly elliptic at z = " << z << " (eigenvalues " << lo << ", " << hi
               << "; kappa >= 1)";
            p.push_back(os.str());
            bad = true;
          }
        }
    } catch (const std::exception& e) {
      p.push_back(std::string("sigma: ") + e.what());
    }
  }
  return p;
}

void RunConfig::validate() const {
  const auto p = problems();
  if (p.empty()) return;
  std::string msg = "invalid configuration:";
  for (const auto& s : p) msg += "\n  " + s;
  throw InvalidInput(msg);
}

RunConfig parse_config_text(const std::string& text, const std::filesystem::path& base_dir) {
  Assignments a;
  std::set<std::filesystem::path> open;
  read_into({}, text, base_dir, a, open);
  return from_assignments(a, base_dir);
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw InvalidInput("config: cannot open " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  Assignments a;
  std::set<std::filesystem::path> open{path.lexically_normal()};
  read_into(path, ss.str(), path.parent_path(), a, open);
  return from_assignments(a, path.parent_path());
}

}  // namespace calderon::cli
