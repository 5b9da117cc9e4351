#include "calderon/conductivity.hpp"

#include <sstream>
#include <vector>

#include "calderon/field_algebra.hpp"
#include "calderon/field_io.hpp"

namespace calderon {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

ConductivityModel identity_conductivity() { return {}; }

ConductivityModel constant_on_disc(SymTensor s, double radius) {
  ConductivityModel m;
  m.spec = "constant " + fmt(s.s11) + " " + fmt(s.s12) + " " + fmt(s.s22);
  if (s.s12 == 0.0 && s.s11 == s.s22) m.spec = "isotropic " + fmt(s.s11);
  m.support_radius = radius;
  m.tensor = [s, r2 = radius * radius](Complex z) { return std::norm(z) < r2 ? s : SymTensor::identity(); };
  return m;
}

ConductivityModel radial_bump(double amp) {
  ConductivityModel m;
  m.spec = "radial " + fmt(amp);
  m.tensor = [amp](Complex z) {
    const double r2 = std::norm(z);
    if (r2 >= 1.0) return SymTensor::identity();
    const double w = (1.0 - r2) * (1.0 - r2);
    return SymTensor::isotropic(1.0 + amp * w);
  };
  return m;
}

ConductivityModel radial_anisotropic(double amp) {
  ConductivityModel m;
  m.spec = "radial-aniso " + fmt(amp);
  m.tensor = [amp](Complex z) {
    const double r2 = std::norm(z);
    if (r2 >= 1.0) return SymTensor::identity();
    const double w = amp * (1.0 - r2) * (1.0 - r2);
    const double x = z.real(), y = z.imag();
    return SymTensor{1.0 + w * x * x, w * x * y, 1.0 + w * y * y};
  };
  return m;
}

ConductivityModel from_sampled(std::shared_ptr<const ConductivityTensor> field, std::string spec) {
  ConductivityModel m;
  m.spec = std::move(spec);
  double rmax = 0.0;
  for (std::size_t k = 0; k < field->size(); ++k)
    if (field->in_domain(k)) rmax = std::max(rmax, std::abs(field->grid().point(k)));
  m.support_radius = rmax + field->grid().cell();
  m.tensor = [field](Complex z) {
    if (!field->grid().contains(z)) return SymTensor::identity();
    return field->nearest(z);
  };
  return m;
}

ConductivityModel parse_conductivity_spec(std::string_view text, const std::filesystem::path& base_dir) {
  std::istringstream is{std::string(text)};
  std::string kind;
  is >> kind;
  std::vector<double> args;
  auto read_args = [&](std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) {
      double v;
      if (!(is >> v)) throw InvalidInput("conductivity spec '" + std::string(text) + "': expected " +
                                         std::to_string(count) + " numbers");
      args.push_back(v);
    }
    std::string extra;
    if (is >> extra) throw InvalidInput("conductivity spec '" + std::string(text) + "': trailing token '" + extra + "'");
  };
  if (kind == "identity") {
    read_args(0);
    return identity_conductivity();
  }
  if (kind == "isotropic") {
    read_args(1);
    if (!(args[0] >= kMinEigenvalue && args[0] <= kMaxEigenvalue))
      throw InvalidInput("isotropic conductivity out of range: " + fmt(args[0]));
    return constant_on_disc(SymTensor::isotropic(args[0]));
  }
  if (kind == "constant") {
    read_args(3);
    const SymTensor s{args[0], args[1], args[2]};
    auto [lo, hi] = s.eigenvalues();
    if (!(lo >= kMinEigenvalue && hi <= kMaxEigenvalue))
      throw InvalidInput("constant conductivity is not positive definite within bounds: eigenvalues " + fmt(lo) +
                         ", " + fmt(hi));
    return constant_on_disc(s);
  }
  if (kind == "radial") {
    read_args(1);
    if (args[0] <= -1.0) throw InvalidInput("radial amplitude must exceed -1");
    return radial_bump(args[0]);
  }
  if (kind == "radial-aniso") {
    read_args(1);
    if (args[0] <= -1.0) throw InvalidInput("radial-aniso amplitude must exceed -1");
    return radial_anisotropic(args[0]);
  }
  if (kind == "file") {
    std::string path;
    if (!(is >> path)) throw InvalidInput("conductivity spec 'file' needs a path");
    std::filesystem::path p(path);
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    auto field = std::make_shared<const ConductivityTensor>(load_conductivity(p));
    return from_sampled(field, "file " + path);
  }
  throw InvalidInput("unknown conductivity spec '" + std::string(text) + "'");
}

}  // namespace calderon
