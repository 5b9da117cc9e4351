#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <string_view>

#include "calderon/tensor.hpp"

namespace calderon {

class ConductivityTensor;

using TensorFunction = std::function<SymTensor(Complex)>;

// Closed-form (or file-backed) conductivity on the plane. Equals the
// identity for |z| > support_radius.
struct ConductivityModel {
  std::string spec = "identity";
  TensorFunction tensor = [](Complex) { return SymTensor::identity(); };
  double support_radius = 1.0;

  SymTensor operator()(Complex z) const { return tensor(z); }
};

ConductivityModel identity_conductivity();
// Constant tensor on the disc |z| < radius, identity outside.
ConductivityModel constant_on_disc(SymTensor s, double radius = 1.0);
// (1 + amp (1 - r^2)^2) I on the unit disc.
ConductivityModel radial_bump(double amp);
// Radial/tangential anisotropy: eigenvalue 1 + amp (1 - r^2)^2 along e_r and 1 along e_theta.
ConductivityModel radial_anisotropic(double amp);
// Nearest-cell lookup into a sampled tensor field.
ConductivityModel from_sampled(std::shared_ptr<const ConductivityTensor> field, std::string spec);

// Text spec:
//   identity
//   isotropic C
//   constant S11 S12 S22
//   radial AMP
//   radial-aniso AMP
//   file PATH          (field file written by save_conductivity)
// Relative paths resolve against base_dir.
ConductivityModel parse_conductivity_spec(std::string_view text, const std::filesystem::path& base_dir = {});

}  // namespace calderon
