#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "calderon/conductivity.hpp"
#include "calderon/grid.hpp"
#include "calderon/tensor.hpp"

namespace calderon {

// Eigenvalues outside [kMinEigenvalue, kMaxEigenvalue] are rejected.
inline constexpr double kMinEigenvalue = 1e-8;
inline constexpr double kMaxEigenvalue = 1e8;

class ConductivityTensor {
 public:
  ConductivityTensor() = default;
  // Validates every cell; mask marks cells belonging to the domain.
  ConductivityTensor(GridSpec grid, std::vector<double> s11, std::vector<double> s12, std::vector<double> s22,
                     std::vector<std::uint8_t> mask);

  static ConductivityTensor identity(GridSpec grid);
  // Cell averages over subsamples^2 points. The mask holds every cell that
  // sees a non-identity subsample.
  static ConductivityTensor sample(const ConductivityModel& model, GridSpec grid, int subsamples = 4);

  const GridSpec& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return s11_.size(); }
  SymTensor at(std::size_t k) const noexcept { return {s11_[k], s12_[k], s22_[k]}; }
  bool in_domain(std::size_t k) const noexcept { return mask_[k] != 0; }
  std::span<const double> s11() const noexcept { return s11_; }
  std::span<const double> s12() const noexcept { return s12_; }
  std::span<const double> s22() const noexcept { return s22_; }
  std::span<const std::uint8_t> mask() const noexcept { return mask_; }
  SymTensor nearest(Complex z) const;
  SymTensor interpolate(Complex z) const;

 private:
  GridSpec grid_;
  std::vector<double> s11_, s12_, s22_;
  std::vector<std::uint8_t> mask_;
};

struct BeltramiData {
  ComplexField mu1;
  RealField mu2;
  ComplexField nu1;
  RealField nu2;
  double kappa = 0.0;  // sup |mu1|
};

double ellipticity_constant(const ConductivityTensor& sigma);
ComplexField mu1_from_sigma(const ConductivityTensor& sigma);
RealField mu2_from_sigma(const ConductivityTensor& sigma);
std::pair<ComplexField, RealField> nu_from_mu(const ComplexField& mu1, const RealField& mu2);
std::pair<ComplexField, RealField> mu_from_nu(const ComplexField& nu1, const RealField& nu2);
std::pair<ComplexField, RealField> sigma_to_nu(const ConductivityTensor& sigma);
ConductivityTensor nu_to_sigma(const ComplexField& nu1, const RealField& nu2);
ConductivityTensor hat_sigma(const ConductivityTensor& sigma);
BeltramiData beltrami_data(const ConductivityTensor& sigma);

// Closed-form orientation preserving map with derivatives and inverse.
struct AnalyticMap {
  std::string name;
  std::function<Complex(Complex)> map;
  std::function<Complex(Complex)> dz;
  std::function<Complex(Complex)> dzbar;
  std::function<Complex(Complex)> inverse;
};

AnalyticMap identity_map();
AnalyticMap rotation_map(double alpha);
AnalyticMap scaling_map(double factor);
// z + c zbar, |c| < 1.
AnalyticMap linear_beltrami_map(Complex c);
// z exp(i beta (1 - |z|)) on the unit disc, identity outside.
AnalyticMap radial_shear_map(double beta);
AnalyticMap compose(const AnalyticMap& outer, const AnalyticMap& inner);

// Grid samples of a map with its complex derivatives.
class DiffeoMap {
 public:
  DiffeoMap() = default;
  // Rejects any cell with J <= 0.
  DiffeoMap(ComplexField values, ComplexField dz, ComplexField dzbar);
  static DiffeoMap sample(const AnalyticMap& f, GridSpec grid);
  static DiffeoMap identity(GridSpec grid);

  const GridSpec& grid() const noexcept { return values_.grid(); }
  const ComplexField& values() const noexcept { return values_; }
  const ComplexField& dz() const noexcept { return dz_; }
  const ComplexField& dzbar() const noexcept { return dzbar_; }
  RealField jacobian() const;

  Complex evaluate(Complex x) const;
  std::pair<Complex, Complex> derivatives(Complex x) const;
  // Newton on the bilinear interpolant. Throws InvalidInput when y has no
  // preimage in the grid box.
  Complex inverse(Complex y, double tol = 1e-12) const;

 private:
  Complex nearest_preimage(Complex y) const;
  ComplexField values_, dz_, dzbar_;
  ComplexField offset_;  // F(z) - z, interpolates better than F
};

// ||DF||^2 / J with the operator norm.
RealField distortion(const DiffeoMap& f);
double distortion(Complex dz, Complex dzbar);

// Value of F_* sigma at F(x), stored at x.
ConductivityTensor pushforward_pointwise(const ConductivityTensor& sigma, const DiffeoMap& f);
// F_* sigma resampled on the target grid through the numerical inverse.
ConductivityTensor pushforward(const ConductivityTensor& sigma, const DiffeoMap& f, GridSpec target);
// Closed-form push-forward y -> [DF sigma DF^T / J](F^{-1}(y)).
ConductivityModel pushforward(const ConductivityModel& sigma, const AnalyticMap& f);

}  // namespace calderon
