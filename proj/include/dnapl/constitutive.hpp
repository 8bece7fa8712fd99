#pragma once

#include <optional>
#include <string>
#include <vector>

namespace dnapl
{

/// Hydraulic and capillary constants of one lithology.
struct MaterialProperties
{
  double permeability = 0.0;           // m^2
  double porosity = 0.0;               // -
  double residual_wetting = 0.0;       // s_wr
  double residual_nonwetting = 0.0;    // s_nr
  double entry_pressure = 0.0;         // Pa
  double pore_size_index = 0.0;        // Brooks-Corey lambda

  /// Width of the mobile saturation range, 1 - s_wr - s_nr.
  double mobile_range() const { return 1.0 - residual_wetting - residual_nonwetting; }

  bool operator==(const MaterialProperties &) const = default;
};

struct FluidProperties
{
  double density = 0.0;    // kg m^-3
  double viscosity = 0.0;  // Pa s

  bool operator==(const FluidProperties &) const = default;
};

/// Lower bound applied to the effective saturation before evaluating the
/// capillary pressure, which is singular at Se = 0.
inline constexpr double kMinEffectiveSaturation = 1.0e-4;

/// Human-readable violations of the material invariants; empty if valid.
std::vector<std::string> validate(const MaterialProperties &props);
std::vector<std::string> validate(const FluidProperties &props);

/// (s_w - s_wr) / (1 - s_wr - s_nr), clamped to [0, 1].
double effective_saturation(double s_w, const MaterialProperties &props);

/// Brooks-Corey capillary pressure p_d * Se^(-1/lambda). Se is clamped to
/// [kMinEffectiveSaturation, 1].
double capillary_pressure(double s_e, const MaterialProperties &props);

/// Effective saturation at which the capillary pressure equals p_c, or
/// nullopt if p_c lies below the entry pressure (medium stays water-saturated).
std::optional<double> inverse_capillary_pressure(double p_c, const MaterialProperties &props);

/// Brooks-Corey-Burdine wetting relative permeability Se^((2+3 lambda)/lambda).
double relperm_wetting(double s_e, const MaterialProperties &props);

/// Brooks-Corey-Burdine non-wetting relative permeability
/// (1-Se)^2 (1 - Se^((2+lambda)/lambda)).
double relperm_nonwetting(double s_e, const MaterialProperties &props);

/// kr / mu.
double phase_mobility(double kr, const FluidProperties &fluid);

// Derivatives with respect to the effective saturation, used by the explicit
// stability bound.
double d_capillary_pressure(double s_e, const MaterialProperties &props);
double d_relperm_nonwetting(double s_e, const MaterialProperties &props);

/// All of the above at one effective saturation, sharing a single power
/// evaluation. Agrees with the separate functions to rounding.
struct BrooksCoreyPoint
{
  double pc = 0.0;
  double dpc = 0.0;   // d pc / d Se
  double krw = 0.0;
  double krn = 0.0;
  double dkrn = 0.0;  // d krn / d Se
};

BrooksCoreyPoint brooks_corey_point(double s_e, const MaterialProperties &props);

}  // namespace dnapl
