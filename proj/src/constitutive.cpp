#include <dnapl/constitutive.hpp>

#include <algorithm>
#include <cmath>

namespace dnapl
{

std::vector<std::string> validate(const MaterialProperties &props)
{
  std::vector<std::string> issues;
  if (!(props.permeability > 0.0))
    issues.emplace_back("permeability_m2 must be > 0");
  if (!(props.porosity > 0.0 && props.porosity < 1.0))
    issues.emplace_back("porosity must lie in (0, 1)");
  if (!(props.residual_wetting >= 0.0))
    issues.emplace_back("residual_wetting_saturation must be >= 0");
  if (!(props.residual_nonwetting >= 0.0))
    issues.emplace_back("residual_nonwetting_saturation must be >= 0");
  if (!(props.residual_wetting + props.residual_nonwetting < 1.0))
    issues.emplace_back("residual saturations must sum to < 1");
  if (!(props.entry_pressure > 0.0))
    issues.emplace_back("entry_pressure_pa must be > 0");
  if (!(props.pore_size_index > 0.0))
    issues.emplace_back("lambda > 0 required (pore_size_index)");
  return issues;
}

std::vector<std::string> validate(const FluidProperties &props)
{
  std::vector<std::string> issues;
  if (!(props.density > 0.0))
    issues.emplace_back("density_kg_per_m3 must be > 0");
  if (!(props.viscosity > 0.0))
    issues.emplace_back("viscosity_pa_s must be > 0");
  return issues;
}

double effective_saturation(double s_w, const MaterialProperties &props)
{
  const double se = (s_w - props.residual_wetting) / props.mobile_range();
  return std::clamp(se, 0.0, 1.0);
}

double capillary_pressure(double s_e, const MaterialProperties &props)
{
  const double se = std::clamp(s_e, kMinEffectiveSaturation, 1.0);
  if (se == 1.0)
    return props.entry_pressure;
  return props.entry_pressure * std::pow(se, -1.0 / props.pore_size_index);
}

std::optional<double> inverse_capillary_pressure(double p_c, const MaterialProperties &props)
{
  if (p_c < props.entry_pressure)
    return std::nullopt;
  return std::pow(p_c / props.entry_pressure, -props.pore_size_index);
}

double relperm_wetting(double s_e, const MaterialProperties &props)
{
  const double se = std::clamp(s_e, 0.0, 1.0);
  const double lambda = props.pore_size_index;
  return std::pow(se, (2.0 + 3.0 * lambda) / lambda);
}

double relperm_nonwetting(double s_e, const MaterialProperties &props)
{
  const double se = std::clamp(s_e, 0.0, 1.0);
  const double lambda = props.pore_size_index;
  const double one_minus = 1.0 - se;
  return one_minus * one_minus * (1.0 - std::pow(se, (2.0 + lambda) / lambda));
}

double phase_mobility(double kr, const FluidProperties &fluid)
{
  return kr / fluid.viscosity;
}

double d_capillary_pressure(double s_e, const MaterialProperties &props)
{
  // flat outside the clamped range
  if (s_e <= kMinEffectiveSaturation || s_e > 1.0)
    return 0.0;
  const double inv_lambda = 1.0 / props.pore_size_index;
  return -inv_lambda * props.entry_pressure * std::pow(s_e, -inv_lambda - 1.0);
}

double d_relperm_nonwetting(double s_e, const MaterialProperties &props)
{
  if (s_e < 0.0 || s_e > 1.0)
    return 0.0;
  const double a = (2.0 + props.pore_size_index) / props.pore_size_index;
  const double one_minus = 1.0 - s_e;
  const double se_a = std::pow(s_e, a);
  const double se_am1 = s_e > 0.0 ? std::pow(s_e, a - 1.0) : 0.0;
  return -2.0 * one_minus * (1.0 - se_a) - one_minus * one_minus * a * se_am1;
}

BrooksCoreyPoint brooks_corey_point(double s_e, const MaterialProperties &props)
{
  const double se = std::clamp(s_e, 0.0, 1.0);
  if (se == 1.0)
    return {props.entry_pressure, d_capillary_pressure(1.0, props), 1.0, 0.0,
            d_relperm_nonwetting(1.0, props)};

  const double inv_lambda = 1.0 / props.pore_size_index;
  BrooksCoreyPoint p;
  // q = Se^(-1/lambda), so Se^(2/lambda) = 1/q^2
  const double q = std::pow(std::max(se, kMinEffectiveSaturation), -inv_lambda);
  p.pc = props.entry_pressure * q;
  double se_2l = 1.0 / (q * q);
  if (se > kMinEffectiveSaturation)
    p.dpc = -inv_lambda * p.pc / se;
  else
    se_2l = std::pow(se, 2.0 * inv_lambda);

  const double one_minus = 1.0 - se;
  const double se_a = se * se_2l;  // Se^((2+lambda)/lambda)
  p.krw = se * se * se_a;
  p.krn = one_minus * one_minus * (1.0 - se_a);
  p.dkrn = -2.0 * one_minus * (1.0 - se_a) - one_minus * one_minus * (1.0 + 2.0 * inv_lambda) * se_2l;
  return p;
}

}  // namespace dnapl
