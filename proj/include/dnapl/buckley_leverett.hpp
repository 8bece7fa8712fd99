#pragma once

#include <dnapl/constitutive.hpp>
#include <dnapl/simulation.hpp>

#include <vector>

namespace dnapl
{

/// Water fractional flow lambda_w / (lambda_w + lambda_n) at water saturation s_w.
double fractional_flow(double s_w, const MaterialProperties &props, const FluidProperties &water,
                       const FluidProperties &oil);

/**
 * Buckley-Leverett solution for water displacing the non-wetting phase from
 * residual water saturation, built with the Welge tangent construction.
 * Distances and times are dimensionless: x_D = x / L, t_D = injected pore volumes.
 */
class WelgeSolution
{
 public:
  WelgeSolution(const MaterialProperties &props, const FluidProperties &water,
                const FluidProperties &oil);

  double shock_saturation() const { return shock_; }
  /// dx_D/dt_D of the shock.
  double shock_speed() const { return speed_; }
  double saturation(double x_d, double t_d) const;
  /// Average of saturation() over [x0, x1].
  double average(double x0, double x1, double t_d, int samples = 64) const;

 private:
  double dfdx(double s) const;

  MaterialProperties props_;
  FluidProperties water_, oil_;
  double shock_ = 0.0;
  double speed_ = 0.0;
};

struct BuckleyLeverettOptions
{
  int cells = 400;
  double length = 10.0;          // m
  double pore_volumes = 0.3;
  double water_rate = 1.0;       // kg/s
};

struct BuckleyLeverettResult
{
  std::vector<double> x;          // cell centers, m
  std::vector<double> s_w;        // simulated
  std::vector<double> s_w_exact;  // cell averages of the Welge profile
  double l1_error = 0.0;          // mean |s_w - exact| over the mobile range
  double front_position = 0.0;    // m, simulated
  double front_position_exact = 0.0;
  double shock_saturation = 0.0;
  double pore_volumes = 0.0;
  long steps = 0;
  double wall_seconds = 0.0;
};

/// 1D horizontal waterflood: no gravity, no capillarity, water injected into
/// the first cell and a fixed-pressure outlet on the far side.
Scenario buckley_leverett_scenario(const BuckleyLeverettOptions &options);
BuckleyLeverettResult run_buckley_leverett(const BuckleyLeverettOptions &options = {});

/// Medium sand of the bundled scenarios.
MaterialProperties sand_properties();
/// Clay of the bundled lenses.
MaterialProperties clay_properties();

}  // namespace dnapl
