#include <dnapl/buckley_leverett.hpp>

#include <algorithm>
#include <cmath>

namespace dnapl
{

MaterialProperties sand_properties() { return {1.5e-10, 0.3, 0.098, 0.01, 1323.0, 3.86}; }

MaterialProperties clay_properties() { return {5.0e-14, 0.2, 0.19, 0.008, 4500.0, 3.51}; }

double fractional_flow(double s_w, const MaterialProperties &props, const FluidProperties &water,
                       const FluidProperties &oil)
{
  const double se = effective_saturation(s_w, props);
  const double lw = relperm_wetting(se, props) / water.viscosity;
  const double ln = relperm_nonwetting(se, props) / oil.viscosity;
  return lw + ln > 0.0 ? lw / (lw + ln) : 0.0;
}

WelgeSolution::WelgeSolution(const MaterialProperties &props, const FluidProperties &water,
                             const FluidProperties &oil)
    : props_(props), water_(water), oil_(oil)
{
  const double swr = props.residual_wetting;
  const double smax = 1.0 - props.residual_nonwetting;
  // tangent point: f'(s) (s - swr) = f(s); the residual changes sign once on
  // the concave branch
  auto g = [&](double s) {
    return dfdx(s) * (s - swr) - fractional_flow(s, props_, water_, oil_);
  };
  // bracket by scanning from the outlet side
  const int n = 2000;
  double hi = smax - 1e-9;
  double lo = hi;
  for (int i = n - 1; i > 0; --i)
  {
    const double s = swr + (smax - swr) * i / n;
    if (g(s) > 0.0)
    {
      lo = s;
      break;
    }
    hi = s;
  }
  for (int it = 0; it < 200; ++it)
  {
    const double mid = 0.5 * (lo + hi);
    (g(mid) > 0.0 ? lo : hi) = mid;
  }
  shock_ = 0.5 * (lo + hi);
  speed_ = fractional_flow(shock_, props_, water_, oil_) / (shock_ - swr);
}

double WelgeSolution::dfdx(double s) const
{
  const double h = 1e-7;
  return (fractional_flow(s + h, props_, water_, oil_) -
          fractional_flow(s - h, props_, water_, oil_)) /
         (2.0 * h);
}

double WelgeSolution::saturation(double x_d, double t_d) const
{
  if (t_d <= 0.0)
    return props_.residual_wetting;
  const double v = x_d / t_d;
  if (v > speed_)
    return props_.residual_wetting;
  if (v <= 0.0)
    return 1.0 - props_.residual_nonwetting;
  // rarefaction: f'(s) = v with f' decreasing on [shock, smax]
  double lo = shock_;
  double hi = 1.0 - props_.residual_nonwetting;
  for (int it = 0; it < 100; ++it)
  {
    const double mid = 0.5 * (lo + hi);
    (dfdx(mid) > v ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double WelgeSolution::average(double x0, double x1, double t_d, int samples) const
{
  double sum = 0.0;
  for (int i = 0; i < samples; ++i)
    sum += saturation(x0 + (x1 - x0) * (i + 0.5) / samples, t_d);
  return sum / samples;
}

Scenario buckley_leverett_scenario(const BuckleyLeverettOptions &o)
{
  Scenario sc;
  sc.name = "buckley_leverett";
  sc.grid.extents = {o.length};
  sc.grid.resolution = {o.cells};
  const MaterialProperties sand = sand_properties();
  sc.materials = {{"sand", sand}};
  sc.background_material = "sand";
  sc.physics.gravity = 0.0;
  sc.physics.capillarity = false;
  sc.hydrostatic_boundaries = {BoundarySide{0, +1}};
  sc.initial_nonwetting_saturation = 1.0 - sand.residual_wetting;

  const double dx = o.length / o.cells;
  const double pore_volume = sand.porosity * o.length;  // unit cross-section
  const double end =
      o.pore_volumes * pore_volume / (o.water_rate / sc.wetting.density);
  sc.injections = {InjectionSpec{"water", Phase::Wetting, {0.0}, {0.5 * dx}, {{0.0, 2.0 * end, o.water_rate}}}};
  sc.end_time = end;
  sc.report_times = {end};
  return sc;
}

BuckleyLeverettResult run_buckley_leverett(const BuckleyLeverettOptions &o)
{
  const Scenario sc = buckley_leverett_scenario(o);
  Simulator sim(sc);
  const SimulationResult run = sim.run();

  const MaterialProperties sand = sand_properties();
  const WelgeSolution welge(sand, sc.wetting, sc.nonwetting);
  const double pore_volume = sand.porosity * o.length;
  const double pv = sim.injected_mass(Phase::Wetting) / sc.wetting.density / pore_volume;

  BuckleyLeverettResult r;
  r.pore_volumes = pv;
  r.shock_saturation = welge.shock_saturation();
  r.steps = run.steps;
  r.wall_seconds = run.wall_seconds;
  const double dx = o.length / o.cells;
  double err = 0.0;
  const double mid = 0.5 * (sand.residual_wetting + welge.shock_saturation());
  for (int i = 0; i < o.cells; ++i)
  {
    const double xc = (i + 0.5) * dx;
    const double sw = 1.0 - run.final_state.s_n[static_cast<std::size_t>(i)];
    const double ex = welge.average(i * dx / o.length, (i + 1) * dx / o.length, pv);
    r.x.push_back(xc);
    r.s_w.push_back(sw);
    r.s_w_exact.push_back(ex);
    err += std::abs(sw - ex);
    if (sw > mid)
      r.front_position = xc;
  }
  r.l1_error = err / o.cells / sand.mobile_range();
  r.front_position_exact = welge.shock_speed() * pv * o.length;
  return r;
}

}  // namespace dnapl
