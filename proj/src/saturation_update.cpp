#include <dnapl/saturation_update.hpp>

#include <algorithm>
#include <cmath>

namespace dnapl
{

double Injection::rate(double t) const
{
  for (const auto &iv : schedule)
    if (t >= iv.start && t < iv.end)
      return iv.rate;
  return 0.0;
}

double Injection::mass_until(double t) const
{
  double m = 0.0;
  for (const auto &iv : schedule)
    if (t > iv.start)
      m += iv.rate * (std::min(t, iv.end) - iv.start);
  return m;
}

CellSources apply_source(std::span<const ResolvedInjection> injections, double t,
                         const FlowModel &model)
{
  CellSources q;
  apply_source(injections, t, model, q);
  return q;
}

void apply_source(std::span<const ResolvedInjection> injections, double t, const FlowModel &model,
                  CellSources &q)
{
  q.wetting.assign(model.grid.cell_count(), 0.0);
  q.nonwetting.assign(model.grid.cell_count(), 0.0);
  for (const auto &inj : injections)
  {
    const double rate = inj.spec.rate(t);
    if (rate == 0.0 || inj.cells.empty())
      continue;
    const bool wetting = inj.spec.phase == Phase::Wetting;
    const double density = wetting ? model.wetting.density : model.nonwetting.density;
    const double per_cell = rate / density / static_cast<double>(inj.cells.size());
    auto &target = wetting ? q.wetting : q.nonwetting;
    for (auto c : inj.cells)
      target[c] += per_cell;
  }
}

double stable_timestep(const PhaseFluxes &fluxes, const FlowModel &model, double cfl,
                       const StepLimits &limits)
{
  double dt = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < fluxes.nonwetting_outflow.size(); ++c)
  {
    const double pv = model.pore_volume[c];
    if (fluxes.nonwetting_outflow[c] > 0.0)
      dt = std::min(dt, pv * model.material(c).mobile_range() / fluxes.nonwetting_outflow[c]);
    if (fluxes.outflow_sensitivity[c] > 0.0)
      dt = std::min(dt, pv / fluxes.outflow_sensitivity[c]);
  }
  dt *= cfl;
  if (dt < limits.min_dt)
    throw TimestepError("time step underflow: stable step " + std::to_string(dt) +
                        " s is below the minimum " + std::to_string(limits.min_dt) + " s");
  if (limits.previous_dt > 0.0)
    dt = std::min(dt, limits.max_growth * limits.previous_dt);
  dt = std::min({dt, limits.max_dt, limits.time_to_event});
  return dt;
}

SaturationUpdate advance_saturation(std::span<const double> s_n, const PhaseFluxes &fluxes,
                                    double dt, const CellSources &sources,
                                    const FlowModel &model)
{
  SaturationUpdate out;
  advance_saturation(s_n, fluxes, dt, sources, model, out);
  return out;
}

void advance_saturation(std::span<const double> s_n, const PhaseFluxes &fluxes, double dt,
                        const CellSources &sources, const FlowModel &model,
                        SaturationUpdate &out)
{
  const std::size_t n = s_n.size();
  // out.s_n first collects the net inflow, m^3/s
  auto &net = out.s_n;
  net.assign(n, 0.0);
  out.clamp_mass = 0.0;
  out.boundary_outflow_mass = 0.0;
  for (std::size_t i = 0; i < model.faces.size(); ++i)
  {
    const double fn = fluxes.nonwetting[i];
    if (fn == 0.0)
      continue;
    const auto &f = model.faces[i];
    net[f.lower] -= fn;
    net[f.upper] += fn;
  }
  const double rho = model.nonwetting.density;
  for (std::size_t i = 0; i < model.dirichlet.size(); ++i)
  {
    net[model.dirichlet[i].cell] -= fluxes.boundary_nonwetting[i];
    out.boundary_outflow_mass += fluxes.boundary_nonwetting[i] * dt * rho;
  }

  for (std::size_t c = 0; c < n; ++c)
  {
    const double pv = model.pore_volume[c];
    const double raw = s_n[c] + dt / pv * (net[c] + sources.nonwetting[c]);
    const double clamped = std::clamp(raw, 0.0, model.max_nonwetting_saturation[c]);
    if (clamped != raw)
      out.clamp_mass += (raw - clamped) * pv * rho;
    net[c] = clamped;
  }
}

}  // namespace dnapl
