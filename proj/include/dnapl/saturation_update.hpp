#pragma once

#include <dnapl/flow_model.hpp>
#include <dnapl/pressure_solver.hpp>

#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dnapl
{

enum class Phase
{
  Wetting,
  Nonwetting
};

/// Constant mass rate over [start, end).
struct InjectionInterval
{
  double start = 0.0;          // s
  double end = 0.0;            // s
  double rate = 0.0;           // kg/s

  bool operator==(const InjectionInterval &) const = default;
};

/// Fixed-rate injection of one phase, spread uniformly over the cells whose
/// centers lie inside `patch`.
struct Injection
{
  std::string name;
  Phase phase = Phase::Nonwetting;
  Box patch;
  std::vector<InjectionInterval> schedule;

  double rate(double t) const;
  /// Mass injected over [0, t].
  double mass_until(double t) const;

  bool operator==(const Injection &) const = default;
};

struct ResolvedInjection
{
  Injection spec;
  std::vector<std::size_t> cells;
};

/// Per-cell volumetric source rates at time t.
CellSources apply_source(std::span<const ResolvedInjection> injections, double t,
                         const FlowModel &model);
void apply_source(std::span<const ResolvedInjection> injections, double t, const FlowModel &model,
                  CellSources &out);

class TimestepError : public std::runtime_error
{
 public:
  using std::runtime_error::runtime_error;
};

struct StepLimits
{
  double previous_dt = 0.0;   // 0 on the first step: no growth cap
  double max_growth = 1.25;
  double max_dt = std::numeric_limits<double>::infinity();
  double min_dt = 1e-9;
  /// Distance to the next report time, schedule change or end time.
  double time_to_event = std::numeric_limits<double>::infinity();
};

/**
 * Explicit step size. The stability part is cfl times the smaller of
 *  - pore volume * mobile range / total non-wetting outflow, and
 *  - pore volume / outflow sensitivity (the Lipschitz bound of the update),
 * over all cells. Throws TimestepError if that part drops below min_dt;
 * the result is then capped by growth, max_dt and time_to_event.
 */
double stable_timestep(const PhaseFluxes &fluxes, const FlowModel &model, double cfl,
                       const StepLimits &limits);

struct SaturationUpdate
{
  std::vector<double> s_n;
  /// Mass removed by clamping to [0, 1 - s_wr], kg (negative if added).
  double clamp_mass = 0.0;
  /// Non-wetting mass leaving through Dirichlet boundaries this step, kg.
  double boundary_outflow_mass = 0.0;
};

/// Forward-Euler upwind update of the non-wetting saturation.
SaturationUpdate advance_saturation(std::span<const double> s_n, const PhaseFluxes &fluxes,
                                    double dt, const CellSources &sources,
                                    const FlowModel &model);
/// Same, reusing the storage of `out`; `s_n` must not alias `out.s_n`.
void advance_saturation(std::span<const double> s_n, const PhaseFluxes &fluxes, double dt,
                        const CellSources &sources, const FlowModel &model,
                        SaturationUpdate &out);

}  // namespace dnapl
