#include <dnapl/simulation.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <sstream>

namespace dnapl
{

namespace
{

std::string join(const std::vector<std::string> &items)
{
  std::string s;
  for (const auto &i : items)
    s += (s.empty() ? "" : "; ") + i;
  return s;
}

void check_box(const std::string &where, const std::vector<double> &lo,
               const std::vector<double> &hi, std::size_t dimension,
               std::vector<std::string> &issues)
{
  if (lo.size() != dimension || hi.size() != dimension)
  {
    issues.push_back(where + ": min and max need " + std::to_string(dimension) + " coordinates");
    return;
  }
  for (std::size_t a = 0; a < dimension; ++a)
    if (!(lo[a] <= hi[a]))
      issues.push_back(where + ": min exceeds max on axis " + std::to_string(a));
}

Box to_box(const std::vector<double> &lo, const std::vector<double> &hi)
{
  constexpr double big = std::numeric_limits<double>::max();
  Box b{{-big, -big, -big}, {big, big, big}};
  for (std::size_t a = 0; a < lo.size(); ++a)
  {
    b.lo[a] = lo[a];
    b.hi[a] = hi[a];
  }
  return b;
}

}  // namespace

ScenarioError::ScenarioError(std::vector<std::string> issues)
    : std::runtime_error("invalid scenario: " + join(issues)), issues_(std::move(issues))
{
}

std::vector<std::string> validate_scenario(const Scenario &sc)
{
  std::vector<std::string> issues;
  if (sc.version != 1)
    issues.push_back("unsupported version " + std::to_string(sc.version));

  const std::size_t dim = sc.grid.extents.size();
  if (dim < 1 || dim > 3)
    issues.push_back("grid: extents need 1 to 3 entries");
  if (sc.grid.resolution.size() != dim)
    issues.push_back("grid: resolution and extents differ in length");
  if (!sc.grid.origin.empty() && sc.grid.origin.size() != dim)
    issues.push_back("grid: origin and extents differ in length");
  for (double e : sc.grid.extents)
    if (!(e > 0.0))
      issues.push_back("grid: extents must be > 0");
  for (int r : sc.grid.resolution)
    if (r < 1)
      issues.push_back("grid: resolution must be >= 1");

  std::map<std::string, MaterialId> ids;
  if (sc.materials.empty())
    issues.push_back("materials: at least one material is required");
  for (const auto &m : sc.materials)
  {
    if (m.name.empty())
      issues.push_back("materials: empty name");
    if (!ids.emplace(m.name, static_cast<MaterialId>(ids.size())).second)
      issues.push_back("materials: duplicate name '" + m.name + "'");
    for (const auto &msg : validate(m.properties))
      issues.push_back("material '" + m.name + "': " + msg);
    if (sc.initial_nonwetting_saturation > 1.0 - m.properties.residual_wetting)
      issues.push_back("material '" + m.name +
                       "': initial non-wetting saturation exceeds 1 - residual_wetting");
  }
  if (!ids.count(sc.background_material))
    issues.push_back("background material '" + sc.background_material + "' is not defined");
  for (const auto &r : sc.regions)
  {
    if (!ids.count(r.material))
      issues.push_back("region '" + r.name + "': material '" + r.material + "' is not defined");
    check_box("region '" + r.name + "'", r.min, r.max, dim, issues);
  }

  for (const auto &msg : validate(sc.wetting))
    issues.push_back("wetting fluid: " + msg);
  for (const auto &msg : validate(sc.nonwetting))
    issues.push_back("non-wetting fluid: " + msg);
  if (!(sc.physics.gravity >= 0.0))
    issues.push_back("physics: gravity must be >= 0");

  for (std::size_t i = 0; i < sc.hydrostatic_boundaries.size(); ++i)
  {
    const auto &b = sc.hydrostatic_boundaries[i];
    if (b.axis < 0 || static_cast<std::size_t>(b.axis) >= dim)
      issues.push_back("boundary " + to_string(b) + " is not an axis of a " +
                       std::to_string(dim) + "D grid");
    for (std::size_t j = 0; j < i; ++j)
      if (sc.hydrostatic_boundaries[j] == b)
        issues.push_back("boundary " + to_string(b) + " listed twice");
  }
  if (!(sc.initial_nonwetting_saturation >= 0.0 && sc.initial_nonwetting_saturation < 1.0))
    issues.push_back("initial non-wetting saturation must be in [0, 1)");

  for (const auto &inj : sc.injections)
  {
    const std::string where = "injection '" + inj.name + "'";
    check_box(where, inj.min, inj.max, dim, issues);
    auto sched = inj.schedule;
    for (const auto &iv : sched)
    {
      if (!(iv.start >= 0.0 && iv.end > iv.start))
        issues.push_back(where + ": interval needs 0 <= start < end");
      if (!(iv.rate >= 0.0))
        issues.push_back(where + ": rate must be >= 0");
    }
    std::sort(sched.begin(), sched.end(),
              [](const auto &a, const auto &b) { return a.start < b.start; });
    for (std::size_t i = 1; i < sched.size(); ++i)
      if (sched[i].start < sched[i - 1].end)
        issues.push_back(where + ": schedule intervals overlap");
  }

  const auto &s = sc.solver;
  if (!(s.cfl > 0.0 && s.cfl <= 1.0))
    issues.push_back("solver: cfl must be in (0, 1]");
  if (!(s.pressure_tolerance > 0.0))
    issues.push_back("solver: pressure tolerance must be > 0");
  if (s.max_pressure_iterations < 1)
    issues.push_back("solver: max pressure iterations must be >= 1");
  if (!(s.initial_timestep > 0.0))
    issues.push_back("solver: initial timestep must be > 0");
  if (!(s.max_timestep_growth >= 1.0))
    issues.push_back("solver: max timestep growth must be >= 1");
  if (!(s.max_timestep > 0.0))
    issues.push_back("solver: max timestep must be > 0");
  if (!(s.min_timestep > 0.0))
    issues.push_back("solver: min timestep must be > 0");
  if (s.pressure_update_interval < 1)
    issues.push_back("solver: pressure update interval must be >= 1");
  if (!(s.pressure_update_max_change > 0.0))
    issues.push_back("solver: pressure update max change must be > 0");

  if (!(sc.end_time > 0.0))
    issues.push_back("end time must be > 0");
  for (std::size_t i = 0; i < sc.report_times.size(); ++i)
  {
    const double t = sc.report_times[i];
    if (!(t >= 0.0) || t > sc.end_time)
      issues.push_back("report time " + std::to_string(t) + " s is outside [0, end time]");
    if (i > 0 && !(t > sc.report_times[i - 1]))
      issues.push_back("report times must be strictly increasing");
  }

  const auto &a = sc.analysis;
  if (!(a.ganglia_floor >= 0.0 && a.ganglia_floor < a.pool_threshold && a.pool_threshold <= 1.0))
    issues.push_back("analysis: need 0 <= ganglia floor < pool threshold <= 1");
  if (!(a.detection_threshold >= 0.0))
    issues.push_back("analysis: detection threshold must be >= 0");
  return issues;
}

PreparedScenario prepare(const Scenario &sc)
{
  auto issues = validate_scenario(sc);
  if (!issues.empty())
    throw ScenarioError(std::move(issues));

  Grid grid = build_grid(sc.grid.extents, sc.grid.resolution, sc.grid.origin);
  std::map<std::string, MaterialId> ids;
  std::vector<MaterialProperties> materials;
  for (const auto &m : sc.materials)
  {
    ids.emplace(m.name, static_cast<MaterialId>(materials.size()));
    materials.push_back(m.properties);
  }
  std::vector<Region> regions;
  for (const auto &r : sc.regions)
    regions.push_back(Region{r.name, ids.at(r.material), to_box(r.min, r.max)});
  MaterialMap map = assign_materials(grid, ids.at(sc.background_material), regions);

  PreparedScenario out{make_flow_model(grid, std::move(materials), std::move(map), sc.wetting,
                                       sc.nonwetting, sc.physics, sc.hydrostatic_boundaries),
                       {},
                       {}};
  for (const auto &inj : sc.injections)
  {
    Injection spec{inj.name, inj.phase, to_box(inj.min, inj.max), inj.schedule};
    auto cells = cells_in_box(out.model.grid, spec.patch);
    if (cells.empty())
      issues.push_back("injection '" + inj.name + "': patch contains no cell center");
    out.injections.push_back(ResolvedInjection{std::move(spec), std::move(cells)});
  }
  if (!issues.empty())
    throw ScenarioError(std::move(issues));

  out.initial.time = 0.0;
  out.initial.p_w = hydrostatic_field(out.model);
  out.initial.s_n.assign(out.model.grid.cell_count(), sc.initial_nonwetting_saturation);
  return out;
}

Simulator::Simulator(const Scenario &scenario)
    : scenario_(scenario),
      prepared_(prepare(scenario)),
      assembler_(prepared_.model),
      state_(prepared_.initial)
{
  solver_options_.tolerance = scenario_.solver.pressure_tolerance;
  solver_options_.max_iterations = scenario_.solver.max_pressure_iterations;
  solver_options_.preconditioner = scenario_.solver.preconditioner;

  events_ = scenario_.report_times;
  events_.push_back(scenario_.end_time);
  for (const auto &inj : scenario_.injections)
    for (const auto &iv : inj.schedule)
    {
      events_.push_back(iv.start);
      events_.push_back(iv.end);
    }
  std::sort(events_.begin(), events_.end());
  events_.erase(std::unique(events_.begin(), events_.end()), events_.end());
}

double Simulator::injected_mass(Phase phase) const
{
  double m = 0.0;
  for (const auto &inj : prepared_.injections)
    if (inj.spec.phase == phase)
      m += inj.spec.mass_until(state_.time);
  return m;
}

double Simulator::next_event() const
{
  const auto it = std::upper_bound(events_.begin(), events_.end(), state_.time);
  return it == events_.end() ? std::numeric_limits<double>::infinity() : *it;
}

StepReport Simulator::step() { return advance(std::nullopt); }

StepReport Simulator::step(double dt) { return advance(dt); }

StepReport Simulator::advance(std::optional<double> forced_dt)
{
  const FlowModel &model = prepared_.model;
  StepReport rep;
  rep.step = steps_ + 1;
  try
  {
    std::vector<double> rates;
    for (const auto &inj : prepared_.injections)
      rates.push_back(inj.spec.rate(state_.time));
    if (rates != rates_ || sources_.nonwetting.empty())
    {
      apply_source(prepared_.injections, state_.time, model, sources_);
      rates_ = rates;
    }
    const CellSources &sources = sources_;
    evaluate_cells(model, state_.s_n, cells_);
    const CellCoefficients &cells = cells_;

    bool drifted = false;
    if (std::isfinite(scenario_.solver.pressure_update_max_change) && !s_at_solve_.empty())
      for (std::size_t c = 0; c < s_at_solve_.size() && !drifted; ++c)
        drifted = std::abs(state_.s_n[c] - s_at_solve_[c]) > scenario_.solver.pressure_update_max_change;
    if (steps_since_solve_ >= scenario_.solver.pressure_update_interval || drifted ||
        rates_ != rates_at_solve_ || fluxes_.wetting.empty())
    {
      assembler_.assemble(model, cells, state_.p_w, sources, system_);
      const bool use_factor =
          solver_options_.preconditioner == Preconditioner::IncompleteCholesky;
      // The factor is reused across steps and rebuilt once it has aged or
      // lets the iteration count drift up.
      const bool refresh = use_factor && (!factor_ || factor_age_ >= 50 ||
                                          last_iterations_ > 3 * factor_iterations_ / 2 + 2);
      if (refresh)
      {
        factor_.emplace(system_.matrix, solver_options_.modification);
        factor_age_ = 0;
      }
      try
      {
        auto sol = solve_pressure(system_, solver_options_, state_.p_w,
                                  use_factor ? &*factor_ : nullptr);
        state_.p_w = std::move(sol.p_w);
        rep.pressure_iterations = sol.report.iterations;
        last_iterations_ = sol.report.iterations;
        if (refresh)
          factor_iterations_ = sol.report.iterations;
        ++factor_age_;
      }
      catch (const SolverError &)
      {
        if (system_.matrix.rows > 4000)
          throw;
        state_.p_w = solve_dense(system_.matrix, system_.rhs);
      }
      rep.pressure_solved = true;
      steps_since_solve_ = 0;
      rates_at_solve_ = rates_;
      if (std::isfinite(scenario_.solver.pressure_update_max_change))
        s_at_solve_ = state_.s_n;
    }
    phase_darcy_flux(state_.p_w, model, cells, fluxes_);

    const double event = next_event();
    double dt = 0.0;
    bool lands = false;
    if (forced_dt)
      dt = *forced_dt;
    else
    {
      const auto &sc = scenario_.solver;
      StepLimits limits{previous_dt_, sc.max_timestep_growth, sc.max_timestep, sc.min_timestep,
                        std::numeric_limits<double>::infinity()};
      dt = stable_timestep(fluxes_, model, sc.cfl, limits);
      if (previous_dt_ == 0.0)
        dt = std::min(dt, sc.initial_timestep);
      // growth is measured against the untruncated step
      previous_dt_ = dt;
      if (dt >= event - state_.time)
      {
        dt = event - state_.time;
        lands = true;
      }
    }

    advance_saturation(state_.s_n, fluxes_, dt, sources, model, update_);
    const SaturationUpdate &upd = update_;
    std::swap(state_.s_n, update_.s_n);
    state_.time = lands ? event : state_.time + dt;
    clamp_mass_ += upd.clamp_mass;
    outflow_mass_ += upd.boundary_outflow_mass;
    ++steps_;
    ++steps_since_solve_;

    rep.time = state_.time;
    rep.dt = dt;
    rep.clamp_mass = upd.clamp_mass;
    rep.outflow_mass = upd.boundary_outflow_mass;

    for (std::size_t i = 0; i < model.faces.size(); ++i)
    {
      if (fluxes_.entry[i] != 1)
        continue;
      const Face &f = model.faces[i];
      const auto &rule = model.rules.rule(model.map.cell_material[f.lower],
                                          model.map.cell_material[f.upper]);
      const std::size_t coarse = model.map.cell_material[f.lower] == rule.coarse ? f.lower : f.upper;
      const auto &cm = model.materials[rule.coarse];
      const auto &fm = model.materials[rule.fine];
      InterfaceTrace tr;
      tr.face = i;
      tr.se_coarse = cells.se[coarse];
      const auto eq = equilibrium_saturation(tr.se_coarse, cm, fm);
      tr.se_fine_equilibrium = eq.value_or(1.0);
      tr.residual = eq ? capillary_continuity_residual(tr.se_coarse, cm, *eq, fm) : 0.0;
      rep.penetrating.push_back(tr);
    }
  }
  catch (const SimulationError &)
  {
    throw;
  }
  catch (const std::exception &e)
  {
    std::ostringstream msg;
    msg << e.what() << " (at t = " << state_.time << " s, step " << rep.step << ")";
    throw SimulationError(msg.str(), state_.time, rep.step);
  }
  return rep;
}

MassPartitionReport Simulator::sample_mass() const
{
  auto r = partition_pool_ganglia(state_, prepared_.model, baseline(),
                                  scenario_.analysis.pool_threshold,
                                  scenario_.analysis.ganglia_floor);
  r.injected_to_date = injected_mass();
  r.outflow_to_date = outflow_mass_;
  r.clamp_to_date = clamp_mass_;
  return r;
}

PlumeMetrics Simulator::sample_plume() const
{
  return plume_metrics(state_, prepared_.model.grid, scenario_.analysis.detection_threshold);
}

SimulationResult Simulator::run(const RunOptions &options)
{
  const auto start = std::chrono::steady_clock::now();
  SimulationResult res;
  const long steps_before = steps_;
  const auto &reports = scenario_.report_times;
  auto next = std::lower_bound(reports.begin(), reports.end(), state_.time);

  auto sample = [&] {
    res.mass.push_back(sample_mass());
    res.plume.push_back(sample_plume());
    Snapshot snap{state_.time, state_};
    if (options.on_report)
      options.on_report(snap);
    if (options.keep_snapshots)
      res.snapshots.push_back(std::move(snap));
  };

  if (next != reports.end() && *next == state_.time)
  {
    sample();
    ++next;
  }
  while (state_.time < scenario_.end_time)
  {
    const StepReport rep = step();
    res.pressure_iterations += rep.pressure_iterations;
    if (options.on_step)
      options.on_step(rep);
    if (next != reports.end() && state_.time == *next)
    {
      sample();
      ++next;
    }
  }

  res.final_state = state_;
  res.mass_error = mass_balance_error(res.mass);
  res.clamp_mass = clamp_mass_;
  res.outflow_mass = outflow_mass_;
  res.steps = steps_ - steps_before;
  res.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

}  // namespace dnapl
