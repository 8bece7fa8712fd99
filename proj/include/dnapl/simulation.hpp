#pragma once

#include <dnapl/analysis.hpp>
#include <dnapl/flow_model.hpp>
#include <dnapl/linear_solver.hpp>
#include <dnapl/pressure_solver.hpp>
#include <dnapl/saturation_update.hpp>

#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dnapl
{

class ScenarioError : public std::runtime_error
{
 public:
  explicit ScenarioError(std::vector<std::string> issues);
  const std::vector<std::string> &issues() const { return issues_; }

 private:
  std::vector<std::string> issues_;
};

/// Solver or time-step failure inside the loop, tagged with where it happened.
class SimulationError : public std::runtime_error
{
 public:
  SimulationError(const std::string &what, double time, long step)
      : std::runtime_error(what), time_(time), step_(step)
  {
  }
  double time() const { return time_; }
  long step() const { return step_; }

 private:
  double time_;
  long step_;
};

struct GridSpec
{
  std::vector<double> extents;  // m, one entry per active axis
  std::vector<int> resolution;
  std::vector<double> origin;   // empty means zero

  bool operator==(const GridSpec &) const = default;
};

struct NamedMaterial
{
  std::string name;
  MaterialProperties properties;

  bool operator==(const NamedMaterial &) const = default;
};

/// Axis-aligned region given on the active axes only.
struct RegionSpec
{
  std::string name;
  std::string material;
  std::vector<double> min;
  std::vector<double> max;

  bool operator==(const RegionSpec &) const = default;
};

struct InjectionSpec
{
  std::string name;
  Phase phase = Phase::Nonwetting;
  std::vector<double> min;
  std::vector<double> max;
  std::vector<InjectionInterval> schedule;

  bool operator==(const InjectionSpec &) const = default;
};

struct SolverControls
{
  double cfl = 0.5;
  double pressure_tolerance = 1e-10;
  int max_pressure_iterations = 5000;
  Preconditioner preconditioner = Preconditioner::IncompleteCholesky;
  double initial_timestep = 1e-7;  // s
  double max_timestep_growth = 1.25;
  double max_timestep = std::numeric_limits<double>::infinity();
  double min_timestep = 1e-9;
  /// Pressure is re-solved every this many saturation steps, or earlier once
  /// some cell's s_n has moved by more than pressure_update_max_change since
  /// the last solve.
  int pressure_update_interval = 1;
  double pressure_update_max_change = std::numeric_limits<double>::infinity();

  bool operator==(const SolverControls &) const = default;
};

struct AnalysisOptions
{
  double pool_threshold = 0.16;
  double ganglia_floor = 0.01;
  double detection_threshold = 0.01;

  bool operator==(const AnalysisOptions &) const = default;
};

struct OutputOptions
{
  bool vtk_binary = true;

  bool operator==(const OutputOptions &) const = default;
};

struct Scenario
{
  int version = 1;
  std::string name;
  GridSpec grid;
  std::vector<NamedMaterial> materials;
  std::string background_material;
  std::vector<RegionSpec> regions;
  FluidProperties wetting{1000.0, 1.0e-3};
  FluidProperties nonwetting{1630.0, 0.9e-3};
  PhysicsOptions physics;
  std::vector<BoundarySide> hydrostatic_boundaries;
  double initial_nonwetting_saturation = 0.001;
  std::vector<InjectionSpec> injections;
  SolverControls solver;
  double end_time = 0.0;             // s
  std::vector<double> report_times;  // s, strictly increasing
  AnalysisOptions analysis;
  OutputOptions output;

  bool operator==(const Scenario &) const = default;
};

/// Semantic checks; every problem found is reported.
std::vector<std::string> validate_scenario(const Scenario &scenario);

struct PreparedScenario
{
  FlowModel model;
  std::vector<ResolvedInjection> injections;
  SimulationState initial;
};

/// Builds the grid, material map and flow model. Throws ScenarioError with
/// all issues (including injection patches that contain no cell center).
PreparedScenario prepare(const Scenario &scenario);

/// Penetrating interface crossed during a step.
struct InterfaceTrace
{
  std::size_t face = 0;
  double se_coarse = 1.0;
  double se_fine_equilibrium = 1.0;
  double residual = 0.0;
};

struct StepReport
{
  long step = 0;
  double time = 0.0;  // after the step
  double dt = 0.0;
  int pressure_iterations = 0;
  bool pressure_solved = false;
  double clamp_mass = 0.0;
  double outflow_mass = 0.0;
  std::vector<InterfaceTrace> penetrating;
};

struct Snapshot
{
  double time = 0.0;
  SimulationState state;
};

struct SimulationResult
{
  SimulationState final_state;
  std::vector<Snapshot> snapshots;
  std::vector<MassPartitionReport> mass;
  std::vector<PlumeMetrics> plume;
  std::vector<double> mass_error;
  double clamp_mass = 0.0;
  double outflow_mass = 0.0;
  long steps = 0;
  long pressure_iterations = 0;
  double wall_seconds = 0.0;
};

struct RunOptions
{
  bool keep_snapshots = false;
  std::function<void(const Snapshot &)> on_report;
  std::function<void(const StepReport &)> on_step;
};

class Simulator
{
 public:
  explicit Simulator(const Scenario &scenario);

  const Scenario &scenario() const { return scenario_; }
  const FlowModel &model() const { return prepared_.model; }
  const SimulationState &state() const { return state_; }
  const std::vector<double> &baseline() const { return prepared_.initial.s_n; }
  const PhaseFluxes &last_fluxes() const { return fluxes_; }
  long steps() const { return steps_; }

  /// Mass of the given phase injected up to the current time, kg.
  double injected_mass(Phase phase = Phase::Nonwetting) const;
  double outflow_mass() const { return outflow_mass_; }
  double clamp_mass() const { return clamp_mass_; }

  /// Advances by the stable step, shortened to land on the next report time,
  /// schedule change or end time.
  StepReport step();
  /// Advances by exactly `dt`, skipping the stability bound.
  StepReport step(double dt);

  MassPartitionReport sample_mass() const;
  PlumeMetrics sample_plume() const;

  /// Runs from the current state to the end time, sampling at report times.
  SimulationResult run(const RunOptions &options = {});

 private:
  StepReport advance(std::optional<double> forced_dt);
  double next_event() const;

  Scenario scenario_;
  PreparedScenario prepared_;
  PressureAssembler assembler_;
  PressureSystem system_;
  SolverOptions solver_options_;
  std::optional<IncompleteFactor> factor_;
  int factor_age_ = 0;
  int factor_iterations_ = 0;  // iterations of the first solve with the factor
  int last_iterations_ = 0;
  SimulationState state_;
  PhaseFluxes fluxes_;
  double previous_dt_ = 0.0;
  long steps_ = 0;
  int steps_since_solve_ = 0;
  // per-step work buffers
  CellCoefficients cells_;
  CellSources sources_;
  SaturationUpdate update_;
  std::vector<double> rates_;            // injection rates behind sources_
  std::vector<double> rates_at_solve_;   // and behind the last pressure solve
  std::vector<double> s_at_solve_;
  double outflow_mass_ = 0.0;
  double clamp_mass_ = 0.0;
  std::vector<double> events_;
};

}  // namespace dnapl
