#include <dnapl/buckley_leverett.hpp>
#include <dnapl/simulation.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

using namespace dnapl;

namespace
{

// Vertical sand column, 2 m tall, open at the top, DNAPL released into
// the top cell.
Scenario sand_column(int cells, double rate = 5e-4)
{
  Scenario sc;
  sc.name = "column";
  sc.grid = {{2.0}, {cells}, {}};
  sc.materials = {{"sand", sand_properties()}, {"clay", clay_properties()}};
  sc.background_material = "sand";
  sc.hydrostatic_boundaries = {BoundarySide{0, +1}};
  const double dx = 2.0 / cells;
  sc.injections = {InjectionSpec{"top", Phase::Nonwetting, {2.0 - dx}, {2.0}, {{0.0, 1800.0, rate}}}};
  sc.end_time = 3600.0;
  for (double t = 300.0; t <= sc.end_time; t += 300.0)
    sc.report_times.push_back(t);
  return sc;
}

// 2D section with a clay lens and hydrostatic sides.
Scenario lens_section()
{
  Scenario sc;
  sc.name = "section";
  sc.grid = {{4.0, 4.0}, {16, 16}, {}};
  sc.materials = {{"sand", sand_properties()}, {"clay", clay_properties()}};
  sc.background_material = "sand";
  sc.regions = {{"lens", "clay", {1.5, 2.0}, {2.5, 2.5}}};
  sc.hydrostatic_boundaries = {BoundarySide{0, -1}, BoundarySide{0, +1}};
  sc.end_time = 2.0e5;
  sc.report_times = {1.0e5, 2.0e5};
  return sc;
}

double max_abs_diff(const std::vector<double> &a, const std::vector<double> &b)
{
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace

TEST(Simulation, EquilibriumIsPreserved)
{
  Simulator sim(lens_section());
  const auto initial = sim.state();
  const auto res = sim.run();
  EXPECT_EQ(res.final_state.time, 2.0e5);
  EXPECT_LT(max_abs_diff(res.final_state.s_n, initial.s_n), 1e-12);
  EXPECT_LT(max_abs_diff(res.final_state.p_w, initial.p_w), 1e-9 * 4e4);
  EXPECT_EQ(res.mass.size(), 2u);
}

TEST(Simulation, SingleStepOfEquilibriumOnlyAdvancesTime)
{
  Simulator sim(lens_section());
  const auto before = sim.state();
  const auto rep = sim.step(1000.0);
  EXPECT_EQ(rep.dt, 1000.0);
  EXPECT_EQ(sim.state().time, 1000.0);
  EXPECT_LT(max_abs_diff(sim.state().s_n, before.s_n), 1e-12);
}

TEST(Simulation, StepsComposeWithoutHiddenState)
{
  const auto sc = sand_column(20);
  Simulator a(sc), b(sc);
  a.step(3.0);
  a.step(5.0);
  b.step(3.0);
  b.step(5.0);
  EXPECT_EQ(a.state(), b.state());
  EXPECT_DOUBLE_EQ(a.state().time, 8.0);

  // run() is nothing more than repeated step() up to the end time
  auto short_sc = sc;
  short_sc.end_time = 600.0;
  short_sc.report_times = {300.0, 600.0};
  Simulator r(short_sc), s(short_sc);
  r.run();
  while (s.state().time < short_sc.end_time)
    s.step();
  EXPECT_EQ(r.state(), s.state());
}

TEST(Simulation, SourceStepAddsRateTimesDt)
{
  auto sc = sand_column(20);
  sc.hydrostatic_boundaries.clear();
  sc.hydrostatic_boundaries = {BoundarySide{0, -1}};  // keep the open face far from the source
  Simulator sim(sc);
  const double m0 = total_mass(sim.state(), sim.model(), sim.baseline());
  EXPECT_EQ(m0, 0.0);
  sim.step(10.0);
  const double m1 = total_mass(sim.state(), sim.model(), sim.baseline());
  EXPECT_NEAR(m1, 5e-4 * 10.0, 1e-12 * 5e-3);
  EXPECT_NEAR(sim.injected_mass(), 5e-3, 1e-18);
  sim.step(20.0);
  EXPECT_NEAR(total_mass(sim.state(), sim.model(), sim.baseline()), 5e-4 * 30.0, 1e-12 * 1.5e-2);
}

TEST(Simulation, ColumnFrontDescendsMonotonically)
{
  Simulator sim(sand_column(40));
  const auto res = sim.run();
  ASSERT_EQ(res.plume.size(), 12u);
  double previous = 0.0;
  for (const auto &p : res.plume)
  {
    EXPECT_GE(p.front_depth, previous);
    previous = p.front_depth;
  }
  EXPECT_GT(res.plume.back().front_depth, res.plume.front().front_depth);
  for (double e : res.mass_error)
    EXPECT_LT(e, 5e-3);
}

TEST(Simulation, ClosedDomainConservesMass)
{
  // mobile DNAPL everywhere, no boundary and no source: it only segregates
  auto sc = sand_column(20);
  sc.hydrostatic_boundaries.clear();
  sc.injections.clear();
  sc.initial_nonwetting_saturation = 0.3;
  Simulator sim(sc);
  const double m = total_mass(sim.state(), sim.model());
  while (sim.steps() < 1000)
    sim.step();
  EXPECT_GT(sim.state().s_n.front(), 0.3);
  EXPECT_NEAR(total_mass(sim.state(), sim.model()), m, 1e-10 * m);
}

TEST(Simulation, RunsAreDeterministic)
{
  const auto sc = sand_column(30);
  const auto a = Simulator(sc).run({true});
  const auto b = Simulator(sc).run({true});
  ASSERT_EQ(a.snapshots.size(), b.snapshots.size());
  for (std::size_t i = 0; i < a.snapshots.size(); ++i)
    EXPECT_EQ(a.snapshots[i].state, b.snapshots[i].state);
  EXPECT_EQ(a.steps, b.steps);
}

TEST(Simulation, ClayBelowPoolStaysUntouched)
{
  auto sc = sand_column(40, 2e-2);
  sc.regions = {{"clay", "clay", {0.0}, {1.0}}};
  sc.end_time = 14400.0;
  sc.report_times = {14400.0};
  Simulator sim(sc);
  const auto res = sim.run();
  const auto &m = sim.model();
  for (std::size_t c = 0; c < m.grid.cell_count(); ++c)
    if (m.map.cell_material[c] == 1)
      ASSERT_EQ(res.final_state.s_n[c], sim.baseline()[c]) << c;
  // DNAPL has reached the interface and sits on it
  EXPECT_GT(res.final_state.s_n[20], sc.analysis.detection_threshold);
}

TEST(Simulation, StepFailureIsTaggedWithTimeAndStep)
{
  auto sc = sand_column(20);
  sc.solver.min_timestep = 1.0e8;
  sc.solver.initial_timestep = 1.0e9;
  Simulator sim(sc);
  try
  {
    sim.run();
    FAIL() << "expected a SimulationError";
  }
  catch (const SimulationError &e)
  {
    EXPECT_GE(e.step(), 1);
    EXPECT_GE(e.time(), 0.0);
    EXPECT_NE(std::string(e.what()).find("step"), std::string::npos);
  }
}

TEST(Simulation, SaturationChangeTriggersEarlierSolves)
{
  auto sc = sand_column(30);
  sc.end_time = 1200.0;
  sc.report_times = {1200.0};
  sc.solver.pressure_update_interval = 1000;
  auto count_solves = [](const Scenario &s) {
    long solves = 0;
    RunOptions o;
    o.on_step = [&](const StepReport &r) { solves += r.pressure_solved ? 1 : 0; };
    Simulator(s).run(o);
    return solves;
  };
  const long lagged = count_solves(sc);
  sc.solver.pressure_update_max_change = 0.01;
  const long triggered = count_solves(sc);
  EXPECT_GT(triggered, lagged);
}

TEST(Simulation, InvalidScenarioListsEveryIssue)
{
  auto sc = sand_column(20);
  sc.end_time = -1.0;
  sc.background_material = "gravel";
  try
  {
    Simulator sim(sc);
    FAIL() << "expected a ScenarioError";
  }
  catch (const ScenarioError &e)
  {
    EXPECT_GE(e.issues().size(), 2u);
  }
}
