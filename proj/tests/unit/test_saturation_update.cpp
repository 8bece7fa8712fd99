#include <dnapl/buckley_leverett.hpp>
#include <dnapl/saturation_update.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <vector>

using namespace dnapl;

namespace
{

const FluidProperties kWater{1000.0, 1.0e-3};
const FluidProperties kPce{1630.0, 0.9e-3};

// Sand cells of `length` m each (unit cross-section) along one axis.
FlowModel sand_row(int n, double length, const std::vector<BoundarySide> &sides = {})
{
  PhysicsOptions phys;
  phys.gravity = 0.0;
  const std::vector<double> extents{n * length};
  const std::vector<int> res{n};
  Grid g = build_grid(extents, res);
  MaterialMap map = assign_materials(g, 0, {});
  return make_flow_model(g, {sand_properties()}, map, kWater, kPce, phys, sides);
}

PhaseFluxes empty_fluxes(const FlowModel &m)
{
  PhaseFluxes f;
  f.wetting.assign(m.faces.size(), 0.0);
  f.nonwetting.assign(m.faces.size(), 0.0);
  f.boundary_wetting.assign(m.dirichlet.size(), 0.0);
  f.boundary_nonwetting.assign(m.dirichlet.size(), 0.0);
  f.entry.assign(m.faces.size(), -1);
  f.nonwetting_outflow.assign(m.grid.cell_count(), 0.0);
  f.outflow_sensitivity.assign(m.grid.cell_count(), 0.0);
  return f;
}

double dnapl_mass(const FlowModel &m, const std::vector<double> &s)
{
  double total = 0.0;
  for (std::size_t c = 0; c < s.size(); ++c)
    total += s[c] * m.pore_volume[c] * m.nonwetting.density;
  return total;
}

}  // namespace

TEST(StableTimestep, SingleCellOutflowExample)
{
  const auto m = sand_row(1, 0.01);
  ASSERT_NEAR(m.pore_volume[0], 0.003, 1e-15);
  auto f = empty_fluxes(m);
  f.nonwetting_outflow[0] = 1e-6;
  EXPECT_NEAR(stable_timestep(f, m, 0.5, {}), 1338.0, 1e-9);
}

TEST(StableTimestep, LipschitzBoundCanBind)
{
  const auto m = sand_row(1, 0.01);
  auto f = empty_fluxes(m);
  f.nonwetting_outflow[0] = 1e-6;
  f.outflow_sensitivity[0] = 1e-5;
  EXPECT_NEAR(stable_timestep(f, m, 0.5, {}), 0.5 * 0.003 / 1e-5, 1e-9);
}

TEST(StableTimestep, ZeroFluxIsGrowthCapped)
{
  const auto m = sand_row(3, 1.0);
  const auto f = empty_fluxes(m);
  StepLimits lim;
  lim.previous_dt = 40.0;
  EXPECT_DOUBLE_EQ(stable_timestep(f, m, 0.5, lim), 50.0);
  lim.time_to_event = 12.0;
  EXPECT_DOUBLE_EQ(stable_timestep(f, m, 0.5, lim), 12.0);
  lim.time_to_event = 1e9;
  lim.max_dt = 45.0;
  EXPECT_DOUBLE_EQ(stable_timestep(f, m, 0.5, lim), 45.0);
}

TEST(StableTimestep, UnderflowThrows)
{
  const auto m = sand_row(1, 0.01);
  auto f = empty_fluxes(m);
  f.nonwetting_outflow[0] = 1e8;
  EXPECT_THROW(stable_timestep(f, m, 0.5, {}), TimestepError);
}

TEST(AdvanceSaturation, ZeroFluxIsIdentity)
{
  const auto m = sand_row(4, 1.0);
  const std::vector<double> s{0.0, 0.1, 0.5, 0.892};
  const auto u = advance_saturation(s, empty_fluxes(m), 100.0, zero_sources(4), m);
  EXPECT_EQ(u.s_n, s);
  EXPECT_EQ(u.clamp_mass, 0.0);
}

TEST(AdvanceSaturation, TwoCellTransfer)
{
  const auto m = sand_row(2, 0.01);
  auto f = empty_fluxes(m);
  f.nonwetting[0] = 1e-6;  // from cell 0 to cell 1
  const std::vector<double> s{0.5, 0.1};
  const auto u = advance_saturation(s, f, 100.0, zero_sources(2), m);
  EXPECT_NEAR(u.s_n[0] - s[0], -1.0 / 30.0, 1e-14);
  EXPECT_NEAR(u.s_n[1] - s[1], 1.0 / 30.0, 1e-14);
  EXPECT_NEAR(dnapl_mass(m, u.s_n), dnapl_mass(m, s), 1e-15 * dnapl_mass(m, s));
}

TEST(AdvanceSaturation, SourceRaisesSaturation)
{
  const auto m = sand_row(1, 2.0);
  auto q = zero_sources(1);
  const double r = 1e-6;  // m^3/s per m^3 of bulk volume
  q.nonwetting[0] = r * 2.0;
  const auto u = advance_saturation(std::vector<double>{0.0}, empty_fluxes(m), 1000.0, q, m);
  EXPECT_NEAR(u.s_n[0], r * 1000.0 / 0.3, 1e-15);
}

TEST(AdvanceSaturation, ClampIsRecordedInLedger)
{
  const auto m = sand_row(2, 1.0);
  auto f = empty_fluxes(m);
  f.nonwetting[0] = 1e-3;
  const std::vector<double> s{0.05, 0.85};
  const auto u = advance_saturation(s, f, 100.0, zero_sources(2), m);
  // raw values: 0.05 - 1/3 and 0.85 + 1/3
  EXPECT_EQ(u.s_n[0], 0.0);
  EXPECT_DOUBLE_EQ(u.s_n[1], 0.902);
  const double pv = 0.3, rho = 1630.0;
  const double expected = ((0.05 - 0.1 / pv) - 0.0 + (0.85 + 0.1 / pv) - 0.902) * pv * rho;
  EXPECT_NEAR(u.clamp_mass, expected, 1e-12 * std::abs(expected));
  // ledger closes the balance exactly
  EXPECT_NEAR(dnapl_mass(m, u.s_n) + u.clamp_mass, dnapl_mass(m, s), 1e-12);
}

TEST(AdvanceSaturation, ConservesMassWithRandomFluxes)
{
  const auto m = sand_row(50, 0.2, {{0, +1}});
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> s_dist(0.2, 0.6), f_dist(-1e-7, 1e-7);
  std::vector<double> s(50);
  for (auto &v : s)
    v = s_dist(rng);
  auto f = empty_fluxes(m);
  for (auto &v : f.nonwetting)
    v = f_dist(rng);
  f.boundary_nonwetting[0] = 3e-8;
  auto q = zero_sources(50);
  q.nonwetting[7] = 2e-8;
  const double dt = 200.0;
  const auto u = advance_saturation(s, f, dt, q, m);
  ASSERT_EQ(u.clamp_mass, 0.0);
  const double before = dnapl_mass(m, s);
  const double expected = before + dt * 1630.0 * (2e-8 - 3e-8);
  EXPECT_NEAR(dnapl_mass(m, u.s_n), expected, 1e-12 * before);
  EXPECT_NEAR(u.boundary_outflow_mass, dt * 1630.0 * 3e-8, 1e-18);
}

TEST(AdvanceSaturation, InPlaceOverloadMatches)
{
  const auto m = sand_row(30, 0.5);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> s_dist(0.0, 0.9), f_dist(-2e-6, 2e-6);
  SaturationUpdate reused;
  reused.s_n.assign(7, 1.0);
  reused.clamp_mass = 5.0;
  for (int trial = 0; trial < 5; ++trial)
  {
    std::vector<double> s(30);
    for (auto &v : s)
      v = s_dist(rng);
    auto f = empty_fluxes(m);
    for (auto &v : f.nonwetting)
      v = f_dist(rng);
    const auto fresh = advance_saturation(s, f, 50.0, zero_sources(30), m);
    advance_saturation(s, f, 50.0, zero_sources(30), m, reused);
    EXPECT_EQ(fresh.s_n, reused.s_n);
    EXPECT_EQ(fresh.clamp_mass, reused.clamp_mass);
  }
}

TEST(ApplySource, FieldRateAndSchedule)
{
  const auto m = sand_row(10, 1.0);
  Injection inj{"spill", Phase::Nonwetting, Box{{2.0, -1, -1}, {5.0, 1, 1}},
                {{0.0, 1296000.0, 3.75e-4}}};
  const std::vector<ResolvedInjection> injections{{inj, cells_in_box(m.grid, inj.patch)}};
  ASSERT_EQ(injections[0].cells.size(), 3u);

  const auto q = apply_source(injections, 1000.0, m);
  const double total = std::accumulate(q.nonwetting.begin(), q.nonwetting.end(), 0.0);
  EXPECT_NEAR(total, 3.75e-4 / 1630.0, 1e-20);
  EXPECT_NEAR(total, 2.301e-7, 5e-11);
  for (auto c : injections[0].cells)
    EXPECT_DOUBLE_EQ(q.nonwetting[c], total / 3.0);
  EXPECT_EQ(std::accumulate(q.wetting.begin(), q.wetting.end(), 0.0), 0.0);

  const auto off = apply_source(injections, 1296000.0 + 1.0, m);
  for (double v : off.nonwetting)
    EXPECT_EQ(v, 0.0);

  EXPECT_NEAR(inj.mass_until(1296000.0), 486.0, 1e-9);
  EXPECT_NEAR(inj.mass_until(5400000.0), 486.0, 1e-9);
  EXPECT_NEAR(inj.mass_until(86400.0), 32.4, 1e-12);
}

TEST(ApplySource, WettingUsesWaterDensity)
{
  const auto m = sand_row(4, 1.0);
  Injection inj{"w", Phase::Wetting, Box{{0.0, -1, -1}, {1.0, 1, 1}}, {{0.0, 10.0, 2.0}}};
  const std::vector<ResolvedInjection> injections{{inj, cells_in_box(m.grid, inj.patch)}};
  const auto q = apply_source(injections, 5.0, m);
  EXPECT_DOUBLE_EQ(q.wetting[0], 2.0 / 1000.0);
  EXPECT_DOUBLE_EQ(inj.rate(10.0), 0.0);
  EXPECT_DOUBLE_EQ(inj.rate(0.0), 2.0);
}
