#include <dnapl/analysis.hpp>
#include <dnapl/buckley_leverett.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace dnapl;

namespace
{

FlowModel model_of(const std::vector<double> &extents, const std::vector<int> &res,
                   const std::vector<Region> &regions = {})
{
  Grid g = build_grid(extents, res);
  MaterialMap map = assign_materials(g, 0, regions);
  return make_flow_model(g, {sand_properties(), clay_properties()}, map, {1000.0, 1e-3},
                         {1630.0, 0.9e-3}, {}, {});
}

SimulationState uniform(const FlowModel &m, double s)
{
  return {0.0, std::vector<double>(m.grid.cell_count(), 0.0),
          std::vector<double>(m.grid.cell_count(), s)};
}

}  // namespace

TEST(TotalMass, ProductExamples)
{
  const auto one = model_of({1.0}, {1});
  EXPECT_EQ(total_mass(uniform(one, 0.0), one), 0.0);
  EXPECT_NEAR(total_mass(uniform(one, 0.1), one), 48.9, 1e-12);

  const auto field = model_of({50.0, 15.0, 15.0}, {10, 3, 3});
  EXPECT_NEAR(total_mass(uniform(field, 0.001), field), 5501.25, 1e-8);
  // the initial field drops out against itself as baseline
  const auto s0 = uniform(field, 0.001);
  EXPECT_EQ(total_mass(s0, field, s0.s_n), 0.0);
}

TEST(PartitionPoolGanglia, AllPool)
{
  const auto m = model_of({2.0, 2.0}, {4, 4});
  const auto r = partition_pool_ganglia(uniform(m, 0.3), m, {}, 0.16, 0.01);
  EXPECT_EQ(r.ganglia_mass, 0.0);
  EXPECT_EQ(r.background_mass, 0.0);
  EXPECT_NEAR(r.pool_mass, 0.3 * 4.0 * 0.3 * 1630.0, 1e-10);
}

TEST(PartitionPoolGanglia, OneToFourRatio)
{
  const auto m = model_of({2.0}, {2});
  auto s = uniform(m, 0.0);
  s.s_n = {0.05, 0.20};
  const auto r = partition_pool_ganglia(s, m, {}, 0.16, 0.01);
  EXPECT_NEAR(r.ganglia_mass / r.pool_mass, 0.25, 1e-15);
}

TEST(PartitionPoolGanglia, ClassesAreExhaustive)
{
  const auto m = model_of({5.0, 5.0}, {20, 20}, {{"lens", 1, Box{{1, 1, -1}, {3, 2, 1}}}});
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 0.4);
  auto s = uniform(m, 0.0);
  for (auto &v : s.s_n)
    v = u(rng);
  const std::vector<double> baseline(s.s_n.size(), 0.001);
  const auto r = partition_pool_ganglia(s, m, baseline, 0.16, 0.02);
  EXPECT_NEAR(r.pool_mass + r.ganglia_mass + r.background_mass, total_mass(s, m, baseline),
              1e-12 * r.total_mass);
  EXPECT_EQ(r.total_mass, r.pool_mass + r.ganglia_mass + r.background_mass);
  EXPECT_GT(r.pool_mass, 0.0);
  EXPECT_GT(r.ganglia_mass, 0.0);
  EXPECT_GT(r.background_mass, 0.0);
}

TEST(PlumeMetrics, NothingDetected)
{
  const auto m = model_of({3.0, 3.0}, {3, 3});
  const auto p = plume_metrics(uniform(m, 0.001), m.grid, 0.01);
  EXPECT_EQ(p.front_depth, 0.0);
  EXPECT_EQ(p.connected_components, 0);
  EXPECT_EQ(p.detected_cells, 0u);
  EXPECT_EQ(p.max_lateral_extent(), 0.0);
}

TEST(PlumeMetrics, SingleCell)
{
  const auto m = model_of({3.0, 1.5}, {3, 3});
  auto s = uniform(m, 0.0);
  s.s_n[m.grid.index(1, 1, 0)] = 0.2;
  const auto p = plume_metrics(s, m.grid, 0.01);
  EXPECT_EQ(p.connected_components, 1);
  ASSERT_EQ(p.lateral_extent.size(), 1u);
  EXPECT_DOUBLE_EQ(p.lateral_extent[0], 1.0);
  EXPECT_DOUBLE_EQ(p.front_depth, 0.75);
  EXPECT_EQ(p.max_sn, 0.2);
  EXPECT_DOUBLE_EQ(p.max_sn_location[0], 1.5);
}

TEST(PlumeMetrics, ClayRowSplitsComponents)
{
  // 3x3: DNAPL above and below an undetected middle row
  const auto m = model_of({3.0, 3.0}, {3, 3}, {{"clay", 1, Box{{0, 1, -1}, {3, 2, 1}}}});
  auto s = uniform(m, 0.001);
  s.s_n[m.grid.index(1, 2, 0)] = 0.3;
  s.s_n[m.grid.index(0, 0, 0)] = 0.05;
  s.s_n[m.grid.index(1, 0, 0)] = 0.05;
  const auto p = plume_metrics(s, m.grid, 0.01);
  EXPECT_EQ(p.connected_components, 2);
  EXPECT_EQ(p.detected_cells, 3u);
  EXPECT_DOUBLE_EQ(p.front_depth, 2.5);
  EXPECT_DOUBLE_EQ(p.lateral_extent[0], 2.0);

  // a diagonal contact does not join them
  s.s_n[m.grid.index(0, 1, 0)] = 0.05;
  EXPECT_EQ(plume_metrics(s, m.grid, 0.01).connected_components, 2);
  s.s_n[m.grid.index(1, 1, 0)] = 0.05;
  EXPECT_EQ(plume_metrics(s, m.grid, 0.01).connected_components, 1);
}

TEST(PlumeMetrics, PureFunctionOfState)
{
  const auto m = model_of({4.0, 4.0}, {8, 8});
  auto s = uniform(m, 0.0);
  for (std::size_t c = 0; c < s.s_n.size(); c += 3)
    s.s_n[c] = 0.1;
  const auto a = plume_metrics(s, m.grid, 0.01);
  const auto b = plume_metrics(s, m.grid, 0.01);
  EXPECT_EQ(a.connected_components, b.connected_components);
  EXPECT_EQ(a.front_depth, b.front_depth);
  EXPECT_EQ(a.lateral_extent, b.lateral_extent);
}

TEST(MassBalanceError, LedgerTerms)
{
  std::vector<MassPartitionReport> series(3);
  series[0] = {0.0, 0.0};
  series[1].total_mass = 9.0;
  series[1].injected_to_date = 10.0;
  series[1].outflow_to_date = 0.5;
  series[1].clamp_to_date = 0.5;
  series[2].total_mass = 9.9;
  series[2].injected_to_date = 10.0;
  const auto e = mass_balance_error(series);
  ASSERT_EQ(e.size(), 3u);
  EXPECT_EQ(e[0], 0.0);
  EXPECT_EQ(e[1], 0.0);
  EXPECT_NEAR(e[2], 0.01, 1e-15);
}

TEST(MassInCells, SubsetOfTotal)
{
  const auto m = model_of({2.0}, {4});
  auto s = uniform(m, 0.0);
  s.s_n = {0.1, 0.2, 0.3, 0.4};
  const std::vector<std::size_t> cells{1, 3};
  EXPECT_NEAR(mass_in_cells(s, m, cells), 0.6 * 0.5 * 0.3 * 1630.0, 1e-12);
  EXPECT_EQ(mass_in_cells(s, m, {}), 0.0);
}
