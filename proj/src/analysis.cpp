#include <dnapl/analysis.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace dnapl
{

namespace
{
double cell_mass(const SimulationState &state, const FlowModel &model,
                 std::span<const double> baseline, std::size_t c)
{
  const double s0 = baseline.empty() ? 0.0 : baseline[c];
  return model.pore_volume[c] * model.nonwetting.density * (state.s_n[c] - s0);
}
}  // namespace

double PlumeMetrics::max_lateral_extent() const
{
  double e = 0.0;
  for (double x : lateral_extent)
    e = std::max(e, x);
  return e;
}

double total_mass(const SimulationState &state, const FlowModel &model,
                  std::span<const double> baseline)
{
  double m = 0.0;
  for (std::size_t c = 0; c < state.s_n.size(); ++c)
    m += cell_mass(state, model, baseline, c);
  return m;
}

double mass_in_cells(const SimulationState &state, const FlowModel &model,
                     std::span<const std::size_t> cells, std::span<const double> baseline)
{
  double m = 0.0;
  for (auto c : cells)
    m += cell_mass(state, model, baseline, c);
  return m;
}

MassPartitionReport partition_pool_ganglia(const SimulationState &state, const FlowModel &model,
                                           std::span<const double> baseline,
                                           double pool_threshold, double ganglia_floor)
{
  MassPartitionReport r;
  r.time = state.time;
  for (std::size_t c = 0; c < state.s_n.size(); ++c)
  {
    const double s = state.s_n[c];
    const double m = cell_mass(state, model, baseline, c);
    if (s >= pool_threshold)
      r.pool_mass += m;
    else if (s > ganglia_floor)
      r.ganglia_mass += m;
    else
      r.background_mass += m;
  }
  r.total_mass = r.pool_mass + r.ganglia_mass + r.background_mass;
  return r;
}

PlumeMetrics plume_metrics(const SimulationState &state, const Grid &grid, double detection)
{
  PlumeMetrics pm;
  const int g = grid.gravity_axis();
  const std::size_t n = grid.cell_count();

  std::array<int, 3> lo{std::numeric_limits<int>::max(), std::numeric_limits<int>::max(),
                        std::numeric_limits<int>::max()};
  std::array<int, 3> hi{-1, -1, -1};
  std::vector<int> label(n, -1);
  std::vector<std::size_t> stack;

  for (std::size_t c = 0; c < n; ++c)
  {
    const double s = state.s_n[c];
    if (s > pm.max_sn)
    {
      pm.max_sn = s;
      pm.max_sn_location = grid.center(c);
    }
    if (!(s > detection))
      continue;
    ++pm.detected_cells;
    pm.front_depth = std::max(pm.front_depth, grid.depth(c));
    const auto ijk = grid.coords(c);
    for (int a = 0; a < 3; ++a)
    {
      lo[a] = std::min(lo[a], ijk[a]);
      hi[a] = std::max(hi[a], ijk[a]);
    }
  }

  for (int a = 0; a < grid.dimension; ++a)
  {
    if (a == g)
      continue;
    pm.lateral_extent.push_back(pm.detected_cells ? (hi[a] - lo[a] + 1) * grid.spacing[a] : 0.0);
  }

  // flood fill over face neighbours
  for (std::size_t seed = 0; seed < n; ++seed)
  {
    if (!(state.s_n[seed] > detection) || label[seed] >= 0)
      continue;
    const int id = pm.connected_components++;
    label[seed] = id;
    stack.push_back(seed);
    while (!stack.empty())
    {
      const std::size_t c = stack.back();
      stack.pop_back();
      const auto ijk = grid.coords(c);
      for (int a = 0; a < grid.dimension; ++a)
        for (int d : {-1, 1})
        {
          auto nb = ijk;
          nb[a] += d;
          if (nb[a] < 0 || nb[a] >= grid.cells[a])
            continue;
          const std::size_t m = grid.index(nb[0], nb[1], nb[2]);
          if (label[m] < 0 && state.s_n[m] > detection)
          {
            label[m] = id;
            stack.push_back(m);
          }
        }
    }
  }
  return pm;
}

std::vector<double> mass_balance_error(std::span<const MassPartitionReport> series)
{
  std::vector<double> err;
  err.reserve(series.size());
  for (const auto &r : series)
  {
    const double residual =
        r.total_mass - r.injected_to_date + r.outflow_to_date + r.clamp_to_date;
    err.push_back(std::abs(residual) / std::max(r.injected_to_date, 1e-6));
  }
  return err;
}

}  // namespace dnapl
