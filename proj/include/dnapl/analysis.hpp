#pragma once

#include <dnapl/flow_model.hpp>

#include <cstddef>
#include <span>
#include <vector>

namespace dnapl
{

/// DNAPL mass split by saturation class at one time. Masses are measured
/// relative to a baseline saturation field (normally the initial one).
struct MassPartitionReport
{
  double time = 0.0;               // s
  double total_mass = 0.0;         // kg, pool + ganglia + background
  double pool_mass = 0.0;          // cells with s_n >= pool threshold
  double ganglia_mass = 0.0;       // ganglia floor < s_n < pool threshold
  double background_mass = 0.0;    // s_n <= ganglia floor
  double injected_to_date = 0.0;   // kg
  double outflow_to_date = 0.0;    // kg, through Dirichlet boundaries
  double clamp_to_date = 0.0;      // kg removed by saturation clamping
};

struct PlumeMetrics
{
  double front_depth = 0.0;        // m below the top, deepest detected cell center
  /// Bounding-box width of the detected cells along each horizontal axis.
  std::vector<double> lateral_extent;
  double max_sn = 0.0;
  Vec3 max_sn_location{0.0, 0.0, 0.0};
  int connected_components = 0;
  std::size_t detected_cells = 0;

  double max_lateral_extent() const;
};

/// Sum of porosity * volume * rho_n * (s_n - baseline); baseline may be empty.
double total_mass(const SimulationState &state, const FlowModel &model,
                  std::span<const double> baseline = {});

MassPartitionReport partition_pool_ganglia(const SimulationState &state, const FlowModel &model,
                                           std::span<const double> baseline,
                                           double pool_threshold, double ganglia_floor);

/// Front depth, lateral extents and connected components (face adjacency)
/// of the cells with s_n > detection.
PlumeMetrics plume_metrics(const SimulationState &state, const Grid &grid, double detection);

/// |in-domain - injected + outflow + clamp| / max(injected, 1e-6 kg) per sample.
std::vector<double> mass_balance_error(std::span<const MassPartitionReport> series);

/// DNAPL mass in the given cells relative to the baseline.
double mass_in_cells(const SimulationState &state, const FlowModel &model,
                     std::span<const std::size_t> cells, std::span<const double> baseline = {});

}  // namespace dnapl
