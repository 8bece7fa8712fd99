#pragma once

#include <dnapl/simulation.hpp>

#include <filesystem>
#include <string>

namespace dnapl
{

inline constexpr const char *kTimeseriesHeader =
    "time_s,total_kg,pool_kg,ganglia_kg,injected_kg,front_depth_m,lateral_extent_m,max_sn,"
    "mass_error_rel";

/// One row per report time. Numbers use the shortest text that reads back to
/// the same double.
std::string format_timeseries(const SimulationResult &result);
void write_timeseries(const SimulationResult &result, const std::filesystem::path &path);

}  // namespace dnapl
