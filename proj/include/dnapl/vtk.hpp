#pragma once

#include <dnapl/flow_model.hpp>

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace dnapl
{

class IoError : public std::runtime_error
{
 public:
  using std::runtime_error::runtime_error;
};

/// Legacy VTK structured-points file with cell arrays s_n, p_w (double) and
/// material_id (int). Binary data is big-endian as the format requires.
void write_snapshot(const SimulationState &state, const Grid &grid, const MaterialMap &map,
                    const std::filesystem::path &path, bool binary = true);

/// Contents of a structured-points file with cell data.
struct VtkCellData
{
  std::array<int, 3> point_dims{1, 1, 1};
  Vec3 origin{0.0, 0.0, 0.0};
  Vec3 spacing{1.0, 1.0, 1.0};
  std::string title;
  std::map<std::string, std::vector<double>> arrays;

  std::array<int, 3> cell_dims() const;
  /// Index of the cell containing `p` (faces belong to the upper cell, the
  /// outer faces to the boundary cell). Throws IoError if `p` is outside.
  std::size_t locate(const Vec3 &p) const;
};

/// Reads files produced by write_snapshot (ASCII or binary).
VtkCellData read_snapshot(const std::filesystem::path &path);

}  // namespace dnapl
