#pragma once

#include <dnapl/constitutive.hpp>

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dnapl
{

using MaterialId = std::uint16_t;
using Vec3 = std::array<double, 3>;

class GridError : public std::invalid_argument
{
 public:
  using std::invalid_argument::invalid_argument;
};

/**
 * Structured Cartesian grid with one to three active axes. Inactive axes hold
 * a single cell of unit width, so a 2D grid is a slab of 1 m thickness.
 * Gravity acts along the last active axis, pointing towards its minimum; the
 * top of the domain is therefore the maximum coordinate on that axis.
 * Cells are numbered with axis 0 running fastest.
 */
struct Grid
{
  int dimension = 1;
  std::array<int, 3> cells{1, 1, 1};
  Vec3 spacing{1.0, 1.0, 1.0};
  Vec3 origin{0.0, 0.0, 0.0};

  int gravity_axis() const { return dimension - 1; }
  std::size_t cell_count() const
  {
    return static_cast<std::size_t>(cells[0]) * cells[1] * cells[2];
  }
  double cell_volume() const { return spacing[0] * spacing[1] * spacing[2]; }
  double face_area(int axis) const
  {
    return cell_volume() / spacing[axis];
  }
  double extent(int axis) const { return spacing[axis] * cells[axis]; }

  std::size_t index(int i, int j, int k) const
  {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(cells[0]) * (static_cast<std::size_t>(j) +
                                                 static_cast<std::size_t>(cells[1]) * k);
  }
  std::array<int, 3> coords(std::size_t cell) const
  {
    const auto nx = static_cast<std::size_t>(cells[0]);
    const auto ny = static_cast<std::size_t>(cells[1]);
    return {static_cast<int>(cell % nx), static_cast<int>((cell / nx) % ny),
            static_cast<int>(cell / (nx * ny))};
  }
  Vec3 center(std::size_t cell) const
  {
    const auto ijk = coords(cell);
    Vec3 c;
    for (int a = 0; a < 3; ++a)
      c[a] = origin[a] + (ijk[a] + 0.5) * spacing[a];
    return c;
  }
  /// Coordinate of the top boundary along the gravity axis.
  double top() const { return origin[gravity_axis()] + extent(gravity_axis()); }
  /// Depth of the cell center below the top boundary.
  double depth(std::size_t cell) const { return top() - center(cell)[gravity_axis()]; }
};

/// Grid over [origin, origin + extents] with the given cell counts. The number
/// of entries in `extents` sets the dimension.
Grid build_grid(std::span<const double> extents, std::span<const int> resolution,
                std::span<const double> origin = {});

/// Axis-aligned box; inclusive on both ends.
struct Box
{
  Vec3 lo{0.0, 0.0, 0.0};
  Vec3 hi{0.0, 0.0, 0.0};

  bool contains(const Vec3 &p) const
  {
    for (int a = 0; a < 3; ++a)
      if (p[a] < lo[a] || p[a] > hi[a])
        return false;
    return true;
  }
  bool operator==(const Box &) const = default;
};

struct Region
{
  std::string name;
  MaterialId material = 0;
  Box box;

  bool operator==(const Region &) const = default;
};

/// Per-cell lithology. Regions are applied in order, so later regions win.
struct MaterialMap
{
  MaterialId background = 0;
  std::vector<Region> regions;
  std::vector<MaterialId> cell_material;
};

MaterialMap assign_materials(const Grid &grid, MaterialId background,
                             std::span<const Region> regions);

/// Cells whose centers lie inside the box.
std::vector<std::size_t> cells_in_box(const Grid &grid, const Box &box);

/// Interior face between `lower` and its neighbour `upper` along `axis`.
/// Fluxes across it are positive from lower to upper.
struct Face
{
  std::size_t lower = 0;
  std::size_t upper = 0;
  int axis = 0;
  double transmissibility = 0.0;  // m^3, harmonic-mean k * area / distance
  bool heterogeneous = false;
};

/// Interior faces ordered by axis, then by lower cell index.
std::vector<Face> face_transmissibilities(const Grid &grid, const MaterialMap &map,
                                          std::span<const MaterialProperties> materials);

double harmonic_mean(double a, double b);

}  // namespace dnapl
