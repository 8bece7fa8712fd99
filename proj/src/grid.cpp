#include <dnapl/grid.hpp>

namespace dnapl
{

Grid build_grid(std::span<const double> extents, std::span<const int> resolution,
                std::span<const double> origin)
{
  if (extents.empty() || extents.size() > 3)
    throw GridError("grid needs 1 to 3 axes");
  if (resolution.size() != extents.size())
    throw GridError("grid extents and resolution differ in length");
  if (!origin.empty() && origin.size() != extents.size())
    throw GridError("grid origin and extents differ in length");

  Grid grid;
  grid.dimension = static_cast<int>(extents.size());
  for (std::size_t a = 0; a < extents.size(); ++a)
  {
    if (!(extents[a] > 0.0))
      throw GridError("grid extent on axis " + std::to_string(a) + " must be > 0");
    if (resolution[a] < 1)
      throw GridError("grid resolution on axis " + std::to_string(a) + " must be >= 1");
    grid.cells[a] = resolution[a];
    grid.spacing[a] = extents[a] / resolution[a];
    grid.origin[a] = origin.empty() ? 0.0 : origin[a];
  }
  return grid;
}

MaterialMap assign_materials(const Grid &grid, MaterialId background,
                             std::span<const Region> regions)
{
  MaterialMap map;
  map.background = background;
  map.regions.assign(regions.begin(), regions.end());
  map.cell_material.assign(grid.cell_count(), background);
  for (const auto &region : regions)
    for (auto cell : cells_in_box(grid, region.box))
      map.cell_material[cell] = region.material;
  return map;
}

std::vector<std::size_t> cells_in_box(const Grid &grid, const Box &box)
{
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < grid.cell_count(); ++c)
    if (box.contains(grid.center(c)))
      out.push_back(c);
  return out;
}

double harmonic_mean(double a, double b)
{
  return 2.0 * a * b / (a + b);
}

std::vector<Face> face_transmissibilities(const Grid &grid, const MaterialMap &map,
                                          std::span<const MaterialProperties> materials)
{
  std::vector<Face> faces;
  for (int axis = 0; axis < grid.dimension; ++axis)
  {
    const double area_over_distance = grid.face_area(axis) / grid.spacing[axis];
    std::array<int, 3> stride_ijk{0, 0, 0};
    stride_ijk[axis] = 1;
    const std::size_t stride = grid.index(stride_ijk[0], stride_ijk[1], stride_ijk[2]);
    for (std::size_t c = 0; c < grid.cell_count(); ++c)
    {
      if (grid.coords(c)[axis] + 1 >= grid.cells[axis])
        continue;
      const std::size_t n = c + stride;
      const MaterialId ma = map.cell_material[c];
      const MaterialId mb = map.cell_material[n];
      const double k = ma == mb ? materials[ma].permeability
                                : harmonic_mean(materials[ma].permeability,
                                                materials[mb].permeability);
      faces.push_back(Face{c, n, axis, k * area_over_distance, ma != mb});
    }
  }
  return faces;
}

}  // namespace dnapl
