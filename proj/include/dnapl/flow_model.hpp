#pragma once

#include <dnapl/constitutive.hpp>
#include <dnapl/grid.hpp>
#include <dnapl/interface_condition.hpp>

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace dnapl
{

/// Primary unknowns at one time level. The wetting saturation is always
/// 1 - s_n and never stored.
struct SimulationState
{
  double time = 0.0;               // s
  std::vector<double> p_w;         // Pa, per cell
  std::vector<double> s_n;         // per cell

  bool operator==(const SimulationState &) const = default;
};

/// Domain boundary identified by axis and side ("xmin" is axis 0, low side).
struct BoundarySide
{
  int axis = 0;
  int side = -1;  // -1 low, +1 high

  bool operator==(const BoundarySide &) const = default;
};

std::string to_string(BoundarySide side);
/// Parses "xmin", "xmax", "ymin", ..., "zmax"; throws std::invalid_argument.
BoundarySide parse_boundary_side(const std::string &name);

/// Face on the domain boundary held at hydrostatic water pressure.
struct BoundaryFace
{
  std::size_t cell = 0;
  BoundarySide side;
  double transmissibility = 0.0;  // k * area / half-cell distance
  double elevation = 0.0;         // face center along the gravity axis
};

struct PhysicsOptions
{
  double gravity = 9.81;            // m s^-2, acting along -z of the last axis
  bool capillarity = true;          // capillary-pressure gradients in the fluxes
  bool interface_condition = true;  // entry rule at heterogeneous faces
  double top_pressure = 0.0;        // water pressure at the top boundary, Pa

  bool operator==(const PhysicsOptions &) const = default;
};

/// Immutable discretization shared by the pressure and saturation steps.
struct FlowModel
{
  Grid grid;
  std::vector<MaterialProperties> materials;
  MaterialMap map;
  FluidProperties wetting;
  FluidProperties nonwetting;
  PhysicsOptions physics;

  std::vector<Face> faces;
  std::vector<BoundaryFace> dirichlet;
  InterfaceRules rules;

  std::vector<double> elevation;    // cell centers along the gravity axis
  std::vector<double> pore_volume;  // porosity * volume
  std::vector<double> max_nonwetting_saturation;  // 1 - s_wr per cell

  const MaterialProperties &material(std::size_t cell) const
  {
    return materials[map.cell_material[cell]];
  }
  double hydrostatic_pressure(double z) const
  {
    return physics.top_pressure + wetting.density * physics.gravity * (grid.top() - z);
  }
};

FlowModel make_flow_model(Grid grid, std::vector<MaterialProperties> materials, MaterialMap map,
                          FluidProperties wetting, FluidProperties nonwetting,
                          PhysicsOptions physics, std::span<const BoundarySide> hydrostatic_sides);

/// Hydrostatic water pressure in every cell.
std::vector<double> hydrostatic_field(const FlowModel &model);

/// Saturation-dependent coefficients of every cell. Derivatives are taken
/// with respect to the non-wetting saturation.
struct CellCoefficients
{
  std::vector<double> se;             // effective wetting saturation
  std::vector<double> pc;             // Pa (0 when capillarity is off)
  std::vector<double> mobility_w;     // 1/(Pa s)
  std::vector<double> mobility_n;
  std::vector<double> dmobility_n;    // d mobility_n / d s_n
  std::vector<double> dpc;            // d pc / d s_n
};

CellCoefficients evaluate_cells(const FlowModel &model, std::span<const double> s_n);
/// Same, reusing the storage of `out`.
void evaluate_cells(const FlowModel &model, std::span<const double> s_n, CellCoefficients &out);

}  // namespace dnapl
