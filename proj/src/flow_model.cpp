#include <dnapl/flow_model.hpp>

#include <stdexcept>

namespace dnapl
{

std::string to_string(BoundarySide side)
{
  static constexpr const char *axes[] = {"x", "y", "z"};
  return std::string(axes[side.axis]) + (side.side < 0 ? "min" : "max");
}

BoundarySide parse_boundary_side(const std::string &name)
{
  if (name.size() == 4 && (name[0] == 'x' || name[0] == 'y' || name[0] == 'z'))
  {
    const int axis = name[0] - 'x';
    const std::string tail = name.substr(1);
    if (tail == "min")
      return {axis, -1};
    if (tail == "max")
      return {axis, +1};
  }
  throw std::invalid_argument("unknown boundary '" + name +
                              "' (expected xmin, xmax, ymin, ymax, zmin or zmax)");
}

FlowModel make_flow_model(Grid grid, std::vector<MaterialProperties> materials, MaterialMap map,
                          FluidProperties wetting, FluidProperties nonwetting,
                          PhysicsOptions physics, std::span<const BoundarySide> hydrostatic_sides)
{
  FlowModel model;
  model.grid = grid;
  model.materials = std::move(materials);
  model.map = std::move(map);
  model.wetting = wetting;
  model.nonwetting = nonwetting;
  model.physics = physics;
  model.faces = face_transmissibilities(model.grid, model.map, model.materials);
  model.rules = InterfaceRules(model.materials);

  const std::size_t n = model.grid.cell_count();
  const int g = model.grid.gravity_axis();
  model.elevation.resize(n);
  model.pore_volume.resize(n);
  model.max_nonwetting_saturation.resize(n);
  for (std::size_t c = 0; c < n; ++c)
  {
    const auto &m = model.material(c);
    model.elevation[c] = model.grid.center(c)[g];
    model.pore_volume[c] = m.porosity * model.grid.cell_volume();
    model.max_nonwetting_saturation[c] = 1.0 - m.residual_wetting;
  }

  for (const auto side : hydrostatic_sides)
  {
    if (side.axis >= model.grid.dimension)
      throw std::invalid_argument("boundary " + to_string(side) + " does not exist on a " +
                                  std::to_string(model.grid.dimension) + "D grid");
    const int boundary_index = side.side < 0 ? 0 : model.grid.cells[side.axis] - 1;
    const double half = 0.5 * model.grid.spacing[side.axis];
    for (std::size_t c = 0; c < n; ++c)
    {
      if (model.grid.coords(c)[side.axis] != boundary_index)
        continue;
      BoundaryFace face;
      face.cell = c;
      face.side = side;
      face.transmissibility =
          model.material(c).permeability * model.grid.face_area(side.axis) / half;
      face.elevation = model.elevation[c] + (side.axis == g ? side.side * half : 0.0);
      model.dirichlet.push_back(face);
    }
  }
  return model;
}

std::vector<double> hydrostatic_field(const FlowModel &model)
{
  std::vector<double> p(model.grid.cell_count());
  for (std::size_t c = 0; c < p.size(); ++c)
    p[c] = model.hydrostatic_pressure(model.elevation[c]);
  return p;
}

CellCoefficients evaluate_cells(const FlowModel &model, std::span<const double> s_n)
{
  CellCoefficients cc;
  evaluate_cells(model, s_n, cc);
  return cc;
}

void evaluate_cells(const FlowModel &model, std::span<const double> s_n, CellCoefficients &cc)
{
  const std::size_t n = s_n.size();
  cc.se.resize(n);
  cc.pc.resize(n);
  cc.mobility_w.resize(n);
  cc.mobility_n.resize(n);
  cc.dmobility_n.resize(n);
  cc.dpc.resize(n);

  const bool capillarity = model.physics.capillarity;
  const double inv_mu_w = 1.0 / model.wetting.viscosity;
  for (std::size_t c = 0; c < n; ++c)
  {
    const auto &m = model.material(c);
    const double se = effective_saturation(1.0 - s_n[c], m);
    cc.se[c] = se;
    if (se == 1.0)
    {
      // immobile DNAPL; skip the power laws
      cc.pc[c] = capillarity ? m.entry_pressure : 0.0;
      cc.mobility_w[c] = inv_mu_w;
      cc.mobility_n[c] = 0.0;
      cc.dmobility_n[c] = 0.0;
      cc.dpc[c] = 0.0;
      continue;
    }
    const double inv_range = 1.0 / m.mobile_range();
    const BrooksCoreyPoint bc = brooks_corey_point(se, m);
    cc.pc[c] = capillarity ? bc.pc : 0.0;
    cc.dpc[c] = capillarity ? -bc.dpc * inv_range : 0.0;
    cc.mobility_w[c] = phase_mobility(bc.krw, model.wetting);
    cc.mobility_n[c] = phase_mobility(bc.krn, model.nonwetting);
    cc.dmobility_n[c] = -bc.dkrn * inv_range / model.nonwetting.viscosity;
  }
}

}  // namespace dnapl
