#include <dnapl/pressure_solver.hpp>

#include <algorithm>
#include <cmath>
#include <utility>

namespace dnapl
{

namespace
{

struct FaceTerms
{
  double dphi_w;       // Phi_w(lower) - Phi_w(upper)
  double dphi_n;       // Phi_n(lower) - Phi_n(upper)
  double rho_g_dz_w;   // rho_w g (z_upper - z_lower)
  double rho_g_dz_n;
};

FaceTerms face_terms(const FlowModel &model, const CellCoefficients &cells, const Face &f,
                     std::span<const double> p)
{
  const double g = model.physics.gravity;
  const double dz = model.elevation[f.upper] - model.elevation[f.lower];
  const double dp = p[f.lower] - p[f.upper];
  FaceTerms t;
  t.rho_g_dz_w = model.wetting.density * g * dz;
  t.rho_g_dz_n = model.nonwetting.density * g * dz;
  t.dphi_w = dp - t.rho_g_dz_w;
  t.dphi_n = dp + (cells.pc[f.lower] - cells.pc[f.upper]) - t.rho_g_dz_n;
  return t;
}

FaceMobility nonwetting_face_mobility(const FlowModel &model, const CellCoefficients &cells,
                                      const Face &f, double dphi_n)
{
  if (!f.heterogeneous)
  {
    const bool from_lower = dphi_n >= 0.0;
    return {cells.mobility_n[from_lower ? f.lower : f.upper], std::nullopt, from_lower};
  }
  const auto &mat = model.map.cell_material;
  const FaceSide lower{mat[f.lower], cells.se[f.lower], cells.mobility_n[f.lower]};
  const FaceSide upper{mat[f.upper], cells.se[f.upper], cells.mobility_n[f.upper]};
  return interface_upwind(lower, upper, dphi_n, model.materials, model.rules,
                          model.physics.interface_condition);
}

struct BoundaryTerms
{
  double p_bc;
  double pc_bc;
  double dphi_w;  // Phi_w(cell) - Phi_w(boundary)
  double dphi_n;
  double rho_g_dz_w;  // rho_w g (z_face - z_cell)
  double rho_g_dz_n;
};

BoundaryTerms boundary_terms(const FlowModel &model, const CellCoefficients &cells,
                             const BoundaryFace &b, std::span<const double> p)
{
  const double g = model.physics.gravity;
  const double dz = b.elevation - model.elevation[b.cell];
  BoundaryTerms t;
  t.p_bc = model.hydrostatic_pressure(b.elevation);
  // boundary reservoir holds clean water: Se = 1
  t.pc_bc = model.physics.capillarity ? model.material(b.cell).entry_pressure : 0.0;
  t.rho_g_dz_w = model.wetting.density * g * dz;
  t.rho_g_dz_n = model.nonwetting.density * g * dz;
  const double dp = p[b.cell] - t.p_bc;
  t.dphi_w = dp - t.rho_g_dz_w;
  t.dphi_n = dp + (cells.pc[b.cell] - t.pc_bc) - t.rho_g_dz_n;
  return t;
}

}  // namespace

CellSources zero_sources(std::size_t cells)
{
  return CellSources{std::vector<double>(cells, 0.0), std::vector<double>(cells, 0.0)};
}

PressureAssembler::PressureAssembler(const FlowModel &model)
{
  const std::size_t n = model.grid.cell_count();
  std::vector<std::pair<std::size_t, std::size_t>> entries;
  entries.reserve(n + 2 * model.faces.size());
  for (std::size_t c = 0; c < n; ++c)
    entries.emplace_back(c, c);
  for (const auto &f : model.faces)
  {
    entries.emplace_back(f.lower, f.upper);
    entries.emplace_back(f.upper, f.lower);
  }
  pattern_ = make_pattern(n, entries);
  diag_.resize(n);
  for (std::size_t c = 0; c < n; ++c)
    diag_[c] = pattern_.find(c, c);
  lower_upper_.resize(model.faces.size());
  upper_lower_.resize(model.faces.size());
  for (std::size_t i = 0; i < model.faces.size(); ++i)
  {
    lower_upper_[i] = pattern_.find(model.faces[i].lower, model.faces[i].upper);
    upper_lower_[i] = pattern_.find(model.faces[i].upper, model.faces[i].lower);
  }
}

void PressureAssembler::assemble(const FlowModel &model, const CellCoefficients &cells,
                                 std::span<const double> upwind_pressure,
                                 const CellSources &sources, PressureSystem &system) const
{
  const std::size_t n = model.grid.cell_count();
  if (system.matrix.rows != n || system.matrix.column.size() != pattern_.column.size())
    system.matrix = pattern_;
  std::fill(system.matrix.value.begin(), system.matrix.value.end(), 0.0);
  system.rhs.assign(n, 0.0);
  system.pinned = false;
  auto &val = system.matrix.value;
  auto &rhs = system.rhs;

  double net_source = 0.0;
  double source_scale = 0.0;
  for (std::size_t c = 0; c < n; ++c)
  {
    const double q = sources.wetting[c] + sources.nonwetting[c];
    rhs[c] += q;
    net_source += q;
    source_scale += std::abs(q);
  }

  for (std::size_t i = 0; i < model.faces.size(); ++i)
  {
    const Face &f = model.faces[i];
    const FaceTerms t = face_terms(model, cells, f, upwind_pressure);
    const double lw = cells.mobility_w[t.dphi_w >= 0.0 ? f.lower : f.upper];
    const double ln = nonwetting_face_mobility(model, cells, f, t.dphi_n).mobility;
    const double coeff = f.transmissibility * (lw + ln);
    val[diag_[f.lower]] += coeff;
    val[diag_[f.upper]] += coeff;
    val[lower_upper_[i]] -= coeff;
    val[upper_lower_[i]] -= coeff;
    const double g_term =
        f.transmissibility *
        (-lw * t.rho_g_dz_w + ln * (cells.pc[f.lower] - cells.pc[f.upper] - t.rho_g_dz_n));
    rhs[f.lower] -= g_term;
    rhs[f.upper] += g_term;
  }

  for (const auto &b : model.dirichlet)
  {
    const BoundaryTerms t = boundary_terms(model, cells, b, upwind_pressure);
    const double lw = t.dphi_w >= 0.0 ? cells.mobility_w[b.cell] : 1.0 / model.wetting.viscosity;
    const double ln = t.dphi_n >= 0.0 ? cells.mobility_n[b.cell] : 0.0;
    const double coeff = b.transmissibility * (lw + ln);
    val[diag_[b.cell]] += coeff;
    rhs[b.cell] += coeff * t.p_bc;
    rhs[b.cell] -= b.transmissibility *
                   (-lw * t.rho_g_dz_w + ln * (cells.pc[b.cell] - t.pc_bc - t.rho_g_dz_n));
  }

  if (model.dirichlet.empty())
  {
    if (std::abs(net_source) > 1e-12 * std::max(source_scale, 1e-300) && net_source != 0.0)
      throw SingularSystemError(
          "pressure system is singular: no Dirichlet boundary and net source " +
          std::to_string(net_source) + " m^3/s (pressure is defined only up to a constant)");
    const double pin = std::max(val[diag_[0]], 1e-300);
    val[diag_[0]] += pin;
    rhs[0] += pin * upwind_pressure[0];
    system.pinned = true;
  }
}

PressureSystem assemble_pressure_system(const SimulationState &state, const FlowModel &model,
                                        const CellSources &sources)
{
  const PressureAssembler assembler(model);
  const CellCoefficients cells = evaluate_cells(model, state.s_n);
  PressureSystem system;
  assembler.assemble(model, cells, state.p_w, sources, system);
  return system;
}

PressureSolution solve_pressure(const PressureSystem &system, const SolverOptions &options,
                                std::span<const double> initial_guess,
                                const IncompleteFactor *factor)
{
  PressureSolution sol;
  if (initial_guess.empty())
    sol.p_w.assign(system.matrix.rows, 0.0);
  else
    sol.p_w.assign(initial_guess.begin(), initial_guess.end());
  sol.report = conjugate_gradient(system.matrix, system.rhs, sol.p_w, options, factor);
  return sol;
}

PhaseFluxes phase_darcy_flux(std::span<const double> p_w, const SimulationState &state,
                             const FlowModel &model)
{
  return phase_darcy_flux(p_w, model, evaluate_cells(model, state.s_n));
}

PhaseFluxes phase_darcy_flux(std::span<const double> p_w, const FlowModel &model,
                             const CellCoefficients &cells)
{
  PhaseFluxes out;
  phase_darcy_flux(p_w, model, cells, out);
  return out;
}

void phase_darcy_flux(std::span<const double> p_w, const FlowModel &model,
                      const CellCoefficients &cells, PhaseFluxes &out)
{
  const std::size_t n = model.grid.cell_count();
  const std::size_t nf = model.faces.size();
  out.wetting.resize(nf);
  out.nonwetting.resize(nf);
  out.entry.assign(nf, -1);
  out.boundary_wetting.resize(model.dirichlet.size());
  out.boundary_nonwetting.resize(model.dirichlet.size());
  out.nonwetting_outflow.assign(n, 0.0);
  out.outflow_sensitivity.assign(n, 0.0);

  for (std::size_t i = 0; i < nf; ++i)
  {
    const Face &f = model.faces[i];
    if (!f.heterogeneous && cells.mobility_n[f.lower] == 0.0 && cells.mobility_n[f.upper] == 0.0)
    {
      // no mobile DNAPL on either side; most of the domain most of the time
      const double dz = model.elevation[f.upper] - model.elevation[f.lower];
      const double dphi_w =
          p_w[f.lower] - p_w[f.upper] - model.wetting.density * model.physics.gravity * dz;
      out.wetting[i] = f.transmissibility * cells.mobility_w[dphi_w >= 0.0 ? f.lower : f.upper] * dphi_w;
      out.nonwetting[i] = 0.0;
      continue;
    }
    const FaceTerms t = face_terms(model, cells, f, p_w);
    const double lw = cells.mobility_w[t.dphi_w >= 0.0 ? f.lower : f.upper];
    const FaceMobility fm = nonwetting_face_mobility(model, cells, f, t.dphi_n);
    if (fm.entry)
      out.entry[i] = *fm.entry == EntryState::Blocked ? 0 : 1;

    out.wetting[i] = f.transmissibility * lw * t.dphi_w;
    const double fn = f.transmissibility * fm.mobility * t.dphi_n;
    out.nonwetting[i] = fn;

    const std::size_t up = fm.upwind_is_lower ? f.lower : f.upper;
    const std::size_t down = fm.upwind_is_lower ? f.upper : f.lower;
    out.nonwetting_outflow[up] += std::abs(fn);
    if (fm.mobility > 0.0)
    {
      // d(outflow of up)/d s_up: advective part plus capillary part; the
      // downwind cell only sees the capillary part.
      const double adv = cells.dmobility_n[up] * std::abs(t.dphi_n);
      out.outflow_sensitivity[up] += f.transmissibility * (adv + fm.mobility * cells.dpc[up]);
      out.outflow_sensitivity[down] += f.transmissibility * fm.mobility * cells.dpc[down];
    }
  }

  for (std::size_t i = 0; i < model.dirichlet.size(); ++i)
  {
    const auto &b = model.dirichlet[i];
    const BoundaryTerms t = boundary_terms(model, cells, b, p_w);
    const double lw = t.dphi_w >= 0.0 ? cells.mobility_w[b.cell] : 1.0 / model.wetting.viscosity;
    const double ln = t.dphi_n >= 0.0 ? cells.mobility_n[b.cell] : 0.0;
    out.boundary_wetting[i] = b.transmissibility * lw * t.dphi_w;
    out.boundary_nonwetting[i] = b.transmissibility * ln * t.dphi_n;
    if (ln > 0.0)
    {
      out.nonwetting_outflow[b.cell] += out.boundary_nonwetting[i];
      out.outflow_sensitivity[b.cell] +=
          b.transmissibility * (cells.dmobility_n[b.cell] * t.dphi_n + ln * cells.dpc[b.cell]);
    }
  }
}

double max_darcy_velocity(const PhaseFluxes &fluxes, const FlowModel &model)
{
  double vmax = 0.0;
  for (std::size_t i = 0; i < model.faces.size(); ++i)
  {
    const double area = model.grid.face_area(model.faces[i].axis);
    vmax = std::max({vmax, std::abs(fluxes.wetting[i]) / area,
                     std::abs(fluxes.nonwetting[i]) / area});
  }
  for (std::size_t i = 0; i < model.dirichlet.size(); ++i)
  {
    const double area = model.grid.face_area(model.dirichlet[i].side.axis);
    vmax = std::max({vmax, std::abs(fluxes.boundary_wetting[i]) / area,
                     std::abs(fluxes.boundary_nonwetting[i]) / area});
  }
  return vmax;
}

}  // namespace dnapl
