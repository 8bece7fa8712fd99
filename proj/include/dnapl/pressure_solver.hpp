#pragma once

#include <dnapl/flow_model.hpp>
#include <dnapl/linear_solver.hpp>

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace dnapl
{

/// Volumetric phase sources per cell, m^3/s (already integrated over the cell).
struct CellSources
{
  std::vector<double> wetting;
  std::vector<double> nonwetting;
};

CellSources zero_sources(std::size_t cells);

/**
 * Total-velocity pressure equation for the wetting pressure,
 *   sum_faces T lambda_t (p_i - p_j) = q_t - G_i,
 * where G collects the gravity and capillary parts of the face fluxes
 * evaluated from the current saturation field.
 */
struct PressureSystem
{
  SparseMatrix matrix;
  std::vector<double> rhs;
  /// True when no Dirichlet boundary exists and cell 0 was pinned to its
  /// current pressure to remove the constant null space.
  bool pinned = false;
};

class SingularSystemError : public std::runtime_error
{
 public:
  using std::runtime_error::runtime_error;
};

/// Face-wise phase fluxes in m^3/s. Interior fluxes are positive from the
/// lower to the upper cell; boundary fluxes are positive out of the domain.
struct PhaseFluxes
{
  std::vector<double> wetting;
  std::vector<double> nonwetting;
  std::vector<double> boundary_wetting;
  std::vector<double> boundary_nonwetting;
  /// Per interior face: -1 no entry rule applied, 0 blocked, 1 penetrating.
  std::vector<std::int8_t> entry;

  /// Per cell: sum of outgoing non-wetting fluxes.
  std::vector<double> nonwetting_outflow;
  /// Per cell: sum over faces of |d F_out / d s_n| with the pressure frozen.
  std::vector<double> outflow_sensitivity;
};

/// Reusable assembler that keeps the sparsity pattern between steps.
class PressureAssembler
{
 public:
  explicit PressureAssembler(const FlowModel &model);

  /// `upwind_pressure` selects the upwind cell of each phase; it is the
  /// previous pressure solution (or the hydrostatic field initially) and
  /// is also the pinning value when the system is closed.
  void assemble(const FlowModel &model, const CellCoefficients &cells,
                std::span<const double> upwind_pressure, const CellSources &sources,
                PressureSystem &system) const;

 private:
  SparseMatrix pattern_;
  std::vector<std::size_t> diag_;
  std::vector<std::size_t> lower_upper_;  // per face: position of (lower, upper)
  std::vector<std::size_t> upper_lower_;  // per face: position of (upper, lower)
};

PressureSystem assemble_pressure_system(const SimulationState &state, const FlowModel &model,
                                        const CellSources &sources);

struct PressureSolution
{
  std::vector<double> p_w;
  SolveReport report;
};

/// Solves the system to the relative residual in `options`, starting from
/// `initial_guess` if given. Throws SolverError on non-convergence.
PressureSolution solve_pressure(const PressureSystem &system, const SolverOptions &options = {},
                                std::span<const double> initial_guess = {},
                                const IncompleteFactor *factor = nullptr);

PhaseFluxes phase_darcy_flux(std::span<const double> p_w, const SimulationState &state,
                             const FlowModel &model);
void phase_darcy_flux(std::span<const double> p_w, const FlowModel &model,
                      const CellCoefficients &cells, PhaseFluxes &out);
PhaseFluxes phase_darcy_flux(std::span<const double> p_w, const FlowModel &model,
                             const CellCoefficients &cells);

/// Largest |flux| / face area over all faces and both phases, m/s.
double max_darcy_velocity(const PhaseFluxes &fluxes, const FlowModel &model);

}  // namespace dnapl
