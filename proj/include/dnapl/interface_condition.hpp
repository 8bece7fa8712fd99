#pragma once

#include <dnapl/constitutive.hpp>
#include <dnapl/grid.hpp>

#include <optional>
#include <span>
#include <vector>

namespace dnapl
{

/**
 * Capillary entry rule for one pair of lithologies. The coarse side has the
 * lower entry pressure. DNAPL moving from coarse to fine is held back until the
 * coarse-side effective water saturation drops below `se_star`, the value at
 * which the coarse capillary pressure reaches the fine entry pressure.
 */
struct InterfaceRule
{
  MaterialId coarse = 0;
  MaterialId fine = 0;
  double se_star = 1.0;
};

enum class EntryState
{
  Blocked,
  Penetrating
};

/// Closed form (pd_coarse / pd_fine)^lambda_coarse. If the arguments are
/// mis-oriented (coarse has the higher entry pressure) the roles are swapped.
double threshold_saturation(const MaterialProperties &coarse, const MaterialProperties &fine);

/// Same quantity by bisection on the capillary-pressure residual. Used to
/// cross-check the closed form when rules are built.
double threshold_saturation_bisection(const MaterialProperties &coarse,
                                      const MaterialProperties &fine);

EntryState entry_state(double se_upwind, const InterfaceRule &rule);

/// Fine-side effective saturation in capillary equilibrium with the coarse
/// side. nullopt when se_coarse >= se_star (the equilibrium branch does not apply).
std::optional<double> equilibrium_saturation(double se_coarse, const MaterialProperties &coarse,
                                             const MaterialProperties &fine);

/// Relative mismatch of the capillary pressures on both sides of an interface.
double capillary_continuity_residual(double se_coarse, const MaterialProperties &coarse,
                                     double se_fine, const MaterialProperties &fine);

/// Rules for every ordered pair of distinct materials.
class InterfaceRules
{
 public:
  InterfaceRules() = default;
  /// Throws std::logic_error if a closed-form threshold disagrees with the
  /// bisection check by more than 1e-9.
  explicit InterfaceRules(std::span<const MaterialProperties> materials);

  const InterfaceRule &rule(MaterialId a, MaterialId b) const
  {
    return table_[static_cast<std::size_t>(a) * count_ + b];
  }
  std::size_t material_count() const { return count_; }

 private:
  std::size_t count_ = 0;
  std::vector<InterfaceRule> table_;
};

/// State of one cell adjacent to a face.
struct FaceSide
{
  MaterialId material = 0;
  double effective_saturation = 1.0;
  double nonwetting_mobility = 0.0;
};

struct FaceMobility
{
  double mobility = 0.0;
  /// Set only when the flow crosses a heterogeneous face from the side with
  /// the lower entry pressure to the higher one.
  std::optional<EntryState> entry;
  bool upwind_is_lower = true;
};

/**
 * Non-wetting face mobility with phase-potential upwinding and the entry rule.
 * `potential_drop` is Phi_n(lower) - Phi_n(upper); positive means flow from
 * lower to upper.
 */
FaceMobility interface_upwind(const FaceSide &lower, const FaceSide &upper, double potential_drop,
                              std::span<const MaterialProperties> materials,
                              const InterfaceRules &rules, bool apply_rule = true);

}  // namespace dnapl
