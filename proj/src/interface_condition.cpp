#include <dnapl/interface_condition.hpp>

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace dnapl
{

namespace
{
const MaterialProperties &lower_entry(const MaterialProperties &a, const MaterialProperties &b)
{
  return a.entry_pressure <= b.entry_pressure ? a : b;
}
const MaterialProperties &higher_entry(const MaterialProperties &a, const MaterialProperties &b)
{
  return a.entry_pressure <= b.entry_pressure ? b : a;
}
}  // namespace

double threshold_saturation(const MaterialProperties &coarse, const MaterialProperties &fine)
{
  const auto &c = lower_entry(coarse, fine);
  const auto &f = higher_entry(coarse, fine);
  if (c.entry_pressure == f.entry_pressure)
    return 1.0;
  return std::pow(c.entry_pressure / f.entry_pressure, c.pore_size_index);
}

double threshold_saturation_bisection(const MaterialProperties &coarse,
                                      const MaterialProperties &fine)
{
  const auto &c = lower_entry(coarse, fine);
  const auto &f = higher_entry(coarse, fine);
  if (c.entry_pressure == f.entry_pressure)
    return 1.0;
  // coarse pc is decreasing in Se: residual > 0 means Se is still too small
  auto residual = [&](double se) {
    return c.entry_pressure * std::pow(se, -1.0 / c.pore_size_index) - f.entry_pressure;
  };
  double lo = 1e-300;
  double hi = 1.0;
  for (int it = 0; it < 2000 && hi - lo > 1e-17; ++it)
  {
    const double mid = 0.5 * (lo + hi);
    if (residual(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

EntryState entry_state(double se_upwind, const InterfaceRule &rule)
{
  return se_upwind >= rule.se_star ? EntryState::Blocked : EntryState::Penetrating;
}

std::optional<double> equilibrium_saturation(double se_coarse, const MaterialProperties &coarse,
                                             const MaterialProperties &fine)
{
  if (se_coarse >= threshold_saturation(coarse, fine))
    return std::nullopt;
  const double pc = coarse.entry_pressure * std::pow(se_coarse, -1.0 / coarse.pore_size_index);
  return std::pow(fine.entry_pressure / pc, fine.pore_size_index);
}

double capillary_continuity_residual(double se_coarse, const MaterialProperties &coarse,
                                     double se_fine, const MaterialProperties &fine)
{
  const double pc_coarse =
      coarse.entry_pressure * std::pow(se_coarse, -1.0 / coarse.pore_size_index);
  const double pc_fine = fine.entry_pressure * std::pow(se_fine, -1.0 / fine.pore_size_index);
  return std::abs(pc_coarse - pc_fine) / std::max(pc_coarse, pc_fine);
}

InterfaceRules::InterfaceRules(std::span<const MaterialProperties> materials)
    : count_(materials.size()), table_(materials.size() * materials.size())
{
  for (std::size_t a = 0; a < count_; ++a)
    for (std::size_t b = 0; b < count_; ++b)
    {
      auto &rule = table_[a * count_ + b];
      const bool a_coarse = materials[a].entry_pressure <= materials[b].entry_pressure;
      rule.coarse = static_cast<MaterialId>(a_coarse ? a : b);
      rule.fine = static_cast<MaterialId>(a_coarse ? b : a);
      if (a == b)
        continue;
      const auto &coarse = materials[rule.coarse];
      const auto &fine = materials[rule.fine];
      rule.se_star = threshold_saturation(coarse, fine);
      const double check = threshold_saturation_bisection(coarse, fine);
      if (std::abs(rule.se_star - check) > 1e-9)
        throw std::logic_error("threshold saturation mismatch for materials " +
                               std::to_string(a) + "/" + std::to_string(b) + ": closed form " +
                               std::to_string(rule.se_star) + " vs bisection " +
                               std::to_string(check));
    }
}

FaceMobility interface_upwind(const FaceSide &lower, const FaceSide &upper, double potential_drop,
                              std::span<const MaterialProperties> materials,
                              const InterfaceRules &rules, bool apply_rule)
{
  const bool from_lower = potential_drop >= 0.0;
  const FaceSide &up = from_lower ? lower : upper;
  const FaceSide &down = from_lower ? upper : lower;

  FaceMobility out{up.nonwetting_mobility, std::nullopt, from_lower};
  if (!apply_rule || up.material == down.material)
    return out;
  if (!(materials[up.material].entry_pressure < materials[down.material].entry_pressure))
    return out;  // leaving a fine medium: no barrier

  const auto state = entry_state(up.effective_saturation, rules.rule(up.material, down.material));
  out.entry = state;
  if (state == EntryState::Blocked)
    out.mobility = 0.0;
  return out;
}

}  // namespace dnapl
