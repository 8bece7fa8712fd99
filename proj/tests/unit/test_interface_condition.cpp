#include <dnapl/buckley_leverett.hpp>
#include <dnapl/interface_condition.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace dnapl;

namespace
{

// Root of pd_c * se^(-1/lambda_c) = target by bisection in log space. Kept
// apart from the library so it can serve as an oracle for both the closed form
// and the library's own check.
double oracle_se_for_pc(double pd, double lambda, double target)
{
  double lo = -800.0, hi = 0.0;
  for (int i = 0; i < 300; ++i)
  {
    const double mid = 0.5 * (lo + hi);
    if (pd * std::exp(-mid / lambda) > target)
      lo = mid;
    else
      hi = mid;
  }
  return std::exp(0.5 * (lo + hi));
}

// Same threshold evaluated at 30 digits outside this code base.
constexpr double kSandClaySeStar = 8.867898127522616e-3;
constexpr double kSandClayEquilibrium005 = 0.5939002263214483;

const MaterialProperties kSand = sand_properties();
const MaterialProperties kClay = clay_properties();

}  // namespace

TEST(ThresholdSaturation, IdenticalMaterialsNeverBlockBeyondEntry)
{
  EXPECT_EQ(threshold_saturation(kSand, kSand), 1.0);
  EXPECT_EQ(threshold_saturation_bisection(kClay, kClay), 1.0);
}

TEST(ThresholdSaturation, SandClayMatchesBisectionOracle)
{
  const double oracle = oracle_se_for_pc(1323.0, 3.86, 4500.0);
  EXPECT_NEAR(oracle, kSandClaySeStar, 1e-15);
  EXPECT_NEAR(threshold_saturation(kSand, kClay), oracle, 1e-6);
  EXPECT_NEAR(threshold_saturation(kSand, kClay), kSandClaySeStar, 1e-15);
  EXPECT_NEAR(threshold_saturation_bisection(kSand, kClay), kSandClaySeStar, 1e-15);
}

TEST(ThresholdSaturation, ClosedFormUnitLambda)
{
  MaterialProperties coarse = kSand, fine = kSand;
  coarse.pore_size_index = 1.0;
  coarse.entry_pressure = 1000.0;
  fine.entry_pressure = 2000.0;
  EXPECT_DOUBLE_EQ(threshold_saturation(coarse, fine), 0.5);
}

TEST(ThresholdSaturation, ArgumentOrderDoesNotMatter)
{
  EXPECT_EQ(threshold_saturation(kClay, kSand), threshold_saturation(kSand, kClay));
}

TEST(ThresholdSaturation, CoarsePcEqualsFineEntryForRandomPairs)
{
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> lambda(0.3, 6.0);
  std::uniform_real_distribution<double> pd(100.0, 20000.0);
  for (int trial = 0; trial < 1000; ++trial)
  {
    MaterialProperties a = kSand, b = kClay;
    a.pore_size_index = lambda(rng);
    b.pore_size_index = lambda(rng);
    a.entry_pressure = pd(rng);
    b.entry_pressure = pd(rng);
    const auto &coarse = a.entry_pressure < b.entry_pressure ? a : b;
    const auto &fine = a.entry_pressure < b.entry_pressure ? b : a;
    const double se = threshold_saturation(a, b);
    ASSERT_GT(se, 0.0);
    ASSERT_LE(se, 1.0);
    const double pc =
        coarse.entry_pressure * std::pow(se, -1.0 / coarse.pore_size_index);
    ASSERT_NEAR(pc, fine.entry_pressure, 1e-10 * fine.entry_pressure);
  }
}

TEST(EntryState, Classification)
{
  const InterfaceRule rule{0, 1, threshold_saturation(kSand, kClay)};
  EXPECT_EQ(entry_state(1.0, rule), EntryState::Blocked);
  EXPECT_EQ(entry_state(0.5, rule), EntryState::Blocked);
  EXPECT_EQ(entry_state(0.005, rule), EntryState::Penetrating);
  EXPECT_EQ(entry_state(rule.se_star, rule), EntryState::Blocked);
}

TEST(EquilibriumSaturation, IdenticalMaterialsAreContinuous)
{
  MaterialProperties coarse = kSand, fine = kSand;
  fine.entry_pressure = coarse.entry_pressure * (1.0 + 1e-12);
  // a vanishing contrast leaves the saturation unchanged
  EXPECT_NEAR(equilibrium_saturation(0.3, coarse, fine).value(), 0.3, 1e-10);
}

TEST(EquilibriumSaturation, SandClayJump)
{
  // independent root of the capillary continuity residual on the clay side
  const double pc_sand = 1323.0 * std::pow(0.005, -1.0 / 3.86);
  const double oracle = oracle_se_for_pc(4500.0, 3.51, pc_sand);
  EXPECT_NEAR(oracle, kSandClayEquilibrium005, 1e-13);
  const double se_fine = equilibrium_saturation(0.005, kSand, kClay).value();
  EXPECT_NEAR(se_fine, kSandClayEquilibrium005, 1e-13);
  EXPECT_LT(capillary_continuity_residual(0.005, kSand, se_fine, kClay), 1e-10);
}

TEST(EquilibriumSaturation, NotApplicableAboveThreshold)
{
  const double se_star = threshold_saturation(kSand, kClay);
  EXPECT_FALSE(equilibrium_saturation(se_star, kSand, kClay).has_value());
  EXPECT_FALSE(equilibrium_saturation(0.5, kSand, kClay).has_value());
  // just below the threshold the fine side is practically water-saturated
  EXPECT_NEAR(equilibrium_saturation(se_star * (1.0 - 1e-12), kSand, kClay).value(), 1.0,
              1e-9);
}

TEST(EquilibriumSaturation, MonotoneInCoarseSaturation)
{
  const double se_star = threshold_saturation(kSand, kClay);
  double previous = 0.0;
  for (int i = 1; i < 200; ++i)
  {
    const double se = se_star * i / 200.0;
    const double fine = equilibrium_saturation(se, kSand, kClay).value();
    ASSERT_GT(fine, previous);
    ASSERT_LT(fine, 1.0);
    previous = fine;
  }
}

TEST(EquilibriumSaturation, ResidualRoundTripRandomPairs)
{
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> lambda(0.3, 6.0);
  std::uniform_real_distribution<double> pd(100.0, 20000.0);
  std::uniform_real_distribution<double> frac(0.01, 0.99);
  for (int trial = 0; trial < 1000; ++trial)
  {
    MaterialProperties coarse = kSand, fine = kClay;
    coarse.pore_size_index = lambda(rng);
    fine.pore_size_index = lambda(rng);
    coarse.entry_pressure = pd(rng);
    fine.entry_pressure = coarse.entry_pressure * (1.0 + 4.0 * frac(rng));
    const double se_c = threshold_saturation(coarse, fine) * frac(rng);
    const double se_f = equilibrium_saturation(se_c, coarse, fine).value();
    ASSERT_GT(se_f, 0.0);
    ASSERT_LT(se_f, 1.0);
    ASSERT_LT(capillary_continuity_residual(se_c, coarse, se_f, fine), 1e-10);
  }
}

TEST(InterfaceRules, TableIsOriented)
{
  const std::vector<MaterialProperties> m{kSand, kClay};
  const InterfaceRules rules(m);
  EXPECT_EQ(rules.material_count(), 2u);
  EXPECT_EQ(rules.rule(0, 1).coarse, 0);
  EXPECT_EQ(rules.rule(0, 1).fine, 1);
  EXPECT_EQ(rules.rule(1, 0).coarse, 0);
  EXPECT_EQ(rules.rule(1, 0).se_star, rules.rule(0, 1).se_star);
  EXPECT_EQ(rules.rule(0, 0).se_star, 1.0);
}

class InterfaceUpwindTest : public ::testing::Test
{
 protected:
  const std::vector<MaterialProperties> materials{kSand, kClay};
  const InterfaceRules rules{materials};
  const FluidProperties pce{1630.0, 0.9e-3};

  FaceSide side(MaterialId m, double se) const
  {
    return FaceSide{m, se, phase_mobility(relperm_nonwetting(se, materials[m]), pce)};
  }
};

TEST_F(InterfaceUpwindTest, BlockedFaceCarriesNoFlux)
{
  for (double drop : {1.0, 1e3, 1e6})
  {
    const auto r = interface_upwind(side(0, 0.5), side(1, 1.0), drop, materials, rules);
    EXPECT_EQ(r.mobility, 0.0);
    ASSERT_TRUE(r.entry.has_value());
    EXPECT_EQ(*r.entry, EntryState::Blocked);
  }
}

TEST_F(InterfaceUpwindTest, HomogeneousFaceIsPlainUpwinding)
{
  const auto a = side(0, 0.3), b = side(0, 0.9);
  EXPECT_EQ(interface_upwind(a, b, 5.0, materials, rules).mobility, a.nonwetting_mobility);
  EXPECT_EQ(interface_upwind(a, b, -5.0, materials, rules).mobility, b.nonwetting_mobility);
  EXPECT_FALSE(interface_upwind(a, b, 5.0, materials, rules).entry.has_value());
}

TEST_F(InterfaceUpwindTest, PenetratingFaceUsesUpwindMobility)
{
  // Se = 0.0045 lies below the sand/clay threshold
  const auto up = side(0, 0.0045);
  const auto r = interface_upwind(up, side(1, 1.0), 10.0, materials, rules);
  ASSERT_TRUE(r.entry.has_value());
  EXPECT_EQ(*r.entry, EntryState::Penetrating);
  EXPECT_NEAR(r.mobility, 0.9907490167192372 / 0.9e-3, 1e-9);
  EXPECT_GT(r.mobility, 0.0);
}

TEST_F(InterfaceUpwindTest, LeavingFineMediumIsUnrestricted)
{
  // clay upstream, sand downstream: ordinary upwinding
  const auto clay = side(1, 0.6);
  const auto r = interface_upwind(side(0, 1.0), clay, -10.0, materials, rules);
  EXPECT_EQ(r.mobility, clay.nonwetting_mobility);
  EXPECT_FALSE(r.entry.has_value());
  EXPECT_FALSE(r.upwind_is_lower);
}

TEST_F(InterfaceUpwindTest, RuleCanBeSwitchedOff)
{
  const auto up = side(0, 0.5);
  const auto r = interface_upwind(up, side(1, 1.0), 10.0, materials, rules, false);
  EXPECT_EQ(r.mobility, up.nonwetting_mobility);
}
