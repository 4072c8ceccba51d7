#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mfg/analysis.hpp"
#include "mfg/error.hpp"

using namespace mfg;

namespace {

SpaceTimeField random_forward(int slabs, int dofs, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  SpaceTimeField f = SpaceTimeField::zeros(Continuity::Forward, slabs, dofs);
  for (int n = 0; n < slabs; ++n)
    for (auto& x : f.slab(n)) x = g(rng);
  for (auto& x : f.endpoint()) x = g(rng);
  return f;
}

ErrorReport report_with(double v) {
  ErrorReport r;
  r.rel_u_L2H1 = r.rel_b_L2L2 = r.rel_m_L2L2 = r.rel_m_L2H1 = r.rel_u0_L2 = r.rel_mT_L2 = v;
  return r;
}

}  // namespace

TEST(Rates, HalvingGivesOne) {
  EXPECT_NEAR(*rate(0.4, 0.2), 1.0, 1e-15);
  EXPECT_NEAR(*rate(0.4, 0.1), 2.0, 1e-15);
  EXPECT_FALSE(rate(0.4, 0.0).has_value());
  EXPECT_FALSE(rate(0.0, 0.1).has_value());
  const auto rows = eoc({report_with(0.4), report_with(0.2), report_with(0.1)});
  ASSERT_EQ(rows.size(), 2u);
  for (const auto& row : rows) {
    ASSERT_EQ(row.size(), 6u);
    for (const auto& r : row) EXPECT_NEAR(*r, 1.0, 1e-15);
  }
  EXPECT_TRUE(eoc({report_with(0.4)}).empty());
}

TEST(ErrorNorms, ZeroDiscreteSolutionHasUnitErrors) {
  const ManufacturedCase exact;
  const auto mesh = std::make_shared<const Mesh>(generate_uniform_unit_square(8));
  const FeSpace fes(mesh);
  const TimeGrid grid(1.0, 9);
  const SpaceTimeField u = SpaceTimeField::zeros(Continuity::Backward, 9, fes.num_dofs());
  const SpaceTimeField m = SpaceTimeField::zeros(Continuity::Forward, 9, fes.num_dofs());
  const TransportField b(9, mesh->num_triangles());
  for (TimeSampling s : {TimeSampling::Nodal, TimeSampling::Gauss}) {
    const ErrorReport r = error_norms(u, m, b, exact, fes, grid, {H1Kind::Full, s});
    for (int i = 0; i < ErrorReport::kColumns; ++i) EXPECT_NEAR(r.column(i), 1.0, 1e-14) << i;
    EXPECT_EQ(r.n, 8);
    EXPECT_EQ(r.num_slabs, 9);
  }
}

TEST(ErrorNorms, InterpolantErrorsDecrease) {
  const ManufacturedCase exact;
  std::vector<ErrorReport> reports;
  for (int k : {2, 3, 4}) {
    const int n = 1 << k;
    const auto mesh = std::make_shared<const Mesh>(generate_uniform_unit_square(n));
    const FeSpace fes(mesh);
    const TimeGrid grid(1.0, n + 1);
    SpaceTimeField u = SpaceTimeField::zeros(Continuity::Backward, n + 1, fes.num_dofs());
    SpaceTimeField m = SpaceTimeField::zeros(Continuity::Forward, n + 1, fes.num_dofs());
    for (int s = 0; s <= n; ++s) {
      u.slab(s) = fes.interpolate([&](const Vec2& x) { return exact.u(grid.node(s), x); });
      m.slab(s) = fes.interpolate([&](const Vec2& x) { return exact.m(grid.node(s + 1), x); });
    }
    const TransportField b = select_field(eikonal(), u, fes, grid);
    reports.push_back(error_norms(u, m, b, exact, fes, grid));
  }
  const auto rows = eoc(reports);
  for (const auto& row : rows) {
    EXPECT_GT(*row[0], 0.8);  // u in L2(H1)
    EXPECT_GT(*row[2], 1.5);  // m in L2(L2)
    EXPECT_GT(*row[4], 1.5);  // u(0)
  }
}

TEST(WeightedNorm, WeightsAndGamma) {
  const auto mesh = std::make_shared<const Mesh>(generate_uniform_unit_square(4));
  const FeSpace fes(mesh);
  const StabilizationTensor stab(*mesh, default_weights(*mesh, 1.0));
  const WeightedNormContext ctx(fes, stab, 1.0, 1.0, TimeGrid(1.0, 5));
  EXPECT_NEAR(ctx.weight(0), 1.0, 1e-16);
  EXPECT_NEAR(ctx.weight(3), std::pow(1.2, -3), 1e-15);
  EXPECT_EQ(ctx.slab_weight(2), ctx.weight(3));
  EXPECT_NEAR(ctx.gamma(), std::sqrt(0.6), 1e-15);
  EXPECT_LT(ctx.gamma(), 1.0);
}

TEST(WeightedNorm, InfSupIdentityAndTechInequality) {
  const auto mesh = std::make_shared<const Mesh>(generate_uniform_unit_square(4));
  const FeSpace fes(mesh);
  const StabilizationTensor stab(*mesh, default_weights(*mesh, 1.0));
  const WeightedNormContext ctx(fes, stab, 1.0, 1.0, TimeGrid(1.0, 5));
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const SpaceTimeField w = random_forward(5, fes.num_dofs(), rng);
    const InfSupResult r = infsup_check(w, ctx);
    EXPECT_LE(r.gap, 1e-10);
    EXPECT_NEAR(r.lhs, ctx.weighted_norm_squared(w), 1e-12 * r.lhs);
    EXPECT_GE(tech_inequality_slack(w, ctx), -1e-12);
  }
  EXPECT_THROW(infsup_check(random_forward(5, fes.num_dofs(), rng), ctx, 4), ValidationError);
  const WeightedNormContext coarse(fes, stab, 1.0, 1.0, TimeGrid(1.0, 1));
  EXPECT_THROW(infsup_check(random_forward(1, fes.num_dofs(), rng), coarse), ValidationError);
}

TEST(DiscreteNorm, ConstantInTimeField) {
  const FeSpace fes(std::make_shared<const Mesh>(generate_uniform_unit_square(8)));
  const TimeGrid grid(1.0, 3);
  const Vector w = fes.interpolate([](const Vec2& x) { return std::sin(3.0 * x.x()) * x.y() * (1 - x.y()) * (1 - x.x()); });
  const SpaceTimeField v(Continuity::Forward, {w, w, w}, w);
  const double expected = std::pow(h1_seminorm(fes, w), 2) + std::pow(lumped_norm(fes, w), 2);
  EXPECT_NEAR(discrete_norm_vk_squared(v, fes, grid), expected, 1e-13 * expected);
  EXPECT_EQ(discrete_norm_vk(SpaceTimeField::zeros(Continuity::Backward, 3, fes.num_dofs()), fes, grid), 0.0);
}
