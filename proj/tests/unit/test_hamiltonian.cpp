#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mfg/error.hpp"
#include "mfg/hamiltonian.hpp"
#include "mfg/timestepping.hpp"

using namespace mfg;

TEST(Hamiltonian, EikonalValueAndSelection) {
  const Hamiltonian h = eikonal();
  EXPECT_DOUBLE_EQ(h.lipschitz(), 1.0);
  EXPECT_TRUE(h.space_time_independent());
  EXPECT_DOUBLE_EQ(h(0, Vec2::Zero(), Vec2(3, 4)), 5.0);
  const Vec2 s = h.select(0, Vec2::Zero(), Vec2(3, 4));
  EXPECT_NEAR(s.x(), 0.6, 1e-15);
  EXPECT_NEAR(s.y(), 0.8, 1e-15);
  EXPECT_EQ(h.select(0, Vec2::Zero(), Vec2::Zero()), Vec2::Zero());
  EXPECT_EQ(h.select(0, Vec2::Zero(), Vec2(1e-15, 0)), Vec2::Zero());
}

TEST(Hamiltonian, EikonalSubgradientInequality) {
  const Hamiltonian h = eikonal();
  std::mt19937_64 rng(2);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const Vec2 p(n(rng), n(rng));
    const Vec2 q(n(rng), n(rng));
    const Vec2 b = h.select(0, Vec2::Zero(), p);
    EXPECT_LE(b.norm(), 1.0 + 1e-15);
    EXPECT_GE(h(0, Vec2::Zero(), q) - h(0, Vec2::Zero(), p) - b.dot(q - p), -1e-14);
  }
}

TEST(Hamiltonian, DiscreteControlTiesPickLowestIndex) {
  std::vector<Control> controls;
  for (const Vec2& d : {Vec2(1, 0), Vec2(0, 1), Vec2(-1, 0)}) {
    controls.push_back({[d](double, const Vec2&) { return d; }, [](double, const Vec2&) { return 0.0; }, true});
  }
  const Hamiltonian h = discrete_control(controls);
  EXPECT_NEAR(h.lipschitz(), 1.0, 1e-15);
  EXPECT_EQ(argmax_control(controls, 0, Vec2::Zero(), Vec2(1, 1)), 0);
  EXPECT_EQ(h.select(0, Vec2::Zero(), Vec2(-2, 1)), Vec2(-1, 0));
  EXPECT_DOUBLE_EQ(h(0, Vec2::Zero(), Vec2(-2, 1)), 2.0);
  EXPECT_THROW(discrete_control({}), ValidationError);
}

TEST(Hamiltonian, DiscreteControlSampledLipschitz) {
  std::vector<Control> controls;
  controls.push_back({[](double t, const Vec2& x) { return Vec2(x.x() + t, 0.0); },
                      [](double, const Vec2&) { return 0.0; }, false});
  const Hamiltonian h = discrete_control(controls, -1.0, 10, 1.0);
  EXPECT_NEAR(h.lipschitz(), 2.0, 1e-14);
  EXPECT_FALSE(h.space_time_independent());
}

TEST(TransportField, SelectionUsesSlabGradients) {
  const auto mesh = std::make_shared<const Mesh>(generate_uniform_unit_square(4));
  const FeSpace fes(mesh);
  const TimeGrid grid(1.0, 3);
  SpaceTimeField u = SpaceTimeField::zeros(Continuity::Backward, 3, fes.num_dofs());
  u.slab(1) = fes.interpolate([](const Vec2& x) { return x.x() * (1 - x.x()) * x.y() * (1 - x.y()); });
  const TransportField b = select_field(eikonal(), u, fes, grid);
  EXPECT_EQ(b.num_slabs(), 3);
  EXPECT_NEAR(b.max_norm(), 1.0, 1e-15);
  for (int k = 0; k < mesh->num_triangles(); ++k) {
    EXPECT_EQ(b.slab(0)[k], Vec2::Zero());
    const Vec2 g = fes.gradient(u.slab(1), k);
    if (g.norm() > 1e-14) EXPECT_LT((b.slab(1)[k] - g / g.norm()).norm(), 1e-15);
  }
}
