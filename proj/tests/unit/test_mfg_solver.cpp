#include <gtest/gtest.h>

#include <random>

#include "mfg/error.hpp"
#include "mfg/manufactured.hpp"
#include "mfg/mfg_solver.hpp"

using namespace mfg;

namespace {

struct Level {
  explicit Level(int n, int slabs, double factor = 1.0)
      : mesh(std::make_shared<const Mesh>(generate_uniform_unit_square(n))),
        fes(mesh),
        grid(1.0, slabs),
        weights(default_weights(*mesh, 1.0, factor)) {}
  std::shared_ptr<const Mesh> mesh;
  FeSpace fes;
  TimeGrid grid;
  EdgeWeights weights;
};

}  // namespace

TEST(MfgSolver, TrivialProblemIsZero) {
  Level s(4, 5);
  const MfgSolution sol = solve(trivial_problem(), s.fes, s.grid, s.weights);
  EXPECT_TRUE(sol.converged);
  EXPECT_EQ(sol.outer_iterations, 1);
  for (int n = 0; n < 5; ++n) {
    EXPECT_EQ(sol.u.slab(n).norm(), 0.0);
    EXPECT_EQ(sol.m.slab(n).norm(), 0.0);
  }
}

TEST(MfgSolver, Preconditions) {
  Level s(4, 5);
  const ProblemSpec p = trivial_problem();
  EXPECT_NO_THROW(check_preconditions(p, s.fes, s.grid, s.weights, {}));
  EXPECT_THROW(check_preconditions(p, s.fes, s.grid, default_weights(*s.mesh, 1.0, 0.5), {}), ValidationError);
  EXPECT_THROW(check_preconditions(p, s.fes, TimeGrid(1.0, 1), s.weights, {}), ValidationError);
  EXPECT_THROW(check_preconditions(p, s.fes, TimeGrid(2.0, 5), s.weights, {}), ValidationError);
  EXPECT_THROW(check_preconditions(p, s.fes, s.grid, EdgeWeights(3, 1.0), {}), ValidationError);
  SolverOptions bad;
  bad.relaxation = 0.0;
  EXPECT_THROW(check_preconditions(p, s.fes, s.grid, s.weights, bad), ValidationError);
}

TEST(MfgSolver, IterationCapReportsHistory) {
  Level s(4, 5);
  SolverOptions opts;
  opts.max_outer = 1;
  try {
    solve(manufactured().spec, s.fes, s.grid, s.weights, opts);
    FAIL() << "expected NonConvergence";
  } catch (const NonConvergence& e) {
    EXPECT_EQ(e.history().size(), 1u);
  }
}

class ManufacturedSolve : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    setup_ = new Level(4, 5);
    sol_ = new MfgSolution(solve(manufactured().spec, setup_->fes, setup_->grid, setup_->weights));
  }
  static void TearDownTestSuite() {
    delete sol_;
    delete setup_;
  }
  static Level* setup_;
  static MfgSolution* sol_;
};
Level* ManufacturedSolve::setup_ = nullptr;
MfgSolution* ManufacturedSolve::sol_ = nullptr;

TEST_F(ManufacturedSolve, ConvergesWithConsistentResiduals) {
  EXPECT_TRUE(sol_->converged);
  EXPECT_LE(sol_->residual_history.back(), 1e-9);
  const ResidualReport r = residual_audit(*sol_, manufactured().spec, setup_->fes, setup_->grid, setup_->weights);
  EXPECT_LE(r.kfp_residual, 1e-10);
  EXPECT_LE(r.hjb_residual, 1e-8);
  EXPECT_GE(r.min_density, 0.0);
  EXPECT_GE(r.subgradient_slack, -1e-12);
  EXPECT_LE(r.max_selection_norm, 1.0 + 1e-14);
}

TEST_F(ManufacturedSolve, RelaxationReachesSameSolution) {
  SolverOptions opts;
  opts.relaxation = 0.6;
  const MfgSolution other = solve(manufactured().spec, setup_->fes, setup_->grid, setup_->weights, opts);
  SpaceTimeField du = sol_->u, dm = sol_->m;
  for (int n = 0; n < du.num_slabs(); ++n) {
    du.slab(n) -= other.u.slab(n);
    dm.slab(n) -= other.m.slab(n);
  }
  EXPECT_LE(l2h1_norm(setup_->fes, setup_->grid, du), 1e-7 * l2h1_norm(setup_->fes, setup_->grid, sol_->u));
  EXPECT_LE(l2l2_norm(setup_->fes, setup_->grid, dm), 1e-7 * l2l2_norm(setup_->fes, setup_->grid, sol_->m));
}

TEST_F(ManufacturedSolve, RandomInitialTransport) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-0.7, 0.7);
  TransportField b0(setup_->grid.num_slabs(), setup_->mesh->num_triangles());
  for (int n = 0; n < b0.num_slabs(); ++n)
    for (auto& v : b0.slab(n)) v = Vec2(u(rng), u(rng));
  SolverOptions opts;
  opts.initial_transport = b0;
  const MfgSolution other = solve(manufactured().spec, setup_->fes, setup_->grid, setup_->weights, opts);
  for (int n = 0; n < other.m.num_slabs(); ++n) {
    EXPECT_LE((other.m.slab(n) - sol_->m.slab(n)).lpNorm<Eigen::Infinity>(), 1e-7);
    EXPECT_LE((other.u.slab(n) - sol_->u.slab(n)).lpNorm<Eigen::Infinity>(), 1e-7);
  }
}

TEST_F(ManufacturedSolve, CrossLambdaIsNonpositive) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g(0.0, 0.1);
  SpaceTimeField p = sol_->u;
  for (int n = 0; n < p.num_slabs(); ++n)
    for (auto& x : p.slab(n)) x += g(rng);
  EXPECT_LE(max_cross_lambda(*sol_, eikonal(), setup_->fes, setup_->grid, p), 1e-14);
}

TEST(MfgSolver, SpaceTimeNorms) {
  const FeSpace fes(std::make_shared<const Mesh>(generate_uniform_unit_square(4)));
  const TimeGrid grid(1.0, 4);
  SpaceTimeField v = SpaceTimeField::zeros(Continuity::Forward, 4, fes.num_dofs());
  const Vector w = fes.interpolate([](const Vec2& x) { return x.x() * x.y() * (1 - x.x()) * (1 - x.y()); });
  for (int n = 0; n < 4; ++n) v.slab(n) = w;
  EXPECT_NEAR(l2l2_norm(fes, grid, v), l2_norm(fes, w), 1e-15);
  EXPECT_NEAR(l2h1_norm(fes, grid, v), h1_seminorm(fes, w), 1e-15);
}
