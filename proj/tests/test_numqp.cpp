#include "camp/oracle.hpp"
#include "camp/soft_qp.hpp"
#include "camp/suites.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace camp {
namespace {

Matrix mat(std::initializer_list<std::initializer_list<double>> rows)
{
  Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.begin()->size()));
  Index i = 0;
  for (const auto & r : rows) {
    Index j = 0;
    for (const double x : r) { m(i, j++) = x; }
    ++i;
  }
  return m;
}

Vector vec(std::initializer_list<double> xs)
{
  Vector v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (const double x : xs) { v[i++] = x; }
  return v;
}

/// ½·2v² − 2v + ρε  s.t. v ≤ c + ε
StageQP scalar_qp(double c, double rho)
{
  return StageQP(std::make_shared<const Hessian>(mat({{2.0}})), std::make_shared<const Matrix>(mat({{1.0}})),
                 vec({-2.0}), vec({c}), vec({rho}));
}

TEST(Cholesky, Identity)
{
  EXPECT_TRUE(cholesky_factor(Matrix::Identity(2, 2)).isApprox(Matrix::Identity(2, 2)));
}

TEST(Cholesky, Diagonal)
{
  const Matrix G = cholesky_factor(mat({{4, 0}, {0, 9}}));
  EXPECT_NEAR(G(0, 0), 2.0, 1e-15);
  EXPECT_NEAR(G(1, 1), 3.0, 1e-15);
  EXPECT_EQ(G(0, 1), 0.0);
  EXPECT_EQ(G(1, 0), 0.0);
}

TEST(Cholesky, TwoByTwo)
{
  const Matrix H = mat({{2, 1}, {1, 2}});
  const Matrix G = cholesky_factor(H);
  EXPECT_NEAR(G(0, 0), std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(G(0, 1), 1.0 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(G(1, 0), 0.0, 0.0);
  EXPECT_NEAR(G(1, 1), std::sqrt(1.5), 1e-12);
  EXPECT_LE((G.transpose() * G - H).norm(), 1e-10);
}

TEST(Cholesky, Rejects)
{
  EXPECT_THROW(cholesky_factor(mat({{1, 2}, {2, 1}})), NotPositiveDefinite);
  EXPECT_THROW(cholesky_factor(mat({{1, 0.5}, {0, 1}})), NotPositiveDefinite);
  EXPECT_THROW(cholesky_factor(mat({{0}})), NotPositiveDefinite);
  EXPECT_THROW(cholesky_factor(Matrix(2, 3)), DimensionError);
}

TEST(Hessian, Solves)
{
  const Hessian h(mat({{2, 1}, {1, 2}}));
  const Vector b = vec({1.0, -3.0});
  EXPECT_LE((h.H() * h.solve(b) - b).norm(), 1e-14);
  EXPECT_LE((h.G().transpose() * h.solve_GT(b) - b).norm(), 1e-14);
}

TEST(Unconstrained, Scalar)
{
  const SoftQP qp(mat({{2}}), mat({{-2}}), Matrix(0, 1), Vector(0), Matrix(0, 1), Vector(0));
  EXPECT_NEAR(unconstrained_minimizer(qp, vec({1.0}))[0], 1.0, 1e-15);
}

TEST(Unconstrained, ZeroF)
{
  const SoftQP qp(mat({{3, 1}, {1, 2}}), Matrix::Zero(2, 4), Matrix(0, 2), Vector(0), Matrix(0, 4), Vector(0));
  EXPECT_EQ(unconstrained_minimizer(qp, vec({1, 2, 3, 4})), Vector::Zero(2));
}

TEST(Unconstrained, TwoByTwo)
{
  const Matrix H = mat({{2, 1}, {1, 2}});
  const SoftQP qp(H, mat({{1}, {1}}), Matrix(0, 2), Vector(0), Matrix(0, 1), Vector(0));
  const Vector v = unconstrained_minimizer(qp, vec({1.0}));
  EXPECT_NEAR(v[0], -1.0 / 3.0, 1e-15);
  EXPECT_NEAR(v[1], -1.0 / 3.0, 1e-15);
  EXPECT_LE((H * v + vec({1, 1})).norm(), 1e-12);
}

TEST(SoftQP, ParameterSubstitution)
{
  const SoftQP qp(mat({{2}}), mat({{1, -1}}), mat({{1}, {-1}}), vec({0.5, 1.0}), mat({{1, 0}, {0, 2}}), vec({1, 1}));
  const StageQP s = qp.at(vec({3, 4}));
  EXPECT_EQ(s.f(), vec({-1}));
  EXPECT_EQ(s.d(), vec({3.5, 9.0}));
  EXPECT_DOUBLE_EQ(qp.objective(vec({1}), vec({3, 4}), vec({0.5, 0})), 1.0 - 1.0 + 0.5);
}

TEST(SoftQP, RejectsBadData)
{
  EXPECT_THROW(SoftQP(mat({{2}}), mat({{1}}), mat({{1}}), vec({0}), mat({{0}}), vec({0.0})), std::invalid_argument);
  EXPECT_THROW(SoftQP(mat({{2}}), mat({{1}}), mat({{1, 1}}), vec({0}), mat({{0}}), vec({1})), DimensionError);
  EXPECT_THROW(SoftQP(mat({{2}}), mat({{1}}), mat({{1}}), vec({0, 0}), mat({{0}}), vec({1})), DimensionError);
  EXPECT_THROW(SoftQP(mat({{-2}}), mat({{1}}), mat({{1}}), vec({0}), mat({{0}}), vec({1})), NotPositiveDefinite);
}

struct ScalarCase
{
  double c, rho, v, eps;
};

class ScalarSolve : public ::testing::TestWithParam<ScalarCase>
{
};

TEST_P(ScalarSolve, MatchesHandSolution)
{
  const auto p = GetParam();
  const StageQP qp = scalar_qp(p.c, p.rho);
  const SolveResult ipm = solve_soft_qp(qp);
  ASSERT_EQ(ipm.status, SolveStatus::Optimal);
  EXPECT_NEAR(ipm.v_star[0], p.v, 1e-8);
  EXPECT_NEAR(ipm.eps_star[0], p.eps, 1e-8);
  EXPECT_LE(ipm.kkt_residual, 1e-8);

  const SolveResult oracle = enumerate_oracle(qp);
  ASSERT_EQ(oracle.status, SolveStatus::Optimal);
  EXPECT_NEAR(oracle.v_star[0], p.v, 1e-12);
  EXPECT_NEAR(oracle.eps_star[0], p.eps, 1e-12);
  EXPECT_NEAR(ipm.objective, oracle.objective, 1e-8);
}

INSTANTIATE_TEST_SUITE_P(Examples, ScalarSolve,
                         ::testing::Values(ScalarCase{0.5, 10.0, 0.5, 0.0},
                                           ScalarCase{0.5, 0.5, 0.75, 0.25},
                                           ScalarCase{5.0, 3.0, 1.0, 0.0},
                                           ScalarCase{5.0, 0.01, 1.0, 0.0}));

TEST(Solve, NoConstraints)
{
  const Matrix H = mat({{2, 1}, {1, 2}});
  const StageQP qp(std::make_shared<const Hessian>(H), std::make_shared<const Matrix>(Matrix(0, 2)), vec({1, 1}),
                   Vector(0), Vector(0));
  const SolveResult r = solve_soft_qp(qp);
  ASSERT_EQ(r.status, SolveStatus::Optimal);
  EXPECT_LE((r.v_star - vec({-1.0 / 3.0, -1.0 / 3.0})).norm(), 1e-14);
  EXPECT_EQ(r.eps_star.size(), 0);
}

TEST(Solve, ParametricOverload)
{
  const SoftQP qp(mat({{2}}), mat({{-1}}), mat({{1}}), vec({0.0}), mat({{0.25}}), vec({10.0}));
  const SolveResult r = solve_soft_qp(qp, vec({2.0}));
  ASSERT_EQ(r.status, SolveStatus::Optimal);
  EXPECT_NEAR(r.v_star[0], 0.5, 1e-8);
}

TEST(Solve, IterationLimit)
{
  SolverOptions opts;
  opts.max_iterations = 1;
  const SolveResult r = solve_soft_qp(scalar_qp(0.5, 0.5), opts);
  EXPECT_EQ(r.status, SolveStatus::MaxIterations);
}

TEST(Solve, StatusNames)
{
  EXPECT_EQ(to_string(SolveStatus::Optimal), "optimal");
  EXPECT_EQ(to_string(SolveStatus::MaxIterations), "max_iterations");
  EXPECT_EQ(to_string(SolveStatus::NumericalFailure), "numerical_failure");
}

TEST(Oracle, SizeGuard)
{
  std::mt19937_64 rng(3);
  EXPECT_THROW(enumerate_oracle(suites::random_stage_qp(rng, 7, 2)), SizeGuard);
  EXPECT_THROW(enumerate_oracle(suites::random_stage_qp(rng, 2, 15)), SizeGuard);
  EXPECT_NO_THROW(enumerate_oracle(suites::random_stage_qp(rng, 6, 8)));
}

TEST(Oracle, HardLimit)
{
  // v ≤ 0.5 and −v ≤ −2 cannot both hold
  const StageQP infeasible(std::make_shared<const Hessian>(mat({{2}})), std::make_shared<const Matrix>(mat({{1}, {-1}})),
                           vec({-2}), vec({0.5, -2.0}), vec({1, 1}));
  EXPECT_FALSE(enumerate_hard_oracle(infeasible).has_value());

  const auto hard = enumerate_hard_oracle(scalar_qp(0.5, 1.0));
  ASSERT_TRUE(hard.has_value());
  EXPECT_NEAR((*hard)[0], 0.5, 1e-14);
}

TEST(Oracle, ObjectiveIsMinimalOnRandomPoints)
{
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int t = 0; t < 50; ++t) {
    const StageQP qp = suites::random_small_qp(rng, 3, 6);
    const SolveResult best = enumerate_oracle(qp);
    ASSERT_EQ(best.status, SolveStatus::Optimal);
    for (int s = 0; s < 20; ++s) {
      Vector v(qp.n_v());
      for (Index i = 0; i < v.size(); ++i) { v[i] = u(rng); }
      const Vector eps = (qp.W() * v - qp.d()).cwiseMax(0.0);
      EXPECT_LE(best.objective, qp.objective(v, eps) + 1e-10);
    }
  }
}

TEST(Suites, SolverQuality)
{
  const auto r = suites::solver_quality_suite(200, 21);
  EXPECT_TRUE(r.passed()) << r.first_failure;
}

TEST(Suites, LargePenalty)
{
  const auto r = suites::large_penalty_suite(200, 22);
  EXPECT_TRUE(r.passed()) << r.first_failure;
}

TEST(Suites, PenaltyMonotonicity)
{
  const auto r = suites::penalty_monotonicity_suite(200, 23);
  EXPECT_TRUE(r.passed()) << r.first_failure;
}

}  // namespace
}  // namespace camp
