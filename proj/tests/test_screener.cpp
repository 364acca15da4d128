#include "camp/oracle.hpp"
#include "camp/screener.hpp"
#include "camp/suites.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace camp {
namespace {

Vector vec(std::initializer_list<double> xs)
{
  Vector v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (const double x : xs) { v[i++] = x; }
  return v;
}

/// H = [2], f = −2 with the rows v ≤ d_j (rows of W all 1)
StageQP scalar_stage(const Vector & d, const Vector & rho)
{
  return StageQP(std::make_shared<const Hessian>(Matrix::Constant(1, 1, 2.0)),
                 std::make_shared<const Matrix>(Matrix::Ones(d.size(), 1)), vec({-2.0}), d, rho);
}

TEST(RowNorms, Identity)
{
  const StageQP s(std::make_shared<const Hessian>(Matrix::Identity(3, 3)),
                  std::make_shared<const Matrix>(Matrix::Identity(3, 3)), Vector::Zero(3), Vector::Ones(3),
                  Vector::Ones(3));
  EXPECT_EQ(precompute_row_norms(s).zeta, Vector::Ones(3));
}

TEST(RowNorms, EuclideanAndScaled)
{
  Matrix W(3, 2);
  W << 3, 4, 2, 0, 0, 0;
  const StageQP unit(std::make_shared<const Hessian>(Matrix::Identity(2, 2)), std::make_shared<const Matrix>(W),
                     Vector::Zero(2), Vector::Ones(3), Vector::Ones(3));
  const ScreenerCache c1 = precompute_row_norms(unit);
  EXPECT_NEAR(c1.zeta[0], 5.0, 1e-15);
  ASSERT_EQ(c1.zero_rows.size(), 1u);
  EXPECT_EQ(c1.zero_rows[0], 2);

  // G = diag(2, 1)
  const StageQP scaled(std::make_shared<const Hessian>(Matrix(Vector(vec({4, 1})).asDiagonal())),
                       std::make_shared<const Matrix>(W), Vector::Zero(2), Vector::Ones(3), Vector::Ones(3));
  EXPECT_NEAR(precompute_row_norms(scaled).zeta[1], 1.0, 1e-15);
}

TEST(CompleteSlacks, Examples)
{
  const StageQP s = scalar_stage(vec({1.0, 0.5, -1.5}), vec({1, 1, 1}));
  EXPECT_EQ(complete_slacks(vec({0.5}), s), vec({0.0, 0.0, 2.0}));
  EXPECT_NEAR(complete_slacks(vec({0.8}), scalar_stage(vec({0.5}), vec({1})))[0], 0.3, 1e-15);
  EXPECT_TRUE(complete_slacks(vec({-3.0}), s).isZero(0.0));
}

TEST(EllipsoidBound, FeasibleCandidate)
{
  const StageQP s = scalar_stage(vec({2.0}), vec({1.0}));
  const EllipsoidBound b = ellipsoid_bound(vec({0.5}), vec({0.0}), s);
  EXPECT_NEAR(b.q[0], 0.75, 1e-15);
  EXPECT_NEAR(b.sigma, 0.125, 1e-15);
  // 𝓔 = [0.5, 1.0]
  EXPECT_TRUE(b.contains(vec({0.5}), 1e-12));
  EXPECT_TRUE(b.contains(vec({1.0}), 1e-12));
  EXPECT_FALSE(b.contains(vec({1.01})));
  EXPECT_FALSE(b.contains(vec({0.49})));
  EXPECT_FALSE(bound_is_trivial(b, s));
}

TEST(EllipsoidBound, InfeasibleCandidate)
{
  const StageQP s = scalar_stage(vec({0.5}), vec({10.0}));
  const Vector eps = complete_slacks(vec({1.5}), s);
  EXPECT_NEAR(eps[0], 1.0, 1e-15);
  const EllipsoidBound b = ellipsoid_bound(vec({1.5}), eps, s);
  EXPECT_NEAR(b.q[0], 1.25, 1e-15);
  EXPECT_NEAR(b.sigma, 10.125, 1e-13);
  EXPECT_TRUE(b.contains(enumerate_oracle(s).v_star));
}

TEST(EllipsoidBound, UnconstrainedMinimizerIsTrivial)
{
  const StageQP s = scalar_stage(vec({5.0}), vec({1.0}));
  const EllipsoidBound b = ellipsoid_bound(vec({1.0}), vec({0.0}), s);
  EXPECT_LE(b.sigma, 1e-30);
  EXPECT_NEAR(b.q[0], 1.0, 1e-15);
  EXPECT_TRUE(bound_is_trivial(b, s));
  EXPECT_TRUE(screen_candidate(precompute_row_norms(s), vec({1.0}), s).trivial);
}

TEST(Screen, RemovesDistantRow)
{
  const StageQP s = scalar_stage(vec({2.0}), vec({1.0}));
  const ScreenerCache cache = precompute_row_norms(s);
  EXPECT_NEAR(cache.zeta[0], 1.0 / std::sqrt(2.0), 1e-15);
  const EllipsoidBound b = ellipsoid_bound(vec({0.5}), vec({0.0}), s);
  EXPECT_EQ(screen(cache, b, s, vec({0.0})).size(), 0);
  EXPECT_TRUE(enumerate_oracle(s).eps_star.isZero(0.0));
}

TEST(Screen, KeepsViolatedRow)
{
  // 𝓔 is far from the row but the candidate violates it
  const StageQP s = scalar_stage(vec({2.0}), vec({1.0}));
  const ScreenerCache cache = precompute_row_norms(s);
  const EllipsoidBound b = ellipsoid_bound(vec({0.5}), vec({0.0}), s);
  const KeptSet kept = screen(cache, b, s, vec({1e-3}));
  ASSERT_EQ(kept.size(), 1);
  EXPECT_TRUE(kept.contains(0));
}

TEST(Screen, KeepsTangentRow)
{
  // ṽ = v* = 0.5: √σ ζ = 0.25 = |0.5 − 0.75|
  const StageQP s = scalar_stage(vec({0.5}), vec({10.0}));
  const ScreenerCache cache = precompute_row_norms(s);
  const Vector v_tilde = vec({0.5});
  const EllipsoidBound b = ellipsoid_bound(v_tilde, complete_slacks(v_tilde, s), s);
  EXPECT_NEAR(std::sqrt(b.sigma) * cache.zeta[0], 0.25, 1e-15);
  EXPECT_EQ(screen(cache, b, s, complete_slacks(v_tilde, s)).size(), 1);

  // dropping it would move the minimizer to the unconstrained point
  const SolveResult without = solve_soft_qp(s.select_rows({}));
  EXPECT_NEAR(without.v_star[0], 1.0, 1e-12);
  EXPECT_NEAR(enumerate_oracle(s).v_star[0], 0.5, 1e-12);
}

TEST(Screen, ZeroRows)
{
  Matrix W(3, 1);
  W << 0, 0, 1;
  const StageQP s(std::make_shared<const Hessian>(Matrix::Constant(1, 1, 2.0)), std::make_shared<const Matrix>(W),
                  vec({-2.0}), vec({1.0, -1.0, 50.0}), vec({1, 1, 1}));
  const ScreenerCache cache = precompute_row_norms(s);
  const Vector v_tilde = vec({0.5});
  const ScreenOutcome out = screen_candidate(cache, v_tilde, s);
  ASSERT_EQ(out.kept.size(), 1);
  EXPECT_EQ(out.kept.rows[0], 1);
  const KeptSet ref = screen(cache, out.bound, s, complete_slacks(v_tilde, s));
  EXPECT_EQ(ref.rows, out.kept.rows);
}

TEST(Screen, MarginOnlyRemovesWithClearance)
{
  // row sits 1e-12 outside 𝓔
  const double d = 1.0 + 1e-12;
  const StageQP s = scalar_stage(vec({d}), vec({1.0}));
  const ScreenerCache cache = precompute_row_norms(s);
  const EllipsoidBound b = ellipsoid_bound(vec({0.5}), vec({0.0}), s);
  EXPECT_EQ(screen(cache, b, s, vec({0.0})).size(), 1);
  EXPECT_EQ(screen(cache, b, s, vec({0.0}), ScreenOptions{0.0}).size(), 0);
}

TEST(ScreenCandidate, MatchesStepwiseScreening)
{
  std::mt19937_64 rng(17);
  for (int t = 0; t < 500; ++t) {
    const StageQP qp = suites::random_stage_qp(rng, 1 + t % 6, 1 + t % 40);
    const SolveResult opt = solve_soft_qp(qp);
    const Vector v_tilde = suites::candidate(rng, qp, opt.v_star, t);
    const ScreenerCache cache = precompute_row_norms(qp);
    const ScreenOutcome out = screen_candidate(cache, v_tilde, qp);

    const Vector eps = complete_slacks(v_tilde, qp);
    const EllipsoidBound b = ellipsoid_bound(v_tilde, eps, qp);
    EXPECT_LE((out.eps_tilde - eps).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LE((out.bound.q - b.q).norm(), 1e-12 * (1.0 + b.q.norm()));
    EXPECT_NEAR(out.bound.sigma, b.sigma, 1e-12 * (1.0 + b.sigma));
    EXPECT_EQ(out.trivial, bound_is_trivial(b, qp));
    if (!out.trivial) { EXPECT_EQ(out.kept.rows, screen(cache, b, qp, eps).rows) << "instance " << t; }
  }
}

TEST(Screen, ParametricOverloads)
{
  const SoftQP qp(Matrix::Constant(1, 1, 2.0), Matrix::Constant(1, 1, -1.0), Matrix::Ones(2, 1), vec({0.0, 3.0}),
                  Matrix::Constant(2, 1, 0.25), vec({10, 10}));
  const Vector z = vec({2.0});
  const ScreenerCache cache = precompute_row_norms(qp);
  const Vector v_tilde = vec({0.5});
  const Vector eps = complete_slacks(v_tilde, qp, z);
  const EllipsoidBound b = ellipsoid_bound(v_tilde, eps, qp, z);
  const KeptSet kept = screen(cache, b, qp, z, eps);
  EXPECT_EQ(kept.rows, std::vector<Index>{0});

  const SoftQP small = reduce(qp, kept);
  EXPECT_EQ(small.n_c(), 1);
  EXPECT_EQ(small.c()[0], 0.0);
  EXPECT_EQ(small.hessian(), qp.hessian());
  EXPECT_EQ(small.F_ptr(), qp.F_ptr());

  const SolveResult full = expand_solution(solve_soft_qp(small, z), kept, qp, z);
  EXPECT_NEAR(full.v_star[0], 0.5, 1e-8);
  EXPECT_EQ(full.eps_star.size(), 2);
}

TEST(Reduce, AllAndNone)
{
  std::mt19937_64 rng(4);
  const StageQP s = suites::random_stage_qp(rng, 3, 5);
  const SoftQP qp(s.hessian_ptr(), std::make_shared<const Matrix>(Matrix::Identity(3, 3)), s.W(), s.d(),
                  Matrix::Zero(5, 3), s.rho());
  const Vector z = -s.f();

  const SoftQP all = reduce(qp, KeptSet{{0, 1, 2, 3, 4}});
  EXPECT_EQ(all.W(), qp.W());
  EXPECT_EQ(all.c(), qp.c());
  EXPECT_EQ(all.rho(), qp.rho());

  const SoftQP none = reduce(qp, KeptSet{});
  EXPECT_EQ(none.n_c(), 0);
  EXPECT_LE((solve_soft_qp(none, z).v_star - unconstrained_minimizer(qp, z)).norm(), 1e-14);

  EXPECT_THROW(reduce(qp, KeptSet{{7}}), DimensionError);
}

TEST(ExpandSolution, IdentityEmbedding)
{
  const StageQP s = scalar_stage(vec({0.5, 3.0}), vec({0.5, 1.0}));
  const KeptSet all{{0, 1}};
  const SolveResult r = solve_soft_qp(s);
  const SolveResult e = expand_solution(r, all, s);
  EXPECT_EQ(e.v_star, r.v_star);
  EXPECT_EQ(e.eps_star, r.eps_star);
  EXPECT_NEAR(e.objective, r.objective, 1e-12);
}

TEST(ExpandSolution, EmptySetFeasible)
{
  const StageQP s = scalar_stage(vec({5.0, 3.0}), vec({1.0, 1.0}));
  const SolveResult r = solve_soft_qp(s.select_rows({}));
  const SolveResult e = expand_solution(r, KeptSet{}, s);
  EXPECT_EQ(e.eps_star, Vector::Zero(2));
  EXPECT_NEAR(e.v_star[0], 1.0, 1e-14);
}

TEST(ExpandSolution, DetectsUnsoundRemoval)
{
  const StageQP s = scalar_stage(vec({0.5}), vec({10.0}));
  const SolveResult r = solve_soft_qp(s.select_rows({}));
  EXPECT_THROW(expand_solution(r, KeptSet{}, s), EquivalenceViolation);
}

TEST(CountByKind, Counts)
{
  const std::vector<RowOrigin> origin{
    {ConstraintKind::State, 1, 0}, {ConstraintKind::Input, 0, 0}, {ConstraintKind::Rate, 0, 0},
    {ConstraintKind::State, 2, 0}};
  const auto counts = count_by_kind(KeptSet{{0, 2, 3}}, origin);
  EXPECT_EQ(counts[0], 2);
  EXPECT_EQ(counts[1], 0);
  EXPECT_EQ(counts[2], 1);
}

TEST(Suites, Soundness)
{
  const auto r = suites::screening_soundness_suite(300, 31);
  EXPECT_TRUE(r.passed()) << r.first_failure;
}

TEST(Suites, Ellipsoid)
{
  const auto r = suites::ellipsoid_suite(1000, 32);
  EXPECT_TRUE(r.passed()) << r.first_failure;
}

}  // namespace
}  // namespace camp
