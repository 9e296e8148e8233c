#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <mccsr/operators.hpp>
#include <mccsr/random.hpp>
#include <mccsr/solver.hpp>

#include "support/synthetic.hpp"

namespace mccsr {
namespace {

using testing::random_dictionary;
using testing::random_l1_instance;
using testing::random_matrix;
using testing::random_psd;
using testing::random_vector;

SolverConfig tight_config() {
  SolverConfig cfg;
  cfg.max_iterations = 5000;
  cfg.tolerance = 1e-14;
  return cfg;
}

TEST(SoftThreshold, KnownValues) {
  EXPECT_DOUBLE_EQ(soft_threshold(3.0, 1.0), 2.0);
  EXPECT_DOUBLE_EQ(soft_threshold(-0.5, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(soft_threshold(-3.0, 1.0), -2.0);
  EXPECT_DOUBLE_EQ(soft_threshold(0.7, 0.0), 0.7);
}

TEST(SoftThreshold, NegativeThresholdIsRejected) {
  EXPECT_THROW(soft_threshold(1.0, -0.1), std::invalid_argument);
}

TEST(Lipschitz, IdentityMatrix) {
  const Matrix q = Matrix::Identity(5, 5);
  EXPECT_NEAR(estimate_lipschitz(q, 1.05), 2.0 * 1.05, 1e-6);
}

TEST(Lipschitz, DiagonalMatrix) {
  Matrix q = Matrix::Zero(3, 3);
  q.diagonal() << 1.0, 2.0, 3.0;
  EXPECT_NEAR(estimate_lipschitz(q, 1.05), 6.0 * 1.05, 1e-5);
}

TEST(Lipschitz, MatchesDenseEigensolver) {
  Rng rng(31);
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix q = random_psd(rng, 12, 0.01);
    const Eigen::SelfAdjointEigenSolver<Matrix> eig(q);
    const double expected = 2.0 * eig.eigenvalues().maxCoeff();
    EXPECT_NEAR(estimate_lipschitz(q, 1.0), expected, 1e-6 * expected);
  }
}

TEST(Lipschitz, NonFiniteEntriesAreRejected) {
  Matrix q = Matrix::Identity(2, 2);
  q(0, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(estimate_lipschitz(q), std::invalid_argument);
}

TEST(Fista, ZeroLinearTermGivesZero) {
  Rng rng(32);
  JointQuadratic q = random_l1_instance(rng, 8, 0.2);
  q.linear.setZero();
  const SolverResult res = fista_solve(q, tight_config());
  EXPECT_LE(res.x.norm(), 0.0);
}

TEST(Fista, NoSparsityReducesToLinearSolve) {
  Rng rng(33);
  JointQuadratic q = random_l1_instance(rng, 10, 0.0);
  q.q_sym = random_psd(rng, 10, 0.5);  // well conditioned
  const SolverResult res = fista_solve(q, tight_config());
  const Vector expected = 0.5 * q.q_sym.ldlt().solve(q.linear);
  EXPECT_LE((res.x - expected).norm(), 1e-6 * (1.0 + expected.norm()));
}

TEST(Fista, MatchesScalarClosedForm) {
  // Q = [1], b = [4], lambda = 1: x = (b - lambda)/2 = 1.5,
  // objective = 1.5^2 - 4*1.5 + 1*1.5 = -2.25.
  JointQuadratic q;
  q.q_sym = Matrix::Identity(1, 1);
  q.linear = Vector::Constant(1, 4.0);
  q.constant = 0.0;
  q.l1_weight = 1.0;
  const SolverResult brute = brute_force_l1_qp(q);
  EXPECT_NEAR(brute.x[0], 1.5, 1e-12);
  EXPECT_NEAR(brute.objective, -2.25, 1e-12);
  const SolverResult res = fista_solve(q, tight_config());
  EXPECT_NEAR(res.x[0], 1.5, 1e-8);
  EXPECT_NEAR(res.objective, -2.25, 1e-10);
}

TEST(Fista, ObjectiveNeverExceedsStart) {
  Rng rng(34);
  for (int trial = 0; trial < 20; ++trial) {
    const JointQuadratic q = random_l1_instance(rng, 9, 0.15);
    const Vector x0 = random_vector(rng, 9, -2.0, 2.0);
    SolverConfig cfg;
    cfg.max_iterations = 3 + static_cast<int>(rng.below(40));
    const SolverResult res = fista_solve(q, cfg, x0);
    EXPECT_LE(res.objective, q.objective(x0) + 1e-12);
  }
}

TEST(Fista, ReportsNonConvergenceWithoutThrowing) {
  Rng rng(35);
  const JointQuadratic q = random_l1_instance(rng, 12, 0.1);
  SolverConfig cfg;
  cfg.max_iterations = 1;
  cfg.tolerance = 1e-16;
  const SolverResult res = fista_solve(q, cfg);
  EXPECT_FALSE(res.converged);
}

TEST(Fista, GradientMatchesFiniteDifferences) {
  Rng rng(36);
  const JointQuadratic q = random_l1_instance(rng, 7, 0.0);
  const Vector x = random_vector(rng, 7);
  const Vector grad = 2.0 * q.q_sym * x - q.linear;
  for (Index i = 0; i < 7; ++i) {
    const double h = 1e-4;
    Vector xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    const double fd = (q.smooth_value(xp) - q.smooth_value(xm)) / (2.0 * h);
    EXPECT_LE(std::abs(fd - grad[i]), 1e-5 * (1.0 + std::abs(grad[i])));
  }
}

TEST(BruteForce, ZeroLinearTermGivesZero) {
  Rng rng(37);
  JointQuadratic q = random_l1_instance(rng, 5, 0.3);
  q.linear.setZero();
  const SolverResult res = brute_force_l1_qp(q);
  EXPECT_LE(res.x.norm(), 0.0);
}

TEST(BruteForce, LargePenaltyGivesZero) {
  Rng rng(38);
  JointQuadratic q = random_l1_instance(rng, 5, 0.0);
  q.l1_weight = q.linear.lpNorm<Eigen::Infinity>() + 0.5;
  const SolverResult res = brute_force_l1_qp(q);
  EXPECT_LE(res.x.norm(), 0.0);
}

TEST(BruteForce, HighDimensionIsRejected) {
  JointQuadratic q;
  q.q_sym = Matrix::Identity(13, 13);
  q.linear = Vector::Zero(13);
  EXPECT_THROW(brute_force_l1_qp(q), std::invalid_argument);
}

TEST(Fista, AgreesWithBruteForceOracle) {
  Rng rng(39);
  SolverConfig cfg = tight_config();
  for (int trial = 0; trial < 200; ++trial) {
    const JointQuadratic q = random_l1_instance(rng, 6, rng.uniform(0.02, 0.4));
    const SolverResult oracle = brute_force_l1_qp(q);
    const SolverResult res = fista_solve(q, cfg);
    EXPECT_LE(std::abs(res.objective - oracle.objective),
              1e-6 * (1.0 + std::abs(oracle.objective)))
        << "trial " << trial;
  }
}

TEST(Lasso, IdentityDictionaryIsSoftThreshold) {
  Rng rng(40);
  const Vector y = random_vector(rng, 9, -3.0, 3.0);
  const double lambda = 0.7;
  const SolverResult res = lasso_solve(Matrix::Identity(9, 9), y, lambda,
                                       tight_config());
  for (Index i = 0; i < y.size(); ++i)
    EXPECT_NEAR(res.x[i], soft_threshold(y[i], lambda), 1e-7);
}

TEST(Lasso, ZeroTargetGivesZero) {
  Rng rng(41);
  const Matrix d = random_matrix(rng, 8, 5);
  const SolverResult res = lasso_solve(d, Vector::Zero(8), 0.1);
  EXPECT_LE(res.x.norm(), 0.0);
}

TEST(Lasso, OrthonormalDictionaryClosedForm) {
  Rng rng(42);
  const Matrix base = random_matrix(rng, 10, 6);
  const Matrix d = Eigen::HouseholderQR<Matrix>(base)
                       .householderQ() *
                   Matrix::Identity(10, 6);
  const Vector y = random_vector(rng, 10, -2.0, 2.0);
  const double lambda = 0.3;
  const SolverResult res = lasso_solve(d, y, lambda, tight_config());
  const Vector proj = d.transpose() * y;
  for (Index i = 0; i < 6; ++i)
    EXPECT_NEAR(res.x[i], soft_threshold(proj[i], lambda), 1e-6);
}

TEST(Lasso, DimensionMismatchIsRejected) {
  EXPECT_THROW(lasso_solve(Matrix::Identity(4, 4), Vector::Zero(5), 0.1),
               std::invalid_argument);
}

// With no cross-channel coupling the joint problem factorizes into three
// independent per-channel problems.
TEST(JointSolve, ZeroCouplingEqualsPerChannelLasso) {
  Rng rng(43);
  const int side = 3, q_rows = 12, m = 5;
  for (int trial = 0; trial < 10; ++trial) {
    const BlockDiagonalDictionary d_l = random_dictionary(rng, q_rows, m);
    const BlockDiagonalDictionary d_h = random_dictionary(rng, side * side, m);
    const EdgeOperator s = build_edge_operator(side);
    const Vector y_l = random_vector(rng, 3 * q_rows, -2.0, 2.0);
    const double lambda = 0.1;

    const JointQuadratic joint = build_joint_quadratic(d_l, d_h, s, 0.0, lambda, y_l);
    const SolverResult joint_res = fista_solve(joint, tight_config());

    for (int c = 0; c < 3; ++c) {
      const SolverResult channel =
          lasso_solve(d_l.channel(c), y_l.segment(c * q_rows, q_rows), lambda,
                      tight_config());
      EXPECT_LE((joint_res.x.segment(c * m, m) - channel.x)
                    .lpNorm<Eigen::Infinity>(),
                1e-6)
          << "trial " << trial << " channel " << c;
    }
  }
}

}  // namespace
}  // namespace mccsr
