#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "srnl/oracle.hpp"

using namespace srnl;
using Eigen::MatrixXd;
using Eigen::VectorXd;

TEST_CASE("rejection sampling: acceptance rates across overlap regimes") {
  // huge ball: essentially everything is accepted
  const auto big = ConstraintSet::ball(VectorXd::Zero(3), 1000.0);
  const auto r1 = rejection_sample(big, GaussianProposal::standard(3), 5000, 1);
  CHECK(r1.acceptance_rate >= 0.999);

  // unit ball with a standard normal: P(chi^2_3 <= 1) = 0.19874804
  const auto ball = ConstraintSet::ball(VectorXd::Zero(3), 1.0);
  const auto r2 = rejection_sample(ball, GaussianProposal::standard(3), 2000, 2);
  CHECK(std::abs(r2.acceptance_rate - 0.19874804) <= 0.02);
  for (long i = 0; i < r2.points.rows(); ++i)
    CHECK(ball.contains(r2.points.row(i).transpose()));

  // anisotropic proposal: mean of the truncated target is 0 by symmetry
  const auto r3 = rejection_sample(
      ball, GaussianProposal::diagonal(Eigen::Vector3d(0.25, 1.0, 4.0)), 20000, 3);
  const auto [mean, cov] = moments(r3);
  for (int j = 0; j < 3; ++j) {
    const double se = std::sqrt(cov(j, j) / 20000.0);
    CHECK(std::abs(mean[j]) <= 3.0 * se);
  }
}

TEST_CASE("rejection sampling: starvation error on vanishing overlap") {
  const auto tiny = ConstraintSet::ball(100.0 * VectorXd::Ones(3), 1e-3);
  CHECK_THROWS_WITH_AS(rejection_sample(tiny, GaussianProposal::standard(3), 10, 4, 50),
                       doctest::Contains("starvation"), std::runtime_error);
}

TEST_CASE("acceptance events concentrate at the binomial rate") {
  // Hoeffding: 10^4-proposal window keeps the rate within 0.015 of p w.h.p.
  const auto ball = ConstraintSet::ball(VectorXd::Zero(3), 1.0);
  const auto r = rejection_sample(ball, GaussianProposal::standard(3), 1987, 5);
  CHECK(std::abs(r.acceptance_rate - 0.19874804) <= 0.015);
}

TEST_CASE("moments: hand values and truncation shrinkage") {
  ReferenceSample s;
  s.points = MatrixXd::Constant(5, 2, 3.14);
  const auto [m1, c1] = moments(s);
  CHECK((m1.array() - 3.14).abs().maxCoeff() == 0.0);
  CHECK(c1.cwiseAbs().maxCoeff() == 0.0);

  ReferenceSample two;
  two.points.resize(2, 3);
  two.points << -1, 0, 0, 1, 0, 0;
  const auto [m2, c2] = moments(two);
  CHECK(m2.norm() == 0.0);
  CHECK(c2(0, 0) == 2.0);  // unbiased divisor n - 1
  CHECK(std::abs(c2(1, 1)) == 0.0);

  const auto ball = ConstraintSet::ball(VectorXd::Zero(3), 1.0);
  const auto r = rejection_sample(ball, GaussianProposal::standard(3), 100000, 6);
  const auto [m3, c3] = moments(r);
  for (int j = 0; j < 3; ++j) CHECK(c3(j, j) < 1.0);  // truncation shrinks variance
}
