#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "srnl/geometry.hpp"
#include "srnl/rng.hpp"
#include "srnl/skew_field.hpp"

using namespace srnl;
using Eigen::VectorXd;

namespace {

VectorXd vec3(double a, double b, double c) {
  VectorXd v(3);
  v << a, b, c;
  return v;
}

ConstraintSet unit_ball() { return ConstraintSet::ball(VectorXd::Zero(3), 1.0); }

ConstraintSet lp_set(double p = 4.0, double eps = 0.2, double lambda = 1.0) {
  return ConstraintSet::smoothed_lp(SmoothedLpSpec(p, eps, 3), lambda);
}

}  // namespace

TEST_CASE("constraint construction invariants") {
  CHECK_THROWS(ConstraintSet::ball(VectorXd::Zero(3), 0.0));
  CHECK_THROWS(ConstraintSet::ball(VectorXd::Zero(3), -1.0));
  // anchor must be strictly interior
  CHECK_THROWS(ConstraintSet::sublevel(SmoothedLpSpec(4.0, 0.2, 3), 0.001, VectorXd::Zero(3)));
  // p < 2 needs positive smoothing
  CHECK_THROWS(SmoothedLpSpec(1.5, 0.0, 3));
  CHECK_NOTHROW(SmoothedLpSpec(2.0, 0.0, 3));
}

TEST_CASE("contains: ball and smoothed lp") {
  const auto ball = unit_ball();
  CHECK(ball.contains(vec3(0.2, 0.3, 0.5)));  // ||x||^2 = 0.38
  CHECK(ball.contains(vec3(1, 0, 0)));        // boundary included
  CHECK_FALSE(ball.contains(vec3(1.0000001, 0, 0)));
  CHECK_THROWS(ball.contains(VectorXd::Zero(2)));

  const auto lp = lp_set();
  // g(0) = 3 * 0.2^4 = 0.0048 < 1
  CHECK(lp.lp().value(VectorXd::Zero(3)) == doctest::Approx(0.0048).epsilon(1e-12));
  CHECK(lp.contains(VectorXd::Zero(3)));
  CHECK_FALSE(lp.contains(vec3(2, 0, 0)));
}

TEST_CASE("outward normal: ball radial, lp gradient, FD cross-check") {
  const auto ball = unit_ball();
  CHECK((ball.outward_normal(vec3(1, 0, 0)) - vec3(1, 0, 0)).norm() < 1e-15);
  CHECK_THROWS(ball.outward_normal(vec3(0.5, 0, 0)));  // not on the boundary

  // p = 2: g is radially symmetric, normal is x/|x|
  const auto lp2 = lp_set(2.0, 0.2, 1.0);
  RngStream rng(7);
  for (int i = 0; i < 20; ++i) {
    const VectorXd b = lp2.sample_boundary(rng);
    CHECK((lp2.outward_normal(b) - b / b.norm()).norm() < 1e-9);
  }

  // p = 4: check grad g against central finite differences along (1,1,1)
  const auto lp4 = lp_set();
  VectorXd dir = vec3(1, 1, 1) / std::sqrt(3.0);
  double t_lo = 0, t_hi = 2;
  while (lp4.lp().value(t_hi * dir) < 1.0) t_hi *= 2;
  for (int it = 0; it < 100; ++it) {
    const double tm = 0.5 * (t_lo + t_hi);
    (lp4.lp().value(tm * dir) < 1.0 ? t_lo : t_hi) = tm;
  }
  const VectorXd b = t_hi * dir;
  const VectorXd n = lp4.outward_normal(b);
  VectorXd fd(3);
  const double h = 1e-6;
  for (int j = 0; j < 3; ++j) {
    VectorXd bp = b, bm = b;
    bp[j] += h;
    bm[j] -= h;
    fd[j] = (lp4.lp().value(bp) - lp4.lp().value(bm)) / (2 * h);
  }
  fd /= fd.norm();
  CHECK((n - fd).norm() <= 1e-6);
  CHECK(n.norm() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("euclidean projection: ball closed form") {
  const auto ball = unit_ball();
  CHECK((ball.project_euclidean(vec3(0.2, 0.3, 0.5)) - vec3(0.2, 0.3, 0.5)).norm() == 0.0);
  CHECK((ball.project_euclidean(vec3(2, 0, 0)) - vec3(1, 0, 0)).norm() < 1e-15);

  // scale equivariance: alpha*x projects to the same boundary point, exactly
  const VectorXd x = vec3(1.3, -0.4, 0.7);
  CHECK((ball.project_euclidean(2.0 * x) - ball.project_euclidean(4.0 * x)).norm() == 0.0);

  // idempotence and feasibility
  RngStream rng(3);
  for (int i = 0; i < 100; ++i) {
    VectorXd y(3);
    for (int j = 0; j < 3; ++j) y[j] = 4.0 * (rng.uniform01() - 0.5);
    const VectorXd p = ball.project_euclidean(y);
    CHECK(ball.contains(p));
    CHECK((ball.project_euclidean(p) - p).norm() <= 1e-12);
  }
}

TEST_CASE("euclidean projection: sublevel KKT vs axis grid-search oracle") {
  const auto lp = lp_set();
  const VectorXd x = vec3(2, 0, 0);
  const VectorXd p = lp.project_euclidean(x);

  // by symmetry the solution is on the x1-axis: minimize |y - 2| over g <= 1
  double best_y = 0, best_d = 1e300;
  for (long i = 0; i <= 2000000; ++i) {
    const double y = static_cast<double>(i) * 1e-6;
    if (lp.lp().value(vec3(y, 0, 0)) > 1.0) break;
    const double d = std::abs(y - 2.0);
    if (d < best_d) {
      best_d = d;
      best_y = y;
    }
  }
  CHECK(std::abs(p[0] - best_y) <= 1e-4);
  CHECK(std::abs(p[1]) <= 1e-12);
  CHECK(std::abs(p[2]) <= 1e-12);

  // KKT residuals: on the level set, step parallel to grad g
  CHECK(std::abs(lp.lp().value(p) - lp.lambda()) <= 1e-9);
  const VectorXd g = lp.lp().gradient(p);
  const VectorXd r = x - p;
  const double cos_angle = r.dot(g) / (r.norm() * g.norm());
  CHECK(cos_angle == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("sublevel projection: feasibility and idempotence at random points") {
  const auto lp = lp_set();
  RngStream rng(11);
  for (int i = 0; i < 200; ++i) {
    VectorXd y(3);
    for (int j = 0; j < 3; ++j) y[j] = 6.0 * (rng.uniform01() - 0.5);
    const VectorXd p = lp.project_euclidean(y);
    CHECK(lp.contains(p));  // feasible side by construction
    if (!lp.contains(y)) CHECK(std::abs(lp.lp().value(p) - lp.lambda()) <= 1e-9);
    CHECK((lp.project_euclidean(p) - p).norm() <= 10 * kTolProj);
  }
}

TEST_CASE("skew normal: reductions and hand value") {
  const auto ball = unit_ball();
  const auto zero = SkewField::zero(3);
  const VectorXd b = vec3(0, 1, 0);
  CHECK((skew_normal(ball, zero, b) - b).norm() == 0.0);

  // J_s annihilates the ball normal: n^J = n
  const auto js = SkewField::cross3d(5.0);
  RngStream rng(5);
  for (int i = 0; i < 50; ++i) {
    const VectorXd p = ball.sample_boundary(rng);
    CHECK((skew_normal(ball, js, p) - ball.outward_normal(p)).norm() <= 1e-14);
  }

  // J_a at e1: (I + J_a)n / sqrt(2) = (1, -1, 0)/sqrt(2)
  const auto ja = SkewField::constant_tridiag(1.0, 3);
  const VectorXd nj = skew_normal(ball, ja, vec3(1, 0, 0));
  CHECK(nj[0] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(nj[1] == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(nj[2] == doctest::Approx(0.0).epsilon(1e-14));

  // formula recomputation and sanity bound
  for (int i = 0; i < 50; ++i) {
    const VectorXd p = ball.sample_boundary(rng);
    const VectorXd n = ball.outward_normal(p);
    const VectorXd jn = ja.apply(p, n);
    const VectorXd expect = (n + jn) / std::sqrt(n.squaredNorm() + jn.squaredNorm());
    const VectorXd got = skew_normal(ball, ja, p);
    CHECK((got - expect).norm() <= 1e-12);
    CHECK(got.norm() <= 1.0 + jn.norm());
  }
}

TEST_CASE("skew projection: fixed points, degeneracy, J_a ray cases") {
  const auto ball = unit_ball();
  const auto ja = SkewField::constant_tridiag(1.0, 3);
  const auto js = SkewField::cross3d(5.0);

  // interior points are fixed for any field
  CHECK((skew_project(ball, ja, vec3(0.1, 0.2, -0.3)) - vec3(0.1, 0.2, -0.3)).norm() == 0.0);

  // J_s n = 0 on the sphere: skew projection equals the metric projection
  CHECK((skew_project(ball, js, vec3(2, 0, 0)) - vec3(1, 0, 0)).norm() <= 1e-12);

  // J_a at x = (1.1, 0, 0): p = e1, d = (1,-1,0)/sqrt(2); solve |x - t d| = 1
  // for the smallest t >= 0 against the quadratic by hand
  const VectorXd got = skew_project(ball, ja, vec3(1.1, 0, 0));
  CHECK(std::abs(got.norm() - 1.0) <= 1e-12);
  const double inv = 1.0 / std::sqrt(2.0);
  const double b_half = 1.1 * inv;
  const double t_star = b_half - std::sqrt(b_half * b_half - (1.1 * 1.1 - 1.0));
  const VectorXd expect = vec3(1.1 - t_star * inv, t_star * inv, 0.0);
  CHECK((got - expect).norm() <= 1e-12);

  // at x = (1.5, 0, 0) the ray along -(1,-1,0)/sqrt(2) passes the ball at
  // perpendicular distance 1.5/sqrt(2) > 1: a genuine ray miss
  CHECK_THROWS_AS(skew_project(ball, ja, vec3(1.5, 0, 0)), RayMissError);
  long fb = 0;
  const VectorXd y = skew_project(ball, ja, vec3(1.5, 0, 0), FallbackPolicy::Euclidean, &fb);
  CHECK((y - vec3(1, 0, 0)).norm() <= 1e-15);
  CHECK(fb == 1);
}

TEST_CASE("skew projection matches a fine line-scan oracle on random ball cases") {
  const auto ball = unit_ball();
  const auto ja = SkewField::constant_tridiag(1.0, 3);
  RngStream rng(17);
  int done = 0, misses = 0;
  while (done < 100 && misses < 400) {
    // points just outside the sphere, where the skewed ray still intersects
    VectorXd x(3);
    for (int j = 0; j < 3; ++j) x[j] = rng.gaussian();
    x *= (1.0 + 0.2 * rng.uniform01()) / x.norm();
    if (ball.contains(x)) continue;
    VectorXd got;
    try {
      got = skew_project(ball, ja, x);
    } catch (const RayMissError&) {
      ++misses;
      continue;
    }
    const VectorXd d = skew_normal(ball, ja, ball.project_euclidean(x));
    // coarse scan, then 1e-7 refinement inside the bracketing cell
    double t_coarse = 0.0;
    while (!ball.contains(x - t_coarse * d)) {
      t_coarse += 1e-3;
      REQUIRE(t_coarse < 50.0);
    }
    double t = std::max(0.0, t_coarse - 1e-3);
    while (!ball.contains(x - t * d)) t += 1e-7;
    CHECK((got - (x - t * d)).norm() <= 1e-6);
    ++done;
  }
  CHECK(done == 100);
}

TEST_CASE("skew projection: degeneracy bound over random infeasible points") {
  // fields with J n = 0 on the boundary must match the Euclidean projection
  const auto ball = unit_ball();
  const auto lp = lp_set();
  const auto js = SkewField::cross3d(5.0);
  const auto jg = SkewField::sublevel_curl(lp.lp(), lp.lambda(), HSpec::One, {8.0});
  RngStream rng(23);
  for (int i = 0; i < 1000; ++i) {
    VectorXd x(3);
    for (int j = 0; j < 3; ++j) x[j] = 6.0 * (rng.uniform01() - 0.5);
    if (!ball.contains(x))
      CHECK((skew_project(ball, js, x) - ball.project_euclidean(x)).norm() <= 10 * kTolProj);
    if (!lp.contains(x)) {
      const VectorXd y = skew_project(lp, jg, x);
      CHECK((y - lp.project_euclidean(x)).norm() <= 1e-6);
      CHECK(lp.contains(y));
    }
  }
}

TEST_CASE("skew projection: fallback policy on a ray miss") {
  // a strong constant field at a grazing geometry can miss the ball
  const auto ball = unit_ball();
  const auto ja = SkewField::constant_tridiag(40.0, 3);
  RngStream rng(29);
  long fallbacks = 0;
  bool saw_miss = false;
  for (int i = 0; i < 3000 && !saw_miss; ++i) {
    VectorXd x(3);
    for (int j = 0; j < 3; ++j) x[j] = 3.0 * (rng.uniform01() - 0.5);
    if (ball.contains(x)) continue;
    try {
      skew_project(ball, ja, x, FallbackPolicy::Error);
    } catch (const RayMissError&) {
      saw_miss = true;
      const VectorXd y = skew_project(ball, ja, x, FallbackPolicy::Euclidean, &fallbacks);
      CHECK((y - ball.project_euclidean(x)).norm() == 0.0);
      CHECK(fallbacks == 1);
    }
  }
  CHECK(saw_miss);
}

TEST_CASE("boundary and interior sampling") {
  const auto lp = lp_set();
  RngStream rng(31);
  for (int i = 0; i < 100; ++i) {
    const VectorXd b = lp.sample_boundary(rng);
    CHECK(std::abs(lp.lp().value(b) - lp.lambda()) <= 1e-10);
    CHECK(lp.contains(lp.sample_interior(rng)));
  }
}
