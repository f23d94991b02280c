#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "srnl/diagnostics.hpp"
#include "srnl/targets.hpp"

using namespace srnl;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

VectorXd vec3(double a, double b, double c) {
  VectorXd v(3);
  v << a, b, c;
  return v;
}

Potential toy_gaussian() {
  Eigen::Matrix3d si = Eigen::Vector3d(4.0, 1.0, 0.25).asDiagonal();  // Sigma = diag(.25,1,4)
  return Potential::quadratic_gaussian(si);
}

// all size-m subsets of {0..n-1}
void subsets(int n, int m, std::vector<std::vector<int>>& out) {
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int start) {
    if (static_cast<int>(cur.size()) == m) {
      out.push_back(cur);
      return;
    }
    for (int i = start; i < n; ++i) {
      cur.push_back(i);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
}

}  // namespace

TEST_CASE("quadratic gaussian gradient: diagonal arithmetic and FD check") {
  const auto pot = toy_gaussian();
  const VectorXd g = pot.grad_full(vec3(0.2, 0.3, 0.5));
  CHECK(g[0] == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(g[1] == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(g[2] == doctest::Approx(0.125).epsilon(1e-15));

  RngStream rng(3);
  const double h = 1e-6;
  for (int i = 0; i < 100; ++i) {
    VectorXd x(3);
    for (int j = 0; j < 3; ++j) x[j] = 2.0 * (rng.uniform01() - 0.5);
    const VectorXd grad = pot.grad_full(x);
    for (int j = 0; j < 3; ++j) {
      VectorXd xp = x, xm = x;
      xp[j] += h;
      xm[j] -= h;
      CHECK(std::abs((pot.value(xp) - pot.value(xm)) / (2 * h) - grad[j]) <= 1e-6);
    }
  }
  CHECK_THROWS(Potential::quadratic_gaussian(-Eigen::Matrix3d::Identity()));
}

TEST_CASE("linear gradient: stationary at interpolation") {
  MatrixXd A(2, 3);
  A << 1, 0, 0, 0, 1, 0;
  VectorXd y(2);
  const VectorXd x = vec3(0.4, -0.2, 0.9);
  y << 0.4, -0.2;  // exact interpolation, zero residual
  const auto pot = Potential::bayes_linear(A, y);
  CHECK(pot.grad_full(x).norm() == 0.0);
}

TEST_CASE("logistic gradient: single datum, FD check, norm bound") {
  MatrixXd X(1, 3);
  X << 1, 0, 0;
  VectorXd y(1);
  y << 1;
  const auto pot = Potential::bayes_logistic(X, y);
  const VectorXd g0 = pot.grad_full(VectorXd::Zero(3));
  CHECK(g0[0] == doctest::Approx(-0.5).epsilon(1e-15));  // -X * sigmoid(0)
  CHECK(g0[1] == 0.0);

  const auto ds = make_synthetic_logistic(40, vec3(1.0, -0.5, 0.25), 99);
  const auto pot2 = Potential::bayes_logistic(ds.features, ds.labels);
  double row_norm_sum = 0.0;
  for (int j = 0; j < 40; ++j) row_norm_sum += ds.features.row(j).norm();
  RngStream rng(5);
  const double h = 1e-6;
  for (int i = 0; i < 20; ++i) {
    VectorXd b(3);
    for (int j = 0; j < 3; ++j) b[j] = 2.0 * (rng.uniform01() - 0.5);
    const VectorXd grad = pot2.grad_full(b);
    CHECK(grad.norm() <= row_norm_sum);  // sigma in (0,1)
    for (int j = 0; j < 3; ++j) {
      VectorXd bp = b, bm = b;
      bp[j] += h;
      bm[j] -= h;
      CHECK(std::abs((pot2.value(bp) - pot2.value(bm)) / (2 * h) - grad[j]) <= 1e-5);
    }
  }
  VectorXd bad(1);
  bad << 0.5;
  CHECK_THROWS(Potential::bayes_logistic(X, bad));
}

TEST_CASE("minibatch estimator: full batch equals full gradient") {
  const auto ds = make_synthetic_linear(12, 7);
  const auto pot = Potential::bayes_linear(ds.features, ds.responses);
  RngStream rng(1);
  const VectorXd x = vec3(0.1, 0.2, 0.3);
  CHECK((pot.grad_minibatch(x, 12, rng) - pot.grad_full(x)).norm() <= 1e-12);
  CHECK_THROWS(pot.grad_minibatch(x, 13, rng));
  CHECK_THROWS(pot.grad_minibatch(x, 0, rng));
}

TEST_CASE("minibatch estimator: exhaustive subset average equals full gradient") {
  // n = 4, m = 2: (n/m) * average over all 6 subsets must equal grad_full
  const auto ds = make_synthetic_linear(4, 21);
  const auto pot = Potential::bayes_linear(ds.features, ds.responses);
  const VectorXd x = vec3(0.3, -0.1, 0.2);

  std::vector<std::vector<int>> all;
  subsets(4, 2, all);
  REQUIRE(all.size() == 6);
  VectorXd acc = VectorXd::Zero(3), gi(3);
  for (const auto& sub : all)
    for (const int i : sub) {
      pot.grad_datum(x, i, gi);
      acc += (4.0 / 2.0) * gi;
    }
  acc /= static_cast<double>(all.size());
  CHECK((acc - pot.grad_full(x)).cwiseAbs().maxCoeff() <= 1e-12);

  // same identity for the logistic potential
  const auto dl = make_synthetic_logistic(4, vec3(1, 1, -1), 22);
  const auto potl = Potential::bayes_logistic(dl.features, dl.labels);
  acc.setZero();
  for (const auto& sub : all)
    for (const int i : sub) {
      potl.grad_datum(x, i, gi);
      acc += 2.0 * gi;
    }
  acc /= static_cast<double>(all.size());
  CHECK((acc - potl.grad_full(x)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("minibatch estimator: Monte-Carlo unbiasedness within 3 standard errors") {
  const auto ds = make_synthetic_linear(50, 31);
  const auto pot = Potential::bayes_linear(ds.features, ds.responses);
  const VectorXd x = vec3(0.5, 0.1, -0.4);
  const VectorXd full = pot.grad_full(x);

  RngStream rng(17);
  const int draws = 100000;
  VectorXd mean = VectorXd::Zero(3), m2 = VectorXd::Zero(3), g(3);
  std::vector<int> idx;
  for (int k = 0; k < draws; ++k) {
    pot.grad_minibatch(x, 5, rng, idx, g);
    mean += g;
    m2 += g.cwiseProduct(g);
  }
  mean /= draws;
  m2 /= draws;
  for (int j = 0; j < 3; ++j) {
    const double se = std::sqrt((m2[j] - mean[j] * mean[j]) / draws);
    CHECK(std::abs(mean[j] - full[j]) <= 3.0 * se);
  }
}

TEST_CASE("synthetic linear data: noise floor, zero-noise switch, determinism") {
  const auto ds = make_synthetic_linear(100000, 5);
  CHECK(mse(ds.truth, ds.features, ds.responses) == doctest::Approx(0.25).epsilon(0.04));

  const auto noiseless = make_synthetic_linear(500, 6, 0.0);
  CHECK(mse(noiseless.truth, noiseless.features, noiseless.responses) == 0.0);

  const auto a = make_synthetic_linear(300, 123);
  const auto b = make_synthetic_linear(300, 123);
  CHECK((a.features - b.features).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.responses - b.responses).cwiseAbs().maxCoeff() == 0.0);
  const auto c = make_synthetic_linear(300, 124);
  CHECK((a.features - c.features).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("synthetic logistic data: coin flips at beta 0, separability at large beta") {
  const auto fair = make_synthetic_logistic(2000, VectorXd::Zero(3), 41);
  const double frac = fair.labels.mean();
  CHECK(frac >= 0.45);
  CHECK(frac <= 0.55);

  // beta = 50 e1: labels are nearly sign(x1); the matched classifier is near-perfect
  VectorXd beta = VectorXd::Zero(3);
  beta[0] = 50.0;
  const auto sep = make_synthetic_logistic(2000, beta, 43);
  CHECK(accuracy(beta, sep.features, sep.labels) >= 0.99);

  const auto r1 = make_synthetic_logistic(500, vec3(1, 2, 3), 77);
  const auto r2 = make_synthetic_logistic(500, vec3(1, 2, 3), 77);
  CHECK((r1.features - r2.features).cwiseAbs().maxCoeff() == 0.0);
  CHECK((r1.labels - r2.labels).cwiseAbs().maxCoeff() == 0.0);
}
