#include "srnl/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "srnl/skew_field.hpp"

namespace srnl {

namespace {

double rel_tol(double tol, double scale) { return tol * std::max(1.0, std::abs(scale)); }

}  // namespace

SmoothedLpSpec::SmoothedLpSpec(double p_, double epsilon_, int dim_)
    : p(p_), epsilon(epsilon_), dim(dim_) {
  if (p < 1.0) throw std::invalid_argument("SmoothedLpSpec: p must be >= 1");
  if (epsilon < 0.0) throw std::invalid_argument("SmoothedLpSpec: epsilon must be >= 0");
  if (p < 2.0 && epsilon <= 0.0)
    throw std::invalid_argument(
        "SmoothedLpSpec: p < 2 requires a strictly positive smoothing epsilon");
  if (dim < 1) throw std::invalid_argument("SmoothedLpSpec: dimension must be >= 1");
}

double SmoothedLpSpec::value(const Eigen::VectorXd& x) const {
  const double e2 = epsilon * epsilon;
  double s = 0.0;
  if (p == 2.0) {
    for (int i = 0; i < dim; ++i) s += x[i] * x[i] + e2;
  } else if (p == 4.0) {
    for (int i = 0; i < dim; ++i) {
      const double u = x[i] * x[i] + e2;
      s += u * u;
    }
  } else {
    for (int i = 0; i < dim; ++i) s += std::pow(x[i] * x[i] + e2, 0.5 * p);
  }
  return s;
}

double SmoothedLpSpec::dcomp(double u) const {
  const double e2 = epsilon * epsilon;
  if (p == 2.0) return 2.0 * u;
  if (p == 4.0) return 4.0 * u * (u * u + e2);
  return p * u * std::pow(u * u + e2, 0.5 * p - 1.0);
}

double SmoothedLpSpec::d2comp(double u) const {
  const double e2 = epsilon * epsilon;
  if (p == 2.0) return 2.0;
  if (p == 4.0) return 4.0 * (3.0 * u * u + e2);
  return p * std::pow(u * u + e2, 0.5 * p - 2.0) * ((p - 1.0) * u * u + e2);
}

void SmoothedLpSpec::gradient(const Eigen::VectorXd& x, Eigen::VectorXd& out) const {
  out.resize(dim);
  for (int i = 0; i < dim; ++i) out[i] = dcomp(x[i]);
}

ConstraintSet ConstraintSet::ball(Eigen::VectorXd center, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("ConstraintSet: ball radius must be > 0");
  if (center.size() == 0) throw std::invalid_argument("ConstraintSet: empty center");
  ConstraintSet s;
  s.kind_ = Kind::Ball;
  s.dim_ = static_cast<int>(center.size());
  s.center_ = std::move(center);
  s.radius_ = radius;
  return s;
}

ConstraintSet ConstraintSet::sublevel(SmoothedLpSpec g, double lambda,
                                      Eigen::VectorXd interior_anchor) {
  if (interior_anchor.size() != g.dim)
    throw std::invalid_argument("ConstraintSet: anchor dimension mismatch");
  if (!(g.value(interior_anchor) < lambda))
    throw std::invalid_argument("ConstraintSet: g(interior_anchor) must be < lambda");
  ConstraintSet s;
  s.kind_ = Kind::Sublevel;
  s.dim_ = g.dim;
  s.center_ = std::move(interior_anchor);
  s.g_ = g;
  s.lambda_ = lambda;
  return s;
}

ConstraintSet ConstraintSet::smoothed_lp(SmoothedLpSpec g, double lambda) {
  return sublevel(g, lambda, Eigen::VectorXd::Zero(g.dim));
}

void ConstraintSet::check_dim(const Eigen::VectorXd& x, const char* where) const {
  if (static_cast<int>(x.size()) != dim_)
    throw std::invalid_argument(std::string(where) + ": dimension mismatch (got " +
                                std::to_string(x.size()) + ", set is " + std::to_string(dim_) +
                                "-dimensional)");
}

bool ConstraintSet::contains(const Eigen::VectorXd& x) const {
  check_dim(x, "contains");
  if (kind_ == Kind::Ball) return (x - center_).squaredNorm() <= radius_ * radius_;
  return g_.value(x) <= lambda_;
}

bool ConstraintSet::on_boundary(const Eigen::VectorXd& x, double tol) const {
  check_dim(x, "on_boundary");
  if (kind_ == Kind::Ball)
    return std::abs((x - center_).norm() - radius_) <= rel_tol(tol, radius_);
  return std::abs(g_.value(x) - lambda_) <= rel_tol(tol, lambda_);
}

void ConstraintSet::outward_normal(const Eigen::VectorXd& x, Eigen::VectorXd& out) const {
  if (!on_boundary(x))
    throw std::invalid_argument("outward_normal: point is not on the boundary");
  if (kind_ == Kind::Ball) {
    out = (x - center_) / (x - center_).norm();
    return;
  }
  g_.gradient(x, out);
  const double n = out.norm();
  if (n < 1e-14)
    throw std::runtime_error("outward_normal: vanishing gradient on the boundary");
  out /= n;
}

Eigen::VectorXd ConstraintSet::outward_normal(const Eigen::VectorXd& x) const {
  Eigen::VectorXd n(dim_);
  outward_normal(x, n);
  return n;
}

void ConstraintSet::project_euclidean(const Eigen::VectorXd& x, Eigen::VectorXd& out) const {
  check_dim(x, "project_euclidean");
  if (kind_ == Kind::Ball) {
    Eigen::VectorXd w = x - center_;
    const double n2 = w.squaredNorm();
    if (n2 <= radius_ * radius_) {
      out = x;
      return;
    }
    double f = radius_ / std::sqrt(n2);
    out = center_ + f * w;
    // land on the feasible side of the floating-point sphere
    int guard = 0;
    while ((out - center_).squaredNorm() > radius_ * radius_ && guard++ < 4) {
      f *= 1.0 - 4.0 * std::numeric_limits<double>::epsilon();
      out = center_ + f * w;
    }
    return;
  }
  project_sublevel(x, out);
}

Eigen::VectorXd ConstraintSet::project_euclidean(const Eigen::VectorXd& x) const {
  Eigen::VectorXd p(dim_);
  project_euclidean(x, p);
  return p;
}

namespace {

// Root of u + t * dcomp(u) = |x_i| on [0, |x_i|]; dcomp is odd and increasing
// for convex g, so the KKT system decouples per coordinate. Bisection-
// safeguarded Newton; the plain damped fixed point is not contractive once
// t * g'' exceeds O(1), which routine projections onto lp sets reach.
double solve_kkt_component(const SmoothedLpSpec& g, double xi, double t) {
  if (xi == 0.0) return 0.0;
  const double ax = std::abs(xi);
  const double tol = 1e-13 * std::max(1.0, ax);
  double lo = 0.0, hi = ax, u = ax;
  for (int it = 0; it < kMaxProjIters; ++it) {
    const double f = u + t * g.dcomp(u) - ax;
    if (std::abs(f) <= tol) break;
    if (f > 0.0)
      hi = u;
    else
      lo = u;
    const double un = u - f / (1.0 + t * g.d2comp(u));
    u = (un > lo && un < hi) ? un : 0.5 * (lo + hi);
  }
  return xi > 0.0 ? u : -u;
}

}  // namespace

// KKT system p = x - t*grad g(p), g(p) = lambda, solved by outer bisection on
// the multiplier t with an inner per-coordinate Newton solve of the separable
// fixed-point equation. Returns a point on the feasible side with
// |g(p)-lambda| within tolerance. Assumes convex g.
void ConstraintSet::project_sublevel(const Eigen::VectorXd& x, Eigen::VectorXd& out) const {
  const double gx = g_.value(x);
  if (gx <= lambda_) {
    out = x;
    return;
  }
  const double tol_g = rel_tol(kTolProj, lambda_);

  Eigen::VectorXd p(dim_);
  auto solve_p = [&](double t) -> double {  // fills p(t), returns g(p(t))
    for (int i = 0; i < dim_; ++i) p[i] = solve_kkt_component(g_, x[i], t);
    return g_.value(p);
  };

  // Initial bracket for t: ||x - anchor|| / min ||grad g|| over the outside
  // part of the segment, with a doubling guard if that underestimates.
  Eigen::VectorXd grad(dim_);
  double min_gn = std::numeric_limits<double>::infinity();
  for (int i = 1; i <= 16; ++i) {
    const Eigen::VectorXd s = center_ + (static_cast<double>(i) / 16.0) * (x - center_);
    if (g_.value(s) >= lambda_) {
      g_.gradient(s, grad);
      min_gn = std::min(min_gn, grad.norm());
    }
  }
  if (!std::isfinite(min_gn) || min_gn < 1e-8) min_gn = 1e-8;
  double t_hi = (x - center_).norm() / min_gn;
  double t_lo = 0.0;

  double g_hi = solve_p(t_hi);
  int grow = 0;
  while (g_hi > lambda_ && grow++ < 60) {
    t_lo = t_hi;
    t_hi *= 2.0;
    g_hi = solve_p(t_hi);
  }
  if (g_hi > lambda_)
    throw std::runtime_error("project_euclidean: multiplier bracket not found");

  Eigen::VectorXd best = p;  // feasible candidate from the t_hi side
  double g_best = g_hi;
  for (int it = 0; it < kMaxProjIters && g_best < lambda_ - tol_g; ++it) {
    const double tm = 0.5 * (t_lo + t_hi);
    const double gm = solve_p(tm);
    if (gm <= lambda_) {
      t_hi = tm;
      best = p;
      g_best = gm;
    } else {
      t_lo = tm;
    }
  }
  out = best;
}

double ConstraintSet::bounding_radius() const {
  if (kind_ == Kind::Ball) return radius_;
  // each term of g is >= |x_i|^p, so K lies in the inf-ball of radius lambda^{1/p}
  return std::sqrt(static_cast<double>(dim_)) * std::pow(lambda_, 1.0 / g_.p);
}

Eigen::VectorXd ConstraintSet::sample_boundary(RngStream& rng) const {
  Eigen::VectorXd u(dim_);
  double n2 = 0.0;
  do {
    for (int i = 0; i < dim_; ++i) u[i] = rng.gaussian();
    n2 = u.squaredNorm();
  } while (n2 < 1e-24);
  u /= std::sqrt(n2);
  if (kind_ == Kind::Ball) return center_ + radius_ * u;
  // bisect g(anchor + t*u) = lambda along the ray; unique crossing for convex g
  double t_lo = 0.0, t_hi = 1.0;
  int grow = 0;
  while (g_.value(center_ + t_hi * u) < lambda_ && grow++ < 200) t_hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double tm = 0.5 * (t_lo + t_hi);
    if (g_.value(center_ + tm * u) < lambda_)
      t_lo = tm;
    else
      t_hi = tm;
    if (t_hi - t_lo <= 1e-15 * std::max(1.0, t_hi)) break;
  }
  return center_ + 0.5 * (t_lo + t_hi) * u;
}

Eigen::VectorXd ConstraintSet::sample_interior(RngStream& rng) const {
  const Eigen::VectorXd b = sample_boundary(rng);
  const double v =
      0.95 * std::pow(rng.uniform01(), 1.0 / static_cast<double>(dim_));
  return center_ + v * (b - center_);
}

Eigen::VectorXd skew_normal(const ConstraintSet& set, const SkewField& field,
                            const Eigen::VectorXd& x) {
  const Eigen::VectorXd n = set.outward_normal(x);
  const Eigen::VectorXd jn = field.apply(x, n);
  const double denom = std::sqrt(n.squaredNorm() + jn.squaredNorm());
  return (n + jn) / denom;
}

namespace {

// smallest t >= 0 with ||x - t d - c|| = r; the point is outside the sphere
bool ray_sphere(const Eigen::VectorXd& x, const Eigen::VectorXd& d,
                const Eigen::VectorXd& c, double r, double& t_out) {
  const Eigen::VectorXd w = x - c;
  const double a = d.squaredNorm();
  const double b = w.dot(d);
  const double c0 = w.squaredNorm() - r * r;
  const double disc = b * b - a * c0;
  if (disc < 0.0 || b <= 0.0) return false;
  t_out = (b - std::sqrt(disc)) / a;
  return t_out >= 0.0;
}

// smallest t >= 0 with g(x - t d) <= lambda; h(t) = g(x - t d) - lambda is
// convex in t for convex g, so a first increase while still positive means
// the ray misses K (checked by a ternary-search refinement of the dip).
bool ray_sublevel(const ConstraintSet& set, const Eigen::VectorXd& x,
                  const Eigen::VectorXd& d, Eigen::VectorXd& out) {
  const SmoothedLpSpec& g = set.lp();
  const double lam = set.lambda();
  const double tol_g = kTolProj * std::max(1.0, std::abs(lam));
  auto h = [&](double t) { return g.value(x - t * d) - lam; };

  const double h0 = h(0.0);
  const Eigen::VectorXd gr = g.gradient(x);
  const double slope = -gr.dot(d);
  if (slope >= 0.0) return false;  // convex h nondecreasing from t = 0

  const double t_cap =
      4.0 * ((x - set.anchor()).norm() + 2.0 * set.bounding_radius());
  double t_prev2 = 0.0, t_prev = 0.0, h_prev = h0;
  double t = std::min(h0 / (-slope), t_cap);
  double t_hit = -1.0, t_lo = 0.0;
  for (int it = 0; it < 80; ++it) {
    const double ht = h(t);
    if (ht <= 0.0) {
      t_hit = t;
      t_lo = t_prev;
      break;
    }
    if (ht > h_prev) {
      // positive and already increasing: search the dip on [t_prev2, t]
      double a = t_prev2, b = t;
      for (int k = 0; k < 200; ++k) {
        const double m1 = a + (b - a) / 3.0, m2 = b - (b - a) / 3.0;
        if (h(m1) < h(m2))
          b = m2;
        else
          a = m1;
        const double hm = h(0.5 * (a + b));
        if (hm <= 0.0) {
          t_hit = 0.5 * (a + b);
          t_lo = t_prev2;
          break;
        }
        if (b - a <= 1e-14 * std::max(1.0, b)) break;
      }
      if (t_hit < 0.0) return false;
      break;
    }
    if (t >= t_cap) return false;
    t_prev2 = t_prev;
    t_prev = t;
    h_prev = ht;
    t = std::min(2.0 * t, t_cap);
  }
  if (t_hit < 0.0) return false;

  // bisect to the smallest root, keeping the evaluated feasible endpoint
  double h_hit = h(t_hit);
  for (int it = 0; it < kMaxProjIters && h_hit < -tol_g; ++it) {
    const double tm = 0.5 * (t_lo + t_hit);
    const double hm = h(tm);
    if (hm <= 0.0) {
      t_hit = tm;
      h_hit = hm;
    } else {
      t_lo = tm;
    }
  }
  out = x - t_hit * d;
  return true;
}

}  // namespace

Eigen::VectorXd skew_project(const ConstraintSet& set, const SkewField& field,
                             const Eigen::VectorXd& x, FallbackPolicy policy,
                             long* fallback_count) {
  if (set.contains(x)) return x;
  Eigen::VectorXd p = set.project_euclidean(x);
  if (field.is_zero()) return p;

  const Eigen::VectorXd d = skew_normal(set, field, p);
  if (set.is_ball()) {
    double t = 0.0;
    if (ray_sphere(x, d, set.center(), set.radius(), t)) {
      Eigen::VectorXd y = x - t * d;
      // the root can land an ulp outside; fold it back onto the sphere
      if (!set.contains(y)) y = set.project_euclidean(y);
      return y;
    }
  } else {
    Eigen::VectorXd y;
    if (ray_sublevel(set, x, d, y)) return y;
  }

  if (policy == FallbackPolicy::Euclidean) {
    if (fallback_count != nullptr) ++(*fallback_count);
    return p;
  }
  throw RayMissError("skew_project: ray along -n^J does not intersect the feasible set");
}

}  // namespace srnl
