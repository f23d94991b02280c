#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

#include "srnl/rng.hpp"

namespace srnl {

class SkewField;

// Tolerances shared by the projection solvers and boundary tests. Far below
// the sampler step noise sqrt(2*eta) ~ 3e-2 at the experiment step sizes.
inline constexpr double kTolBoundary = 1e-8;
inline constexpr double kTolProj = 1e-10;
inline constexpr int kMaxProjIters = 200;

// Thrown when a skew-projection ray never re-enters the feasible set.
class RayMissError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class FallbackPolicy { Error, Euclidean };

// g(x) = sum_i (x_i^2 + eps^2)^{p/2}; smooth convex, minimum d*eps^p at 0.
// For p < 2 a strictly positive smoothing parameter is required.
struct SmoothedLpSpec {
  double p = 2.0;
  double epsilon = 0.0;
  int dim = 0;

  SmoothedLpSpec() = default;
  SmoothedLpSpec(double p_, double epsilon_, int dim_);

  double value(const Eigen::VectorXd& x) const;
  void gradient(const Eigen::VectorXd& x, Eigen::VectorXd& out) const;
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const {
    Eigen::VectorXd g(dim);
    gradient(x, g);
    return g;
  }
  // d/du (u^2+eps^2)^{p/2} and its derivative, evaluated coordinate-wise
  double dcomp(double u) const;
  double d2comp(double u) const;
  double min_value() const { return dim * std::pow(epsilon, p); }
};

// Compact feasible region: centered/offset Euclidean ball, or the sublevel
// set {g <= lambda} of a smoothed lp potential. Sublevel projections assume
// convex g; non-convex g is unsupported.
class ConstraintSet {
 public:
  enum class Kind { Ball, Sublevel };

  static ConstraintSet ball(Eigen::VectorXd center, double radius);
  static ConstraintSet sublevel(SmoothedLpSpec g, double lambda,
                                Eigen::VectorXd interior_anchor);
  // anchor defaults to the origin (the lp minimizer)
  static ConstraintSet smoothed_lp(SmoothedLpSpec g, double lambda);

  Kind kind() const { return kind_; }
  bool is_ball() const { return kind_ == Kind::Ball; }
  int dim() const { return dim_; }
  const Eigen::VectorXd& center() const { return center_; }
  double radius() const { return radius_; }
  const SmoothedLpSpec& lp() const { return g_; }
  double lambda() const { return lambda_; }
  const Eigen::VectorXd& anchor() const { return center_; }

  bool contains(const Eigen::VectorXd& x) const;
  // true on the boundary within the relative tolerance used by skew normals
  bool on_boundary(const Eigen::VectorXd& x, double tol = kTolBoundary) const;

  // Outward unit normal at a boundary point: (x-c)/|x-c| for the ball,
  // grad g/|grad g| for the sublevel set.
  Eigen::VectorXd outward_normal(const Eigen::VectorXd& x) const;
  void outward_normal(const Eigen::VectorXd& x, Eigen::VectorXd& out) const;

  Eigen::VectorXd project_euclidean(const Eigen::VectorXd& x) const;
  void project_euclidean(const Eigen::VectorXd& x, Eigen::VectorXd& out) const;

  // Radius of a ball around the center/anchor guaranteed to contain K.
  double bounding_radius() const;

  // Direction-uniform boundary/interior samples for the assumption validators.
  Eigen::VectorXd sample_boundary(RngStream& rng) const;
  Eigen::VectorXd sample_interior(RngStream& rng) const;

 private:
  ConstraintSet() = default;
  void check_dim(const Eigen::VectorXd& x, const char* where) const;
  void project_sublevel(const Eigen::VectorXd& x, Eigen::VectorXd& out) const;

  Kind kind_ = Kind::Ball;
  int dim_ = 0;
  Eigen::VectorXd center_;  // ball center, or sublevel interior anchor
  double radius_ = 0.0;
  SmoothedLpSpec g_;
  double lambda_ = 0.0;
};

// Skew unit normal (I+J)n / sqrt(|n|^2 + |Jn|^2) at a boundary point.
Eigen::VectorXd skew_normal(const ConstraintSet& set, const SkewField& field,
                            const Eigen::VectorXd& x);

// Skew projection: feasible points are fixed; infeasible points are moved
// along -n^J evaluated at their Euclidean projection until K is re-entered.
// RayMiss is an error by default; the Euclidean policy falls back to the
// metric projection and bumps *fallback_count.
Eigen::VectorXd skew_project(const ConstraintSet& set, const SkewField& field,
                             const Eigen::VectorXd& x,
                             FallbackPolicy policy = FallbackPolicy::Error,
                             long* fallback_count = nullptr);

}  // namespace srnl
