#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

#include "srnl/geometry.hpp"

namespace srnl {

enum class HSpec { One, OnePlusNormSq };

// Skew-symmetric matrix field J(x). Five constructions:
//   Zero            -- J = 0 (reversible dynamics)
//   ConstantTridiag -- +a on the superdiagonal, -a on the subdiagonal
//   Cross3D         -- J(x)w = k(x) x w with axial vector k(x) = s*x, d = 3
//   BlockCross      -- per-3-block cross fields k_l(x) = s_l * x_block;
//                      trailing 1-2 coordinates get zero rows/columns
//   SublevelCurl    -- per-3-block axial vectors k_j = d_j psi, psi = (lambda-g)h,
//                      each block scaled by s_l; g is a smoothed lp potential
// All variants are exactly skew-symmetric by construction. Cross/BlockCross
// satisfy J(x)x = 0 identically; SublevelCurl satisfies J n = 0 on {g=lambda}
// and div J = 0 (mixed partials cancel).
class SkewField {
 public:
  enum class Kind { Zero, ConstantTridiag, Cross3D, BlockCross, SublevelCurl };

  static SkewField zero(int dim);
  static SkewField constant_tridiag(double a, int dim);
  static SkewField cross3d(double s);
  static SkewField block_cross(std::vector<double> s, int dim);
  static SkewField sublevel_curl(SmoothedLpSpec g, double lambda, HSpec h,
                                 std::vector<double> s);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  bool is_zero() const { return kind_ == Kind::Zero; }

  Eigen::MatrixXd evaluate(const Eigen::VectorXd& x) const;

  // J(x)*v without materializing the matrix (per-block cross products)
  void apply(const Eigen::VectorXd& x, const Eigen::VectorXd& v,
             Eigen::VectorXd& out) const;
  Eigen::VectorXd apply(const Eigen::VectorXd& x, const Eigen::VectorXd& v) const;

 private:
  SkewField() = default;
  void axial(const Eigen::VectorXd& x, int block, double* k) const;

  Kind kind_ = Kind::Zero;
  int dim_ = 0;
  double a_ = 0.0;
  std::vector<double> scales_;
  SmoothedLpSpec g_;
  double lambda_ = 0.0;
  HSpec h_ = HSpec::One;
};

// Numerical checks of the three structural assumptions: exact skew-symmetry,
// J n = 0 on the boundary, and row-wise div J = 0 in the interior (central
// differences of each column, (div J)_i = sum_j d_j J_ij).
struct AssumptionReport {
  double max_skew_defect = 0.0;
  double max_boundary_Jn = 0.0;
  double max_interior_divJ = 0.0;
  int boundary_samples = 0;
  int interior_samples = 0;
  double fd_step = 0.0;
};

AssumptionReport validate_assumptions(const SkewField& field, const ConstraintSet& set,
                                      int n_boundary, int n_interior, double fd_step,
                                      std::uint64_t rng_seed);

// Central-difference divergence of the flux J(x) grad f(x) e^{-f(x)}, which
// vanishes identically for skew-symmetric divergence-free J.
double divergence_flux_fd(const SkewField& field,
                          const std::function<double(const Eigen::VectorXd&)>& f,
                          const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& grad_f,
                          const Eigen::VectorXd& x, double fd_step);

}  // namespace srnl
