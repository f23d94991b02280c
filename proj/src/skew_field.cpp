#include "srnl/skew_field.hpp"

#include <cmath>
#include <stdexcept>

namespace srnl {

SkewField SkewField::zero(int dim) {
  if (dim < 1) throw std::invalid_argument("SkewField: dimension must be >= 1");
  SkewField f;
  f.kind_ = Kind::Zero;
  f.dim_ = dim;
  return f;
}

SkewField SkewField::constant_tridiag(double a, int dim) {
  if (a == 0.0) throw std::invalid_argument("SkewField: tridiagonal parameter a must be nonzero");
  if (dim < 2) throw std::invalid_argument("SkewField: tridiagonal field needs dim >= 2");
  SkewField f;
  f.kind_ = Kind::ConstantTridiag;
  f.dim_ = dim;
  f.a_ = a;
  return f;
}

SkewField SkewField::cross3d(double s) {
  if (s == 0.0) throw std::invalid_argument("SkewField: cross field scale s must be nonzero");
  SkewField f;
  f.kind_ = Kind::Cross3D;
  f.dim_ = 3;
  f.scales_ = {s};
  return f;
}

SkewField SkewField::block_cross(std::vector<double> s, int dim) {
  if (dim < 3) throw std::invalid_argument("SkewField: block cross field needs dim >= 3");
  if (static_cast<int>(s.size()) != dim / 3)
    throw std::invalid_argument("SkewField: block cross needs one scale per 3-block (floor(d/3))");
  SkewField f;
  f.kind_ = Kind::BlockCross;
  f.dim_ = dim;
  f.scales_ = std::move(s);
  return f;
}

SkewField SkewField::sublevel_curl(SmoothedLpSpec g, double lambda, HSpec h,
                                   std::vector<double> s) {
  if (g.dim < 3) throw std::invalid_argument("SkewField: sublevel curl field needs dim >= 3");
  if (static_cast<int>(s.size()) != g.dim / 3)
    throw std::invalid_argument("SkewField: sublevel curl needs one scale per 3-block");
  SkewField f;
  f.kind_ = Kind::SublevelCurl;
  f.dim_ = g.dim;
  f.g_ = g;
  f.lambda_ = lambda;
  f.h_ = h;
  f.scales_ = std::move(s);
  return f;
}

// axial vector of block `block` (coordinates 3b, 3b+1, 3b+2), scale applied
void SkewField::axial(const Eigen::VectorXd& x, int block, double* k) const {
  const int o = 3 * block;
  const double s = scales_[block];
  if (kind_ == Kind::Cross3D || kind_ == Kind::BlockCross) {
    k[0] = s * x[o];
    k[1] = s * x[o + 1];
    k[2] = s * x[o + 2];
    return;
  }
  // SublevelCurl: k_j = d_j psi, psi = (lambda - g) h
  if (h_ == HSpec::One) {
    k[0] = -s * g_.dcomp(x[o]);
    k[1] = -s * g_.dcomp(x[o + 1]);
    k[2] = -s * g_.dcomp(x[o + 2]);
    return;
  }
  const double h = 1.0 + x.squaredNorm();
  const double lg = lambda_ - g_.value(x);
  for (int j = 0; j < 3; ++j)
    k[j] = s * (-h * g_.dcomp(x[o + j]) + lg * 2.0 * x[o + j]);
}

void SkewField::apply(const Eigen::VectorXd& x, const Eigen::VectorXd& v,
                      Eigen::VectorXd& out) const {
  if (x.size() != dim_ || v.size() != dim_)
    throw std::invalid_argument("SkewField::apply: dimension mismatch");
  out.resize(dim_);
  switch (kind_) {
    case Kind::Zero:
      out.setZero();
      return;
    case Kind::ConstantTridiag:
      for (int i = 0; i < dim_; ++i) {
        double r = 0.0;
        if (i + 1 < dim_) r += a_ * v[i + 1];
        if (i > 0) r -= a_ * v[i - 1];
        out[i] = r;
      }
      return;
    case Kind::Cross3D:
    case Kind::BlockCross: {
      // scale applied after the cross product so that J(x)x = 0 exactly
      out.setZero();
      const int n_blocks = dim_ / 3;
      for (int b = 0; b < n_blocks; ++b) {
        const double s = scales_[b];
        const int o = 3 * b;
        out[o] = s * (x[o + 1] * v[o + 2] - x[o + 2] * v[o + 1]);
        out[o + 1] = s * (x[o + 2] * v[o] - x[o] * v[o + 2]);
        out[o + 2] = s * (x[o] * v[o + 1] - x[o + 1] * v[o]);
      }
      return;
    }
    case Kind::SublevelCurl: {
      out.setZero();
      const int n_blocks = dim_ / 3;
      double k[3];
      for (int b = 0; b < n_blocks; ++b) {
        axial(x, b, k);
        const int o = 3 * b;
        out[o] = k[1] * v[o + 2] - k[2] * v[o + 1];
        out[o + 1] = k[2] * v[o] - k[0] * v[o + 2];
        out[o + 2] = k[0] * v[o + 1] - k[1] * v[o];
      }
      return;
    }
  }
}

Eigen::VectorXd SkewField::apply(const Eigen::VectorXd& x, const Eigen::VectorXd& v) const {
  Eigen::VectorXd out(dim_);
  apply(x, v, out);
  return out;
}

Eigen::MatrixXd SkewField::evaluate(const Eigen::VectorXd& x) const {
  if (x.size() != dim_) throw std::invalid_argument("SkewField::evaluate: dimension mismatch");
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(dim_, dim_);
  switch (kind_) {
    case Kind::Zero:
      return J;
    case Kind::ConstantTridiag:
      for (int i = 0; i + 1 < dim_; ++i) {
        J(i, i + 1) = a_;
        J(i + 1, i) = -a_;
      }
      return J;
    case Kind::Cross3D:
    case Kind::BlockCross:
    case Kind::SublevelCurl: {
      const int n_blocks = dim_ / 3;
      double k[3];
      for (int b = 0; b < n_blocks; ++b) {
        axial(x, b, k);
        const int o = 3 * b;
        J(o, o + 1) = -k[2];
        J(o, o + 2) = k[1];
        J(o + 1, o) = k[2];
        J(o + 1, o + 2) = -k[0];
        J(o + 2, o) = -k[1];
        J(o + 2, o + 1) = k[0];
      }
      return J;
    }
  }
  return J;
}

AssumptionReport validate_assumptions(const SkewField& field, const ConstraintSet& set,
                                      int n_boundary, int n_interior, double fd_step,
                                      std::uint64_t rng_seed) {
  if (field.dim() != set.dim())
    throw std::invalid_argument("validate_assumptions: field/set dimension mismatch");
  if (n_boundary < 1 || n_interior < 1)
    throw std::invalid_argument("validate_assumptions: sample counts must be >= 1");
  if (!(fd_step > 0.0)) throw std::invalid_argument("validate_assumptions: fd_step must be > 0");

  AssumptionReport rep;
  rep.boundary_samples = n_boundary;
  rep.interior_samples = n_interior;
  rep.fd_step = fd_step;

  RngStream rng(rng_seed);
  const int d = field.dim();
  Eigen::VectorXd n(d), jn(d), xp(d), xm(d);

  for (int i = 0; i < n_boundary; ++i) {
    const Eigen::VectorXd x = set.sample_boundary(rng);
    const Eigen::MatrixXd J = field.evaluate(x);
    rep.max_skew_defect = std::max(rep.max_skew_defect,
                                   (J + J.transpose()).cwiseAbs().maxCoeff());
    set.outward_normal(x, n);
    field.apply(x, n, jn);
    rep.max_boundary_Jn = std::max(rep.max_boundary_Jn, jn.norm());
  }

  Eigen::VectorXd div(d);
  for (int i = 0; i < n_interior; ++i) {
    const Eigen::VectorXd x = set.sample_interior(rng);
    const Eigen::MatrixXd J = field.evaluate(x);
    rep.max_skew_defect = std::max(rep.max_skew_defect,
                                   (J + J.transpose()).cwiseAbs().maxCoeff());
    div.setZero();
    for (int j = 0; j < d; ++j) {
      xp = x;
      xm = x;
      xp[j] += fd_step;
      xm[j] -= fd_step;
      const Eigen::MatrixXd Jp = field.evaluate(xp);
      const Eigen::MatrixXd Jm = field.evaluate(xm);
      div += (Jp.col(j) - Jm.col(j)) / (2.0 * fd_step);
    }
    rep.max_interior_divJ = std::max(rep.max_interior_divJ, div.norm());
  }
  return rep;
}

double divergence_flux_fd(const SkewField& field,
                          const std::function<double(const Eigen::VectorXd&)>& f,
                          const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& grad_f,
                          const Eigen::VectorXd& x, double fd_step) {
  const int d = field.dim();
  auto flux_j = [&](const Eigen::VectorXd& y, int j) {
    const Eigen::VectorXd v = field.apply(y, grad_f(y)) * std::exp(-f(y));
    return v[j];
  };
  double div = 0.0;
  Eigen::VectorXd xp(d), xm(d);
  for (int j = 0; j < d; ++j) {
    xp = x;
    xm = x;
    xp[j] += fd_step;
    xm[j] -= fd_step;
    div += (flux_j(xp, j) - flux_j(xm, j)) / (2.0 * fd_step);
  }
  return div;
}

}  // namespace srnl
