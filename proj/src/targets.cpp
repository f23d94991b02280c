#include "srnl/targets.hpp"

#include <cmath>
#include <stdexcept>

namespace srnl {

Potential Potential::quadratic_gaussian(Eigen::MatrixXd sigma_inv) {
  if (sigma_inv.rows() != sigma_inv.cols() || sigma_inv.rows() == 0)
    throw std::invalid_argument("Potential: sigma_inv must be square and nonempty");
  if ((sigma_inv - sigma_inv.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("Potential: sigma_inv must be symmetric");
  Eigen::LLT<Eigen::MatrixXd> llt(sigma_inv);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("Potential: sigma_inv must be positive-definite");
  Potential p;
  p.kind_ = Kind::QuadraticGaussian;
  p.dim_ = static_cast<int>(sigma_inv.rows());
  p.n_ = 1;
  p.sigma_inv_ = std::move(sigma_inv);
  return p;
}

Potential Potential::bayes_linear(Eigen::MatrixXd features, Eigen::VectorXd responses) {
  if (features.rows() != responses.size() || features.rows() == 0)
    throw std::invalid_argument("Potential: features/responses size mismatch");
  Potential p;
  p.kind_ = Kind::BayesLinear;
  p.dim_ = static_cast<int>(features.cols());
  p.n_ = features.rows();
  p.data_ = std::move(features);
  p.y_ = std::move(responses);
  return p;
}

Potential Potential::bayes_logistic(Eigen::MatrixXd features, Eigen::VectorXd labels) {
  if (features.rows() != labels.size() || features.rows() == 0)
    throw std::invalid_argument("Potential: features/labels size mismatch");
  for (long i = 0; i < labels.size(); ++i)
    if (labels[i] != 0.0 && labels[i] != 1.0)
      throw std::invalid_argument("Potential: logistic labels must be 0 or 1");
  Potential p;
  p.kind_ = Kind::BayesLogistic;
  p.dim_ = static_cast<int>(features.cols());
  p.n_ = features.rows();
  p.data_ = std::move(features);
  p.y_ = std::move(labels);
  return p;
}

double Potential::value(const Eigen::VectorXd& x) const {
  if (x.size() != dim_) throw std::invalid_argument("Potential::value: dimension mismatch");
  switch (kind_) {
    case Kind::QuadraticGaussian:
      return 0.5 * x.dot(sigma_inv_ * x);
    case Kind::BayesLinear:
      return 0.5 * (data_ * x - y_).squaredNorm();
    case Kind::BayesLogistic: {
      double s = 0.0;
      for (long j = 0; j < n_; ++j) {
        const double z = data_.row(j).dot(x);
        s += softplus(z) - y_[j] * z;
      }
      return s;
    }
  }
  return 0.0;
}

void Potential::grad_full(const Eigen::VectorXd& x, Eigen::VectorXd& out) const {
  if (x.size() != dim_) throw std::invalid_argument("Potential::grad_full: dimension mismatch");
  switch (kind_) {
    case Kind::QuadraticGaussian:
      out.noalias() = sigma_inv_ * x;
      break;
    case Kind::BayesLinear:
      out.noalias() = data_.transpose() * (data_ * x - y_);
      break;
    case Kind::BayesLogistic: {
      out.setZero(dim_);
      for (long j = 0; j < n_; ++j) {
        const double r = sigmoid(data_.row(j).dot(x)) - y_[j];
        out += r * data_.row(j).transpose();
      }
      break;
    }
  }
  if (!out.allFinite())
    throw std::runtime_error("Potential::grad_full: non-finite gradient (data pathology)");
}

Eigen::VectorXd Potential::grad_full(const Eigen::VectorXd& x) const {
  Eigen::VectorXd g(dim_);
  grad_full(x, g);
  return g;
}

void Potential::grad_datum(const Eigen::VectorXd& x, int i, Eigen::VectorXd& out) const {
  switch (kind_) {
    case Kind::QuadraticGaussian:
      out.noalias() = sigma_inv_ * x;
      break;
    case Kind::BayesLinear: {
      const double r = data_.row(i).dot(x) - y_[i];
      out = r * data_.row(i).transpose();
      break;
    }
    case Kind::BayesLogistic: {
      const double r = sigmoid(data_.row(i).dot(x)) - y_[i];
      out = r * data_.row(i).transpose();
      break;
    }
  }
}

void Potential::grad_minibatch(const Eigen::VectorXd& x, int batch_size, RngStream& rng,
                               std::vector<int>& index_scratch, Eigen::VectorXd& out) const {
  if (x.size() != dim_)
    throw std::invalid_argument("Potential::grad_minibatch: dimension mismatch");
  if (batch_size < 1 || batch_size > n_)
    throw std::invalid_argument("Potential::grad_minibatch: batch size must be in [1, n]");
  rng.sample_without_replacement(static_cast<int>(n_), batch_size, index_scratch);
  out.setZero(dim_);
  switch (kind_) {
    case Kind::QuadraticGaussian:
      out.noalias() = sigma_inv_ * x;  // n = 1: the estimator is the full gradient
      return;
    case Kind::BayesLinear:
      for (const int i : index_scratch) {
        const double r = data_.row(i).dot(x) - y_[i];
        out += r * data_.row(i).transpose();
      }
      break;
    case Kind::BayesLogistic:
      for (const int i : index_scratch) {
        const double r = sigmoid(data_.row(i).dot(x)) - y_[i];
        out += r * data_.row(i).transpose();
      }
      break;
  }
  out *= static_cast<double>(n_) / static_cast<double>(batch_size);
}

Eigen::VectorXd Potential::grad_minibatch(const Eigen::VectorXd& x, int batch_size,
                                          RngStream& rng) const {
  std::vector<int> idx;
  Eigen::VectorXd g(dim_);
  grad_minibatch(x, batch_size, rng, idx, g);
  return g;
}

LinearDataset make_synthetic_linear(long n, std::uint64_t seed, double noise_std) {
  if (n < 1) throw std::invalid_argument("make_synthetic_linear: n must be >= 1");
  LinearDataset ds;
  ds.truth << 1.0, -0.7, -0.5;
  ds.features.resize(n, 3);
  ds.responses.resize(n);
  RngStream rng(seed);
  const double sd_a = std::sqrt(0.5);
  for (long j = 0; j < n; ++j) {
    for (int c = 0; c < 3; ++c) ds.features(j, c) = 2.0 + sd_a * rng.gaussian();
    const double delta = noise_std * rng.gaussian();
    ds.responses[j] = ds.features.row(j).dot(ds.truth) + delta;
  }
  return ds;
}

LogisticDataset make_synthetic_logistic(long n, const Eigen::VectorXd& beta_true,
                                        std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("make_synthetic_logistic: n must be >= 1");
  const int d = static_cast<int>(beta_true.size());
  LogisticDataset ds;
  ds.features.resize(n, d);
  ds.labels.resize(n);
  RngStream rng(seed);
  const double sd_x = std::sqrt(2.0);
  for (long j = 0; j < n; ++j) {
    for (int c = 0; c < d; ++c) ds.features(j, c) = sd_x * rng.gaussian();
    const double pj = rng.uniform01();
    ds.labels[j] = (pj <= sigmoid(ds.features.row(j).dot(beta_true))) ? 1.0 : 0.0;
  }
  return ds;
}

}  // namespace srnl
