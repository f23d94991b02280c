#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "srnl/rng.hpp"

namespace srnl {

inline double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

inline double softplus(double z) {  // log(1 + e^z), overflow-safe
  if (z > 35.0) return z;
  if (z < -35.0) return std::exp(z);
  return std::log1p(std::exp(z));
}

// Target potential f with full-gradient and conditionally-unbiased minibatch
// gradient oracles. Sum form f = sum_j f_j; the minibatch estimator is
// (n/m) sum_{i in Omega} grad f_i over a fresh uniform size-m subset, so its
// conditional expectation equals the full gradient.
class Potential {
 public:
  enum class Kind { QuadraticGaussian, BayesLinear, BayesLogistic };

  // f(x) = x' Sinv x / 2, Sinv symmetric positive-definite
  static Potential quadratic_gaussian(Eigen::MatrixXd sigma_inv);
  // f(x) = 1/2 sum_j (y_j - x'a_j)^2
  static Potential bayes_linear(Eigen::MatrixXd features, Eigen::VectorXd responses);
  // Bernoulli negative log-likelihood, labels in {0,1}
  static Potential bayes_logistic(Eigen::MatrixXd features, Eigen::VectorXd labels);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  long num_data() const { return n_; }
  const Eigen::MatrixXd& features() const { return data_; }
  const Eigen::VectorXd& responses() const { return y_; }
  const Eigen::MatrixXd& sigma_inv() const { return sigma_inv_; }

  double value(const Eigen::VectorXd& x) const;
  void grad_full(const Eigen::VectorXd& x, Eigen::VectorXd& out) const;
  Eigen::VectorXd grad_full(const Eigen::VectorXd& x) const;

  void grad_minibatch(const Eigen::VectorXd& x, int batch_size, RngStream& rng,
                      std::vector<int>& index_scratch, Eigen::VectorXd& out) const;
  Eigen::VectorXd grad_minibatch(const Eigen::VectorXd& x, int batch_size,
                                 RngStream& rng) const;

  // gradient of the i-th summand f_i
  void grad_datum(const Eigen::VectorXd& x, int i, Eigen::VectorXd& out) const;

 private:
  Potential() = default;
  Kind kind_ = Kind::QuadraticGaussian;
  int dim_ = 0;
  long n_ = 1;
  Eigen::MatrixXd sigma_inv_;
  Eigen::MatrixXd data_;  // n x d feature rows
  Eigen::VectorXd y_;     // responses or labels
};

struct LinearDataset {
  Eigen::MatrixXd features;   // n x 3, rows a_j ~ N(2*1, I/2)
  Eigen::VectorXd responses;  // y_j = x*'a_j + delta_j
  Eigen::Vector3d truth;      // x* = (1, -0.7, -0.5)
};

// noise_std = 0 is the test-only zero-noise switch
LinearDataset make_synthetic_linear(long n, std::uint64_t seed, double noise_std = 0.5);

struct LogisticDataset {
  Eigen::MatrixXd features;  // n x d, rows X_j ~ N(0, 2I)
  Eigen::VectorXd labels;    // y_j = 1 iff U(0,1) <= sigmoid(beta'X_j)
};

LogisticDataset make_synthetic_logistic(long n, const Eigen::VectorXd& beta_true,
                                        std::uint64_t seed);

}  // namespace srnl
