#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "srnl/geometry.hpp"
#include "srnl/skew_field.hpp"
#include "srnl/targets.hpp"

namespace srnl {

// Per-coordinate 1-D Wasserstein-1 distance between the empirical marginals
// of two sample sets. Equal sizes: mean |sorted differences| (the optimal
// coupling in 1-D). Unequal sizes: |F_A^{-1} - F_B^{-1}| integrated over a
// uniform quantile grid of max(n, m) midpoints.
Eigen::VectorXd w1_per_dimension(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B);

// (1/n) sum_j (y_j - x'a_j)^2
double mse(const Eigen::VectorXd& x, const Eigen::MatrixXd& features,
           const Eigen::VectorXd& responses);
double mse(const Eigen::VectorXd& x, const LinearDataset& data);

// fraction of j with 1[beta'X_j >= 0] == y_j (ties go to class 1)
double accuracy(const Eigen::VectorXd& beta, const Eigen::MatrixXd& features,
                const Eigen::VectorXd& labels);
double accuracy(const Eigen::VectorXd& beta, const LogisticDataset& data);

struct VarianceEstimate {
  double sigma2_hat = 0.0;
  long n_batches = 0;
  long batch_len = 0;
  double standard_error = 0.0;
};

// Batch-means estimate of the asymptotic variance of the series' time
// average: sigma^2 = b * Var(contiguous batch means), unbiased divisor.
VarianceEstimate asymptotic_variance_batch_means(const std::vector<double>& series,
                                                 long n_batches);

struct ScgfEstimate {
  double lambda_hat = 0.0;
  double standard_error = 0.0;
  double t_horizon = 0.0;
  int n_chains = 0;
};

using Observable = std::function<double(const Eigen::VectorXd&)>;

// Monte-Carlo estimate of the scaled cumulant generating function
// lambda(g) = lim (1/t) log E exp(int_0^t g(X_s) ds), over an ensemble of
// discrete chains with the Riemann sum sum_k g(x_k) eta for the integral.
// All observables share the same ensemble. Log-sum-exp stabilized; standard
// error by the delta method across chains.
std::vector<ScgfEstimate> scgf_estimate_multi(const ConstraintSet& set, const Potential& pot,
                                              const SkewField& field,
                                              const std::vector<Observable>& gs,
                                              double t_horizon, double eta, int n_chains,
                                              std::uint64_t seed, int n_threads = 0,
                                              const Eigen::VectorXd* x0 = nullptr);

ScgfEstimate scgf_estimate(const ConstraintSet& set, const Potential& pot,
                           const SkewField& field, const Observable& g, double t_horizon,
                           double eta, int n_chains, std::uint64_t seed, int n_threads = 0);

// One metric curve for one (method, seed); dim_index >= 0 tags W1 components.
struct MetricSeries {
  std::string method;
  std::string metric;
  std::uint64_t seed = 0;
  int dim_index = -1;
  std::vector<long> checkpoints;
  std::vector<double> values;
};

struct MethodSummary {
  std::string method;
  std::string metric;
  int dim_index = -1;
  std::vector<long> checkpoints;
  std::vector<double> mean;
  std::vector<double> stddev;  // unbiased across seeds; 0 for a single seed
};

// Aligned-checkpoint mean and std across seeds, grouped by (method, metric,
// dim). Throws if the checkpoints of a group disagree.
std::vector<MethodSummary> compare_methods(const std::vector<MetricSeries>& series);

}  // namespace srnl
