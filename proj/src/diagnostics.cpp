#include "srnl/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "srnl/samplers.hpp"

namespace srnl {

namespace {

// left-continuous empirical quantile: k-th order statistic with k = ceil(u*n)
double empirical_quantile(const std::vector<double>& sorted, double u) {
  const long n = static_cast<long>(sorted.size());
  long k = static_cast<long>(std::ceil(u * static_cast<double>(n)));
  k = std::max<long>(1, std::min<long>(n, k));
  return sorted[k - 1];
}

}  // namespace

Eigen::VectorXd w1_per_dimension(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  if (A.rows() < 1 || B.rows() < 1)
    throw std::invalid_argument("w1_per_dimension: empty sample");
  if (A.cols() != B.cols())
    throw std::invalid_argument("w1_per_dimension: dimension mismatch");
  const int d = static_cast<int>(A.cols());
  const long n = A.rows(), m = B.rows();
  Eigen::VectorXd out(d);
  std::vector<double> a(n), b(m);
  for (int c = 0; c < d; ++c) {
    for (long i = 0; i < n; ++i) a[i] = A(i, c);
    for (long i = 0; i < m; ++i) b[i] = B(i, c);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double w = 0.0;
    if (n == m) {
      for (long i = 0; i < n; ++i) w += std::abs(a[i] - b[i]);
      w /= static_cast<double>(n);
    } else {
      const long grid = std::max(n, m);
      for (long j = 0; j < grid; ++j) {
        const double u = (static_cast<double>(j) + 0.5) / static_cast<double>(grid);
        w += std::abs(empirical_quantile(a, u) - empirical_quantile(b, u));
      }
      w /= static_cast<double>(grid);
    }
    out[c] = w;
  }
  return out;
}

double mse(const Eigen::VectorXd& x, const Eigen::MatrixXd& features,
           const Eigen::VectorXd& responses) {
  if (x.size() != features.cols())
    throw std::invalid_argument("mse: dimension mismatch");
  return (responses - features * x).squaredNorm() / static_cast<double>(features.rows());
}

double mse(const Eigen::VectorXd& x, const LinearDataset& data) {
  return mse(x, data.features, data.responses);
}

double accuracy(const Eigen::VectorXd& beta, const Eigen::MatrixXd& features,
                const Eigen::VectorXd& labels) {
  if (beta.size() != features.cols())
    throw std::invalid_argument("accuracy: dimension mismatch");
  long correct = 0;
  for (long j = 0; j < features.rows(); ++j) {
    const double pred = features.row(j).dot(beta) >= 0.0 ? 1.0 : 0.0;
    if (pred == labels[j]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(features.rows());
}

double accuracy(const Eigen::VectorXd& beta, const LogisticDataset& data) {
  return accuracy(beta, data.features, data.labels);
}

VarianceEstimate asymptotic_variance_batch_means(const std::vector<double>& series,
                                                 long n_batches) {
  const long N = static_cast<long>(series.size());
  if (n_batches < 2) throw std::invalid_argument("batch_means: need at least 2 batches");
  if (N < 2 * n_batches)
    throw std::invalid_argument("batch_means: series shorter than 2 * n_batches");
  const long b = N / n_batches;
  VarianceEstimate est;
  est.n_batches = n_batches;
  est.batch_len = b;
  std::vector<double> means(n_batches);
  for (long i = 0; i < n_batches; ++i) {
    double s = 0.0;
    const long off = i * b;
    for (long k = 0; k < b; ++k) s += series[off + k];
    means[i] = s / static_cast<double>(b);
  }
  double mu = 0.0;
  for (const double m : means) mu += m;
  mu /= static_cast<double>(n_batches);
  double var = 0.0;
  for (const double m : means) var += (m - mu) * (m - mu);
  var /= static_cast<double>(n_batches - 1);
  est.sigma2_hat = static_cast<double>(b) * var;
  est.standard_error = est.sigma2_hat * std::sqrt(2.0 / static_cast<double>(n_batches - 1));
  return est;
}

std::vector<ScgfEstimate> scgf_estimate_multi(const ConstraintSet& set, const Potential& pot,
                                              const SkewField& field,
                                              const std::vector<Observable>& gs,
                                              double t_horizon, double eta, int n_chains,
                                              std::uint64_t seed, int n_threads,
                                              const Eigen::VectorXd* x0) {
  if (n_chains < 2) throw std::invalid_argument("scgf_estimate: need at least 2 chains");
  if (!(eta > 0.0) || !(t_horizon > 0.0))
    throw std::invalid_argument("scgf_estimate: eta and t_horizon must be > 0");
  const long n_steps = std::lround(t_horizon / eta);
  if (n_steps < 1) throw std::invalid_argument("scgf_estimate: t_horizon shorter than one step");
  const double t = static_cast<double>(n_steps) * eta;

  const int n_g = static_cast<int>(gs.size());
  const Eigen::VectorXd start =
      (x0 != nullptr) ? *x0 : Eigen::VectorXd(set.center());
  // S(i, j) = sum_k g_j(x_k) * eta over the first n_steps iterates of chain i
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(n_chains, n_g);

  SamplerConfig cfg;
  cfg.eta = eta;
  cfg.n_steps = n_steps;
  cfg.fallback = FallbackPolicy::Euclidean;
  parallel_for(n_chains, n_threads, [&](long i) {
    SamplerConfig c = cfg;
    c.seed = derive_seed(seed, static_cast<std::uint64_t>(i));
    run_chain_visit(start, c, set, field, pot, [&](const ChainState& st) {
      if (st.step_index < n_steps)
        for (int j = 0; j < n_g; ++j) S(i, j) += gs[j](st.x) * eta;
    });
  });

  std::vector<ScgfEstimate> out(n_g);
  for (int j = 0; j < n_g; ++j) {
    const double smax = S.col(j).maxCoeff();
    double mean_r = 0.0;
    for (int i = 0; i < n_chains; ++i) mean_r += std::exp(S(i, j) - smax);
    mean_r /= static_cast<double>(n_chains);
    if (!std::isfinite(mean_r) || mean_r <= 0.0)
      throw std::runtime_error("scgf_estimate: overflow despite stabilization (g*t too large)");
    double var_r = 0.0;
    for (int i = 0; i < n_chains; ++i) {
      const double r = std::exp(S(i, j) - smax) - mean_r;
      var_r += r * r;
    }
    var_r /= static_cast<double>(n_chains - 1);
    out[j].lambda_hat = (smax + std::log(mean_r)) / t;
    out[j].standard_error =
        std::sqrt(var_r / static_cast<double>(n_chains)) / (mean_r * t);
    out[j].t_horizon = t;
    out[j].n_chains = n_chains;
  }
  return out;
}

ScgfEstimate scgf_estimate(const ConstraintSet& set, const Potential& pot,
                           const SkewField& field, const Observable& g, double t_horizon,
                           double eta, int n_chains, std::uint64_t seed, int n_threads) {
  return scgf_estimate_multi(set, pot, field, {g}, t_horizon, eta, n_chains, seed,
                             n_threads)[0];
}

std::vector<MethodSummary> compare_methods(const std::vector<MetricSeries>& series) {
  if (series.empty()) throw std::invalid_argument("compare_methods: no series");
  std::map<std::tuple<std::string, std::string, int>, std::vector<const MetricSeries*>> groups;
  for (const auto& s : series)
    groups[{s.method, s.metric, s.dim_index}].push_back(&s);

  std::vector<MethodSummary> out;
  for (const auto& [key, members] : groups) {
    MethodSummary sum;
    sum.method = std::get<0>(key);
    sum.metric = std::get<1>(key);
    sum.dim_index = std::get<2>(key);
    sum.checkpoints = members.front()->checkpoints;
    for (const auto* m : members) {
      if (m->checkpoints != sum.checkpoints)
        throw std::invalid_argument("compare_methods: misaligned checkpoints for method '" +
                                    sum.method + "', metric '" + sum.metric + "'");
      if (m->values.size() != m->checkpoints.size())
        throw std::invalid_argument("compare_methods: series values/checkpoints length mismatch");
    }
    const long n_cp = static_cast<long>(sum.checkpoints.size());
    const long n_seeds = static_cast<long>(members.size());
    sum.mean.assign(n_cp, 0.0);
    sum.stddev.assign(n_cp, 0.0);
    for (long c = 0; c < n_cp; ++c) {
      double mu = 0.0;
      for (const auto* m : members) mu += m->values[c];
      mu /= static_cast<double>(n_seeds);
      double var = 0.0;
      for (const auto* m : members) var += (m->values[c] - mu) * (m->values[c] - mu);
      sum.mean[c] = mu;
      sum.stddev[c] = n_seeds > 1 ? std::sqrt(var / static_cast<double>(n_seeds - 1)) : 0.0;
    }
    out.push_back(std::move(sum));
  }
  return out;
}

}  // namespace srnl
