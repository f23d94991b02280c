#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "srnl/config.hpp"
#include "srnl/data_io.hpp"
#include "srnl/diagnostics.hpp"
#include "srnl/oracle.hpp"
#include "srnl/samplers.hpp"

namespace srnl {

// ---- config -> domain object builders (External Interfaces) ----

// [constraint] kind = ball | smoothed_lp; ball: center, radius;
// smoothed_lp: p, epsilon, lambda, dim
ConstraintSet set_from_config(const Config& cfg);

// [<section>] field = zero | constant_a | cross_s | block_cross | sublevel_curl
// with keys a, s (scalar or list), h = one | one_plus_normsq. The curl field
// reuses the constraint's potential unless p/epsilon/lambda are given.
SkewField field_from_config(const Config& cfg, const std::string& section,
                            const ConstraintSet& set);

// [target] kind = trunc_gaussian (sigma_diag) | bayes_linear (n) |
// bayes_logistic (n, beta_true). Synthetic data are derived from data_seed.
Potential target_from_config(const Config& cfg, std::uint64_t data_seed);

// [sampler] eta, steps, thin, batch_size, fallback = error | euclidean
SamplerConfig sampler_from_config(const Config& cfg);

struct RunOptions {
  std::string out_dir = ".";
  std::vector<std::uint64_t> seeds;  // non-empty; overrides experiment.seeds
  int n_threads = 0;
  int chains_override = 0;  // > 0 replaces sampler.chains
};

// ---- protocol cores (shared by the CLI runners and the acceptance suite) ----

struct MethodSpec {
  std::string name;
  SkewField field;
};

// Ensemble snapshot at a recorded checkpoint row: n_chains x d.
Eigen::MatrixXd checkpoint_points(const std::vector<Trajectory>& trajs, long row);
Eigen::MatrixXd terminal_points(const std::vector<Trajectory>& trajs);

struct Curve {
  std::vector<long> checkpoints;
  std::vector<double> values;
  long fallback_count = 0;
};

// Ensemble-mean MSE(x_k) over the dataset at each recorded checkpoint;
// chains start uniform in K.
Curve linear_mse_curve(const LinearDataset& data, const ConstraintSet& set,
                       const SkewField& field, const SamplerConfig& base, int n_chains,
                       std::uint64_t seed, int n_threads);

struct AccuracyCurves {
  Curve train;
  Curve test;
};

// Ensemble-mean classification accuracy at each checkpoint, train and test.
AccuracyCurves logistic_accuracy_curves(const Potential& pot_train,
                                        const Eigen::MatrixXd& train_X,
                                        const Eigen::VectorXd& train_y,
                                        const Eigen::MatrixXd& test_X,
                                        const Eigen::VectorXd& test_y,
                                        const ConstraintSet& set, const SkewField& field,
                                        const SamplerConfig& base, int n_chains,
                                        std::uint64_t seed, int n_threads);

// Single long chain recording one coordinate for batch-means variance.
std::vector<double> coordinate_series(const ConstraintSet& set, const SkewField& field,
                                      const Potential& pot, const Eigen::VectorXd& x0,
                                      const SamplerConfig& cfg, int coordinate);

// ---- experiment drivers (one per CLI subcommand) ----

int run_experiment(const Config& cfg, const RunOptions& opt);

int run_validate(const Config& cfg, const RunOptions& opt);
int run_toy(const Config& cfg, const RunOptions& opt);
int run_linear(const Config& cfg, const RunOptions& opt);
int run_logistic(const Config& cfg, const RunOptions& opt);
int run_variance(const Config& cfg, const RunOptions& opt);
int run_scgf(const Config& cfg, const RunOptions& opt);

// Post-hoc feasibility validator over the samples_*.csv files of a run.
int check_samples(const Config& cfg, const std::string& run_dir, std::ostream& log);

// Echo the manifest; verify recorded artifact hashes and warn on mismatch.
int print_manifest(const std::string& run_dir, std::ostream& log);

}  // namespace srnl
