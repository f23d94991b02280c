#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "srnl/geometry.hpp"
#include "srnl/rng.hpp"
#include "srnl/skew_field.hpp"
#include "srnl/targets.hpp"

namespace srnl {

// One parameterized chain covers all four discrete algorithms:
//   zero field + full gradient      -> PLMC
//   zero field + minibatch gradient -> PSGLD
//   nonzero field + full gradient   -> SRNLMC
//   nonzero field + minibatch       -> SRNSGLD
// RNG consumption per step is fixed as (1) minibatch indices, (2) Gaussian
// noise, so trajectories are reproducible per (seed, config, build).
struct SamplerConfig {
  double eta = 1e-3;     // step size; eta = 0 is allowed in tests
  long n_steps = 0;
  int batch_size = 0;    // 0 = full gradient
  FallbackPolicy fallback = FallbackPolicy::Error;
  long thin = 1;
  std::uint64_t seed = 0;
};

void validate(const SamplerConfig& cfg);

struct ChainState {
  Eigen::VectorXd x;
  long step_index = 0;
  long fallback_count = 0;
  RngStream rng;

  ChainState(Eigen::VectorXd x0, RngStream r) : x(std::move(x0)), rng(r) {}
};

struct StepScratch {
  Eigen::VectorXd grad, jg, proposal;
  std::vector<int> batch;
};

// One update x <- P^J_K(x - eta (I+J(x)) g + sqrt(2 eta) xi). J is applied at
// the current iterate; with the zero field both the drift term and the skew
// projection reduce bitwise to the plain projected step.
void step(ChainState& state, const SamplerConfig& cfg, const ConstraintSet& set,
          const SkewField& field, const Potential& pot, StepScratch& ws);

inline void step(ChainState& state, const SamplerConfig& cfg, const ConstraintSet& set,
                 const SkewField& field, const Potential& pot) {
  StepScratch ws;
  step(state, cfg, set, field, pot, ws);
}

struct Trajectory {
  Eigen::MatrixXd points;           // n_recorded x d, includes the initial point
  std::vector<long> step_indices;
  SamplerConfig config;
  long fallback_count = 0;
  std::string gaussian_method = "box_muller";
};

// Runs the chain, invoking visit(state) at step 0 and after every step.
template <class Visitor>
ChainState run_chain_visit(const Eigen::VectorXd& x0, const SamplerConfig& cfg,
                           const ConstraintSet& set, const SkewField& field,
                           const Potential& pot, Visitor&& visit) {
  validate(cfg);
  if (!set.contains(x0))
    throw std::invalid_argument("run_chain: infeasible start (x0 not in K)");
  ChainState st(x0, RngStream(cfg.seed));
  StepScratch ws;
  visit(st);
  for (long k = 0; k < cfg.n_steps; ++k) {
    step(st, cfg, set, field, pot, ws);
    visit(st);
  }
  return st;
}

Trajectory run_chain(const Eigen::VectorXd& x0, const SamplerConfig& cfg,
                     const ConstraintSet& set, const SkewField& field,
                     const Potential& pot);

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream_id);

// Embarrassingly parallel replication: chain i draws from the stream derived
// from (seed_base, i), so results are independent of thread count and order.
std::vector<Trajectory> run_ensemble(const Eigen::VectorXd& x0, const SamplerConfig& cfg,
                                     const ConstraintSet& set, const SkewField& field,
                                     const Potential& pot, int n_chains,
                                     std::uint64_t seed_base, int n_threads = 0);

std::vector<Trajectory> run_ensemble_starts(const std::vector<Eigen::VectorXd>& x0s,
                                            const SamplerConfig& cfg, const ConstraintSet& set,
                                            const SkewField& field, const Potential& pot,
                                            std::uint64_t seed_base, int n_threads = 0);

// Static-partition thread pool helper shared by ensembles and experiments.
void parallel_for(long n, int n_threads, const std::function<void(long)>& fn);

// Uniform draw from K (ball: exact; sublevel: rejection from the bounding ball).
Eigen::VectorXd uniform_in_set(const ConstraintSet& set, RngStream& rng);

}  // namespace srnl
