#include "srnl/samplers.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>

namespace srnl {

void validate(const SamplerConfig& cfg) {
  if (!(cfg.eta >= 0.0) || !std::isfinite(cfg.eta))
    throw std::invalid_argument("SamplerConfig: eta must be finite and >= 0");
  if (cfg.n_steps < 0) throw std::invalid_argument("SamplerConfig: n_steps must be >= 0");
  if (cfg.thin < 1) throw std::invalid_argument("SamplerConfig: thin must be >= 1");
  if (cfg.batch_size < 0) throw std::invalid_argument("SamplerConfig: batch_size must be >= 0");
}

void step(ChainState& st, const SamplerConfig& cfg, const ConstraintSet& set,
          const SkewField& field, const Potential& pot, StepScratch& ws) {
  // (1) gradient, consuming minibatch indices first when in minibatch mode
  if (cfg.batch_size > 0)
    pot.grad_minibatch(st.x, cfg.batch_size, st.rng, ws.batch, ws.grad);
  else
    pot.grad_full(st.x, ws.grad);

  ws.proposal = st.x - cfg.eta * ws.grad;
  if (!field.is_zero()) {
    field.apply(st.x, ws.grad, ws.jg);
    ws.proposal -= cfg.eta * ws.jg;
  }

  // (2) Gaussian noise, coordinate order 0..d-1
  const double sq = std::sqrt(2.0 * cfg.eta);
  for (int i = 0; i < ws.proposal.size(); ++i) ws.proposal[i] += sq * st.rng.gaussian();

  if (!ws.proposal.allFinite())
    throw std::runtime_error("step: non-finite proposal (eta too large for this potential)");
  if (ws.proposal.cwiseAbs().maxCoeff() > 1e6)
    throw std::runtime_error("step: iterate escaped beyond 1e6 before projection "
                             "(misconfigured step size)");

  // (3) skew projection; feasible proposals pass through untouched
  if (set.contains(ws.proposal))
    st.x.swap(ws.proposal);
  else
    st.x = skew_project(set, field, ws.proposal, cfg.fallback, &st.fallback_count);
  ++st.step_index;
}

Trajectory run_chain(const Eigen::VectorXd& x0, const SamplerConfig& cfg,
                     const ConstraintSet& set, const SkewField& field, const Potential& pot) {
  validate(cfg);
  Trajectory traj;
  traj.config = cfg;
  const long n_rec = cfg.n_steps / cfg.thin + 1;
  traj.points.resize(n_rec, x0.size());
  traj.step_indices.reserve(n_rec);
  long row = 0;
  const ChainState final_state = run_chain_visit(
      x0, cfg, set, field, pot, [&](const ChainState& st) {
        if (st.step_index % cfg.thin == 0) {
          traj.points.row(row++) = st.x;
          traj.step_indices.push_back(st.step_index);
        }
      });
  traj.fallback_count = final_state.fallback_count;
  return traj;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream_id) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream_id + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void parallel_for(long n, int n_threads, const std::function<void(long)>& fn) {
  if (n_threads <= 0) {
    const unsigned hc = std::thread::hardware_concurrency();
    n_threads = hc > 0 ? static_cast<int>(hc) : 1;
  }
  n_threads = static_cast<int>(std::min<long>(n_threads, n));
  if (n_threads <= 1) {
    for (long i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> threads;
  std::exception_ptr err = nullptr;
  std::mutex err_mu;
  threads.reserve(n_threads);
  for (int t = 0; t < n_threads; ++t) {
    threads.emplace_back([&, t]() {
      try {
        for (long i = t; i < n; i += n_threads) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lk(err_mu);
        if (!err) err = std::current_exception();
      }
    });
  }
  for (auto& th : threads) th.join();
  if (err) std::rethrow_exception(err);
}

std::vector<Trajectory> run_ensemble(const Eigen::VectorXd& x0, const SamplerConfig& cfg,
                                     const ConstraintSet& set, const SkewField& field,
                                     const Potential& pot, int n_chains,
                                     std::uint64_t seed_base, int n_threads) {
  if (n_chains < 1) throw std::invalid_argument("run_ensemble: n_chains must be >= 1");
  std::vector<Trajectory> out(n_chains);
  parallel_for(n_chains, n_threads, [&](long i) {
    SamplerConfig c = cfg;
    c.seed = derive_seed(seed_base, static_cast<std::uint64_t>(i));
    out[i] = run_chain(x0, c, set, field, pot);
  });
  return out;
}

std::vector<Trajectory> run_ensemble_starts(const std::vector<Eigen::VectorXd>& x0s,
                                            const SamplerConfig& cfg, const ConstraintSet& set,
                                            const SkewField& field, const Potential& pot,
                                            std::uint64_t seed_base, int n_threads) {
  if (x0s.empty()) throw std::invalid_argument("run_ensemble_starts: no starting points");
  std::vector<Trajectory> out(x0s.size());
  parallel_for(static_cast<long>(x0s.size()), n_threads, [&](long i) {
    SamplerConfig c = cfg;
    c.seed = derive_seed(seed_base, static_cast<std::uint64_t>(i));
    out[i] = run_chain(x0s[i], c, set, field, pot);
  });
  return out;
}

Eigen::VectorXd uniform_in_set(const ConstraintSet& set, RngStream& rng) {
  const int d = set.dim();
  Eigen::VectorXd x(d);
  if (set.is_ball()) {
    double n2 = 0.0;
    do {
      for (int i = 0; i < d; ++i) x[i] = rng.gaussian();
      n2 = x.squaredNorm();
    } while (n2 < 1e-24);
    const double r = set.radius() * std::pow(rng.uniform01(), 1.0 / d);
    return set.center() + (r / std::sqrt(n2)) * x;
  }
  const double R = set.bounding_radius();
  for (int attempt = 0; attempt < 100000; ++attempt) {
    for (int i = 0; i < d; ++i) x[i] = set.anchor()[i] + R * (2.0 * rng.uniform01() - 1.0);
    if (set.contains(x)) return x;
  }
  throw std::runtime_error("uniform_in_set: rejection from the bounding box starved");
}

}  // namespace srnl
