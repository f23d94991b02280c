#include "srnl/experiments.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace srnl {

namespace {

namespace fs = std::filesystem;

Eigen::VectorXd to_vec(const std::vector<double>& v) {
  Eigen::VectorXd out(static_cast<long>(v.size()));
  for (size_t i = 0; i < v.size(); ++i) out[static_cast<long>(i)] = v[i];
  return out;
}

std::vector<std::uint64_t> seeds_for_run(const Config& cfg, const RunOptions& opt) {
  if (!opt.seeds.empty()) return opt.seeds;
  if (cfg.has("experiment.seeds")) {
    std::vector<std::uint64_t> out;
    for (const double s : cfg.get_vector("experiment.seeds"))
      out.push_back(static_cast<std::uint64_t>(s));
    return out;
  }
  return {1};
}

std::vector<MethodSpec> methods_from_config(const Config& cfg, const ConstraintSet& set) {
  std::vector<MethodSpec> methods;
  for (const auto& name : cfg.subsections("method."))
    methods.push_back({name, field_from_config(cfg, "method." + name, set)});
  if (methods.empty())
    throw ConfigError("config defines no [method.*] sections");
  return methods;
}

void write_config_echo(std::vector<std::pair<std::string, std::string>>& entries,
                       const Config& cfg) {
  for (const auto& [k, v] : cfg.values()) entries.emplace_back("config." + k, v);
}

std::string timestamp_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::ostringstream os;
  os << std::put_time(std::gmtime(&t), "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

void finish_run(const std::string& out_dir, const Config& cfg,
                const std::vector<std::uint64_t>& seeds,
                const std::vector<MetricSeries>& metrics,
                std::vector<std::pair<std::string, std::string>> headline) {
  const fs::path dir(out_dir);
  write_metrics_csv((dir / "metrics.csv").string(), metrics);
  write_summary_csv((dir / "summary.csv").string(), compare_methods(metrics));

  std::vector<std::pair<std::string, std::string>> man;
  man.emplace_back("timestamp", timestamp_now());
  {
    std::ostringstream ss;
    for (size_t i = 0; i < seeds.size(); ++i) ss << (i ? "," : "") << seeds[i];
    man.emplace_back("seeds", ss.str());
  }
  write_config_echo(man, cfg);
  for (auto& h : headline) man.emplace_back("headline." + h.first, h.second);
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    if (name == "manifest.txt") continue;
    if (entry.path().extension() == ".csv")
      man.emplace_back("hash." + name, hash_hex(fnv1a_file(entry.path().string())));
  }
  write_manifest((dir / "manifest.txt").string(), man);
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

}  // namespace

ConstraintSet set_from_config(const Config& cfg) {
  const std::string kind = cfg.get_str("constraint.kind");
  if (kind == "ball") {
    const double radius = cfg.get_double("constraint.radius");
    Eigen::VectorXd center;
    if (cfg.has("constraint.center")) {
      center = to_vec(cfg.get_vector("constraint.center"));
    } else {
      center = Eigen::VectorXd::Zero(cfg.get_long("constraint.dim"));
    }
    return ConstraintSet::ball(center, radius);
  }
  if (kind == "smoothed_lp") {
    const SmoothedLpSpec g(cfg.get_double("constraint.p"), cfg.get_double("constraint.epsilon"),
                           static_cast<int>(cfg.get_long("constraint.dim")));
    return ConstraintSet::smoothed_lp(g, cfg.get_double("constraint.lambda"));
  }
  throw ConfigError("constraint.kind must be 'ball' or 'smoothed_lp', got '" + kind + "'");
}

SkewField field_from_config(const Config& cfg, const std::string& section,
                            const ConstraintSet& set) {
  const std::string key = section + ".field";
  const std::string kind = cfg.get_str(key);
  const int d = set.dim();
  if (kind == "zero") return SkewField::zero(d);
  if (kind == "constant_a") return SkewField::constant_tridiag(cfg.get_double(section + ".a"), d);
  if (kind == "cross_s") return SkewField::cross3d(cfg.get_double(section + ".s"));
  if (kind == "block_cross") return SkewField::block_cross(cfg.get_vector(section + ".s"), d);
  if (kind == "sublevel_curl") {
    SmoothedLpSpec g;
    double lambda;
    if (cfg.has(section + ".p")) {
      g = SmoothedLpSpec(cfg.get_double(section + ".p"), cfg.get_double(section + ".epsilon"), d);
      lambda = cfg.get_double(section + ".lambda");
    } else {
      if (set.kind() != ConstraintSet::Kind::Sublevel)
        throw ConfigError("sublevel_curl field in '" + section +
                          "' needs p/epsilon/lambda keys when the constraint is not a sublevel set");
      g = set.lp();
      lambda = set.lambda();
    }
    const HSpec h = cfg.get_str_or(section + ".h", "one") == "one_plus_normsq"
                        ? HSpec::OnePlusNormSq
                        : HSpec::One;
    std::vector<double> s = cfg.has(section + ".s") ? cfg.get_vector(section + ".s")
                                                    : std::vector<double>(d / 3, 1.0);
    if (static_cast<int>(s.size()) == 1 && d / 3 > 1) s.assign(d / 3, s[0]);
    return SkewField::sublevel_curl(g, lambda, h, s);
  }
  throw ConfigError("unknown field kind '" + kind + "' in '" + key + "'");
}

Potential target_from_config(const Config& cfg, std::uint64_t data_seed) {
  const std::string kind = cfg.get_str("target.kind");
  if (kind == "trunc_gaussian") {
    const Eigen::VectorXd diag = to_vec(cfg.get_vector("target.sigma_diag"));
    Eigen::MatrixXd sigma_inv = Eigen::MatrixXd::Zero(diag.size(), diag.size());
    for (long i = 0; i < diag.size(); ++i) {
      if (!(diag[i] > 0.0)) throw ConfigError("target.sigma_diag entries must be > 0");
      sigma_inv(i, i) = 1.0 / diag[i];
    }
    return Potential::quadratic_gaussian(sigma_inv);
  }
  if (kind == "bayes_linear") {
    const LinearDataset ds = make_synthetic_linear(cfg.get_long("target.n"), data_seed);
    return Potential::bayes_linear(ds.features, ds.responses);
  }
  if (kind == "bayes_logistic") {
    const Eigen::VectorXd beta = to_vec(cfg.get_vector("target.beta_true"));
    const LogisticDataset ds =
        make_synthetic_logistic(cfg.get_long("target.n"), beta, data_seed);
    return Potential::bayes_logistic(ds.features, ds.labels);
  }
  throw ConfigError("target.kind must be trunc_gaussian | bayes_linear | bayes_logistic");
}

SamplerConfig sampler_from_config(const Config& cfg) {
  SamplerConfig sc;
  sc.eta = cfg.get_double("sampler.eta");
  sc.n_steps = cfg.get_long("sampler.steps");
  sc.thin = cfg.get_long_or("sampler.thin", 1);
  sc.batch_size = static_cast<int>(cfg.get_long_or("sampler.batch_size", 0));
  const std::string fb = cfg.get_str_or("sampler.fallback", "error");
  if (fb == "euclidean")
    sc.fallback = FallbackPolicy::Euclidean;
  else if (fb == "error")
    sc.fallback = FallbackPolicy::Error;
  else
    throw ConfigError("sampler.fallback must be 'error' or 'euclidean', got '" + fb + "'");
  validate(sc);
  return sc;
}

Eigen::MatrixXd checkpoint_points(const std::vector<Trajectory>& trajs, long row) {
  const long n = static_cast<long>(trajs.size());
  Eigen::MatrixXd out(n, trajs.front().points.cols());
  for (long i = 0; i < n; ++i) out.row(i) = trajs[i].points.row(row);
  return out;
}

Eigen::MatrixXd terminal_points(const std::vector<Trajectory>& trajs) {
  return checkpoint_points(trajs, trajs.front().points.rows() - 1);
}

namespace {

std::vector<Eigen::VectorXd> uniform_starts(const ConstraintSet& set, int n_chains,
                                            std::uint64_t seed) {
  std::vector<Eigen::VectorXd> starts(n_chains);
  for (int i = 0; i < n_chains; ++i) {
    RngStream rng = RngStream::derived(seed ^ 0x5742a5u, static_cast<std::uint64_t>(i));
    starts[i] = uniform_in_set(set, rng);
  }
  return starts;
}

// mse(x) = (y'y - 2 (A'y)'x + x'(A'A)x)/n, precomputed once per dataset
struct MseEvaluator {
  double c0;
  Eigen::VectorXd b;
  Eigen::MatrixXd M;
  double inv_n;

  explicit MseEvaluator(const LinearDataset& data)
      : c0(data.responses.squaredNorm()),
        b(data.features.transpose() * data.responses),
        M(data.features.transpose() * data.features),
        inv_n(1.0 / static_cast<double>(data.features.rows())) {}

  double operator()(const Eigen::VectorXd& x) const {
    return (c0 - 2.0 * b.dot(x) + x.dot(M * x)) * inv_n;
  }
};

}  // namespace

Curve linear_mse_curve(const LinearDataset& data, const ConstraintSet& set,
                       const SkewField& field, const SamplerConfig& base, int n_chains,
                       std::uint64_t seed, int n_threads) {
  const Potential pot = Potential::bayes_linear(data.features, data.responses);
  const MseEvaluator ev(data);
  const auto starts = uniform_starts(set, n_chains, seed);
  SamplerConfig cfg = base;
  const auto trajs = run_ensemble_starts(starts, cfg, set, field, pot, seed, n_threads);

  Curve out;
  out.checkpoints = trajs.front().step_indices;
  out.values.resize(out.checkpoints.size());
  for (size_t r = 0; r < out.checkpoints.size(); ++r) {
    double acc = 0.0;
    for (const auto& t : trajs) acc += ev(t.points.row(static_cast<long>(r)).transpose());
    out.values[r] = acc / static_cast<double>(trajs.size());
  }
  for (const auto& t : trajs) out.fallback_count += t.fallback_count;
  return out;
}

AccuracyCurves logistic_accuracy_curves(const Potential& pot_train,
                                        const Eigen::MatrixXd& train_X,
                                        const Eigen::VectorXd& train_y,
                                        const Eigen::MatrixXd& test_X,
                                        const Eigen::VectorXd& test_y,
                                        const ConstraintSet& set, const SkewField& field,
                                        const SamplerConfig& base, int n_chains,
                                        std::uint64_t seed, int n_threads) {
  const auto starts = uniform_starts(set, n_chains, seed);
  const auto trajs = run_ensemble_starts(starts, base, set, field, pot_train, seed, n_threads);

  AccuracyCurves out;
  out.train.checkpoints = trajs.front().step_indices;
  out.test.checkpoints = out.train.checkpoints;
  const size_t n_cp = out.train.checkpoints.size();
  out.train.values.resize(n_cp);
  out.test.values.resize(n_cp);
  for (size_t r = 0; r < n_cp; ++r) {
    double a_tr = 0.0, a_te = 0.0;
    for (const auto& t : trajs) {
      const Eigen::VectorXd beta = t.points.row(static_cast<long>(r)).transpose();
      a_tr += accuracy(beta, train_X, train_y);
      a_te += accuracy(beta, test_X, test_y);
    }
    out.train.values[r] = a_tr / static_cast<double>(trajs.size());
    out.test.values[r] = a_te / static_cast<double>(trajs.size());
  }
  for (const auto& t : trajs) {
    out.train.fallback_count += t.fallback_count;
    out.test.fallback_count += t.fallback_count;
  }
  return out;
}

std::vector<double> coordinate_series(const ConstraintSet& set, const SkewField& field,
                                      const Potential& pot, const Eigen::VectorXd& x0,
                                      const SamplerConfig& cfg, int coordinate) {
  std::vector<double> series;
  series.reserve(cfg.n_steps + 1);
  run_chain_visit(x0, cfg, set, field, pot, [&](const ChainState& st) {
    series.push_back(st.x[coordinate]);
  });
  return series;
}

int run_validate(const Config& cfg, const RunOptions& opt) {
  const ConstraintSet set = set_from_config(cfg);
  const auto methods = methods_from_config(cfg, set);
  const auto seeds = seeds_for_run(cfg, opt);
  const int n_boundary = static_cast<int>(cfg.get_long_or("validate.boundary_samples", 1000));
  const int n_interior = static_cast<int>(cfg.get_long_or("validate.interior_samples", 1000));
  const double fd_step = cfg.get_double_or("validate.fd_step", 1e-5);
  const double max_skew = cfg.get_double_or("validate.max_skew_defect", 1e-12);
  const double max_jn = cfg.get_double_or("validate.max_boundary_jn", 1e-8);
  const double max_div = cfg.get_double_or("validate.max_interior_div", 1e-4);

  fs::create_directories(opt.out_dir);
  bool all_pass = true;
  std::vector<std::pair<std::string, std::string>> headline;
  for (const auto& m : methods) {
    const AssumptionReport rep =
        validate_assumptions(m.field, set, n_boundary, n_interior, fd_step, seeds.front());
    const bool pass = rep.max_skew_defect <= max_skew && rep.max_boundary_Jn <= max_jn &&
                      rep.max_interior_divJ <= max_div;
    all_pass = all_pass && pass;
    std::ofstream rf(fs::path(opt.out_dir) / ("assumptions_" + m.name + ".txt"));
    rf << "field = " << m.name << "\n"
       << "max_skew_defect = " << rep.max_skew_defect << "\n"
       << "max_boundary_Jn = " << rep.max_boundary_Jn << "\n"
       << "max_interior_divJ = " << rep.max_interior_divJ << "\n"
       << "boundary_samples = " << rep.boundary_samples << "\n"
       << "interior_samples = " << rep.interior_samples << "\n"
       << "fd_step = " << rep.fd_step << "\n"
       << "pass = " << (pass ? "true" : "false") << "\n";
    std::cout << (pass ? "[pass] " : "[FAIL] ") << m.name
              << ": skew " << rep.max_skew_defect << ", boundary Jn " << rep.max_boundary_Jn
              << ", interior divJ " << rep.max_interior_divJ << "\n";
    headline.emplace_back(m.name + ".max_boundary_Jn", fmt(rep.max_boundary_Jn));
  }
  finish_run(opt.out_dir, cfg, seeds, {}, std::move(headline));
  return all_pass ? 0 : 1;
}

int run_toy(const Config& cfg, const RunOptions& opt) {
  const ConstraintSet set = set_from_config(cfg);
  const Potential pot = target_from_config(cfg, 0);
  SamplerConfig base = sampler_from_config(cfg);
  base.thin = cfg.get_long_or("diagnostics.checkpoint_every", 10);
  const int n_chains = opt.chains_override > 0
                           ? opt.chains_override
                           : static_cast<int>(cfg.get_long_or("sampler.chains", 5000));
  const Eigen::VectorXd x0 = to_vec(cfg.get_vector("experiment.x0"));
  const auto methods = methods_from_config(cfg, set);
  const auto seeds = seeds_for_run(cfg, opt);
  const long oracle_n = cfg.get_long_or("oracle.n", n_chains);

  const GaussianProposal prop =
      GaussianProposal::diagonal(to_vec(cfg.get_vector("target.sigma_diag")));

  fs::create_directories(opt.out_dir);
  std::vector<MetricSeries> metrics;
  std::vector<std::pair<std::string, std::string>> headline;
  long total_fallbacks = 0;
  for (size_t si = 0; si < seeds.size(); ++si) {
    const std::uint64_t seed = seeds[si];
    const ReferenceSample ref =
        rejection_sample(set, prop, oracle_n, derive_seed(seed, 0x0eacce));
    if (si == 0)
      write_samples_csv((fs::path(opt.out_dir) / "reference.csv").string(), ref.points);
    for (const auto& m : methods) {
      const auto trajs = run_ensemble(x0, base, set, m.field, pot, n_chains, seed,
                                      opt.n_threads);
      const auto& cps = trajs.front().step_indices;
      std::vector<MetricSeries> per_dim(set.dim());
      for (int d = 0; d < set.dim(); ++d)
        per_dim[d] = {m.name, "w1", seed, d, cps, std::vector<double>(cps.size())};
      for (size_t r = 0; r < cps.size(); ++r) {
        const Eigen::VectorXd w1 =
            w1_per_dimension(checkpoint_points(trajs, static_cast<long>(r)), ref.points);
        for (int d = 0; d < set.dim(); ++d) per_dim[d].values[r] = w1[d];
      }
      for (auto& s : per_dim) metrics.push_back(std::move(s));
      for (const auto& t : trajs) total_fallbacks += t.fallback_count;
      if (si == 0)
        write_samples_csv((fs::path(opt.out_dir) / ("samples_" + m.name + ".csv")).string(),
                          terminal_points(trajs));
    }
  }
  const auto summaries = compare_methods(metrics);
  for (const auto& s : summaries)
    headline.emplace_back(s.method + ".final_w1.dim" + std::to_string(s.dim_index),
                          fmt(s.mean.back()));
  headline.emplace_back("fallback_count", std::to_string(total_fallbacks));
  finish_run(opt.out_dir, cfg, seeds, metrics, std::move(headline));
  return 0;
}

int run_linear(const Config& cfg, const RunOptions& opt) {
  const ConstraintSet set = set_from_config(cfg);
  SamplerConfig base = sampler_from_config(cfg);
  base.thin = cfg.get_long_or("diagnostics.checkpoint_every", 10);
  const int n_chains = opt.chains_override > 0
                           ? opt.chains_override
                           : static_cast<int>(cfg.get_long_or("sampler.chains", 100));
  const long n_data = cfg.get_long("target.n");
  const auto methods = methods_from_config(cfg, set);
  const auto seeds = seeds_for_run(cfg, opt);

  fs::create_directories(opt.out_dir);
  std::vector<MetricSeries> metrics;
  double mse_star_mean = 0.0;
  for (const std::uint64_t seed : seeds) {
    const LinearDataset data = make_synthetic_linear(n_data, derive_seed(seed, 0xDA7A));
    mse_star_mean += mse(data.truth, data) / static_cast<double>(seeds.size());
    for (const auto& m : methods) {
      const Curve c = linear_mse_curve(data, set, m.field, base, n_chains, seed, opt.n_threads);
      metrics.push_back({m.name, "mse", seed, -1, c.checkpoints, c.values});
    }
  }
  std::vector<std::pair<std::string, std::string>> headline;
  headline.emplace_back("mse_at_truth", fmt(mse_star_mean));
  for (const auto& s : compare_methods(metrics))
    headline.emplace_back(s.method + ".final_mse", fmt(s.mean.back()));
  finish_run(opt.out_dir, cfg, seeds, metrics, std::move(headline));
  return 0;
}

int run_logistic(const Config& cfg, const RunOptions& opt) {
  const ConstraintSet set = set_from_config(cfg);
  SamplerConfig base = sampler_from_config(cfg);
  base.thin = cfg.get_long_or("diagnostics.checkpoint_every", 25);
  const int n_chains = opt.chains_override > 0
                           ? opt.chains_override
                           : static_cast<int>(cfg.get_long_or("sampler.chains", 100));
  const auto methods = methods_from_config(cfg, set);
  const auto seeds = seeds_for_run(cfg, opt);
  const double test_fraction = cfg.get_double_or("data.test_fraction", 0.2);
  const std::string dataset = cfg.get_str_or("data.dataset", "synthetic");

  fs::create_directories(opt.out_dir);
  std::vector<MetricSeries> metrics;
  for (const std::uint64_t seed : seeds) {
    Eigen::MatrixXd train_X, test_X;
    Eigen::VectorXd train_y, test_y;
    if (dataset == "synthetic") {
      const Eigen::VectorXd beta = to_vec(cfg.get_vector("target.beta_true"));
      const LogisticDataset ds = make_synthetic_logistic(cfg.get_long("target.n"), beta,
                                                         derive_seed(seed, 0xDA7A));
      TabularDataset tab;
      tab.features = ds.features;
      tab.labels = ds.labels;
      const auto [train, test] = split(tab, {test_fraction, derive_seed(seed, 0x5117)});
      train_X = train.features;
      train_y = train.labels;
      test_X = test.features;
      test_y = test.labels;
    } else {
      const std::string path = cfg.get_str("data.path");
      TabularDataset tab;
      if (dataset == "magic") {
        tab = load_csv(path, magic_spec());
        standardize(tab);
      } else if (dataset == "titanic") {
        tab = preprocess_titanic(load_table(path));
      } else {
        throw ConfigError("data.dataset must be synthetic | magic | titanic");
      }
      if (static_cast<int>(tab.features.cols()) != set.dim())
        throw ConfigError("dataset dimension " + std::to_string(tab.features.cols()) +
                          " does not match constraint dimension " + std::to_string(set.dim()));
      const auto [train, test] = split(tab, {test_fraction, derive_seed(seed, 0x5117)});
      train_X = train.features;
      train_y = train.labels;
      test_X = test.features;
      test_y = test.labels;
    }
    const Potential pot = Potential::bayes_logistic(train_X, train_y);
    for (const auto& m : methods) {
      const AccuracyCurves c = logistic_accuracy_curves(pot, train_X, train_y, test_X, test_y,
                                                        set, m.field, base, n_chains, seed,
                                                        opt.n_threads);
      metrics.push_back({m.name, "accuracy_train", seed, -1, c.train.checkpoints,
                         c.train.values});
      metrics.push_back({m.name, "accuracy_test", seed, -1, c.test.checkpoints,
                         c.test.values});
    }
  }
  std::vector<std::pair<std::string, std::string>> headline;
  for (const auto& s : compare_methods(metrics))
    if (s.metric == "accuracy_test")
      headline.emplace_back(s.method + ".final_test_accuracy", fmt(s.mean.back()));
  finish_run(opt.out_dir, cfg, seeds, metrics, std::move(headline));
  return 0;
}

int run_variance(const Config& cfg, const RunOptions& opt) {
  const ConstraintSet set = set_from_config(cfg);
  const Potential pot = target_from_config(cfg, 0);
  SamplerConfig base = sampler_from_config(cfg);
  const auto methods = methods_from_config(cfg, set);
  const auto seeds = seeds_for_run(cfg, opt);
  const double burn_in = cfg.get_double_or("variance.burn_in", 0.2);
  const int coord = static_cast<int>(cfg.get_long_or("variance.observable_dim", 0));
  const Eigen::VectorXd x0 = cfg.has("experiment.x0")
                                 ? to_vec(cfg.get_vector("experiment.x0"))
                                 : Eigen::VectorXd(set.center());

  fs::create_directories(opt.out_dir);
  std::vector<MetricSeries> metrics;
  for (const std::uint64_t seed : seeds) {
    for (const auto& m : methods) {
      SamplerConfig c = base;
      c.seed = seed;
      auto series = coordinate_series(set, m.field, pot, x0, c, coord);
      series.erase(series.begin(),
                   series.begin() + static_cast<long>(burn_in * series.size()));
      const long n_batches =
          cfg.get_long_or("variance.n_batches",
                          static_cast<long>(std::sqrt(static_cast<double>(series.size()))));
      const VarianceEstimate est = asymptotic_variance_batch_means(series, n_batches);
      metrics.push_back({m.name, "sigma2", seed, -1, {base.n_steps}, {est.sigma2_hat}});
      metrics.push_back({m.name, "sigma2_stderr", seed, -1, {base.n_steps},
                         {est.standard_error}});
    }
  }
  std::vector<std::pair<std::string, std::string>> headline;
  for (const auto& s : compare_methods(metrics))
    if (s.metric == "sigma2")
      headline.emplace_back(s.method + ".sigma2", fmt(s.mean.back()));
  finish_run(opt.out_dir, cfg, seeds, metrics, std::move(headline));
  return 0;
}

int run_scgf(const Config& cfg, const RunOptions& opt) {
  const ConstraintSet set = set_from_config(cfg);
  const Potential pot = target_from_config(cfg, 0);
  const SamplerConfig base = sampler_from_config(cfg);
  const auto methods = methods_from_config(cfg, set);
  const auto seeds = seeds_for_run(cfg, opt);
  const double t = cfg.get_double_or("scgf.t", 50.0);
  const int n_chains = opt.chains_override > 0
                           ? opt.chains_override
                           : static_cast<int>(cfg.get_long_or("scgf.chains", 10000));

  std::vector<Observable> gs;
  std::vector<std::string> g_names;
  gs.emplace_back([](const Eigen::VectorXd&) { return 0.0; });
  g_names.emplace_back("zero");
  if (cfg.has("scgf.constants"))
    for (const double c : cfg.get_vector("scgf.constants")) {
      gs.emplace_back([c](const Eigen::VectorXd&) { return c; });
      g_names.push_back("const_" + fmt(c));
    }
  std::vector<double> dims = cfg.has("scgf.coordinates") ? cfg.get_vector("scgf.coordinates")
                                                         : std::vector<double>{0};
  for (const double dd : dims) {
    const int k = static_cast<int>(dd);
    gs.emplace_back([k](const Eigen::VectorXd& x) { return x[k]; });
    g_names.push_back("x" + std::to_string(k));
  }

  fs::create_directories(opt.out_dir);
  std::vector<MetricSeries> metrics;
  for (const std::uint64_t seed : seeds) {
    for (const auto& m : methods) {
      const auto ests = scgf_estimate_multi(set, pot, m.field, gs, t, base.eta, n_chains,
                                            seed, opt.n_threads);
      for (size_t j = 0; j < gs.size(); ++j) {
        metrics.push_back({m.name, "scgf_" + g_names[j], seed, -1,
                           {static_cast<long>(ests[j].t_horizon)}, {ests[j].lambda_hat}});
        metrics.push_back({m.name, "scgf_stderr_" + g_names[j], seed, -1,
                           {static_cast<long>(ests[j].t_horizon)},
                           {ests[j].standard_error}});
      }
    }
  }
  std::vector<std::pair<std::string, std::string>> headline;
  for (const auto& s : compare_methods(metrics))
    if (s.metric.rfind("scgf_stderr_", 0) != 0)
      headline.emplace_back(s.method + "." + s.metric, fmt(s.mean.back()));
  finish_run(opt.out_dir, cfg, seeds, metrics, std::move(headline));
  return 0;
}

int run_experiment(const Config& cfg, const RunOptions& opt) {
  const std::string kind = cfg.get_str("experiment.kind");
  if (kind == "validate") return run_validate(cfg, opt);
  if (kind == "toy") return run_toy(cfg, opt);
  if (kind == "linear") return run_linear(cfg, opt);
  if (kind == "logistic") return run_logistic(cfg, opt);
  if (kind == "variance") return run_variance(cfg, opt);
  if (kind == "scgf") return run_scgf(cfg, opt);
  throw ConfigError("experiment.kind must be one of validate|toy|linear|logistic|variance|scgf");
}

int check_samples(const Config& cfg, const std::string& run_dir, std::ostream& log) {
  const ConstraintSet set = set_from_config(cfg);
  bool all_ok = true;
  long files = 0;
  for (const auto& entry : fs::directory_iterator(run_dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("samples_", 0) != 0 && name != "reference.csv") continue;
    ++files;
    const Eigen::MatrixXd pts = read_samples_csv(entry.path().string());
    long bad = 0;
    for (long r = 0; r < pts.rows(); ++r)
      if (!set.contains(pts.row(r).transpose())) ++bad;
    log << name << ": " << pts.rows() << " rows, " << bad << " infeasible\n";
    all_ok = all_ok && bad == 0;
  }
  if (files == 0) {
    log << "no sample files found in " << run_dir << "\n";
    return 2;
  }
  return all_ok ? 0 : 1;
}

int print_manifest(const std::string& run_dir, std::ostream& log) {
  const fs::path man_path = fs::path(run_dir) / "manifest.txt";
  if (!fs::exists(man_path)) {
    log << "error: no manifest at " << man_path.string() << "\n";
    return 2;
  }
  int warnings = 0;
  for (const auto& [k, v] : read_manifest(man_path.string())) {
    log << k << " = " << v << "\n";
    if (k.rfind("hash.", 0) == 0) {
      const fs::path f = fs::path(run_dir) / k.substr(5);
      if (!fs::exists(f)) {
        log << "  warning: hashed file missing: " << f.filename().string() << "\n";
        ++warnings;
      } else if (hash_hex(fnv1a_file(f.string())) != v) {
        log << "  warning: hash mismatch for " << f.filename().string()
            << " (file changed since the run)\n";
        ++warnings;
      }
    }
  }
  if (warnings > 0) log << warnings << " warning(s)\n";
  return 0;
}

}  // namespace srnl
