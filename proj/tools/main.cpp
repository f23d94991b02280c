#include <CLI11.hpp>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "srnl/experiments.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir = "run";
  std::vector<std::uint64_t> seeds;
  int chains = 0;
  int threads = 0;
};

void add_common(CLI::App* sub, CommonArgs& args, bool config_required = true) {
  auto* c = sub->add_option("--config", args.config_path, "experiment config file");
  if (config_required) c->required();
  sub->add_option("--out", args.out_dir, "output directory");
  sub->add_option("--seeds", args.seeds, "seed list (overrides experiment.seeds)")
      ->delimiter(',');
  sub->add_option("--chains", args.chains, "override sampler.chains");
  sub->add_option("--threads", args.threads, "worker threads (0 = hardware)");
}

int dispatch(const std::string& kind, const CommonArgs& args) {
  srnl::Config cfg = srnl::Config::from_file(args.config_path);
  if (!kind.empty()) cfg.set("experiment.kind", kind);
  srnl::RunOptions opt;
  opt.out_dir = args.out_dir;
  opt.seeds = args.seeds;
  opt.n_threads = args.threads;
  opt.chains_override = args.chains;
  return srnl::run_experiment(cfg, opt);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constrained sampling experiments: reflected and skew-reflected "
               "non-reversible Langevin Monte Carlo"};
  app.require_subcommand(1);

  CommonArgs validate_args, toy_args, linear_args, logistic_args, variance_args, scgf_args;
  auto* sub_validate =
      app.add_subcommand("validate", "check skew-field structural assumptions");
  add_common(sub_validate, validate_args);
  auto* sub_toy = app.add_subcommand("toy", "truncated-Gaussian W1 study");
  add_common(sub_toy, toy_args);
  auto* sub_linear = app.add_subcommand("linear", "constrained Bayesian linear regression");
  add_common(sub_linear, linear_args);
  auto* sub_logistic =
      app.add_subcommand("logistic", "constrained Bayesian logistic regression");
  add_common(sub_logistic, logistic_args);
  auto* sub_variance = app.add_subcommand("variance", "batch-means asymptotic variance");
  add_common(sub_variance, variance_args);
  auto* sub_scgf = app.add_subcommand("scgf", "cumulant generating function estimates");
  add_common(sub_scgf, scgf_args);

  CommonArgs check_args;
  std::string check_dir;
  auto* sub_check = app.add_subcommand("check-samples",
                                       "re-validate feasibility of emitted sample files");
  add_common(sub_check, check_args);
  sub_check->add_option("--dir", check_dir, "run directory")->required();

  std::string manifest_dir;
  auto* sub_manifest = app.add_subcommand("manifest", "print and verify a run manifest");
  sub_manifest->add_option("--dir", manifest_dir, "run directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (sub_validate->parsed()) return dispatch("validate", validate_args);
    if (sub_toy->parsed()) return dispatch("toy", toy_args);
    if (sub_linear->parsed()) return dispatch("linear", linear_args);
    if (sub_logistic->parsed()) return dispatch("logistic", logistic_args);
    if (sub_variance->parsed()) return dispatch("variance", variance_args);
    if (sub_scgf->parsed()) return dispatch("scgf", scgf_args);
    if (sub_check->parsed()) {
      srnl::Config cfg = srnl::Config::from_file(check_args.config_path);
      return srnl::check_samples(cfg, check_dir, std::cout);
    }
    if (sub_manifest->parsed()) return srnl::print_manifest(manifest_dir, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
