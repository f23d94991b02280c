#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>

#include "srnl/geometry.hpp"

namespace srnl {

// Unconstrained Gaussian proposal N(mean, cov). When the proposal density is
// proportional to the target's unconstrained factor, accept/reject against K
// yields exact i.i.d. draws from the truncated target.
struct GaussianProposal {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;

  static GaussianProposal standard(int dim) {
    return {Eigen::VectorXd::Zero(dim), Eigen::MatrixXd::Identity(dim, dim)};
  }
  static GaussianProposal diagonal(const Eigen::VectorXd& variances) {
    return {Eigen::VectorXd::Zero(variances.size()),
            Eigen::MatrixXd(variances.asDiagonal())};
  }
};

struct ReferenceSample {
  Eigen::MatrixXd points;  // n x d, every row feasible
  double acceptance_rate = 0.0;
  std::string proposal;
  std::uint64_t seed = 0;
};

// Rejection sampling: propose from the Gaussian, discard infeasible draws.
// Errors out if fewer than n accepts arrive within max_proposals_factor * n
// proposals (vanishing overlap between proposal and K).
ReferenceSample rejection_sample(const ConstraintSet& set, const GaussianProposal& proposal,
                                 long n, std::uint64_t seed,
                                 long max_proposals_factor = 1000);

// Sample mean and unbiased sample covariance.
std::pair<Eigen::VectorXd, Eigen::MatrixXd> moments(const ReferenceSample& sample);

}  // namespace srnl
