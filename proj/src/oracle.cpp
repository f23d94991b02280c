#include "srnl/oracle.hpp"

#include <sstream>
#include <stdexcept>

#include "srnl/rng.hpp"

namespace srnl {

ReferenceSample rejection_sample(const ConstraintSet& set, const GaussianProposal& proposal,
                                 long n, std::uint64_t seed, long max_proposals_factor) {
  if (n < 1) throw std::invalid_argument("rejection_sample: n must be >= 1");
  const int d = set.dim();
  if (proposal.mean.size() != d || proposal.cov.rows() != d || proposal.cov.cols() != d)
    throw std::invalid_argument("rejection_sample: proposal dimension mismatch");
  Eigen::LLT<Eigen::MatrixXd> llt(proposal.cov);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("rejection_sample: proposal covariance must be positive-definite");
  const Eigen::MatrixXd L = llt.matrixL();

  ReferenceSample out;
  out.points.resize(n, d);
  out.seed = seed;
  {
    std::ostringstream desc;
    desc << "gaussian(mean=[" << proposal.mean.transpose() << "], cov diag=["
         << proposal.cov.diagonal().transpose() << "])";
    out.proposal = desc.str();
  }

  RngStream rng(seed);
  Eigen::VectorXd z(d), x(d);
  const long max_proposals = max_proposals_factor * n;
  long accepted = 0, proposed = 0;
  while (accepted < n) {
    if (proposed >= max_proposals)
      throw std::runtime_error(
          "rejection_sample: acceptance starvation (proposal barely overlaps K)");
    for (int i = 0; i < d; ++i) z[i] = rng.gaussian();
    x.noalias() = proposal.mean + L * z;
    ++proposed;
    if (set.contains(x)) out.points.row(accepted++) = x;
  }
  out.acceptance_rate = static_cast<double>(accepted) / static_cast<double>(proposed);
  return out;
}

std::pair<Eigen::VectorXd, Eigen::MatrixXd> moments(const ReferenceSample& sample) {
  const long n = sample.points.rows();
  if (n < 2) throw std::invalid_argument("moments: need at least 2 points");
  const Eigen::VectorXd mean = sample.points.colwise().mean();
  const Eigen::MatrixXd centered = sample.points.rowwise() - mean.transpose();
  const Eigen::MatrixXd cov =
      centered.transpose() * centered / static_cast<double>(n - 1);
  return {mean, cov};
}

}  // namespace srnl
