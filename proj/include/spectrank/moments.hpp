#pragma once

#include <Eigen/Core>
#include <utility>

#include "spectrank/synth.hpp"

namespace spectrank::moments {

struct ResidualNorms {
  double frobenius = 0.0;
  double spectral = 0.0;
};

/// Pooled word frequencies: M1 = (sum_d c_d) / (sum_d L_d). Entries are
/// non-negative and sum to 1 within 1e-12.
Eigen::VectorXd empirical_m1(const synth::Corpus& corpus);

/// Ordered-word-pair average: per document, sum_{l != l'} x_l (x) x_l'
/// computed through the count identity c c^T - diag(c), weighted by
/// 1/(L_d (L_d - 1)) and averaged over D. Per-document contributions are
/// combined in a fixed pairwise tree so any reassociation (e.g. a future
/// parallel split) agrees with the serial sum to <= 1e-12 relative.
/// Requires every document length >= 2.
Eigen::MatrixXd lda_pair_mean(const synth::Corpus& corpus);

/// Second-order moment estimate: lda_pair_mean minus the rank-one
/// correction alpha0/(alpha0+1) * M1 M1^T. Requires alpha0 > 0. Callers
/// scanning several alpha0 values can compute the pair mean once and apply
/// lda_m2_from_pair_mean per candidate; the results are bit-identical.
Eigen::MatrixXd empirical_m2_lda(const synth::Corpus& corpus, double alpha0);
Eigen::MatrixXd lda_m2_from_pair_mean(const Eigen::MatrixXd& pair_mean,
                                      const Eigen::VectorXd& m1,
                                      double alpha0);

/// GMM second-order moment estimate (1/N) sum_i x_i x_i^T - sigma^2 I for
/// points stored one per row. The result need not be positive semidefinite.
Eigen::MatrixXd empirical_m2_gmm(const Eigen::MatrixXd& points, double sigma);

/// R = truth - empirical together with its Frobenius and spectral norms.
std::pair<Eigen::MatrixXd, ResidualNorms> residual(
    const Eigen::MatrixXd& empirical, const Eigen::MatrixXd& truth);

}  // namespace spectrank::moments
