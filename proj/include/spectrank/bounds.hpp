#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>

#include "spectrank/spectra.hpp"
#include "spectrank/synth.hpp"

namespace spectrank::bounds {

/// Failure-probability budgets. delta feeds the moment-concentration radius
/// delta_r; delta1/delta2/delta3 split the spectral-structure bound between
/// its three probability terms. t is the Gaussian-matrix deviation parameter
/// for the GMM bound; the 0 default resolves to sqrt(2 log(2/delta3)) so the
/// 2 exp(-t^2/2) term is folded into delta3.
struct ConfidenceParams {
  double delta = 0.05;
  double delta1 = 0.05 / 3.0;
  double delta2 = 0.05 / 3.0;
  double delta3 = 0.05 / 3.0;
  double t = 0.0;

  /// Single budget split evenly: delta = total, delta_i = total/3.
  static ConfidenceParams split(double total);
  double t_value() const;
  void validate() const;
};

/// A bound that may be uninformative: a denominator clamp max{0+, .} or a
/// (1 - delta') <= 0 factor yields vacuous=true with the sentinel value
/// (+inf for upper bounds, 0 for lower bounds). Vacuity is an expected
/// result state at small V*beta, never an exception.
struct BoundValue {
  double value = 0.0;
  bool vacuous = false;
};

struct LdaVarianceBound {
  double offdiag = 0.0;  // bound on E Var[R_ij], i != j
  double diag = 0.0;     // bound on E Var[R_ii]
  double frob_sq = 0.0;  // V(V-1)*offdiag + V*diag
};

/// Entrywise variance bounds for R = M2 - M2_hat with higher-order terms
/// dropped: offdiag = 1/(D L^2 V^2) + 2/(D V^4), diag = 1/(D L^2 V) +
/// 2/(D V^4).
LdaVarianceBound variance_bound_lda(int64_t num_docs, int64_t doc_length,
                                    int64_t vocab);

/// Concentration radius delta_r = (1/sqrt(D delta)) sqrt(2/L^2 + 2/V^2):
/// with probability at least 1 - delta, every |sigma_i(M2_hat) -
/// sigma_i(M2)| and ||R||_F lie below it.
double delta_r_lda(int64_t num_docs, int64_t doc_length, int64_t vocab,
                   double delta);

/// delta' = sqrt(log(K/delta3) K (beta + 2 log(K/delta2))^2 / (V beta)).
/// Values >= 1 are returned as-is; the sigma_K bound clamps downstream.
double delta_prime(int32_t num_topics, int64_t vocab, double beta,
                   double delta2, double delta3);

/// Coefficient recipe for the spectral-structure bounds: Split uses the
/// delta1/delta2/delta3 budgets; FixedDeltaPrime is the alternative recipe
/// with delta' pinned at 0.1 and c2 drawn from the single delta budget.
enum class SpectralRecipe { kSplit, kFixedDeltaPrime };

/// Upper bound on sigma_1(M2) for symmetric alpha:
/// (alpha/(alpha0(alpha0+1))) (1+delta') V (beta + K beta^2) /
/// max{0+, V beta - sqrt(2 V beta log(K/delta1))}^2.
/// Vacuous (+inf) when the denominator clamps.
BoundValue sigma1_upper_lda(int32_t num_topics, int64_t vocab, double alpha,
                            double beta, const ConfidenceParams& conf,
                            SpectralRecipe recipe = SpectralRecipe::kSplit);

/// Lower bound on sigma_K(M2) for symmetric alpha:
/// (alpha/(alpha0(alpha0+1))) (1-delta') V beta /
/// (V beta + 2 sqrt(V beta) log(K/delta1))^2, clamped to 0 (vacuous) when
/// delta' >= 1.
BoundValue sigmaK_lower_lda(int32_t num_topics, int64_t vocab, double alpha,
                            double beta, const ConfidenceParams& conf,
                            SpectralRecipe recipe = SpectralRecipe::kSplit);

/// Number of singular values strictly above delta_r; with probability at
/// least 1 - delta the true K is at least this.
int k_lower_bound(const spectra::Spectrum& spectrum, double delta_r);

struct KUpperResult {
  int32_t k = 0;
  bool vacuous = false;  // empty feasible set
  // The scan threshold sigma1_bar(K') + delta_r was not non-increasing (or
  // carried no information because every candidate was vacuous), so "max
  // feasible K'" may overshoot.
  bool monotonicity_warning = false;
};

/// Scans K' = 1..k_max for the largest candidate with sigma1_hat <=
/// sigma1_bar(K') + delta_r; vacuous sigma1_bar makes a candidate feasible.
KUpperResult k_upper_bound_lda(double sigma1_hat, int64_t num_docs,
                               int64_t doc_length, int64_t vocab, double alpha,
                               double beta, const ConfidenceParams& conf,
                               int32_t k_max = 200,
                               SpectralRecipe recipe = SpectralRecipe::kSplit);

/// Same scan, but alpha0 = K' * alpha is folded back into the moment
/// estimate at every candidate: sigma_1(M2_hat(alpha0(K'))) is recomputed
/// from the corpus instead of being fixed. This addresses the circularity of
/// alpha0 = K alpha depending on the unknown K.
KUpperResult k_upper_bound_lda_per_candidate(
    const synth::Corpus& corpus, double alpha, double beta,
    const ConfidenceParams& conf, int32_t k_max = 200,
    SpectralRecipe recipe = SpectralRecipe::kSplit);

/// GMM concentration radius (sigma m / sqrt(N delta)) *
/// sqrt(2 sigma_mu^2 + ((m+1)/m) sigma^2).
double delta_r_gmm(int64_t num_points, int32_t dim, double sigma,
                   double sigma_mu, double delta);

struct GmmKBounds {
  int32_t k_lower = 0;
  KUpperResult k_upper;
};

/// K_l by thresholding at the GMM delta_r; K_u as the maximal K' <= k_max
/// with sigma1_hat <= (sigma_mu^2/K') (alpha + 2 log(K'/delta1))
/// (sqrt(m)+sqrt(K')+t)^2 / max{0+, alpha - sqrt(2 alpha log(1/delta2)/K')}
/// + delta_r. A clamped denominator makes that K' vacuously feasible.
GmmKBounds k_bounds_gmm(const spectra::Spectrum& spectrum,
                        const synth::GmmParams& params, int64_t num_points,
                        const ConfidenceParams& conf, int32_t k_max = 200);

/// Report-time upper bound on sigma_1(M2) for the GMM at a fixed K.
BoundValue sigma1_upper_gmm(int32_t num_components, int32_t dim,
                            double sigma_mu, double alpha,
                            const ConfidenceParams& conf);

/// w_min sigma_mu^2 (sqrt(m) - sqrt(K) - t)^2, clamped to 0 (vacuous) when
/// sqrt(m) - sqrt(K) - t <= 0.
BoundValue sigmaK_lower_gmm(double w_min, double sigma_mu, int32_t dim,
                            int32_t num_components, double t);

/// Pr(X >= shape + c sqrt(shape)) <= exp(-(c/2) min(c/2, sqrt(shape))) for
/// X ~ Gamma(shape, 1).
double gamma_tail_upper(double shape, double c);

/// Pr(X <= shape - c sqrt(shape)) <= exp(-c^2/2).
double gamma_tail_lower(double shape, double c);

struct ChiSquareTails {
  double upper_threshold = 0.0;  // dof + 2 sqrt(dof x) + 2x
  double lower_threshold = 0.0;  // dof - 2 sqrt(dof x)
};

/// Massart-Laurent thresholds; each tail event has probability <= exp(-x).
ChiSquareTails chi_square_tail_thresholds(int64_t dof, double x);

struct GammaMaxMinBounds {
  double max_threshold = 0.0;  // shape + c sqrt(shape)
  double min_threshold = 0.0;  // shape - c sqrt(shape)
  double max_prob = 0.0;       // n exp(-(c/2) min(c/2, sqrt(shape)))
  double min_prob = 0.0;       // n exp(-c^2/2)
};

/// Union bound over n i.i.d. Gamma(shape, 1) draws.
GammaMaxMinBounds gamma_max_min_bounds(int64_t n, double shape, double c);

struct DirichletBound {
  double value = 0.0;
  bool vacuous = false;
  // For the max bound: n > delta1 * e^shape, the regime in which the stated
  // delta1 accounting is exact. For the min bound: delta2 > e^(-2*shape).
  // The value is still a bound when false, at a weakened confidence level.
  bool condition_met = true;
};

/// Upper bound on the largest coordinate of Dir(shape * 1_n):
/// (1/n) (shape + 2 log(n/delta1)) / (shape - sqrt(2 shape log(1/delta2)/n)).
/// Vacuous when the denominator is <= 0 or the value exceeds 1.
DirichletBound dirichlet_max_upper(int64_t n, double shape, double delta1,
                                   double delta2);

/// Lower bound on the smallest coordinate of Dir(shape * 1_n):
/// (1/n) (shape - sqrt(2 shape log(n/delta1))) /
/// (shape + sqrt(2 shape log(1/delta2)/n)), 0 (vacuous) when the numerator
/// is non-positive; informative only for large shape.
DirichletBound dirichlet_min_lower(int64_t n, double shape, double delta1,
                                   double delta2);

enum class ModelKind { kLda, kGmm };

/// Everything the pipeline produced for one dataset, plus the inputs it was
/// produced from.
struct BoundReport {
  ModelKind model = ModelKind::kLda;
  ConfidenceParams confidence;

  double delta_r = 0.0;
  double delta_prime_value = 0.0;  // LDA only
  BoundValue sigma1_bar;
  BoundValue sigmaK_under;
  double sigma1_hat = 0.0;
  double sigmaK_hat = 0.0;      // K-th singular value of the empirical moment
  double sigmaK1_hat = 0.0;     // (K+1)-th, 0 when K = dimension
  int32_t k_lower = 0;
  KUpperResult k_upper;

  // Echoed inputs; fields for the other model stay zero.
  int64_t num_docs = 0;
  int64_t doc_length = 0;  // min over documents
  // False when lengths vary; the concentration radius then uses the minimum
  // length, the conservative choice.
  bool doc_length_uniform = true;
  int32_t vocab = 0;
  int64_t num_points = 0;
  int32_t dim = 0;
  int32_t num_components = 0;  // K assumed for the spectral-structure bounds
  double alpha = 0.0;
  double beta = 0.0;
  double sigma = 0.0;
  double sigma_mu = 0.0;
};

/// Flat key=value text block, one pair per line.
std::string to_key_value(const BoundReport& report);

struct LdaReportOptions {
  int32_t k_max = 200;
  SpectralRecipe recipe = SpectralRecipe::kSplit;
  bool per_candidate_alpha0 = false;
  double alpha0_override = 0.0;  // <= 0 selects K * alpha
};

/// Full LDA pipeline: empirical moments -> spectrum -> bounds.
BoundReport lda_bound_report(const synth::Corpus& corpus, int32_t num_topics,
                             double alpha, double beta,
                             const ConfidenceParams& conf,
                             const LdaReportOptions& options = {});

struct GmmReportOptions {
  int32_t k_max = 200;
  double w_min = 0.0;  // <= 0: unknown, sigmaK_under reported vacuous
};

/// Full GMM pipeline for points stored one per row.
BoundReport gmm_bound_report(const Eigen::MatrixXd& points,
                             const synth::GmmParams& params,
                             const ConfidenceParams& conf,
                             const GmmReportOptions& options = {});

}  // namespace spectrank::bounds
