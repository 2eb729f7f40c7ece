#include "spectrank/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "spectrank/errors.hpp"
#include "spectrank/io.hpp"
#include "spectrank/moments.hpp"

namespace spectrank::bounds {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_probability(double p, const char* name) {
  if (!(p > 0.0 && p < 1.0)) {
    throw ParamError(std::string(name) + " must lie in (0, 1)");
  }
}

void check_positive(double v, const char* name) {
  if (!(v > 0.0)) {
    throw ParamError(std::string(name) + " must be > 0");
  }
}

// Prefactor alpha_max/(alpha0 (alpha0+1)) with symmetric alpha, alpha0 = K a.
double symmetric_prefactor(int32_t num_topics, double alpha) {
  const double alpha0 = static_cast<double>(num_topics) * alpha;
  return alpha / (alpha0 * (alpha0 + 1.0));
}

struct ScanState {
  double previous_threshold = kInf;
  int32_t max_feasible = -1;
  bool all_vacuous = true;
  bool warn = false;

  void observe(int32_t candidate, double sigma1_hat, double threshold,
               bool vacuous) {
    if (!vacuous) {
      all_vacuous = false;
    }
    if (threshold > previous_threshold) {
      warn = true;
    }
    previous_threshold = threshold;
    if (sigma1_hat <= threshold) {
      max_feasible = candidate;
    }
  }

  KUpperResult finish() const {
    KUpperResult out;
    out.vacuous = max_feasible < 0;
    out.k = out.vacuous ? 0 : max_feasible;
    out.monotonicity_warning = warn || all_vacuous;
    return out;
  }
};

}  // namespace

ConfidenceParams ConfidenceParams::split(double total) {
  check_probability(total, "delta");
  ConfidenceParams conf;
  conf.delta = total;
  conf.delta1 = conf.delta2 = conf.delta3 = total / 3.0;
  conf.t = 0.0;
  return conf;
}

double ConfidenceParams::t_value() const {
  if (t > 0.0) {
    return t;
  }
  return std::sqrt(2.0 * std::log(2.0 / delta3));
}

void ConfidenceParams::validate() const {
  check_probability(delta, "delta");
  check_probability(delta1, "delta1");
  check_probability(delta2, "delta2");
  check_probability(delta3, "delta3");
  if (t < 0.0) {
    throw ParamError("t must be >= 0 (0 selects the default)");
  }
}

LdaVarianceBound variance_bound_lda(int64_t num_docs, int64_t doc_length,
                                    int64_t vocab) {
  if (num_docs < 1 || doc_length < 2 || vocab < 2) {
    throw ParamError("variance_bound_lda: require D >= 1, L >= 2, V >= 2");
  }
  const double d = static_cast<double>(num_docs);
  const double l = static_cast<double>(doc_length);
  const double v = static_cast<double>(vocab);
  LdaVarianceBound out;
  out.offdiag = 1.0 / (d * l * l * v * v) + 2.0 / (d * v * v * v * v);
  out.diag = 1.0 / (d * l * l * v) + 2.0 / (d * v * v * v * v);
  out.frob_sq = v * (v - 1.0) * out.offdiag + v * out.diag;
  return out;
}

double delta_r_lda(int64_t num_docs, int64_t doc_length, int64_t vocab,
                   double delta) {
  if (num_docs < 1 || doc_length < 2 || vocab < 2) {
    throw ParamError("delta_r_lda: require D >= 1, L >= 2, V >= 2");
  }
  check_probability(delta, "delta");
  const double l = static_cast<double>(doc_length);
  const double v = static_cast<double>(vocab);
  return std::sqrt(2.0 / (l * l) + 2.0 / (v * v)) /
         std::sqrt(static_cast<double>(num_docs) * delta);
}

double delta_prime(int32_t num_topics, int64_t vocab, double beta,
                   double delta2, double delta3) {
  if (num_topics < 1 || vocab < 1) {
    throw ParamError("delta_prime: require K >= 1 and V >= 1");
  }
  check_positive(beta, "beta");
  check_probability(delta2, "delta2");
  check_probability(delta3, "delta3");
  const double k = static_cast<double>(num_topics);
  const double v = static_cast<double>(vocab);
  const double inner = beta + 2.0 * std::log(k / delta2);
  return std::sqrt(std::log(k / delta3) * k * inner * inner / (v * beta));
}

BoundValue sigma1_upper_lda(int32_t num_topics, int64_t vocab, double alpha,
                            double beta, const ConfidenceParams& conf,
                            SpectralRecipe recipe) {
  if (num_topics < 1 || vocab < 1) {
    throw ParamError("sigma1_upper_lda: require K >= 1 and V >= 1");
  }
  check_positive(alpha, "alpha");
  check_positive(beta, "beta");
  conf.validate();
  const double k = static_cast<double>(num_topics);
  const double vb = static_cast<double>(vocab) * beta;
  double dp;
  double c2_term;  // sqrt(2 V beta log(K/delta1))
  double inflation;
  if (recipe == SpectralRecipe::kSplit) {
    dp = delta_prime(num_topics, vocab, beta, conf.delta2, conf.delta3);
    c2_term = std::sqrt(2.0 * vb * std::log(k / conf.delta1));
    inflation = 1.0 + dp;
  } else {
    dp = 0.1;
    c2_term = std::sqrt(2.0 * vb * std::log(k / conf.delta));
    inflation = 1.1;
  }
  const double root = vb - c2_term;
  if (root <= 0.0) {
    return {kInf, true};
  }
  const double numerator =
      inflation * static_cast<double>(vocab) * (beta + k * beta * beta);
  return {symmetric_prefactor(num_topics, alpha) * numerator / (root * root),
          false};
}

BoundValue sigmaK_lower_lda(int32_t num_topics, int64_t vocab, double alpha,
                            double beta, const ConfidenceParams& conf,
                            SpectralRecipe recipe) {
  if (num_topics < 1 || vocab < 1) {
    throw ParamError("sigmaK_lower_lda: require K >= 1 and V >= 1");
  }
  check_positive(alpha, "alpha");
  check_positive(beta, "beta");
  conf.validate();
  const double k = static_cast<double>(num_topics);
  const double vb = static_cast<double>(vocab) * beta;
  double deflation;
  double denom_root;
  if (recipe == SpectralRecipe::kSplit) {
    const double dp = delta_prime(num_topics, vocab, beta, conf.delta2,
                                  conf.delta3);
    if (dp >= 1.0) {
      return {0.0, true};
    }
    deflation = 1.0 - dp;
    denom_root = vb + 2.0 * std::sqrt(vb) * std::log(k / conf.delta1);
  } else {
    deflation = 0.9;
    denom_root = vb + 2.0 * std::sqrt(vb * std::log(k / conf.delta));
  }
  return {symmetric_prefactor(num_topics, alpha) * deflation * vb /
              (denom_root * denom_root),
          false};
}

int k_lower_bound(const spectra::Spectrum& spectrum, double delta_r) {
  if (!(delta_r >= 0.0)) {
    throw ParamError("k_lower_bound: delta_r must be >= 0");
  }
  return spectra::count_above_threshold(spectrum, delta_r);
}

KUpperResult k_upper_bound_lda(double sigma1_hat, int64_t num_docs,
                               int64_t doc_length, int64_t vocab, double alpha,
                               double beta, const ConfidenceParams& conf,
                               int32_t k_max, SpectralRecipe recipe) {
  if (!(sigma1_hat >= 0.0)) {
    throw ParamError("k_upper_bound_lda: sigma1_hat must be >= 0");
  }
  if (k_max < 1) {
    throw ParamError("k_upper_bound_lda: k_max must be >= 1");
  }
  const double dr = delta_r_lda(num_docs, doc_length, vocab, conf.delta);
  ScanState scan;
  for (int32_t candidate = 1; candidate <= k_max; ++candidate) {
    const BoundValue s1 = sigma1_upper_lda(candidate, vocab, alpha, beta,
                                           conf, recipe);
    const double threshold = s1.vacuous ? kInf : s1.value + dr;
    scan.observe(candidate, sigma1_hat, threshold, s1.vacuous);
  }
  return scan.finish();
}

KUpperResult k_upper_bound_lda_per_candidate(const synth::Corpus& corpus,
                                             double alpha, double beta,
                                             const ConfidenceParams& conf,
                                             int32_t k_max,
                                             SpectralRecipe recipe) {
  if (k_max < 1) {
    throw ParamError("k_upper_bound_lda_per_candidate: k_max must be >= 1");
  }
  check_positive(alpha, "alpha");
  const double dr = delta_r_lda(static_cast<int64_t>(corpus.docs.size()),
                                corpus.min_doc_length(), corpus.vocab,
                                conf.delta);
  // Only the rank-one correction changes with the candidate, so the pair
  // term is accumulated once.
  const Eigen::MatrixXd pair_mean = moments::lda_pair_mean(corpus);
  const Eigen::VectorXd m1 = moments::empirical_m1(corpus);
  ScanState scan;
  for (int32_t candidate = 1; candidate <= k_max; ++candidate) {
    const double alpha0 = static_cast<double>(candidate) * alpha;
    const Eigen::MatrixXd m2 =
        moments::lda_m2_from_pair_mean(pair_mean, m1, alpha0);
    const spectra::Spectrum sv = spectra::singular_values_symmetric(m2);
    const double sigma1_hat = sv.values.empty() ? 0.0 : sv.values.front();
    const BoundValue s1 = sigma1_upper_lda(candidate, corpus.vocab, alpha,
                                           beta, conf, recipe);
    const double threshold = s1.vacuous ? kInf : s1.value + dr;
    scan.observe(candidate, sigma1_hat, threshold, s1.vacuous);
  }
  return scan.finish();
}

double delta_r_gmm(int64_t num_points, int32_t dim, double sigma,
                   double sigma_mu, double delta) {
  if (num_points < 1 || dim < 1) {
    throw ParamError("delta_r_gmm: require N >= 1 and m >= 1");
  }
  check_positive(sigma, "sigma");
  if (sigma_mu < 0.0) {
    throw ParamError("delta_r_gmm: sigma_mu must be >= 0");
  }
  check_probability(delta, "delta");
  const double m = static_cast<double>(dim);
  return sigma * m / std::sqrt(static_cast<double>(num_points) * delta) *
         std::sqrt(2.0 * sigma_mu * sigma_mu + (m + 1.0) / m * sigma * sigma);
}

BoundValue sigma1_upper_gmm(int32_t num_components, int32_t dim,
                            double sigma_mu, double alpha,
                            const ConfidenceParams& conf) {
  if (num_components < 1 || dim < 1) {
    throw ParamError("sigma1_upper_gmm: require K >= 1 and m >= 1");
  }
  check_positive(sigma_mu, "sigma_mu");
  check_positive(alpha, "alpha");
  conf.validate();
  const double k = static_cast<double>(num_components);
  const double denom =
      alpha - std::sqrt(2.0 * alpha * std::log(1.0 / conf.delta2) / k);
  if (denom <= 0.0) {
    return {kInf, true};
  }
  const double root =
      std::sqrt(static_cast<double>(dim)) + std::sqrt(k) + conf.t_value();
  const double value = sigma_mu * sigma_mu / k *
                       (alpha + 2.0 * std::log(k / conf.delta1)) *
                       (root * root) / denom;
  return {value, false};
}

GmmKBounds k_bounds_gmm(const spectra::Spectrum& spectrum,
                        const synth::GmmParams& params, int64_t num_points,
                        const ConfidenceParams& conf, int32_t k_max) {
  if (k_max < 1) {
    throw ParamError("k_bounds_gmm: k_max must be >= 1");
  }
  conf.validate();
  const double dr = delta_r_gmm(num_points, params.dim, params.sigma,
                                params.sigma_mu, conf.delta);
  GmmKBounds out;
  out.k_lower = k_lower_bound(spectrum, dr);
  const double sigma1_hat =
      spectrum.values.empty() ? 0.0 : spectrum.values.front();
  ScanState scan;
  for (int32_t candidate = 1; candidate <= k_max; ++candidate) {
    const BoundValue s1 = sigma1_upper_gmm(candidate, params.dim,
                                           params.sigma_mu, params.alpha,
                                           conf);
    const double threshold = s1.vacuous ? kInf : s1.value + dr;
    scan.observe(candidate, sigma1_hat, threshold, s1.vacuous);
  }
  out.k_upper = scan.finish();
  return out;
}

BoundValue sigmaK_lower_gmm(double w_min, double sigma_mu, int32_t dim,
                            int32_t num_components, double t) {
  if (!(w_min > 0.0 && w_min <= 1.0)) {
    throw ParamError("sigmaK_lower_gmm: w_min must lie in (0, 1]");
  }
  check_positive(sigma_mu, "sigma_mu");
  if (num_components < 1 || dim < num_components) {
    throw ParamError("sigmaK_lower_gmm: require 1 <= K <= m");
  }
  if (!(t > 0.0)) {
    throw ParamError("sigmaK_lower_gmm: t must be > 0");
  }
  const double root = std::sqrt(static_cast<double>(dim)) -
                      std::sqrt(static_cast<double>(num_components)) - t;
  if (root <= 0.0) {
    return {0.0, true};
  }
  return {w_min * sigma_mu * sigma_mu * root * root, false};
}

double gamma_tail_upper(double shape, double c) {
  check_positive(shape, "shape");
  check_positive(c, "c");
  const double half = c / 2.0;
  return std::exp(-half * std::min(half, std::sqrt(shape)));
}

double gamma_tail_lower(double shape, double c) {
  check_positive(shape, "shape");
  if (c < 0.0) {
    throw ParamError("gamma_tail_lower: c must be >= 0");
  }
  return std::exp(-c * c / 2.0);
}

ChiSquareTails chi_square_tail_thresholds(int64_t dof, double x) {
  if (dof < 1) {
    throw ParamError("chi_square_tail_thresholds: dof must be >= 1");
  }
  if (x < 0.0) {
    throw ParamError("chi_square_tail_thresholds: x must be >= 0");
  }
  const double d = static_cast<double>(dof);
  ChiSquareTails out;
  out.upper_threshold = d + 2.0 * std::sqrt(d * x) + 2.0 * x;
  out.lower_threshold = d - 2.0 * std::sqrt(d * x);
  return out;
}

GammaMaxMinBounds gamma_max_min_bounds(int64_t n, double shape, double c) {
  if (n < 1) {
    throw ParamError("gamma_max_min_bounds: n must be >= 1");
  }
  check_positive(shape, "shape");
  check_positive(c, "c");
  GammaMaxMinBounds out;
  const double root = c * std::sqrt(shape);
  out.max_threshold = shape + root;
  out.min_threshold = shape - root;
  out.max_prob = static_cast<double>(n) * gamma_tail_upper(shape, c);
  out.min_prob = static_cast<double>(n) * gamma_tail_lower(shape, c);
  return out;
}

DirichletBound dirichlet_max_upper(int64_t n, double shape, double delta1,
                                   double delta2) {
  if (n < 1) {
    throw ParamError("dirichlet_max_upper: n must be >= 1");
  }
  check_positive(shape, "shape");
  check_probability(delta1, "delta1");
  check_probability(delta2, "delta2");
  const double nn = static_cast<double>(n);
  DirichletBound out;
  out.condition_met = std::log(nn / delta1) > shape;
  const double denom =
      shape - std::sqrt(2.0 * shape * std::log(1.0 / delta2) / nn);
  if (denom <= 0.0) {
    out.value = 1.0;
    out.vacuous = true;
    return out;
  }
  out.value = (shape + 2.0 * std::log(nn / delta1)) / (nn * denom);
  if (out.value > 1.0) {
    out.value = 1.0;
    out.vacuous = true;
  }
  return out;
}

DirichletBound dirichlet_min_lower(int64_t n, double shape, double delta1,
                                   double delta2) {
  if (n < 1) {
    throw ParamError("dirichlet_min_lower: n must be >= 1");
  }
  check_positive(shape, "shape");
  check_probability(delta1, "delta1");
  check_probability(delta2, "delta2");
  const double nn = static_cast<double>(n);
  DirichletBound out;
  out.condition_met = delta2 > std::exp(-2.0 * shape);
  const double numerator =
      shape - std::sqrt(2.0 * shape * std::log(nn / delta1));
  if (numerator <= 0.0) {
    out.value = 0.0;
    out.vacuous = true;
    return out;
  }
  const double denom =
      shape + std::sqrt(2.0 * shape * std::log(1.0 / delta2) / nn);
  out.value = numerator / (nn * denom);
  return out;
}

namespace {

void append_kv(std::string& text, const char* key, const std::string& value) {
  text += key;
  text += '=';
  text += value;
  text += '\n';
}

void append_kv(std::string& text, const char* key, double value) {
  append_kv(text, key, io::format_double(value));
}

void append_kv(std::string& text, const char* key, int64_t value) {
  append_kv(text, key, std::to_string(value));
}

}  // namespace

std::string to_key_value(const BoundReport& r) {
  std::string text;
  append_kv(text, "model", r.model == ModelKind::kLda ? "lda" : "gmm");
  if (r.model == ModelKind::kLda) {
    append_kv(text, "D", r.num_docs);
    append_kv(text, "L", r.doc_length);
    append_kv(text, "V", static_cast<int64_t>(r.vocab));
    append_kv(text, "K", static_cast<int64_t>(r.num_components));
    append_kv(text, "alpha", r.alpha);
    append_kv(text, "beta", r.beta);
  } else {
    append_kv(text, "N", r.num_points);
    append_kv(text, "m", static_cast<int64_t>(r.dim));
    append_kv(text, "K", static_cast<int64_t>(r.num_components));
    append_kv(text, "sigma", r.sigma);
    append_kv(text, "sigma_mu", r.sigma_mu);
    append_kv(text, "alpha", r.alpha);
  }
  append_kv(text, "delta", r.confidence.delta);
  append_kv(text, "delta1", r.confidence.delta1);
  append_kv(text, "delta2", r.confidence.delta2);
  append_kv(text, "delta3", r.confidence.delta3);
  append_kv(text, "t", r.confidence.t_value());
  append_kv(text, "delta_r", r.delta_r);
  if (r.model == ModelKind::kLda) {
    append_kv(text, "delta_prime", r.delta_prime_value);
    append_kv(text, "L_uniform",
              static_cast<int64_t>(r.doc_length_uniform ? 1 : 0));
  }
  append_kv(text, "sigma1_hat", r.sigma1_hat);
  append_kv(text, "sv_K", r.sigmaK_hat);
  append_kv(text, "sv_K_plus_1", r.sigmaK1_hat);
  append_kv(text, "sigma1_bar", r.sigma1_bar.value);
  append_kv(text, "sigma1_bar_vacuous",
            static_cast<int64_t>(r.sigma1_bar.vacuous ? 1 : 0));
  append_kv(text, "sigmaK_under", r.sigmaK_under.value);
  append_kv(text, "sigmaK_under_vacuous",
            static_cast<int64_t>(r.sigmaK_under.vacuous ? 1 : 0));
  append_kv(text, "k_lower", static_cast<int64_t>(r.k_lower));
  append_kv(text, "k_upper", static_cast<int64_t>(r.k_upper.k));
  append_kv(text, "k_upper_vacuous",
            static_cast<int64_t>(r.k_upper.vacuous ? 1 : 0));
  append_kv(text, "k_upper_warning",
            static_cast<int64_t>(r.k_upper.monotonicity_warning ? 1 : 0));
  return text;
}

BoundReport lda_bound_report(const synth::Corpus& corpus, int32_t num_topics,
                             double alpha, double beta,
                             const ConfidenceParams& conf,
                             const LdaReportOptions& options) {
  if (num_topics < 1) {
    throw ParamError("lda_bound_report: num_topics must be >= 1");
  }
  check_positive(alpha, "alpha");
  check_positive(beta, "beta");
  conf.validate();

  BoundReport report;
  report.model = ModelKind::kLda;
  report.confidence = conf;
  report.num_docs = static_cast<int64_t>(corpus.docs.size());
  report.doc_length = corpus.min_doc_length();
  int64_t max_length = 0;
  for (const auto& doc : corpus.docs) {
    max_length = std::max(max_length, doc.length);
  }
  report.doc_length_uniform = max_length == report.doc_length;
  report.vocab = corpus.vocab;
  report.num_components = num_topics;
  report.alpha = alpha;
  report.beta = beta;

  const double alpha0 = options.alpha0_override > 0.0
                            ? options.alpha0_override
                            : static_cast<double>(num_topics) * alpha;
  const Eigen::MatrixXd m2 = moments::empirical_m2_lda(corpus, alpha0);
  const spectra::Spectrum sv = spectra::singular_values_symmetric(m2);
  const auto dim = static_cast<int32_t>(sv.values.size());
  report.sigma1_hat = sv.values.front();
  report.sigmaK_hat = num_topics <= dim
                          ? sv.values[static_cast<size_t>(num_topics - 1)]
                          : 0.0;
  report.sigmaK1_hat = num_topics < dim
                           ? sv.values[static_cast<size_t>(num_topics)]
                           : 0.0;

  report.delta_r = delta_r_lda(report.num_docs, report.doc_length,
                               report.vocab, conf.delta);
  report.delta_prime_value = delta_prime(num_topics, report.vocab, beta,
                                         conf.delta2, conf.delta3);
  report.sigma1_bar = sigma1_upper_lda(num_topics, report.vocab, alpha, beta,
                                       conf, options.recipe);
  report.sigmaK_under = sigmaK_lower_lda(num_topics, report.vocab, alpha,
                                         beta, conf, options.recipe);
  report.k_lower = k_lower_bound(sv, report.delta_r);
  if (options.per_candidate_alpha0) {
    report.k_upper = k_upper_bound_lda_per_candidate(
        corpus, alpha, beta, conf, options.k_max, options.recipe);
  } else {
    report.k_upper =
        k_upper_bound_lda(report.sigma1_hat, report.num_docs,
                          report.doc_length, report.vocab, alpha, beta, conf,
                          options.k_max, options.recipe);
  }
  return report;
}

BoundReport gmm_bound_report(const Eigen::MatrixXd& points,
                             const synth::GmmParams& params,
                             const ConfidenceParams& conf,
                             const GmmReportOptions& options) {
  params.validate();
  conf.validate();
  if (points.cols() != params.dim) {
    throw ParamError("gmm_bound_report: point dimension disagrees with params");
  }

  BoundReport report;
  report.model = ModelKind::kGmm;
  report.confidence = conf;
  report.num_points = points.rows();
  report.dim = params.dim;
  report.num_components = params.num_components;
  report.alpha = params.alpha;
  report.sigma = params.sigma;
  report.sigma_mu = params.sigma_mu;

  const Eigen::MatrixXd m2 = moments::empirical_m2_gmm(points, params.sigma);
  const spectra::Spectrum sv = spectra::singular_values_symmetric(m2);
  const auto dim = static_cast<int32_t>(sv.values.size());
  const int32_t k = params.num_components;
  report.sigma1_hat = sv.values.front();
  report.sigmaK_hat =
      k <= dim ? sv.values[static_cast<size_t>(k - 1)] : 0.0;
  report.sigmaK1_hat = k < dim ? sv.values[static_cast<size_t>(k)] : 0.0;

  report.delta_r = delta_r_gmm(report.num_points, params.dim, params.sigma,
                               params.sigma_mu, conf.delta);
  report.sigma1_bar = sigma1_upper_gmm(k, params.dim, params.sigma_mu,
                                       params.alpha, conf);
  if (options.w_min > 0.0) {
    report.sigmaK_under = sigmaK_lower_gmm(options.w_min, params.sigma_mu,
                                           params.dim, k, conf.t_value());
  } else {
    report.sigmaK_under = {0.0, true};
  }
  const GmmKBounds kb = k_bounds_gmm(sv, params, report.num_points, conf,
                                     options.k_max);
  report.k_lower = kb.k_lower;
  report.k_upper = kb.k_upper;
  return report;
}

}  // namespace spectrank::bounds
