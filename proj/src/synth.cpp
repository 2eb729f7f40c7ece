#include "spectrank/synth.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spectrank/errors.hpp"

namespace spectrank::synth {

namespace {

// Inclusive prefix sums normalized to end at 1; draws share the "first index
// with cdf > u" convention with categorical_sample so both routes agree.
std::vector<double> build_cdf(const double* probs, int n) {
  std::vector<double> cdf(n);
  double cum = 0.0;
  for (int i = 0; i < n; ++i) {
    cum += probs[i];
    cdf[i] = cum;
  }
  if (!(cum > 0.0)) {
    throw DataError("build_cdf: distribution has no mass");
  }
  for (double& v : cdf) {
    v /= cum;
  }
  cdf.back() = 1.0;
  return cdf;
}

int draw_from_cdf(const std::vector<double>& cdf, RngState& rng) {
  const double u = rng.uniform01();
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  return static_cast<int>(std::min<ptrdiff_t>(it - cdf.begin(),
                                              static_cast<ptrdiff_t>(cdf.size()) - 1));
}

void check_topics(const Eigen::MatrixXd& topics) {
  if (topics.rows() < 2 || topics.cols() < 1) {
    throw ParamError("topics matrix must be V x K with V >= 2, K >= 1");
  }
  if (!topics.allFinite()) {
    throw DataError("topics matrix has non-finite entries");
  }
  for (Eigen::Index k = 0; k < topics.cols(); ++k) {
    if (topics.col(k).minCoeff() < -1e-12) {
      throw DataError("topic column has negative entries");
    }
    if (std::abs(topics.col(k).sum() - 1.0) > 1e-9) {
      throw DataError("topic column does not sum to 1");
    }
  }
}

void check_alpha(std::span<const double> alpha) {
  if (alpha.empty()) {
    throw ParamError("alpha vector must be non-empty");
  }
  for (const double a : alpha) {
    if (!(a > 0.0)) {
      throw ParamError("alpha entries must be > 0");
    }
  }
}

}  // namespace

int64_t Corpus::total_words() const {
  int64_t total = 0;
  for (const auto& doc : docs) {
    total += doc.length;
  }
  return total;
}

int64_t Corpus::min_doc_length() const {
  int64_t m = 0;
  for (const auto& doc : docs) {
    m = (m == 0) ? doc.length : std::min(m, doc.length);
  }
  return m;
}

void Corpus::validate() const {
  if (vocab < 2) {
    throw DataError("corpus vocabulary size must be >= 2");
  }
  for (size_t d = 0; d < docs.size(); ++d) {
    const auto& doc = docs[d];
    int64_t total = 0;
    int32_t prev = -1;
    for (const auto& [word, count] : doc.entries) {
      if (word < 0 || word >= vocab) {
        throw DataError("document " + std::to_string(d) +
                        ": word id out of range");
      }
      if (word <= prev) {
        throw DataError("document " + std::to_string(d) +
                        ": entries not strictly sorted by word id");
      }
      if (count < 1) {
        throw DataError("document " + std::to_string(d) + ": count < 1");
      }
      prev = word;
      total += count;
    }
    if (total != doc.length) {
      throw DataError("document " + std::to_string(d) +
                      ": cached length disagrees with counts");
    }
  }
}

double LdaParams::alpha0() const {
  double total = 0.0;
  for (const double a : alpha) {
    total += a;
  }
  return total;
}

void LdaParams::validate() const {
  if (num_topics < 1 || vocab < 2) {
    throw ParamError("LdaParams: require K >= 1 and V >= 2");
  }
  if (static_cast<int32_t>(alpha.size()) != num_topics) {
    throw ParamError("LdaParams: alpha length must equal K");
  }
  check_alpha(alpha);
  if (!(beta > 0.0)) {
    throw ParamError("LdaParams: beta must be > 0");
  }
}

LdaParams LdaParams::symmetric(int32_t K, int32_t V, double alpha,
                               double beta) {
  LdaParams p;
  p.num_topics = K;
  p.vocab = V;
  p.alpha.assign(static_cast<size_t>(std::max<int32_t>(K, 0)), alpha);
  p.beta = beta;
  return p;
}

std::pair<Corpus, LdaGroundTruth> generate_lda_corpus(const LdaParams& params,
                                                      int32_t num_docs,
                                                      int32_t doc_length,
                                                      RngState rng,
                                                      LdaGenOptions options) {
  params.validate();
  RngState topic_rng = rng.substream(0);
  Eigen::MatrixXd topics(params.vocab, params.num_topics);
  const std::vector<double> beta_vec(static_cast<size_t>(params.vocab),
                                     params.beta);
  for (int32_t k = 0; k < params.num_topics; ++k) {
    const std::vector<double> col = dirichlet_sample(beta_vec, topic_rng);
    for (int32_t v = 0; v < params.vocab; ++v) {
      topics(v, k) = col[static_cast<size_t>(v)];
    }
  }
  return generate_lda_corpus_with_topics(topics, params.alpha, num_docs,
                                         doc_length, rng, options);
}

std::pair<Corpus, LdaGroundTruth> generate_lda_corpus_with_topics(
    const Eigen::MatrixXd& topics, std::span<const double> alpha,
    int32_t num_docs, int32_t doc_length, RngState rng,
    LdaGenOptions options) {
  check_topics(topics);
  check_alpha(alpha);
  if (static_cast<Eigen::Index>(alpha.size()) != topics.cols()) {
    throw ParamError("alpha length must equal the number of topics");
  }
  if (num_docs < 1) {
    throw ParamError("document count must be >= 1");
  }
  if (doc_length < 2) {
    throw ParamError("document length must be >= 2: the second-order moment "
                     "needs word pairs");
  }

  const int32_t V = static_cast<int32_t>(topics.rows());
  const int32_t K = static_cast<int32_t>(topics.cols());

  std::vector<std::vector<double>> topic_cdfs(static_cast<size_t>(K));
  for (int32_t k = 0; k < K; ++k) {
    topic_cdfs[static_cast<size_t>(k)] = build_cdf(topics.col(k).data(), V);
  }

  Corpus corpus;
  corpus.vocab = V;
  corpus.docs.resize(static_cast<size_t>(num_docs));

  LdaGroundTruth truth;
  truth.topics = topics;
  truth.alpha.assign(alpha.begin(), alpha.end());
  truth.mixings.resize(K, num_docs);
  if (options.keep_assignments) {
    truth.assignments.resize(static_cast<size_t>(num_docs));
  }

  std::vector<int32_t> scratch(static_cast<size_t>(V), 0);
  std::vector<int32_t> touched;
  touched.reserve(static_cast<size_t>(doc_length));

  for (int32_t d = 0; d < num_docs; ++d) {
    RngState doc_rng = rng.substream(1 + static_cast<uint64_t>(d));
    const std::vector<double> h = dirichlet_sample(alpha, doc_rng);
    for (int32_t k = 0; k < K; ++k) {
      truth.mixings(k, d) = h[static_cast<size_t>(k)];
    }
    const std::vector<double> h_cdf = build_cdf(h.data(), K);

    std::vector<int32_t>* assign = nullptr;
    if (options.keep_assignments) {
      assign = &truth.assignments[static_cast<size_t>(d)];
      assign->reserve(static_cast<size_t>(doc_length));
    }

    touched.clear();
    for (int32_t l = 0; l < doc_length; ++l) {
      const int z = draw_from_cdf(h_cdf, doc_rng);
      const int w = draw_from_cdf(topic_cdfs[static_cast<size_t>(z)], doc_rng);
      if (scratch[static_cast<size_t>(w)] == 0) {
        touched.push_back(w);
      }
      ++scratch[static_cast<size_t>(w)];
      if (assign != nullptr) {
        assign->push_back(z);
      }
    }
    std::sort(touched.begin(), touched.end());
    Document& doc = corpus.docs[static_cast<size_t>(d)];
    doc.entries.reserve(touched.size());
    for (const int32_t w : touched) {
      doc.entries.emplace_back(w, scratch[static_cast<size_t>(w)]);
      scratch[static_cast<size_t>(w)] = 0;
    }
    doc.length = doc_length;
  }

  return {std::move(corpus), std::move(truth)};
}

Eigen::MatrixXd true_second_moment_lda(const Eigen::MatrixXd& topics,
                                       std::span<const double> alpha) {
  check_topics(topics);
  check_alpha(alpha);
  if (static_cast<Eigen::Index>(alpha.size()) != topics.cols()) {
    throw ParamError("alpha length must equal the number of topics");
  }
  double alpha0 = 0.0;
  for (const double a : alpha) {
    alpha0 += a;
  }
  Eigen::VectorXd weights(topics.cols());
  for (Eigen::Index k = 0; k < topics.cols(); ++k) {
    weights(k) = alpha[static_cast<size_t>(k)] / (alpha0 * (alpha0 + 1.0));
  }
  Eigen::MatrixXd m2 = topics * weights.asDiagonal() * topics.transpose();
  return ((m2 + m2.transpose()) * 0.5).eval();
}

void GmmParams::validate() const {
  if (num_components < 1) {
    throw ParamError("GmmParams: require K >= 1");
  }
  if (dim < num_components) {
    throw ParamError("GmmParams: require m >= K");
  }
  if (!(sigma > 0.0) || !(sigma_mu > 0.0) || !(alpha > 0.0)) {
    throw ParamError("GmmParams: sigma, sigma_mu and alpha must be > 0");
  }
}

GmmDataset generate_gmm_dataset(const GmmParams& params, int64_t num_points,
                                RngState rng) {
  params.validate();
  RngState setup_rng = rng.substream(0);
  Eigen::MatrixXd means(params.dim, params.num_components);
  const std::vector<double> zero(static_cast<size_t>(params.dim), 0.0);
  for (int32_t k = 0; k < params.num_components; ++k) {
    const std::vector<double> mu = gaussian_vector_sample(
        zero, params.sigma_mu * params.sigma_mu, setup_rng);
    for (int32_t j = 0; j < params.dim; ++j) {
      means(j, k) = mu[static_cast<size_t>(j)];
    }
  }
  const std::vector<double> alpha_vec(
      static_cast<size_t>(params.num_components), params.alpha);
  const std::vector<double> w = dirichlet_sample(alpha_vec, setup_rng);
  Eigen::VectorXd weights(params.num_components);
  for (int32_t k = 0; k < params.num_components; ++k) {
    weights(k) = w[static_cast<size_t>(k)];
  }
  return generate_gmm_dataset_with(means, weights, params.sigma, num_points,
                                   rng);
}

GmmDataset generate_gmm_dataset_with(const Eigen::MatrixXd& means,
                                     const Eigen::VectorXd& weights,
                                     double sigma, int64_t num_points,
                                     RngState rng) {
  if (means.cols() != weights.size() || means.cols() < 1) {
    throw ParamError("means/weights dimension mismatch");
  }
  if (weights.minCoeff() < 0.0 || std::abs(weights.sum() - 1.0) > 1e-9) {
    throw ParamError("weights must lie on the simplex");
  }
  if (!(sigma > 0.0)) {
    throw ParamError("sigma must be > 0");
  }
  if (num_points < 1) {
    throw ParamError("point count must be >= 1");
  }
  const int32_t m = static_cast<int32_t>(means.rows());
  const int32_t K = static_cast<int32_t>(means.cols());

  GmmDataset data;
  data.means = means;
  data.weights = weights;
  data.points.resize(num_points, m);
  data.assignments.resize(static_cast<size_t>(num_points));

  const std::vector<double> wvec(weights.data(), weights.data() + K);
  const std::vector<double> w_cdf = build_cdf(wvec.data(), K);

  const double variance = sigma * sigma;
  for (int64_t i = 0; i < num_points; ++i) {
    RngState point_rng = rng.substream(1 + static_cast<uint64_t>(i));
    const int h = draw_from_cdf(w_cdf, point_rng);
    data.assignments[static_cast<size_t>(i)] = h;
    const std::span<const double> mu(means.col(h).data(),
                                     static_cast<size_t>(m));
    const std::vector<double> x = gaussian_vector_sample(mu, variance,
                                                         point_rng);
    for (int32_t j = 0; j < m; ++j) {
      data.points(i, j) = x[static_cast<size_t>(j)];
    }
  }
  return data;
}

Eigen::MatrixXd true_second_moment_gmm(const Eigen::MatrixXd& means,
                                       const Eigen::VectorXd& weights) {
  if (means.cols() != weights.size() || means.cols() < 1) {
    throw ParamError("means/weights dimension mismatch");
  }
  Eigen::MatrixXd m2 = means * weights.asDiagonal() * means.transpose();
  return ((m2 + m2.transpose()) * 0.5).eval();
}

}  // namespace spectrank::synth
