#include "spectrank.h"

#include <Eigen/Core>
#include <cstring>
#include <exception>
#include <string>

#include "spectrank/bounds.hpp"
#include "spectrank/errors.hpp"
#include "spectrank/io.hpp"
#include "spectrank/moments.hpp"
#include "spectrank/rng.hpp"
#include "spectrank/spectra.hpp"
#include "spectrank/synth.hpp"

struct spr_corpus {
  spectrank::synth::Corpus value;
};
struct spr_lda_truth {
  spectrank::synth::LdaGroundTruth value;
};
struct spr_gmm_data {
  spectrank::synth::GmmDataset value;
  bool has_truth = false;
};
struct spr_matrix {
  Eigen::MatrixXd value;
};

namespace {

thread_local std::string g_last_error;

template <typename F>
spr_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return SPR_OK;
  } catch (const spectrank::ParamError& e) {
    g_last_error = e.what();
    return SPR_ERR_PARAM;
  } catch (const spectrank::DataError& e) {
    g_last_error = e.what();
    return SPR_ERR_DATA;
  } catch (const spectrank::IoError& e) {
    g_last_error = e.what();
    return SPR_ERR_IO;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SPR_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return SPR_ERR_INTERNAL;
  }
}

spr_status param_error(const char* message) {
  g_last_error = message;
  return SPR_ERR_PARAM;
}

spectrank::bounds::ConfidenceParams to_core(const spr_confidence* conf) {
  if (conf == nullptr) {
    throw spectrank::ParamError("confidence parameters are required");
  }
  spectrank::bounds::ConfidenceParams out;
  out.delta = conf->delta;
  out.delta1 = conf->delta1;
  out.delta2 = conf->delta2;
  out.delta3 = conf->delta3;
  out.t = conf->t > 0.0 ? conf->t : 0.0;
  out.validate();
  return out;
}

spectrank::bounds::SpectralRecipe to_core(spr_recipe recipe) {
  if (recipe == SPR_RECIPE_FIXED_DELTA_PRIME) {
    return spectrank::bounds::SpectralRecipe::kFixedDeltaPrime;
  }
  if (recipe != SPR_RECIPE_SPLIT) {
    throw spectrank::ParamError("unknown spectral bound recipe");
  }
  return spectrank::bounds::SpectralRecipe::kSplit;
}

spr_report to_c(const spectrank::bounds::BoundReport& r) {
  spr_report out{};
  out.is_gmm = r.model == spectrank::bounds::ModelKind::kGmm ? 1 : 0;
  out.confidence.delta = r.confidence.delta;
  out.confidence.delta1 = r.confidence.delta1;
  out.confidence.delta2 = r.confidence.delta2;
  out.confidence.delta3 = r.confidence.delta3;
  out.confidence.t = r.confidence.t_value();
  out.delta_r = r.delta_r;
  out.delta_prime = r.delta_prime_value;
  out.sigma1_bar = r.sigma1_bar.value;
  out.sigma1_bar_vacuous = r.sigma1_bar.vacuous ? 1 : 0;
  out.sigmak_under = r.sigmaK_under.value;
  out.sigmak_under_vacuous = r.sigmaK_under.vacuous ? 1 : 0;
  out.sigma1_hat = r.sigma1_hat;
  out.sv_k = r.sigmaK_hat;
  out.sv_k_plus_1 = r.sigmaK1_hat;
  out.k_lower = r.k_lower;
  out.k_upper = r.k_upper.k;
  out.k_upper_vacuous = r.k_upper.vacuous ? 1 : 0;
  out.k_upper_warning = r.k_upper.monotonicity_warning ? 1 : 0;
  out.num_docs = r.num_docs;
  out.doc_length = r.doc_length;
  out.doc_length_uniform = r.doc_length_uniform ? 1 : 0;
  out.vocab = r.vocab;
  out.num_points = r.num_points;
  out.dim = r.dim;
  out.num_components = r.num_components;
  out.alpha = r.alpha;
  out.beta = r.beta;
  out.sigma = r.sigma;
  out.sigma_mu = r.sigma_mu;
  return out;
}

spectrank::bounds::BoundReport to_core(const spr_report& r) {
  spectrank::bounds::BoundReport out;
  out.model = r.is_gmm != 0 ? spectrank::bounds::ModelKind::kGmm
                            : spectrank::bounds::ModelKind::kLda;
  out.confidence.delta = r.confidence.delta;
  out.confidence.delta1 = r.confidence.delta1;
  out.confidence.delta2 = r.confidence.delta2;
  out.confidence.delta3 = r.confidence.delta3;
  out.confidence.t = r.confidence.t;
  out.delta_r = r.delta_r;
  out.delta_prime_value = r.delta_prime;
  out.sigma1_bar = {r.sigma1_bar, r.sigma1_bar_vacuous != 0};
  out.sigmaK_under = {r.sigmak_under, r.sigmak_under_vacuous != 0};
  out.sigma1_hat = r.sigma1_hat;
  out.sigmaK_hat = r.sv_k;
  out.sigmaK1_hat = r.sv_k_plus_1;
  out.k_lower = r.k_lower;
  out.k_upper = {r.k_upper, r.k_upper_vacuous != 0, r.k_upper_warning != 0};
  out.num_docs = r.num_docs;
  out.doc_length = r.doc_length;
  out.doc_length_uniform = r.doc_length_uniform != 0;
  out.vocab = r.vocab;
  out.num_points = r.num_points;
  out.dim = r.dim;
  out.num_components = r.num_components;
  out.alpha = r.alpha;
  out.beta = r.beta;
  out.sigma = r.sigma;
  out.sigma_mu = r.sigma_mu;
  return out;
}

spr_status copy_spectrum(const spr_matrix* matrix, double* out,
                         size_t capacity, bool absolute) {
  if (matrix == nullptr || out == nullptr) {
    return param_error("matrix and output buffer must be non-NULL");
  }
  return guarded([&] {
    if (absolute) {
      const spectrank::spectra::Spectrum sv =
          spectrank::spectra::singular_values_symmetric(matrix->value);
      if (capacity < sv.values.size()) {
        throw spectrank::ParamError("output buffer too small");
      }
      std::memcpy(out, sv.values.data(), sv.values.size() * sizeof(double));
    } else {
      const std::vector<double> ev =
          spectrank::spectra::symmetric_eigenvalues(matrix->value);
      if (capacity < ev.size()) {
        throw spectrank::ParamError("output buffer too small");
      }
      std::memcpy(out, ev.data(), ev.size() * sizeof(double));
    }
  });
}

}  // namespace

extern "C" {

const char* spr_status_name(spr_status status) {
  switch (status) {
    case SPR_OK:
      return "ok";
    case SPR_ERR_PARAM:
      return "parameter error";
    case SPR_ERR_DATA:
      return "data error";
    case SPR_ERR_IO:
      return "io error";
    case SPR_ERR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

const char* spr_last_error(void) { return g_last_error.c_str(); }

uint64_t spr_stream_hash(const char* experiment, uint64_t point,
                         uint64_t run) {
  return spectrank::stream_hash(experiment == nullptr ? "" : experiment,
                                point, run);
}

spr_status spr_lda_generate(int32_t num_topics, int32_t vocab, double alpha,
                            double beta, int32_t num_docs, int32_t doc_length,
                            uint64_t seed, uint64_t stream,
                            spr_corpus** corpus_out,
                            spr_lda_truth** truth_out) {
  if (corpus_out == nullptr) {
    return param_error("corpus_out must be non-NULL");
  }
  return guarded([&] {
    const auto params = spectrank::synth::LdaParams::symmetric(
        num_topics, vocab, alpha, beta);
    auto [corpus, truth] = spectrank::synth::generate_lda_corpus(
        params, num_docs, doc_length, spectrank::RngState(seed, stream));
    *corpus_out = new spr_corpus{std::move(corpus)};
    if (truth_out != nullptr) {
      *truth_out = new spr_lda_truth{std::move(truth)};
    }
  });
}

spr_status spr_corpus_read(const char* path, spr_corpus** corpus_out) {
  if (path == nullptr || corpus_out == nullptr) {
    return param_error("path and corpus_out must be non-NULL");
  }
  return guarded(
      [&] { *corpus_out = new spr_corpus{spectrank::io::read_uci_corpus(path)}; });
}

spr_status spr_corpus_write(const spr_corpus* corpus, const char* path) {
  if (corpus == nullptr || path == nullptr) {
    return param_error("corpus and path must be non-NULL");
  }
  return guarded([&] { spectrank::io::write_uci_corpus(corpus->value, path); });
}

int32_t spr_corpus_num_docs(const spr_corpus* corpus) {
  return corpus == nullptr ? 0 : static_cast<int32_t>(corpus->value.docs.size());
}

int32_t spr_corpus_vocab(const spr_corpus* corpus) {
  return corpus == nullptr ? 0 : corpus->value.vocab;
}

int64_t spr_corpus_total_words(const spr_corpus* corpus) {
  return corpus == nullptr ? 0 : corpus->value.total_words();
}

int64_t spr_corpus_min_doc_length(const spr_corpus* corpus) {
  return corpus == nullptr ? 0 : corpus->value.min_doc_length();
}

void spr_corpus_free(spr_corpus* corpus) { delete corpus; }

spr_status spr_lda_truth_topics(const spr_lda_truth* truth,
                                spr_matrix** topics_out) {
  if (truth == nullptr || topics_out == nullptr) {
    return param_error("truth and topics_out must be non-NULL");
  }
  return guarded([&] { *topics_out = new spr_matrix{truth->value.topics}; });
}

spr_status spr_lda_truth_mixings(const spr_lda_truth* truth,
                                 spr_matrix** mixings_out) {
  if (truth == nullptr || mixings_out == nullptr) {
    return param_error("truth and mixings_out must be non-NULL");
  }
  return guarded([&] { *mixings_out = new spr_matrix{truth->value.mixings}; });
}

spr_status spr_lda_truth_m2(const spr_lda_truth* truth, spr_matrix** m2_out) {
  if (truth == nullptr || m2_out == nullptr) {
    return param_error("truth and m2_out must be non-NULL");
  }
  return guarded([&] {
    *m2_out = new spr_matrix{spectrank::synth::true_second_moment_lda(
        truth->value.topics, truth->value.alpha)};
  });
}

void spr_lda_truth_free(spr_lda_truth* truth) { delete truth; }

spr_status spr_gmm_generate(int32_t num_components, int32_t dim, double sigma,
                            double sigma_mu, double alpha, int64_t num_points,
                            uint64_t seed, uint64_t stream,
                            spr_gmm_data** data_out) {
  if (data_out == nullptr) {
    return param_error("data_out must be non-NULL");
  }
  return guarded([&] {
    spectrank::synth::GmmParams params;
    params.num_components = num_components;
    params.dim = dim;
    params.sigma = sigma;
    params.sigma_mu = sigma_mu;
    params.alpha = alpha;
    auto dataset = spectrank::synth::generate_gmm_dataset(
        params, num_points, spectrank::RngState(seed, stream));
    *data_out = new spr_gmm_data{std::move(dataset), true};
  });
}

spr_status spr_gmm_read_points(const char* path, spr_gmm_data** data_out) {
  if (path == nullptr || data_out == nullptr) {
    return param_error("path and data_out must be non-NULL");
  }
  return guarded([&] {
    spectrank::synth::GmmDataset dataset;
    dataset.points = spectrank::io::read_matrix_text(path);
    *data_out = new spr_gmm_data{std::move(dataset), false};
  });
}

spr_status spr_gmm_points(const spr_gmm_data* data, spr_matrix** points_out) {
  if (data == nullptr || points_out == nullptr) {
    return param_error("data and points_out must be non-NULL");
  }
  return guarded([&] { *points_out = new spr_matrix{data->value.points}; });
}

spr_status spr_gmm_means(const spr_gmm_data* data, spr_matrix** means_out) {
  if (data == nullptr || means_out == nullptr) {
    return param_error("data and means_out must be non-NULL");
  }
  if (!data->has_truth) {
    return param_error("dataset carries no ground truth");
  }
  return guarded([&] { *means_out = new spr_matrix{data->value.means}; });
}

spr_status spr_gmm_weights(const spr_gmm_data* data,
                           spr_matrix** weights_out) {
  if (data == nullptr || weights_out == nullptr) {
    return param_error("data and weights_out must be non-NULL");
  }
  if (!data->has_truth) {
    return param_error("dataset carries no ground truth");
  }
  return guarded(
      [&] { *weights_out = new spr_matrix{data->value.weights}; });
}

spr_status spr_gmm_weight_min(const spr_gmm_data* data, double* w_min_out) {
  if (data == nullptr || w_min_out == nullptr) {
    return param_error("data and w_min_out must be non-NULL");
  }
  if (!data->has_truth) {
    return param_error("dataset carries no ground truth");
  }
  *w_min_out = data->value.weights.minCoeff();
  return SPR_OK;
}

spr_status spr_gmm_true_m2(const spr_gmm_data* data, spr_matrix** m2_out) {
  if (data == nullptr || m2_out == nullptr) {
    return param_error("data and m2_out must be non-NULL");
  }
  if (!data->has_truth) {
    return param_error("dataset carries no ground truth");
  }
  return guarded([&] {
    *m2_out = new spr_matrix{spectrank::synth::true_second_moment_gmm(
        data->value.means, data->value.weights)};
  });
}

int64_t spr_gmm_num_points(const spr_gmm_data* data) {
  return data == nullptr ? 0 : data->value.points.rows();
}

int32_t spr_gmm_dim(const spr_gmm_data* data) {
  return data == nullptr ? 0 : static_cast<int32_t>(data->value.points.cols());
}

void spr_gmm_free(spr_gmm_data* data) { delete data; }

spr_status spr_matrix_create(int32_t rows, int32_t cols,
                             const double* row_major_data,
                             spr_matrix** matrix_out) {
  if (row_major_data == nullptr || matrix_out == nullptr) {
    return param_error("row_major_data and matrix_out must be non-NULL");
  }
  if (rows < 1 || cols < 1) {
    return param_error("matrix dimensions must be >= 1");
  }
  return guarded([&] {
    Eigen::MatrixXd m(rows, cols);
    for (int32_t r = 0; r < rows; ++r) {
      for (int32_t c = 0; c < cols; ++c) {
        m(r, c) = row_major_data[static_cast<size_t>(r) * cols + c];
      }
    }
    *matrix_out = new spr_matrix{std::move(m)};
  });
}

int32_t spr_matrix_rows(const spr_matrix* matrix) {
  return matrix == nullptr ? 0 : static_cast<int32_t>(matrix->value.rows());
}

int32_t spr_matrix_cols(const spr_matrix* matrix) {
  return matrix == nullptr ? 0 : static_cast<int32_t>(matrix->value.cols());
}

spr_status spr_matrix_copy_data(const spr_matrix* matrix, double* out,
                                size_t capacity) {
  if (matrix == nullptr || out == nullptr) {
    return param_error("matrix and out must be non-NULL");
  }
  const auto needed = static_cast<size_t>(matrix->value.size());
  if (capacity < needed) {
    return param_error("output buffer too small");
  }
  const auto& m = matrix->value;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      out[static_cast<size_t>(r) * m.cols() + c] = m(r, c);
    }
  }
  return SPR_OK;
}

spr_status spr_matrix_read_text(const char* path, spr_matrix** matrix_out) {
  if (path == nullptr || matrix_out == nullptr) {
    return param_error("path and matrix_out must be non-NULL");
  }
  return guarded([&] {
    *matrix_out = new spr_matrix{spectrank::io::read_matrix_text(path)};
  });
}

spr_status spr_matrix_write_text(const spr_matrix* matrix, const char* path) {
  if (matrix == nullptr || path == nullptr) {
    return param_error("matrix and path must be non-NULL");
  }
  return guarded(
      [&] { spectrank::io::write_matrix_text(matrix->value, path); });
}

spr_status spr_matrix_read_binary(const char* path, spr_matrix** matrix_out) {
  if (path == nullptr || matrix_out == nullptr) {
    return param_error("path and matrix_out must be non-NULL");
  }
  return guarded([&] {
    *matrix_out = new spr_matrix{spectrank::io::read_matrix_binary(path)};
  });
}

spr_status spr_matrix_write_binary(const spr_matrix* matrix,
                                   const char* path) {
  if (matrix == nullptr || path == nullptr) {
    return param_error("matrix and path must be non-NULL");
  }
  return guarded(
      [&] { spectrank::io::write_matrix_binary(matrix->value, path); });
}

void spr_matrix_free(spr_matrix* matrix) { delete matrix; }

spr_status spr_m1(const spr_corpus* corpus, double* out, size_t capacity) {
  if (corpus == nullptr || out == nullptr) {
    return param_error("corpus and out must be non-NULL");
  }
  return guarded([&] {
    const Eigen::VectorXd m1 = spectrank::moments::empirical_m1(corpus->value);
    if (capacity < static_cast<size_t>(m1.size())) {
      throw spectrank::ParamError("output buffer too small");
    }
    std::memcpy(out, m1.data(), static_cast<size_t>(m1.size()) * sizeof(double));
  });
}

spr_status spr_m2_lda(const spr_corpus* corpus, double alpha0,
                      spr_matrix** m2_out) {
  if (corpus == nullptr || m2_out == nullptr) {
    return param_error("corpus and m2_out must be non-NULL");
  }
  return guarded([&] {
    *m2_out = new spr_matrix{
        spectrank::moments::empirical_m2_lda(corpus->value, alpha0)};
  });
}

spr_status spr_m2_gmm(const spr_gmm_data* data, double sigma,
                      spr_matrix** m2_out) {
  if (data == nullptr || m2_out == nullptr) {
    return param_error("data and m2_out must be non-NULL");
  }
  return guarded([&] {
    *m2_out = new spr_matrix{
        spectrank::moments::empirical_m2_gmm(data->value.points, sigma)};
  });
}

spr_status spr_residual(const spr_matrix* empirical, const spr_matrix* truth,
                        spr_matrix** residual_out, double* frobenius_out,
                        double* spectral_out) {
  if (empirical == nullptr || truth == nullptr) {
    return param_error("empirical and truth must be non-NULL");
  }
  return guarded([&] {
    auto [r, norms] =
        spectrank::moments::residual(empirical->value, truth->value);
    if (residual_out != nullptr) {
      *residual_out = new spr_matrix{std::move(r)};
    }
    if (frobenius_out != nullptr) {
      *frobenius_out = norms.frobenius;
    }
    if (spectral_out != nullptr) {
      *spectral_out = norms.spectral;
    }
  });
}

spr_status spr_eigenvalues_sym(const spr_matrix* matrix, double* out,
                               size_t capacity) {
  return copy_spectrum(matrix, out, capacity, false);
}

spr_status spr_singular_values_sym(const spr_matrix* matrix, double* out,
                                   size_t capacity) {
  return copy_spectrum(matrix, out, capacity, true);
}

spr_status spr_count_above(const double* spectrum, int32_t n, double theta,
                           int32_t* count_out) {
  if (spectrum == nullptr || count_out == nullptr) {
    return param_error("spectrum and count_out must be non-NULL");
  }
  if (n < 0) {
    return param_error("n must be >= 0");
  }
  return guarded([&] {
    spectrank::spectra::Spectrum s;
    s.values.assign(spectrum, spectrum + n);
    *count_out = spectrank::spectra::count_above_threshold(s, theta);
  });
}

spr_confidence spr_confidence_split(double total) {
  spr_confidence out{};
  out.delta = total;
  out.delta1 = out.delta2 = out.delta3 = total / 3.0;
  out.t = 0.0;
  return out;
}

spr_status spr_lda_variance_bound(int64_t num_docs, int64_t doc_length,
                                  int64_t vocab, double* offdiag_out,
                                  double* diag_out, double* frob_sq_out) {
  return guarded([&] {
    const auto b =
        spectrank::bounds::variance_bound_lda(num_docs, doc_length, vocab);
    if (offdiag_out != nullptr) {
      *offdiag_out = b.offdiag;
    }
    if (diag_out != nullptr) {
      *diag_out = b.diag;
    }
    if (frob_sq_out != nullptr) {
      *frob_sq_out = b.frob_sq;
    }
  });
}

spr_status spr_lda_delta_r(int64_t num_docs, int64_t doc_length, int64_t vocab,
                           double delta, double* out) {
  if (out == nullptr) {
    return param_error("out must be non-NULL");
  }
  return guarded([&] {
    *out = spectrank::bounds::delta_r_lda(num_docs, doc_length, vocab, delta);
  });
}

spr_status spr_lda_delta_prime(int32_t num_topics, int64_t vocab, double beta,
                               double delta2, double delta3, double* out) {
  if (out == nullptr) {
    return param_error("out must be non-NULL");
  }
  return guarded([&] {
    *out = spectrank::bounds::delta_prime(num_topics, vocab, beta, delta2,
                                          delta3);
  });
}

spr_status spr_lda_sigma1_upper(int32_t num_topics, int64_t vocab,
                                double alpha, double beta,
                                const spr_confidence* conf, spr_recipe recipe,
                                double* value_out, int32_t* vacuous_out) {
  if (value_out == nullptr || vacuous_out == nullptr) {
    return param_error("value_out and vacuous_out must be non-NULL");
  }
  return guarded([&] {
    const auto b = spectrank::bounds::sigma1_upper_lda(
        num_topics, vocab, alpha, beta, to_core(conf), to_core(recipe));
    *value_out = b.value;
    *vacuous_out = b.vacuous ? 1 : 0;
  });
}

spr_status spr_lda_sigmak_lower(int32_t num_topics, int64_t vocab,
                                double alpha, double beta,
                                const spr_confidence* conf, spr_recipe recipe,
                                double* value_out, int32_t* vacuous_out) {
  if (value_out == nullptr || vacuous_out == nullptr) {
    return param_error("value_out and vacuous_out must be non-NULL");
  }
  return guarded([&] {
    const auto b = spectrank::bounds::sigmaK_lower_lda(
        num_topics, vocab, alpha, beta, to_core(conf), to_core(recipe));
    *value_out = b.value;
    *vacuous_out = b.vacuous ? 1 : 0;
  });
}

spr_status spr_k_lower(const double* spectrum, int32_t n, double delta_r,
                       int32_t* k_out) {
  if (spectrum == nullptr || k_out == nullptr) {
    return param_error("spectrum and k_out must be non-NULL");
  }
  return guarded([&] {
    spectrank::spectra::Spectrum s;
    s.values.assign(spectrum, spectrum + n);
    *k_out = spectrank::bounds::k_lower_bound(s, delta_r);
  });
}

spr_status spr_lda_k_upper(double sigma1_hat, int64_t num_docs,
                           int64_t doc_length, int64_t vocab, double alpha,
                           double beta, const spr_confidence* conf,
                           spr_recipe recipe, int32_t k_max, int32_t* k_out,
                           int32_t* vacuous_out, int32_t* warning_out) {
  if (k_out == nullptr) {
    return param_error("k_out must be non-NULL");
  }
  return guarded([&] {
    const auto r = spectrank::bounds::k_upper_bound_lda(
        sigma1_hat, num_docs, doc_length, vocab, alpha, beta, to_core(conf),
        k_max, to_core(recipe));
    *k_out = r.k;
    if (vacuous_out != nullptr) {
      *vacuous_out = r.vacuous ? 1 : 0;
    }
    if (warning_out != nullptr) {
      *warning_out = r.monotonicity_warning ? 1 : 0;
    }
  });
}

spr_status spr_gamma_tail_upper(double shape, double c, double* out) {
  if (out == nullptr) {
    return param_error("out must be non-NULL");
  }
  return guarded([&] { *out = spectrank::bounds::gamma_tail_upper(shape, c); });
}

spr_status spr_gamma_tail_lower(double shape, double c, double* out) {
  if (out == nullptr) {
    return param_error("out must be non-NULL");
  }
  return guarded([&] { *out = spectrank::bounds::gamma_tail_lower(shape, c); });
}

spr_status spr_chi_square_tail_thresholds(int64_t dof, double x,
                                          double* upper_out,
                                          double* lower_out) {
  return guarded([&] {
    const auto tails = spectrank::bounds::chi_square_tail_thresholds(dof, x);
    if (upper_out != nullptr) {
      *upper_out = tails.upper_threshold;
    }
    if (lower_out != nullptr) {
      *lower_out = tails.lower_threshold;
    }
  });
}

spr_status spr_gamma_max_min_bounds(int64_t n, double shape, double c,
                                    double* max_threshold_out,
                                    double* min_threshold_out,
                                    double* max_prob_out,
                                    double* min_prob_out) {
  return guarded([&] {
    const auto b = spectrank::bounds::gamma_max_min_bounds(n, shape, c);
    if (max_threshold_out != nullptr) {
      *max_threshold_out = b.max_threshold;
    }
    if (min_threshold_out != nullptr) {
      *min_threshold_out = b.min_threshold;
    }
    if (max_prob_out != nullptr) {
      *max_prob_out = b.max_prob;
    }
    if (min_prob_out != nullptr) {
      *min_prob_out = b.min_prob;
    }
  });
}

spr_status spr_dirichlet_max_upper(int64_t n, double shape, double delta1,
                                   double delta2, double* value_out,
                                   int32_t* vacuous_out,
                                   int32_t* condition_met_out) {
  if (value_out == nullptr || vacuous_out == nullptr) {
    return param_error("value_out and vacuous_out must be non-NULL");
  }
  return guarded([&] {
    const auto b =
        spectrank::bounds::dirichlet_max_upper(n, shape, delta1, delta2);
    *value_out = b.value;
    *vacuous_out = b.vacuous ? 1 : 0;
    if (condition_met_out != nullptr) {
      *condition_met_out = b.condition_met ? 1 : 0;
    }
  });
}

spr_status spr_dirichlet_min_lower(int64_t n, double shape, double delta1,
                                   double delta2, double* value_out,
                                   int32_t* vacuous_out,
                                   int32_t* condition_met_out) {
  if (value_out == nullptr || vacuous_out == nullptr) {
    return param_error("value_out and vacuous_out must be non-NULL");
  }
  return guarded([&] {
    const auto b =
        spectrank::bounds::dirichlet_min_lower(n, shape, delta1, delta2);
    *value_out = b.value;
    *vacuous_out = b.vacuous ? 1 : 0;
    if (condition_met_out != nullptr) {
      *condition_met_out = b.condition_met ? 1 : 0;
    }
  });
}

spr_status spr_gmm_delta_r(int64_t num_points, int32_t dim, double sigma,
                           double sigma_mu, double delta, double* out) {
  if (out == nullptr) {
    return param_error("out must be non-NULL");
  }
  return guarded([&] {
    *out = spectrank::bounds::delta_r_gmm(num_points, dim, sigma, sigma_mu,
                                          delta);
  });
}

spr_status spr_gmm_sigmak_lower(double w_min, double sigma_mu, int32_t dim,
                                int32_t num_components, double t,
                                double* value_out, int32_t* vacuous_out) {
  if (value_out == nullptr || vacuous_out == nullptr) {
    return param_error("value_out and vacuous_out must be non-NULL");
  }
  return guarded([&] {
    const auto b = spectrank::bounds::sigmaK_lower_gmm(w_min, sigma_mu, dim,
                                                       num_components, t);
    *value_out = b.value;
    *vacuous_out = b.vacuous ? 1 : 0;
  });
}

spr_status spr_lda_bounds_report(const spr_corpus* corpus, int32_t num_topics,
                                 double alpha, double beta,
                                 const spr_confidence* conf, spr_recipe recipe,
                                 int32_t k_max, int32_t per_candidate_alpha0,
                                 double alpha0_override, spr_report* out) {
  if (corpus == nullptr || out == nullptr) {
    return param_error("corpus and out must be non-NULL");
  }
  return guarded([&] {
    spectrank::bounds::LdaReportOptions options;
    options.k_max = k_max;
    options.recipe = to_core(recipe);
    options.per_candidate_alpha0 = per_candidate_alpha0 != 0;
    options.alpha0_override = alpha0_override;
    *out = to_c(spectrank::bounds::lda_bound_report(
        corpus->value, num_topics, alpha, beta, to_core(conf), options));
  });
}

spr_status spr_gmm_bounds_report(const spr_gmm_data* data,
                                 int32_t num_components, double sigma,
                                 double sigma_mu, double alpha,
                                 const spr_confidence* conf, int32_t k_max,
                                 double w_min, spr_report* out) {
  if (data == nullptr || out == nullptr) {
    return param_error("data and out must be non-NULL");
  }
  return guarded([&] {
    spectrank::synth::GmmParams params;
    params.num_components = num_components;
    params.dim = static_cast<int32_t>(data->value.points.cols());
    params.sigma = sigma;
    params.sigma_mu = sigma_mu;
    params.alpha = alpha;
    spectrank::bounds::GmmReportOptions options;
    options.k_max = k_max;
    options.w_min = w_min;
    *out = to_c(spectrank::bounds::gmm_bound_report(
        data->value.points, params, to_core(conf), options));
  });
}

spr_status spr_report_format(const spr_report* report, char* buffer,
                             size_t capacity) {
  if (report == nullptr || buffer == nullptr) {
    return param_error("report and buffer must be non-NULL");
  }
  return guarded([&] {
    const std::string text =
        spectrank::bounds::to_key_value(to_core(*report));
    if (capacity < text.size() + 1) {
      throw spectrank::ParamError("report buffer too small");
    }
    std::memcpy(buffer, text.c_str(), text.size() + 1);
  });
}

}  // extern "C"
