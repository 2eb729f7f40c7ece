/* spectrank C API: latent-component count bounds from second-order moment
 * spectra, for LDA-style corpora and spherical Gaussian mixtures.
 *
 * Conventions:
 *   - Every function returns a spr_status; SPR_OK is 0. On failure,
 *     spr_last_error() returns a thread-local message describing the cause.
 *   - Objects are opaque handles created through spr_*_ functions and
 *     released with the matching spr_*_free (safe on NULL).
 *   - Matrices are dense doubles; spr_matrix_copy_data fills a row-major
 *     caller buffer of rows*cols entries.
 *   - Vacuous bounds (clamped denominators, 1 - delta' <= 0) are reported
 *     through *_vacuous out-flags, never as errors.
 */
#ifndef SPECTRANK_H
#define SPECTRANK_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum spr_status {
  SPR_OK = 0,
  SPR_ERR_PARAM = 1,    /* invalid argument values */
  SPR_ERR_DATA = 2,     /* structurally invalid data */
  SPR_ERR_IO = 3,       /* file access or format failure */
  SPR_ERR_INTERNAL = 4  /* unexpected failure */
} spr_status;

const char* spr_status_name(spr_status status);

/* Message for the most recent failure on this thread; valid until the next
 * spectrank call on the same thread. */
const char* spr_last_error(void);

typedef struct spr_corpus spr_corpus;
typedef struct spr_lda_truth spr_lda_truth;
typedef struct spr_gmm_data spr_gmm_data;
typedef struct spr_matrix spr_matrix;

/* ---- streams ---- */

/* Stable hash used to derive per-(experiment, sweep point, run) stream ids;
 * never changes across versions or platforms. */
uint64_t spr_stream_hash(const char* experiment, uint64_t point, uint64_t run);

/* ---- synthetic data ---- */

spr_status spr_lda_generate(int32_t num_topics, int32_t vocab, double alpha,
                            double beta, int32_t num_docs, int32_t doc_length,
                            uint64_t seed, uint64_t stream,
                            spr_corpus** corpus_out,
                            spr_lda_truth** truth_out);

spr_status spr_corpus_read(const char* path, spr_corpus** corpus_out);
spr_status spr_corpus_write(const spr_corpus* corpus, const char* path);
int32_t spr_corpus_num_docs(const spr_corpus* corpus);
int32_t spr_corpus_vocab(const spr_corpus* corpus);
int64_t spr_corpus_total_words(const spr_corpus* corpus);
int64_t spr_corpus_min_doc_length(const spr_corpus* corpus);
void spr_corpus_free(spr_corpus* corpus);

/* Topic matrix (V x K) and per-document mixings (K x D) of generated truth. */
spr_status spr_lda_truth_topics(const spr_lda_truth* truth,
                                spr_matrix** topics_out);
spr_status spr_lda_truth_mixings(const spr_lda_truth* truth,
                                 spr_matrix** mixings_out);
spr_status spr_lda_truth_m2(const spr_lda_truth* truth, spr_matrix** m2_out);
void spr_lda_truth_free(spr_lda_truth* truth);

spr_status spr_gmm_generate(int32_t num_components, int32_t dim, double sigma,
                            double sigma_mu, double alpha, int64_t num_points,
                            uint64_t seed, uint64_t stream,
                            spr_gmm_data** data_out);

/* Points file is a plain-text matrix (N x m). */
spr_status spr_gmm_read_points(const char* path, spr_gmm_data** data_out);
spr_status spr_gmm_points(const spr_gmm_data* data, spr_matrix** points_out);
spr_status spr_gmm_means(const spr_gmm_data* data, spr_matrix** means_out);
spr_status spr_gmm_weights(const spr_gmm_data* data, spr_matrix** weights_out);
spr_status spr_gmm_weight_min(const spr_gmm_data* data, double* w_min_out);
spr_status spr_gmm_true_m2(const spr_gmm_data* data, spr_matrix** m2_out);
int64_t spr_gmm_num_points(const spr_gmm_data* data);
int32_t spr_gmm_dim(const spr_gmm_data* data);
void spr_gmm_free(spr_gmm_data* data);

/* ---- matrices ---- */

spr_status spr_matrix_create(int32_t rows, int32_t cols,
                             const double* row_major_data,
                             spr_matrix** matrix_out);
int32_t spr_matrix_rows(const spr_matrix* matrix);
int32_t spr_matrix_cols(const spr_matrix* matrix);
spr_status spr_matrix_copy_data(const spr_matrix* matrix, double* out,
                                size_t capacity);
spr_status spr_matrix_read_text(const char* path, spr_matrix** matrix_out);
spr_status spr_matrix_write_text(const spr_matrix* matrix, const char* path);
spr_status spr_matrix_read_binary(const char* path, spr_matrix** matrix_out);
spr_status spr_matrix_write_binary(const spr_matrix* matrix, const char* path);
void spr_matrix_free(spr_matrix* matrix);

/* ---- moments ---- */

/* out must hold vocab entries. */
spr_status spr_m1(const spr_corpus* corpus, double* out, size_t capacity);
spr_status spr_m2_lda(const spr_corpus* corpus, double alpha0,
                      spr_matrix** m2_out);
spr_status spr_m2_gmm(const spr_gmm_data* data, double sigma,
                      spr_matrix** m2_out);
spr_status spr_residual(const spr_matrix* empirical, const spr_matrix* truth,
                        spr_matrix** residual_out, double* frobenius_out,
                        double* spectral_out);

/* ---- spectra ---- */

/* out must hold dim entries; eigenvalues descending, singular values are
 * their absolute values re-sorted descending. */
spr_status spr_eigenvalues_sym(const spr_matrix* matrix, double* out,
                               size_t capacity);
spr_status spr_singular_values_sym(const spr_matrix* matrix, double* out,
                                   size_t capacity);
spr_status spr_count_above(const double* spectrum, int32_t n, double theta,
                           int32_t* count_out);

/* ---- confidence parameters ---- */

typedef struct spr_confidence {
  double delta;   /* moment-concentration budget */
  double delta1;  /* spectral-structure budgets */
  double delta2;
  double delta3;
  double t;       /* <= 0 selects sqrt(2 log(2/delta3)) */
} spr_confidence;

/* delta = total, delta1 = delta2 = delta3 = total/3, t defaulted. */
spr_confidence spr_confidence_split(double total);

/* ---- closed-form bounds ---- */

spr_status spr_lda_variance_bound(int64_t num_docs, int64_t doc_length,
                                  int64_t vocab, double* offdiag_out,
                                  double* diag_out, double* frob_sq_out);
spr_status spr_lda_delta_r(int64_t num_docs, int64_t doc_length, int64_t vocab,
                           double delta, double* out);
spr_status spr_lda_delta_prime(int32_t num_topics, int64_t vocab, double beta,
                               double delta2, double delta3, double* out);

/* Coefficient recipe for the spectral-structure bounds. */
typedef enum spr_recipe {
  SPR_RECIPE_SPLIT = 0,            /* delta1/delta2/delta3 budgets */
  SPR_RECIPE_FIXED_DELTA_PRIME = 1 /* delta' pinned at 0.1, single budget */
} spr_recipe;

spr_status spr_lda_sigma1_upper(int32_t num_topics, int64_t vocab,
                                double alpha, double beta,
                                const spr_confidence* conf, spr_recipe recipe,
                                double* value_out, int32_t* vacuous_out);
spr_status spr_lda_sigmak_lower(int32_t num_topics, int64_t vocab,
                                double alpha, double beta,
                                const spr_confidence* conf, spr_recipe recipe,
                                double* value_out, int32_t* vacuous_out);
spr_status spr_k_lower(const double* spectrum, int32_t n, double delta_r,
                       int32_t* k_out);
spr_status spr_lda_k_upper(double sigma1_hat, int64_t num_docs,
                           int64_t doc_length, int64_t vocab, double alpha,
                           double beta, const spr_confidence* conf,
                           spr_recipe recipe, int32_t k_max, int32_t* k_out,
                           int32_t* vacuous_out, int32_t* warning_out);
spr_status spr_gmm_delta_r(int64_t num_points, int32_t dim, double sigma,
                           double sigma_mu, double delta, double* out);
spr_status spr_gmm_sigmak_lower(double w_min, double sigma_mu, int32_t dim,
                                int32_t num_components, double t,
                                double* value_out, int32_t* vacuous_out);

/* ---- tail-bound utilities ---- */

spr_status spr_gamma_tail_upper(double shape, double c, double* out);
spr_status spr_gamma_tail_lower(double shape, double c, double* out);
spr_status spr_chi_square_tail_thresholds(int64_t dof, double x,
                                          double* upper_out,
                                          double* lower_out);
spr_status spr_gamma_max_min_bounds(int64_t n, double shape, double c,
                                    double* max_threshold_out,
                                    double* min_threshold_out,
                                    double* max_prob_out,
                                    double* min_prob_out);
/* condition_met reports the c1-validity (max) / delta2 (min) regime; the
 * value is still a bound when it is 0, at a weakened confidence level. */
spr_status spr_dirichlet_max_upper(int64_t n, double shape, double delta1,
                                   double delta2, double* value_out,
                                   int32_t* vacuous_out,
                                   int32_t* condition_met_out);
spr_status spr_dirichlet_min_lower(int64_t n, double shape, double delta1,
                                   double delta2, double* value_out,
                                   int32_t* vacuous_out,
                                   int32_t* condition_met_out);

/* ---- full pipeline reports ---- */

typedef struct spr_report {
  int32_t is_gmm;
  spr_confidence confidence;
  double delta_r;
  double delta_prime; /* LDA only */
  double sigma1_bar;
  int32_t sigma1_bar_vacuous;
  double sigmak_under;
  int32_t sigmak_under_vacuous;
  double sigma1_hat;
  double sv_k;        /* K-th singular value of the empirical moment */
  double sv_k_plus_1; /* (K+1)-th, 0 when K equals the dimension */
  int32_t k_lower;
  int32_t k_upper;
  int32_t k_upper_vacuous;
  int32_t k_upper_warning;
  /* echoed inputs; fields for the other model stay zero */
  int64_t num_docs;
  int64_t doc_length;         /* min over documents */
  int32_t doc_length_uniform; /* 0 when lengths vary; delta_r then uses the
                                 minimum, the conservative choice */
  int32_t vocab;
  int64_t num_points;
  int32_t dim;
  int32_t num_components;
  double alpha;
  double beta;
  double sigma;
  double sigma_mu;
} spr_report;

/* alpha0_override <= 0 selects K * alpha; per_candidate_alpha0 != 0 rescans
 * the moment estimate with alpha0 = K' alpha at every candidate K'. */
spr_status spr_lda_bounds_report(const spr_corpus* corpus, int32_t num_topics,
                                 double alpha, double beta,
                                 const spr_confidence* conf, spr_recipe recipe,
                                 int32_t k_max, int32_t per_candidate_alpha0,
                                 double alpha0_override, spr_report* out);

/* w_min <= 0 marks the minimum mixture weight unknown; sigmak_under is then
 * reported vacuous. */
spr_status spr_gmm_bounds_report(const spr_gmm_data* data,
                                 int32_t num_components, double sigma,
                                 double sigma_mu, double alpha,
                                 const spr_confidence* conf, int32_t k_max,
                                 double w_min, spr_report* out);

/* Flat key=value rendering of a report. Writes at most capacity bytes
 * including the terminator; returns SPR_ERR_PARAM if the buffer is too
 * small (4096 bytes always suffice). */
spr_status spr_report_format(const spr_report* report, char* buffer,
                             size_t capacity);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SPECTRANK_H */
