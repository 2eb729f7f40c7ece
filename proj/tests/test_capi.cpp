#include <cmath>
#include <cstring>
#include <filesystem>
#include <unistd.h>
#include <string>
#include <vector>

#include "doctest.h"
#include "spectrank.h"

namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("spectrank_capi_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

}  // namespace

TEST_CASE("capi: status names and null-argument errors") {
  CHECK(std::string(spr_status_name(SPR_OK)) == "ok");
  CHECK(std::string(spr_status_name(SPR_ERR_IO)) == "io error");

  CHECK(spr_corpus_read(nullptr, nullptr) == SPR_ERR_PARAM);
  CHECK(std::strlen(spr_last_error()) > 0);

  spr_corpus* corpus = nullptr;
  CHECK(spr_corpus_read("/nonexistent/path.txt", &corpus) == SPR_ERR_IO);
  CHECK(std::string(spr_last_error()).find("nonexistent") !=
        std::string::npos);

  double out = 0.0;
  CHECK(spr_lda_delta_r(100, 50, 50, 2.0, &out) == SPR_ERR_PARAM);
  CHECK(spr_lda_delta_r(0, 50, 50, 0.1, &out) == SPR_ERR_PARAM);
}

TEST_CASE("capi: freeing null handles is safe") {
  spr_corpus_free(nullptr);
  spr_lda_truth_free(nullptr);
  spr_gmm_free(nullptr);
  spr_matrix_free(nullptr);
}

TEST_CASE("capi: matrix create/copy round trip") {
  const double data[6] = {1.0, 2.0, 3.0, 4.0, 5.0, 6.0};
  spr_matrix* m = nullptr;
  REQUIRE(spr_matrix_create(2, 3, data, &m) == SPR_OK);
  CHECK(spr_matrix_rows(m) == 2);
  CHECK(spr_matrix_cols(m) == 3);
  double back[6] = {0};
  REQUIRE(spr_matrix_copy_data(m, back, 6) == SPR_OK);
  for (int i = 0; i < 6; ++i) {
    CHECK(back[i] == data[i]);
  }
  CHECK(spr_matrix_copy_data(m, back, 5) == SPR_ERR_PARAM);
  spr_matrix_free(m);
}

TEST_CASE("capi: lda pipeline end to end") {
  spr_corpus* corpus = nullptr;
  spr_lda_truth* truth = nullptr;
  REQUIRE(spr_lda_generate(3, 30, 1.0, 0.5, 80, 10, 77, 5, &corpus, &truth) ==
          SPR_OK);
  CHECK(spr_corpus_num_docs(corpus) == 80);
  CHECK(spr_corpus_vocab(corpus) == 30);
  CHECK(spr_corpus_total_words(corpus) == 800);
  CHECK(spr_corpus_min_doc_length(corpus) == 10);

  // Deterministic regeneration.
  spr_corpus* corpus2 = nullptr;
  REQUIRE(spr_lda_generate(3, 30, 1.0, 0.5, 80, 10, 77, 5, &corpus2,
                           nullptr) == SPR_OK);
  std::vector<double> m1a(30);
  std::vector<double> m1b(30);
  REQUIRE(spr_m1(corpus, m1a.data(), m1a.size()) == SPR_OK);
  REQUIRE(spr_m1(corpus2, m1b.data(), m1b.size()) == SPR_OK);
  CHECK(m1a == m1b);
  spr_corpus_free(corpus2);

  spr_matrix* m2 = nullptr;
  REQUIRE(spr_m2_lda(corpus, 3.0, &m2) == SPR_OK);
  CHECK(spr_matrix_rows(m2) == 30);

  spr_matrix* m2_true = nullptr;
  REQUIRE(spr_lda_truth_m2(truth, &m2_true) == SPR_OK);
  double frob = 0.0;
  double spec = 0.0;
  spr_matrix* residual = nullptr;
  REQUIRE(spr_residual(m2, m2_true, &residual, &frob, &spec) == SPR_OK);
  CHECK(frob >= spec);
  CHECK(spec > 0.0);

  std::vector<double> sv(30);
  REQUIRE(spr_singular_values_sym(m2, sv.data(), sv.size()) == SPR_OK);
  for (size_t i = 1; i < sv.size(); ++i) {
    CHECK(sv[i] <= sv[i - 1]);
  }

  double dr = 0.0;
  REQUIRE(spr_lda_delta_r(80, 10, 30, 0.05, &dr) == SPR_OK);
  int32_t k_lower = -1;
  REQUIRE(spr_k_lower(sv.data(), 30, dr, &k_lower) == SPR_OK);
  CHECK(k_lower >= 0);
  CHECK(k_lower <= 30);

  const spr_confidence conf = spr_confidence_split(0.05);
  spr_report report{};
  REQUIRE(spr_lda_bounds_report(corpus, 3, 1.0, 0.5, &conf, SPR_RECIPE_SPLIT,
                                50, 0, 0.0, &report) == SPR_OK);
  CHECK(report.is_gmm == 0);
  CHECK(report.k_lower == k_lower);
  CHECK(report.sigma1_hat == sv[0]);
  CHECK(report.num_docs == 80);
  CHECK(report.vocab == 30);
  CHECK(report.doc_length_uniform == 1);

  char buffer[4096];
  REQUIRE(spr_report_format(&report, buffer, sizeof(buffer)) == SPR_OK);
  const std::string text(buffer);
  CHECK(text.find("model=lda\n") != std::string::npos);
  CHECK(text.find("k_lower=") != std::string::npos);
  char tiny[8];
  CHECK(spr_report_format(&report, tiny, sizeof(tiny)) == SPR_ERR_PARAM);

  spr_matrix_free(residual);
  spr_matrix_free(m2_true);
  spr_matrix_free(m2);
  spr_lda_truth_free(truth);
  spr_corpus_free(corpus);
}

TEST_CASE("capi: corpus file round trip") {
  TempDir dir;
  spr_corpus* corpus = nullptr;
  REQUIRE(spr_lda_generate(2, 12, 1.0, 1.0, 6, 5, 3, 0, &corpus, nullptr) ==
          SPR_OK);
  const std::string path = dir.file("c.docword.txt");
  REQUIRE(spr_corpus_write(corpus, path.c_str()) == SPR_OK);
  spr_corpus* back = nullptr;
  REQUIRE(spr_corpus_read(path.c_str(), &back) == SPR_OK);
  CHECK(spr_corpus_total_words(back) == spr_corpus_total_words(corpus));
  CHECK(spr_corpus_vocab(back) == 12);
  spr_corpus_free(back);
  spr_corpus_free(corpus);
}

TEST_CASE("capi: gmm pipeline end to end") {
  spr_gmm_data* data = nullptr;
  REQUIRE(spr_gmm_generate(3, 10, 0.5, 2.0, 1.0, 5000, 11, 0, &data) ==
          SPR_OK);
  CHECK(spr_gmm_num_points(data) == 5000);
  CHECK(spr_gmm_dim(data) == 10);

  double w_min = 0.0;
  REQUIRE(spr_gmm_weight_min(data, &w_min) == SPR_OK);
  CHECK(w_min > 0.0);
  CHECK(w_min <= 1.0 / 3.0 + 1e-12);

  spr_matrix* m2_true = nullptr;
  REQUIRE(spr_gmm_true_m2(data, &m2_true) == SPR_OK);
  CHECK(spr_matrix_rows(m2_true) == 10);

  const spr_confidence conf = spr_confidence_split(0.1);
  spr_report report{};
  REQUIRE(spr_gmm_bounds_report(data, 3, 0.5, 2.0, 1.0, &conf, 60, w_min,
                                &report) == SPR_OK);
  CHECK(report.is_gmm == 1);
  CHECK(report.k_lower >= 0);
  CHECK(report.k_lower <= 10);
  CHECK(report.num_points == 5000);

  char buffer[4096];
  REQUIRE(spr_report_format(&report, buffer, sizeof(buffer)) == SPR_OK);
  CHECK(std::string(buffer).find("model=gmm\n") != std::string::npos);

  spr_matrix_free(m2_true);
  spr_gmm_free(data);
}

TEST_CASE("capi: truthless gmm data refuses truth accessors") {
  TempDir dir;
  spr_gmm_data* data = nullptr;
  REQUIRE(spr_gmm_generate(2, 6, 1.0, 1.0, 1.0, 50, 4, 0, &data) == SPR_OK);
  spr_matrix* points = nullptr;
  REQUIRE(spr_gmm_points(data, &points) == SPR_OK);
  const std::string path = dir.file("points.txt");
  REQUIRE(spr_matrix_write_text(points, path.c_str()) == SPR_OK);

  spr_gmm_data* loaded = nullptr;
  REQUIRE(spr_gmm_read_points(path.c_str(), &loaded) == SPR_OK);
  CHECK(spr_gmm_num_points(loaded) == 50);
  spr_matrix* means = nullptr;
  CHECK(spr_gmm_means(loaded, &means) == SPR_ERR_PARAM);
  double w = 0.0;
  CHECK(spr_gmm_weight_min(loaded, &w) == SPR_ERR_PARAM);

  // Bounds still work without truth when w_min is unknown.
  const spr_confidence conf = spr_confidence_split(0.1);
  spr_report report{};
  REQUIRE(spr_gmm_bounds_report(loaded, 2, 1.0, 1.0, 1.0, &conf, 30, 0.0,
                                &report) == SPR_OK);
  CHECK(report.sigmak_under_vacuous == 1);

  spr_gmm_free(loaded);
  spr_matrix_free(points);
  spr_gmm_free(data);
}

TEST_CASE("capi: stream hash is stable") {
  CHECK(spr_stream_hash("fig-a", 3, 1) == 7875343399423184961ull);
  CHECK(spr_stream_hash("fig-a", 3, 1) != spr_stream_hash("fig-a", 3, 2));
}

TEST_CASE("capi: formula surface spot checks") {
  double off = 0.0;
  double diag = 0.0;
  double frob = 0.0;
  REQUIRE(spr_lda_variance_bound(1, 10, 10, &off, &diag, &frob) == SPR_OK);
  CHECK(off == doctest::Approx(3.0e-4).epsilon(1e-13));
  CHECK(diag == doctest::Approx(1.2e-3).epsilon(1e-13));

  double dp = 0.0;
  REQUIRE(spr_lda_delta_prime(5, 1000, 5.0, 0.1, 0.1, &dp) == SPR_OK);
  CHECK(dp == doctest::Approx(0.8020949233119018).epsilon(1e-12));

  const spr_confidence conf = {0.05, 0.1, 0.1, 0.1, 0.0};
  double value = 0.0;
  int32_t vacuous = 0;
  REQUIRE(spr_lda_sigma1_upper(5, 1000, 1.0, 5.0, &conf, SPR_RECIPE_SPLIT,
                               &value, &vacuous) == SPR_OK);
  CHECK(vacuous == 0);
  CHECK(value == doctest::Approx(0.00033862355609740922).epsilon(1e-12));
  REQUIRE(spr_lda_sigmak_lower(5, 1000, 1.0, 5.0, &conf, SPR_RECIPE_SPLIT,
                               &value, &vacuous) == SPR_OK);
  CHECK(vacuous == 0);
  CHECK(value == doctest::Approx(1.0695774428297264e-6).epsilon(1e-12));

  // The fixed-delta-prime recipe yields a different, finite value here.
  double fixed_value = 0.0;
  REQUIRE(spr_lda_sigma1_upper(5, 1000, 1.0, 5.0, &conf,
                               SPR_RECIPE_FIXED_DELTA_PRIME, &fixed_value,
                               &vacuous) == SPR_OK);
  CHECK(vacuous == 0);
  CHECK(fixed_value != value);

  double dr = 0.0;
  REQUIRE(spr_gmm_delta_r(10000, 10, 1.0, 2.0, 0.1, &dr) == SPR_OK);
  CHECK(dr == doctest::Approx(0.9539392014169456).epsilon(1e-12));

  REQUIRE(spr_gmm_sigmak_lower(1.0, 1.0, 100, 25, 1.0, &value, &vacuous) ==
          SPR_OK);
  CHECK(vacuous == 0);
  CHECK(value == doctest::Approx(16.0).epsilon(1e-13));

  REQUIRE(spr_gamma_tail_upper(4.0, 2.0, &value) == SPR_OK);
  CHECK(value == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  REQUIRE(spr_gamma_tail_lower(4.0, 2.0, &value) == SPR_OK);
  CHECK(value == doctest::Approx(std::exp(-2.0)).epsilon(1e-14));

  double upper = 0.0;
  double lower = 0.0;
  REQUIRE(spr_chi_square_tail_thresholds(2, 1.0, &upper, &lower) == SPR_OK);
  CHECK(upper == doctest::Approx(6.82842712474619).epsilon(1e-13));

  double max_thr = 0.0;
  double min_thr = 0.0;
  double max_prob = 0.0;
  double min_prob = 0.0;
  REQUIRE(spr_gamma_max_min_bounds(20, 2.0, 3.0, &max_thr, &min_thr,
                                   &max_prob, &min_prob) == SPR_OK);
  CHECK(max_prob == doctest::Approx(20.0 * std::exp(-1.5 * std::sqrt(2.0)))
                        .epsilon(1e-12));

  int32_t condition = 0;
  REQUIRE(spr_dirichlet_max_upper(100, 10.0, 0.05, 0.05, &value, &vacuous,
                                  &condition) == SPR_OK);
  CHECK(vacuous == 0);
  CHECK(condition == 0);
  CHECK(value == doctest::Approx(0.02731620338250701).epsilon(1e-12));
  REQUIRE(spr_dirichlet_min_lower(10, 50.0, 0.05, 0.05, &value, &vacuous,
                                  &condition) == SPR_OK);
  CHECK(vacuous == 0);
  CHECK(value == doctest::Approx(0.04863945736513508).epsilon(1e-12));
}
