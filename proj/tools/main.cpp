#include <cstdio>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "config.hpp"
#include "spectrank.h"
#include "sweep.hpp"
#include "util.hpp"

namespace {

using cli::CliError;
using cli::Config;

void check(spr_status status, const std::string& context) {
  if (status != SPR_OK) {
    throw CliError(context + ": " + spr_status_name(status) + ": " +
                   spr_last_error());
  }
}

using CorpusPtr = std::unique_ptr<spr_corpus, decltype(&spr_corpus_free)>;
using TruthPtr = std::unique_ptr<spr_lda_truth, decltype(&spr_lda_truth_free)>;
using GmmPtr = std::unique_ptr<spr_gmm_data, decltype(&spr_gmm_free)>;
using MatrixPtr = std::unique_ptr<spr_matrix, decltype(&spr_matrix_free)>;

MatrixPtr wrap(spr_matrix* raw) { return MatrixPtr(raw, &spr_matrix_free); }

struct CommonOptions {
  std::string model;
  std::string config_path;
  std::string out;
  uint64_t seed = 0;
  std::vector<std::string> sets;
  CLI::Option* model_opt = nullptr;
  CLI::Option* seed_opt = nullptr;

  void add_to(CLI::App* app) {
    model_opt = app->add_option("--model", model, "Model family: lda or gmm");
    app->add_option("--config", config_path, "key=value settings file");
    seed_opt = app->add_option("--seed", seed, "Base RNG seed");
    app->add_option("--out", out, "Output path or prefix");
    app->add_option("--set", sets,
                    "Override a setting, key=value (repeatable)");
  }

  Config build() const {
    Config config;
    if (!config_path.empty()) {
      config.load_file(config_path);
    }
    for (const std::string& pair : sets) {
      config.set_pair(pair);
    }
    if (model_opt != nullptr && model_opt->count() > 0) {
      config.set("model", model);
    }
    if (seed_opt != nullptr && seed_opt->count() > 0) {
      config.set("seed", std::to_string(seed));
    }
    return config;
  }
};

spr_confidence confidence_from(const Config& config) {
  spr_confidence conf = spr_confidence_split(config.get_double("delta", 0.05));
  conf.delta1 = config.get_double("delta1", conf.delta1);
  conf.delta2 = config.get_double("delta2", conf.delta2);
  conf.delta3 = config.get_double("delta3", conf.delta3);
  conf.t = config.get_double("t", 0.0);
  return conf;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw CliError("cannot open '" + path + "' for writing");
  }
  out << content;
}

std::string report_text(const spr_report& report) {
  std::vector<char> buffer(4096);
  check(spr_report_format(&report, buffer.data(), buffer.size()),
        "format report");
  return std::string(buffer.data());
}

// Single-row CSV in the sweep schema; residual columns are nan because a
// standalone bounds run has no ground truth.
std::string report_csv(const spr_report& report) {
  const double nan = std::nan("");
  std::string csv =
      "swept_name,swept_value,run_index,frob_R,spec_R,delta_r,sv_K,"
      "sv_K_plus_1,sigma1_hat,sigma1_bar,sigmaK_under,k_lower,k_upper,"
      "sigma1_bar_vacuous,sigmaK_under_vacuous,k_upper_vacuous,error\n";
  csv += "-,0,0";
  for (const double v : {nan, nan, report.delta_r, report.sv_k,
                         report.sv_k_plus_1, report.sigma1_hat,
                         report.sigma1_bar, report.sigmak_under}) {
    csv += ',';
    csv += cli::format_double(v);
  }
  for (const int32_t v :
       {report.k_lower, report.k_upper, report.sigma1_bar_vacuous,
        report.sigmak_under_vacuous, report.k_upper_vacuous, int32_t{0}}) {
    csv += ',';
    csv += std::to_string(v);
  }
  csv += '\n';
  return csv;
}

int cmd_generate(const CommonOptions& common) {
  const Config config = common.build();
  if (common.out.empty()) {
    throw CliError("generate requires --out <prefix>");
  }
  const std::string model = config.get("model", "lda");
  const auto seed = static_cast<uint64_t>(config.get_int("seed", 0));
  const std::string experiment = config.get("experiment", "generate");
  const uint64_t stream = spr_stream_hash(experiment.c_str(), 0, 0);

  if (model == "lda") {
    spr_corpus* corpus_raw = nullptr;
    spr_lda_truth* truth_raw = nullptr;
    check(spr_lda_generate(static_cast<int32_t>(config.require_int("K")),
                           static_cast<int32_t>(config.require_int("V")),
                           config.require_double("alpha"),
                           config.require_double("beta"),
                           static_cast<int32_t>(config.require_int("D")),
                           static_cast<int32_t>(config.require_int("L")),
                           seed, stream, &corpus_raw, &truth_raw),
          "generate");
    CorpusPtr corpus(corpus_raw, &spr_corpus_free);
    TruthPtr truth(truth_raw, &spr_lda_truth_free);
    check(
        spr_corpus_write(corpus.get(), (common.out + ".docword.txt").c_str()),
        "write corpus");
    spr_matrix* topics_raw = nullptr;
    check(spr_lda_truth_topics(truth.get(), &topics_raw), "topics");
    MatrixPtr topics = wrap(topics_raw);
    check(spr_matrix_write_text(topics.get(),
                                (common.out + ".topics.txt").c_str()),
          "write topics");
    spr_matrix* mixings_raw = nullptr;
    check(spr_lda_truth_mixings(truth.get(), &mixings_raw), "mixings");
    MatrixPtr mixings = wrap(mixings_raw);
    check(spr_matrix_write_text(mixings.get(),
                                (common.out + ".mixings.txt").c_str()),
          "write mixings");
    std::printf("wrote %s.docword.txt (D=%d V=%d words=%lld)\n",
                common.out.c_str(), spr_corpus_num_docs(corpus.get()),
                spr_corpus_vocab(corpus.get()),
                static_cast<long long>(spr_corpus_total_words(corpus.get())));
    std::printf("wrote %s.topics.txt %s.mixings.txt\n", common.out.c_str(),
                common.out.c_str());
    return 0;
  }
  if (model == "gmm") {
    spr_gmm_data* data_raw = nullptr;
    check(spr_gmm_generate(static_cast<int32_t>(config.require_int("K")),
                           static_cast<int32_t>(config.require_int("m")),
                           config.require_double("sigma"),
                           config.require_double("sigma_mu"),
                           config.require_double("alpha"),
                           config.require_int("N"), seed, stream, &data_raw),
          "generate");
    GmmPtr data(data_raw, &spr_gmm_free);
    spr_matrix* points_raw = nullptr;
    check(spr_gmm_points(data.get(), &points_raw), "points");
    MatrixPtr points = wrap(points_raw);
    check(spr_matrix_write_text(points.get(),
                                (common.out + ".points.txt").c_str()),
          "write points");
    spr_matrix* means_raw = nullptr;
    check(spr_gmm_means(data.get(), &means_raw), "means");
    MatrixPtr means = wrap(means_raw);
    check(
        spr_matrix_write_text(means.get(), (common.out + ".means.txt").c_str()),
        "write means");
    spr_matrix* weights_raw = nullptr;
    check(spr_gmm_weights(data.get(), &weights_raw), "weights");
    MatrixPtr weights = wrap(weights_raw);
    check(spr_matrix_write_text(weights.get(),
                                (common.out + ".weights.txt").c_str()),
          "write weights");
    std::printf("wrote %s.points.txt (N=%lld m=%d)\n", common.out.c_str(),
                static_cast<long long>(spr_gmm_num_points(data.get())),
                spr_gmm_dim(data.get()));
    std::printf("wrote %s.means.txt %s.weights.txt\n", common.out.c_str(),
                common.out.c_str());
    return 0;
  }
  throw CliError("model must be 'lda' or 'gmm', got '" + model + "'");
}

int cmd_moments(const CommonOptions& common, const std::string& input,
                bool binary) {
  const Config config = common.build();
  if (common.out.empty()) {
    throw CliError("moments requires --out <prefix>");
  }
  const std::string model = config.get("model", "lda");
  MatrixPtr m2(nullptr, &spr_matrix_free);
  if (model == "lda") {
    spr_corpus* corpus_raw = nullptr;
    check(spr_corpus_read(input.c_str(), &corpus_raw), "read corpus");
    CorpusPtr corpus(corpus_raw, &spr_corpus_free);
    double alpha0 = config.get_double("alpha0", 0.0);
    if (alpha0 <= 0.0) {
      alpha0 = static_cast<double>(config.require_int("K")) *
               config.require_double("alpha");
    }
    const int32_t vocab = spr_corpus_vocab(corpus.get());
    std::vector<double> m1(static_cast<size_t>(vocab));
    check(spr_m1(corpus.get(), m1.data(), m1.size()), "m1");
    spr_matrix* m1_raw = nullptr;
    check(spr_matrix_create(vocab, 1, m1.data(), &m1_raw), "m1 matrix");
    MatrixPtr m1_mat = wrap(m1_raw);
    check(
        spr_matrix_write_text(m1_mat.get(), (common.out + ".m1.txt").c_str()),
        "write m1");
    std::printf("wrote %s.m1.txt\n", common.out.c_str());
    spr_matrix* m2_raw = nullptr;
    check(spr_m2_lda(corpus.get(), alpha0, &m2_raw), "m2");
    m2 = wrap(m2_raw);
  } else if (model == "gmm") {
    spr_gmm_data* data_raw = nullptr;
    check(spr_gmm_read_points(input.c_str(), &data_raw), "read points");
    GmmPtr data(data_raw, &spr_gmm_free);
    spr_matrix* m2_raw = nullptr;
    check(spr_m2_gmm(data.get(), config.require_double("sigma"), &m2_raw),
          "m2");
    m2 = wrap(m2_raw);
  } else {
    throw CliError("model must be 'lda' or 'gmm', got '" + model + "'");
  }
  check(spr_matrix_write_text(m2.get(), (common.out + ".m2.txt").c_str()),
        "write m2");
  std::printf("wrote %s.m2.txt\n", common.out.c_str());
  if (binary) {
    check(spr_matrix_write_binary(m2.get(), (common.out + ".m2.bin").c_str()),
          "write m2 binary");
    std::printf("wrote %s.m2.bin\n", common.out.c_str());
  }
  return 0;
}

int cmd_spectrum(const CommonOptions& common, const std::string& input,
                 bool binary) {
  spr_matrix* raw = nullptr;
  check(binary ? spr_matrix_read_binary(input.c_str(), &raw)
               : spr_matrix_read_text(input.c_str(), &raw),
        "read matrix");
  MatrixPtr matrix = wrap(raw);
  const int32_t n = spr_matrix_rows(matrix.get());
  std::vector<double> sv(static_cast<size_t>(n));
  check(spr_singular_values_sym(matrix.get(), sv.data(), sv.size()),
        "singular values");
  std::string text;
  for (const double v : sv) {
    text += cli::format_double(v);
    text += '\n';
  }
  std::fputs(text.c_str(), stdout);
  if (!common.out.empty()) {
    write_text_file(common.out, text);
  }
  return 0;
}

int cmd_bounds(const CommonOptions& common, const std::string& input,
               const std::string& csv_path) {
  const Config config = common.build();
  const std::string model = config.get("model", "lda");
  const spr_confidence conf = confidence_from(config);
  const auto k_max = static_cast<int32_t>(config.get_int("k_max", 200));
  spr_report report{};
  const std::string mode = config.get("spectral_mode", "split");
  spr_recipe recipe = SPR_RECIPE_SPLIT;
  if (mode == "fixed_delta_prime") {
    recipe = SPR_RECIPE_FIXED_DELTA_PRIME;
  } else if (mode != "split") {
    throw CliError("spectral_mode must be 'split' or 'fixed_delta_prime'");
  }
  if (model == "lda") {
    spr_corpus* corpus_raw = nullptr;
    check(spr_corpus_read(input.c_str(), &corpus_raw), "read corpus");
    CorpusPtr corpus(corpus_raw, &spr_corpus_free);
    const bool per_candidate =
        config.get("alpha0_mode", "fixed") == "per_candidate";
    check(spr_lda_bounds_report(
              corpus.get(), static_cast<int32_t>(config.require_int("K")),
              config.require_double("alpha"), config.require_double("beta"),
              &conf, recipe, k_max, per_candidate ? 1 : 0,
              config.get_double("alpha0", 0.0), &report),
          "bounds");
  } else if (model == "gmm") {
    spr_gmm_data* data_raw = nullptr;
    check(spr_gmm_read_points(input.c_str(), &data_raw), "read points");
    GmmPtr data(data_raw, &spr_gmm_free);
    check(spr_gmm_bounds_report(
              data.get(), static_cast<int32_t>(config.require_int("K")),
              config.require_double("sigma"),
              config.require_double("sigma_mu"),
              config.require_double("alpha"), &conf, k_max,
              config.get_double("w_min", 0.0), &report),
          "bounds");
  } else {
    throw CliError("model must be 'lda' or 'gmm', got '" + model + "'");
  }
  const std::string text = report_text(report);
  std::fputs(text.c_str(), stdout);
  if (!common.out.empty()) {
    write_text_file(common.out, text);
  }
  if (!csv_path.empty()) {
    write_text_file(csv_path, report_csv(report));
  }
  return 0;
}

int cmd_sweep(const CommonOptions& common) {
  const Config config = common.build();
  if (common.out.empty()) {
    throw CliError("sweep requires --out <csv path>");
  }
  const auto seed = static_cast<uint64_t>(config.get_int("seed", 0));
  const std::string csv = cli::run_sweep(config, seed);
  write_text_file(common.out, csv);
  size_t rows = 0;
  for (const char ch : csv) {
    rows += ch == '\n' ? 1 : 0;
  }
  std::printf("wrote %s (%zu rows)\n", common.out.c_str(), rows - 1);
  return 0;
}

int cmd_plotdata(const CommonOptions& common, const std::string& input,
                 const std::string& figure) {
  if (common.out.empty()) {
    throw CliError("plotdata requires --out <prefix>");
  }
  const int files = cli::write_plotdata(input, figure, common.out);
  std::printf("wrote %d series files with prefix %s\n", files,
              common.out.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "spectrank: bounds on the number of latent components from "
      "second-order moment spectra"};
  app.require_subcommand(1);

  CommonOptions generate_opts;
  CLI::App* generate =
      app.add_subcommand("generate", "Generate a synthetic dataset");
  generate_opts.add_to(generate);

  CommonOptions moments_opts;
  std::string moments_in;
  bool moments_binary = false;
  CLI::App* moments =
      app.add_subcommand("moments", "Compute empirical moments from a file");
  moments_opts.add_to(moments);
  moments->add_option("--in", moments_in, "Input corpus or points file")
      ->required();
  moments->add_flag("--binary", moments_binary,
                    "Also write the binary moment dump");

  CommonOptions spectrum_opts;
  std::string spectrum_in;
  bool spectrum_binary = false;
  CLI::App* spectrum = app.add_subcommand(
      "spectrum", "Print singular values of a symmetric matrix file");
  spectrum_opts.add_to(spectrum);
  spectrum->add_option("--in", spectrum_in, "Input matrix file")->required();
  spectrum->add_flag("--binary", spectrum_binary,
                     "Input is the binary matrix format");

  CommonOptions bounds_opts;
  std::string bounds_in;
  std::string bounds_csv;
  CLI::App* bounds = app.add_subcommand(
      "bounds", "Run the moments -> spectrum -> bounds pipeline");
  bounds_opts.add_to(bounds);
  bounds->add_option("--in", bounds_in, "Input corpus or points file")
      ->required();
  bounds->add_option("--csv", bounds_csv, "Also write a one-row CSV");

  CommonOptions sweep_opts;
  CLI::App* sweep =
      app.add_subcommand("sweep", "Run a parameter sweep, writing a CSV");
  sweep_opts.add_to(sweep);

  CommonOptions plot_opts;
  std::string plot_in;
  std::string plot_figure;
  CLI::App* plotdata = app.add_subcommand(
      "plotdata", "Aggregate a sweep CSV into per-curve series files");
  plot_opts.add_to(plotdata);
  plotdata->add_option("--in", plot_in, "Sweep CSV file")->required();
  plotdata
      ->add_option("--figure", plot_figure,
                   "Curve set: residuals, spectral or kbounds")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (generate->parsed()) {
      return cmd_generate(generate_opts);
    }
    if (moments->parsed()) {
      return cmd_moments(moments_opts, moments_in, moments_binary);
    }
    if (spectrum->parsed()) {
      return cmd_spectrum(spectrum_opts, spectrum_in, spectrum_binary);
    }
    if (bounds->parsed()) {
      return cmd_bounds(bounds_opts, bounds_in, bounds_csv);
    }
    if (sweep->parsed()) {
      return cmd_sweep(sweep_opts);
    }
    if (plotdata->parsed()) {
      return cmd_plotdata(plot_opts, plot_in, plot_figure);
    }
  } catch (const CliError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
