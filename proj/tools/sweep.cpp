#include "sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <memory>
#include <set>
#include <vector>

#include "spectrank.h"
#include "util.hpp"

namespace cli {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

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

struct SweepRow {
  std::string swept_name;
  double swept_value = 0.0;
  int run_index = 0;
  double frob_r = kNan;
  double spec_r = kNan;
  double delta_r = kNan;
  double sv_k = kNan;
  double sv_k_plus_1 = kNan;
  double sigma1_hat = kNan;
  double sigma1_bar = kNan;
  double sigmak_under = kNan;
  int32_t k_lower = -1;
  int32_t k_upper = -1;
  int32_t sigma1_bar_vacuous = 0;
  int32_t sigmak_under_vacuous = 0;
  int32_t k_upper_vacuous = 0;
  int32_t error = 0;
};

const char* kHeader =
    "swept_name,swept_value,run_index,frob_R,spec_R,delta_r,sv_K,"
    "sv_K_plus_1,sigma1_hat,sigma1_bar,sigmaK_under,k_lower,k_upper,"
    "sigma1_bar_vacuous,sigmaK_under_vacuous,k_upper_vacuous,error";

std::string to_csv(const SweepRow& r) {
  std::string line;
  line += r.swept_name;
  line += ',';
  line += format_double(r.swept_value);
  line += ',';
  line += std::to_string(r.run_index);
  for (const double v : {r.frob_r, r.spec_r, r.delta_r, r.sv_k, r.sv_k_plus_1,
                         r.sigma1_hat, r.sigma1_bar, r.sigmak_under}) {
    line += ',';
    line += format_double(v);
  }
  for (const int32_t v :
       {r.k_lower, r.k_upper, r.sigma1_bar_vacuous, r.sigmak_under_vacuous,
        r.k_upper_vacuous, r.error}) {
    line += ',';
    line += std::to_string(v);
  }
  return line;
}

struct SweepSpec {
  std::string model;       // lda | gmm
  std::string experiment;  // stream-hash namespace
  std::string swept;
  std::vector<double> values;
  int runs = 5;
  int32_t k_max = 200;
  spr_confidence conf{};
  spr_recipe recipe = SPR_RECIPE_SPLIT;
  bool per_candidate_alpha0 = false;
  double alpha0_override = 0.0;
  Config fixed;  // untouched copy for per-point parameter lookup
};

bool is_integer_param(const std::string& name) {
  static const std::set<std::string> kIntParams = {"D", "L", "V", "K", "N",
                                                   "m"};
  return kIntParams.count(name) != 0;
}

SweepSpec parse_sweep_spec(const Config& config) {
  SweepSpec spec;
  spec.model = config.get("model", "lda");
  if (spec.model != "lda" && spec.model != "gmm") {
    throw CliError("model must be 'lda' or 'gmm', got '" + spec.model + "'");
  }
  spec.experiment = config.get("experiment", "sweep");
  spec.swept = config.require("sweep");
  static const std::set<std::string> kLdaParams = {"D", "L", "V",
                                                   "K", "alpha", "beta"};
  static const std::set<std::string> kGmmParams = {"N", "m", "K",
                                                   "sigma", "sigma_mu",
                                                   "alpha"};
  const auto& allowed = spec.model == "lda" ? kLdaParams : kGmmParams;
  if (allowed.count(spec.swept) == 0) {
    throw CliError("'" + spec.swept + "' is not a sweepable " + spec.model +
                   " parameter");
  }
  const std::string values_text = config.require("values");
  for (const std::string& part : split(values_text, ',')) {
    const std::string token = trim(part);
    if (token.empty()) {
      continue;
    }
    spec.values.push_back(parse_double(token, "values"));
  }
  if (spec.values.empty()) {
    throw CliError("sweep value list is empty");
  }
  for (size_t i = 1; i < spec.values.size(); ++i) {
    if (!(spec.values[i] > spec.values[i - 1])) {
      throw CliError("sweep values must be strictly increasing");
    }
  }
  if (is_integer_param(spec.swept)) {
    for (const double v : spec.values) {
      if (v != std::floor(v)) {
        throw CliError("swept parameter '" + spec.swept +
                       "' takes integer values");
      }
    }
  }
  spec.runs = static_cast<int>(config.get_int("runs", 5));
  if (spec.runs < 1) {
    throw CliError("runs must be >= 1");
  }
  spec.k_max = static_cast<int32_t>(config.get_int("k_max", 200));
  const double delta = config.get_double("delta", 0.05);
  spec.conf = spr_confidence_split(delta);
  spec.conf.delta1 = config.get_double("delta1", spec.conf.delta1);
  spec.conf.delta2 = config.get_double("delta2", spec.conf.delta2);
  spec.conf.delta3 = config.get_double("delta3", spec.conf.delta3);
  spec.conf.t = config.get_double("t", 0.0);
  const std::string mode = config.get("spectral_mode", "split");
  if (mode == "fixed_delta_prime") {
    spec.recipe = SPR_RECIPE_FIXED_DELTA_PRIME;
  } else if (mode != "split") {
    throw CliError("spectral_mode must be 'split' or 'fixed_delta_prime'");
  }
  spec.per_candidate_alpha0 =
      config.get("alpha0_mode", "fixed") == "per_candidate";
  spec.alpha0_override = config.get_double("alpha0", 0.0);
  spec.fixed = config;
  return spec;
}

double param_value(const SweepSpec& spec, const std::string& name,
                   double swept_value) {
  if (name == spec.swept) {
    return swept_value;
  }
  return spec.fixed.require_double(name);
}

SweepRow compute_lda_row(const SweepSpec& spec, double swept_value,
                         uint64_t seed, uint64_t stream) {
  const auto K = static_cast<int32_t>(param_value(spec, "K", swept_value));
  const auto V = static_cast<int32_t>(param_value(spec, "V", swept_value));
  const auto D = static_cast<int32_t>(param_value(spec, "D", swept_value));
  const auto L = static_cast<int32_t>(param_value(spec, "L", swept_value));
  const double alpha = param_value(spec, "alpha", swept_value);
  const double beta = param_value(spec, "beta", swept_value);

  SweepRow row;
  spr_corpus* corpus_raw = nullptr;
  spr_lda_truth* truth_raw = nullptr;
  check(spr_lda_generate(K, V, alpha, beta, D, L, seed, stream, &corpus_raw,
                         &truth_raw),
        "generate");
  CorpusPtr corpus(corpus_raw, &spr_corpus_free);
  TruthPtr truth(truth_raw, &spr_lda_truth_free);

  spr_matrix* m2_true_raw = nullptr;
  check(spr_lda_truth_m2(truth.get(), &m2_true_raw), "true moment");
  MatrixPtr m2_true(m2_true_raw, &spr_matrix_free);

  const double alpha0 = spec.alpha0_override > 0.0
                            ? spec.alpha0_override
                            : static_cast<double>(K) * alpha;
  spr_matrix* m2_raw = nullptr;
  check(spr_m2_lda(corpus.get(), alpha0, &m2_raw), "empirical moment");
  MatrixPtr m2(m2_raw, &spr_matrix_free);

  check(spr_residual(m2.get(), m2_true.get(), nullptr, &row.frob_r,
                     &row.spec_r),
        "residual");

  std::vector<double> sv(static_cast<size_t>(V));
  check(spr_singular_values_sym(m2.get(), sv.data(), sv.size()), "spectrum");
  row.sigma1_hat = sv.front();
  row.sv_k = K <= V ? sv[static_cast<size_t>(K - 1)] : 0.0;
  row.sv_k_plus_1 = K < V ? sv[static_cast<size_t>(K)] : 0.0;

  check(spr_lda_delta_r(D, L, V, spec.conf.delta, &row.delta_r), "delta_r");
  check(spr_k_lower(sv.data(), V, row.delta_r, &row.k_lower), "k_lower");

  if (spec.per_candidate_alpha0) {
    spr_report report{};
    check(spr_lda_bounds_report(corpus.get(), K, alpha, beta, &spec.conf,
                                spec.recipe, spec.k_max, 1,
                                spec.alpha0_override, &report),
          "bounds report");
    row.k_upper = report.k_upper;
    row.k_upper_vacuous = report.k_upper_vacuous;
  } else {
    int32_t warning = 0;
    check(spr_lda_k_upper(row.sigma1_hat, D, L, V, alpha, beta, &spec.conf,
                          spec.recipe, spec.k_max, &row.k_upper,
                          &row.k_upper_vacuous, &warning),
          "k_upper");
  }

  check(spr_lda_sigma1_upper(K, V, alpha, beta, &spec.conf, spec.recipe,
                             &row.sigma1_bar, &row.sigma1_bar_vacuous),
        "sigma1 bound");
  check(spr_lda_sigmak_lower(K, V, alpha, beta, &spec.conf, spec.recipe,
                             &row.sigmak_under, &row.sigmak_under_vacuous),
        "sigmaK bound");
  return row;
}

SweepRow compute_gmm_row(const SweepSpec& spec, double swept_value,
                         uint64_t seed, uint64_t stream) {
  const auto K = static_cast<int32_t>(param_value(spec, "K", swept_value));
  const auto m = static_cast<int32_t>(param_value(spec, "m", swept_value));
  const auto N = static_cast<int64_t>(param_value(spec, "N", swept_value));
  const double sigma = param_value(spec, "sigma", swept_value);
  const double sigma_mu = param_value(spec, "sigma_mu", swept_value);
  const double alpha = param_value(spec, "alpha", swept_value);

  SweepRow row;
  spr_gmm_data* data_raw = nullptr;
  check(spr_gmm_generate(K, m, sigma, sigma_mu, alpha, N, seed, stream,
                         &data_raw),
        "generate");
  GmmPtr data(data_raw, &spr_gmm_free);

  spr_matrix* m2_true_raw = nullptr;
  check(spr_gmm_true_m2(data.get(), &m2_true_raw), "true moment");
  MatrixPtr m2_true(m2_true_raw, &spr_matrix_free);

  spr_matrix* m2_raw = nullptr;
  check(spr_m2_gmm(data.get(), sigma, &m2_raw), "empirical moment");
  MatrixPtr m2(m2_raw, &spr_matrix_free);

  check(spr_residual(m2.get(), m2_true.get(), nullptr, &row.frob_r,
                     &row.spec_r),
        "residual");

  double w_min = 0.0;
  check(spr_gmm_weight_min(data.get(), &w_min), "weights");

  spr_report report{};
  check(spr_gmm_bounds_report(data.get(), K, sigma, sigma_mu, alpha,
                              &spec.conf, spec.k_max, w_min, &report),
        "bounds report");
  row.delta_r = report.delta_r;
  row.sigma1_hat = report.sigma1_hat;
  row.sv_k = report.sv_k;
  row.sv_k_plus_1 = report.sv_k_plus_1;
  row.sigma1_bar = report.sigma1_bar;
  row.sigma1_bar_vacuous = report.sigma1_bar_vacuous;
  row.sigmak_under = report.sigmak_under;
  row.sigmak_under_vacuous = report.sigmak_under_vacuous;
  row.k_lower = report.k_lower;
  row.k_upper = report.k_upper;
  row.k_upper_vacuous = report.k_upper_vacuous;
  return row;
}

}  // namespace

std::string run_sweep(const Config& config, uint64_t seed) {
  const SweepSpec spec = parse_sweep_spec(config);
  std::string csv(kHeader);
  csv += '\n';
  for (size_t point = 0; point < spec.values.size(); ++point) {
    const double value = spec.values[point];
    for (int run = 0; run < spec.runs; ++run) {
      const uint64_t stream = spr_stream_hash(
          spec.experiment.c_str(), static_cast<uint64_t>(point),
          static_cast<uint64_t>(run));
      SweepRow row;
      try {
        row = spec.model == "lda"
                  ? compute_lda_row(spec, value, seed, stream)
                  : compute_gmm_row(spec, value, seed, stream);
      } catch (const CliError& e) {
        row = SweepRow{};
        row.error = 1;
        std::fprintf(stderr, "sweep point %zu run %d failed: %s\n", point,
                     run, e.what());
      }
      row.swept_name = spec.swept;
      row.swept_value = value;
      row.run_index = run;
      csv += to_csv(row);
      csv += '\n';
    }
  }
  return csv;
}

namespace {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const {
    for (size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) {
        return static_cast<int>(i);
      }
    }
    throw CliError("sweep CSV schema mismatch: missing column '" + name + "'");
  }
};

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw CliError("cannot open CSV file '" + path + "'");
  }
  CsvTable table;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    std::vector<std::string> cells = split(line, ',');
    if (first) {
      table.header = std::move(cells);
      first = false;
    } else {
      if (cells.size() != table.header.size()) {
        throw CliError(path + ": row with " + std::to_string(cells.size()) +
                       " cells, expected " +
                       std::to_string(table.header.size()));
      }
      table.rows.push_back(std::move(cells));
    }
  }
  if (first) {
    throw CliError(path + ": empty file, expected a CSV header");
  }
  return table;
}

struct Curve {
  std::string name;
  std::string guard;  // vacuity-flag column excluded from means, "" if none
};

std::vector<Curve> figure_curves(const std::string& figure) {
  if (figure == "residuals") {
    return {{"frob_R", ""},
            {"spec_R", ""},
            {"delta_r", ""},
            {"sv_K", ""},
            {"sv_K_plus_1", ""}};
  }
  if (figure == "spectral") {
    return {{"sigma1_hat", ""},
            {"sigma1_bar", "sigma1_bar_vacuous"},
            {"sigmaK_under", "sigmaK_under_vacuous"}};
  }
  if (figure == "kbounds") {
    return {{"k_lower", ""}, {"k_upper", "k_upper_vacuous"}};
  }
  throw CliError("unknown figure '" + figure +
                 "' (expected residuals, spectral or kbounds)");
}

}  // namespace

int write_plotdata(const std::string& csv_path, const std::string& figure,
                   const std::string& out_prefix) {
  const CsvTable table = read_csv(csv_path);
  const std::vector<Curve> curves = figure_curves(figure);
  const int value_col = table.column("swept_value");
  const int error_col = table.column("error");

  // Swept values in order of first appearance.
  std::vector<std::string> order;
  for (const auto& row : table.rows) {
    const std::string& v = row[static_cast<size_t>(value_col)];
    if (order.empty() || order.back() != v) {
      if (std::find(order.begin(), order.end(), v) == order.end()) {
        order.push_back(v);
      }
    }
  }

  int files = 0;
  for (const Curve& curve : curves) {
    const int curve_col = table.column(curve.name);
    const int guard_col =
        curve.guard.empty() ? -1 : table.column(curve.guard);
    std::string out;
    out += "swept_value " + curve.name + "\n";
    for (const std::string& value : order) {
      double sum = 0.0;
      int count = 0;
      for (const auto& row : table.rows) {
        if (row[static_cast<size_t>(value_col)] != value) {
          continue;
        }
        if (row[static_cast<size_t>(error_col)] != "0") {
          continue;
        }
        if (guard_col >= 0 && row[static_cast<size_t>(guard_col)] != "0") {
          continue;
        }
        sum += parse_double(row[static_cast<size_t>(curve_col)], curve.name);
        ++count;
      }
      const double mean = count > 0 ? sum / count : kNan;
      out += value + " " + format_double(mean) + "\n";
    }
    const std::string path = out_prefix + curve.name + ".dat";
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) {
      throw CliError("cannot open '" + path + "' for writing");
    }
    file << out;
    ++files;
  }
  return files;
}

}  // namespace cli
