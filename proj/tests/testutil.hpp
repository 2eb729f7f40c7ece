#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "spectrank/rng.hpp"
#include "spectrank/synth.hpp"

// Path of the built CLI binary, forwarded by CTest as --cli-path=...; empty
// when the harness did not provide one.
extern std::string g_cli_path;

namespace testutil {

// One-sided Jacobi SVD: orthogonalizes column pairs until convergence, then
// reads singular values off the column norms. Deliberately independent of
// the eigendecomposition route used by the library.
inline std::vector<double> jacobi_singular_values(Eigen::MatrixXd a) {
  const Eigen::Index n = a.cols();
  for (int sweep = 0; sweep < 100; ++sweep) {
    bool rotated = false;
    for (Eigen::Index i = 0; i < n - 1; ++i) {
      for (Eigen::Index j = i + 1; j < n; ++j) {
        const double aii = a.col(i).squaredNorm();
        const double ajj = a.col(j).squaredNorm();
        const double aij = a.col(i).dot(a.col(j));
        if (std::abs(aij) <= 1e-15 * std::sqrt(aii * ajj) || aij == 0.0) {
          continue;
        }
        rotated = true;
        const double tau = (ajj - aii) / (2.0 * aij);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        const Eigen::VectorXd ci = a.col(i);
        const Eigen::VectorXd cj = a.col(j);
        a.col(i) = c * ci - s * cj;
        a.col(j) = s * ci + c * cj;
      }
    }
    if (!rotated) {
      break;
    }
  }
  std::vector<double> sv(static_cast<size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    sv[static_cast<size_t>(i)] = a.col(i).norm();
  }
  std::sort(sv.begin(), sv.end(), std::greater<>());
  return sv;
}

// Definition-level second-order moment: expands each document into its word
// sequence and sums x_l (x) x_s over ordered pairs l != s explicitly.
inline Eigen::MatrixXd brute_force_m2(const spectrank::synth::Corpus& corpus,
                                      double alpha0) {
  const int32_t v = corpus.vocab;
  Eigen::MatrixXd pair = Eigen::MatrixXd::Zero(v, v);
  Eigen::VectorXd totals = Eigen::VectorXd::Zero(v);
  double total_words = 0.0;
  for (const auto& doc : corpus.docs) {
    std::vector<int32_t> words;
    for (const auto& [word, count] : doc.entries) {
      for (int32_t c = 0; c < count; ++c) {
        words.push_back(word);
      }
      totals(word) += count;
    }
    total_words += static_cast<double>(doc.length);
    const double len = static_cast<double>(doc.length);
    const double w = 1.0 / (len * (len - 1.0));
    for (size_t l = 0; l < words.size(); ++l) {
      for (size_t s = 0; s < words.size(); ++s) {
        if (l != s) {
          pair(words[l], words[s]) += w;
        }
      }
    }
  }
  pair /= static_cast<double>(corpus.docs.size());
  const Eigen::VectorXd m1 = totals / total_words;
  return pair - (alpha0 / (alpha0 + 1.0)) * (m1 * m1.transpose());
}

// Hand-assembled corpus from (word, count) lists.
inline spectrank::synth::Corpus make_corpus(
    int32_t vocab,
    const std::vector<std::vector<std::pair<int32_t, int32_t>>>& docs) {
  spectrank::synth::Corpus corpus;
  corpus.vocab = vocab;
  for (const auto& entries : docs) {
    spectrank::synth::Document doc;
    doc.entries = entries;
    std::sort(doc.entries.begin(), doc.entries.end());
    for (const auto& [word, count] : doc.entries) {
      doc.length += count;
    }
    corpus.docs.push_back(std::move(doc));
  }
  return corpus;
}

// Random corpus with per-document lengths in [2, max_len]; entries follow a
// uniform word distribution so tiny vocabularies get repeated words.
inline spectrank::synth::Corpus random_small_corpus(spectrank::RngState& rng,
                                                    int32_t max_docs,
                                                    int32_t max_len,
                                                    int32_t max_vocab) {
  const int32_t vocab =
      2 + static_cast<int32_t>(rng.next_u64() % static_cast<uint64_t>(
                                                    max_vocab - 1));
  const int32_t num_docs =
      1 + static_cast<int32_t>(rng.next_u64() % static_cast<uint64_t>(
                                                    max_docs));
  std::vector<std::vector<std::pair<int32_t, int32_t>>> docs;
  for (int32_t d = 0; d < num_docs; ++d) {
    const int32_t len =
        2 + static_cast<int32_t>(rng.next_u64() % static_cast<uint64_t>(
                                                      max_len - 1));
    std::vector<int32_t> counts(static_cast<size_t>(vocab), 0);
    for (int32_t l = 0; l < len; ++l) {
      ++counts[static_cast<size_t>(
          rng.next_u64() % static_cast<uint64_t>(vocab))];
    }
    std::vector<std::pair<int32_t, int32_t>> entries;
    for (int32_t w = 0; w < vocab; ++w) {
      if (counts[static_cast<size_t>(w)] > 0) {
        entries.emplace_back(w, counts[static_cast<size_t>(w)]);
      }
    }
    docs.push_back(std::move(entries));
  }
  return make_corpus(vocab, docs);
}

inline double max_abs(const Eigen::MatrixXd& m) {
  return m.cwiseAbs().maxCoeff();
}

}  // namespace testutil
