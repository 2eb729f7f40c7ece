#pragma once

#include <Eigen/Core>
#include <string>

#include "spectrank/synth.hpp"

namespace spectrank::io {

/// Shortest decimal form that round-trips the exact double (std::to_chars);
/// locale-independent. All text output of reals goes through this.
std::string format_double(double value);

/// UCI bag-of-words text format: three header lines holding D, V and NNZ,
/// then one "doc word count" triple per line with 1-based ids.
synth::Corpus read_uci_corpus(const std::string& path);
void write_uci_corpus(const synth::Corpus& corpus, const std::string& path);

/// Plain-text matrix: a "rows cols" header line, then one space-separated
/// row per line.
Eigen::MatrixXd read_matrix_text(const std::string& path);
void write_matrix_text(const Eigen::MatrixXd& m, const std::string& path);

/// Binary dump for square matrices: an 8-byte little-endian dimension
/// header, then dim*dim little-endian IEEE doubles in row-major order.
Eigen::MatrixXd read_matrix_binary(const std::string& path);
void write_matrix_binary(const Eigen::MatrixXd& m, const std::string& path);

}  // namespace spectrank::io
