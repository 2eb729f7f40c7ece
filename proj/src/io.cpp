#include "spectrank/io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <limits>
#include <map>
#include <system_error>

#include "spectrank/errors.hpp"

namespace spectrank::io {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open '" + path + "' for reading");
  }
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  return content;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open '" + path + "' for writing");
  }
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) {
    throw IoError("short write to '" + path + "'");
  }
}

// Walks a text buffer line by line, tracking the 1-based line number for
// error messages.
class LineScanner {
 public:
  LineScanner(const std::string& text, std::string path)
      : text_(text), path_(std::move(path)) {}

  bool next_line(std::string_view& line) {
    while (pos_ < text_.size()) {
      size_t end = text_.find('\n', pos_);
      if (end == std::string::npos) {
        end = text_.size();
      }
      std::string_view candidate(text_.data() + pos_, end - pos_);
      if (!candidate.empty() && candidate.back() == '\r') {
        candidate.remove_suffix(1);
      }
      pos_ = end + 1;
      ++line_number_;
      if (!candidate.empty()) {
        line = candidate;
        return true;
      }
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw IoError(path_ + ":" + std::to_string(line_number_) + ": " + message);
  }

 private:
  const std::string& text_;
  std::string path_;
  size_t pos_ = 0;
  size_t line_number_ = 0;
};

std::string_view next_token(std::string_view& line) {
  size_t start = 0;
  while (start < line.size() && (line[start] == ' ' || line[start] == '\t')) {
    ++start;
  }
  size_t end = start;
  while (end < line.size() && line[end] != ' ' && line[end] != '\t') {
    ++end;
  }
  std::string_view token = line.substr(start, end - start);
  line.remove_prefix(end);
  return token;
}

int64_t parse_int(LineScanner& scanner, std::string_view& line,
                  const char* what) {
  const std::string_view token = next_token(line);
  int64_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size() ||
      token.empty()) {
    scanner.fail(std::string("expected an integer for ") + what);
  }
  return value;
}

double parse_double(LineScanner& scanner, std::string_view& line,
                    const char* what) {
  const std::string_view token = next_token(line);
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size() ||
      token.empty()) {
    scanner.fail(std::string("expected a real number for ") + what);
  }
  return value;
}

void expect_line_consumed(LineScanner& scanner, std::string_view line) {
  const std::string_view rest = next_token(line);
  if (!rest.empty()) {
    scanner.fail("unexpected trailing token '" + std::string(rest) + "'");
  }
}

void put_u64_le(std::string& out, uint64_t value) {
  for (int i = 0; i < 8; ++i) {
    out.push_back(static_cast<char>((value >> (8 * i)) & 0xFF));
  }
}

uint64_t get_u64_le(const unsigned char* bytes) {
  uint64_t value = 0;
  for (int i = 0; i < 8; ++i) {
    value |= static_cast<uint64_t>(bytes[i]) << (8 * i);
  }
  return value;
}

}  // namespace

std::string format_double(double value) {
  std::array<char, 40> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(),
                                       value);
  if (ec != std::errc()) {
    throw IoError("double formatting failed");
  }
  return std::string(buf.data(), ptr);
}

synth::Corpus read_uci_corpus(const std::string& path) {
  const std::string text = read_file(path);
  LineScanner scanner(text, path);
  std::string_view line;

  int64_t header[3] = {0, 0, 0};
  const char* names[3] = {"D", "V", "NNZ"};
  for (int i = 0; i < 3; ++i) {
    if (!scanner.next_line(line)) {
      scanner.fail(std::string("missing header line for ") + names[i]);
    }
    header[i] = parse_int(scanner, line, names[i]);
    expect_line_consumed(scanner, line);
  }
  const int64_t num_docs = header[0];
  const int64_t vocab = header[1];
  const int64_t nnz = header[2];
  if (num_docs < 1 || vocab < 2 || nnz < 0) {
    scanner.fail("invalid header values");
  }

  std::vector<std::map<int32_t, int64_t>> counts(
      static_cast<size_t>(num_docs));
  for (int64_t i = 0; i < nnz; ++i) {
    if (!scanner.next_line(line)) {
      scanner.fail("expected " + std::to_string(nnz) + " triples, got " +
                   std::to_string(i));
    }
    const int64_t doc = parse_int(scanner, line, "doc id");
    const int64_t word = parse_int(scanner, line, "word id");
    const int64_t count = parse_int(scanner, line, "count");
    expect_line_consumed(scanner, line);
    if (doc < 1 || doc > num_docs) {
      scanner.fail("doc id out of range [1, " + std::to_string(num_docs) +
                   "]");
    }
    if (word < 1 || word > vocab) {
      scanner.fail("word id out of range [1, " + std::to_string(vocab) + "]");
    }
    if (count < 1) {
      scanner.fail("count must be >= 1");
    }
    counts[static_cast<size_t>(doc - 1)][static_cast<int32_t>(word - 1)] +=
        count;
  }
  if (scanner.next_line(line)) {
    scanner.fail("trailing content after the declared NNZ triples");
  }

  synth::Corpus corpus;
  corpus.vocab = static_cast<int32_t>(vocab);
  corpus.docs.resize(static_cast<size_t>(num_docs));
  for (size_t d = 0; d < counts.size(); ++d) {
    auto& doc = corpus.docs[d];
    doc.entries.reserve(counts[d].size());
    for (const auto& [word, count] : counts[d]) {
      if (count > std::numeric_limits<int32_t>::max()) {
        throw IoError(path + ": accumulated count for document " +
                      std::to_string(d + 1) + " overflows");
      }
      doc.entries.emplace_back(word, static_cast<int32_t>(count));
      doc.length += count;
    }
  }
  corpus.validate();
  return corpus;
}

void write_uci_corpus(const synth::Corpus& corpus, const std::string& path) {
  corpus.validate();
  int64_t nnz = 0;
  for (const auto& doc : corpus.docs) {
    nnz += static_cast<int64_t>(doc.entries.size());
  }
  std::string out;
  out.reserve(static_cast<size_t>(nnz) * 12 + 64);
  out += std::to_string(corpus.docs.size());
  out += '\n';
  out += std::to_string(corpus.vocab);
  out += '\n';
  out += std::to_string(nnz);
  out += '\n';
  for (size_t d = 0; d < corpus.docs.size(); ++d) {
    const std::string doc_id = std::to_string(d + 1);
    for (const auto& [word, count] : corpus.docs[d].entries) {
      out += doc_id;
      out += ' ';
      out += std::to_string(word + 1);
      out += ' ';
      out += std::to_string(count);
      out += '\n';
    }
  }
  write_file(path, out);
}

Eigen::MatrixXd read_matrix_text(const std::string& path) {
  const std::string text = read_file(path);
  LineScanner scanner(text, path);
  std::string_view line;
  if (!scanner.next_line(line)) {
    scanner.fail("missing 'rows cols' header line");
  }
  const int64_t rows = parse_int(scanner, line, "rows");
  const int64_t cols = parse_int(scanner, line, "cols");
  expect_line_consumed(scanner, line);
  if (rows < 1 || cols < 1) {
    scanner.fail("matrix dimensions must be >= 1");
  }
  Eigen::MatrixXd m(rows, cols);
  for (int64_t r = 0; r < rows; ++r) {
    if (!scanner.next_line(line)) {
      scanner.fail("expected " + std::to_string(rows) + " rows, got " +
                   std::to_string(r));
    }
    for (int64_t c = 0; c < cols; ++c) {
      m(r, c) = parse_double(scanner, line, "matrix entry");
    }
    expect_line_consumed(scanner, line);
  }
  if (scanner.next_line(line)) {
    scanner.fail("trailing content after the declared rows");
  }
  return m;
}

void write_matrix_text(const Eigen::MatrixXd& m, const std::string& path) {
  std::string out;
  out.reserve(static_cast<size_t>(m.size()) * 20 + 32);
  out += std::to_string(m.rows());
  out += ' ';
  out += std::to_string(m.cols());
  out += '\n';
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c > 0) {
        out += ' ';
      }
      out += format_double(m(r, c));
    }
    out += '\n';
  }
  write_file(path, out);
}

Eigen::MatrixXd read_matrix_binary(const std::string& path) {
  const std::string raw = read_file(path);
  if (raw.size() < 8) {
    throw IoError(path + ": truncated binary matrix (missing header)");
  }
  const auto* bytes = reinterpret_cast<const unsigned char*>(raw.data());
  const uint64_t dim = get_u64_le(bytes);
  if (dim < 1 || dim > (1u << 20)) {
    throw IoError(path + ": implausible matrix dimension " +
                  std::to_string(dim));
  }
  const size_t expected = 8 + dim * dim * sizeof(double);
  if (raw.size() != expected) {
    throw IoError(path + ": expected " + std::to_string(expected) +
                  " bytes, found " + std::to_string(raw.size()));
  }
  Eigen::MatrixXd m(static_cast<Eigen::Index>(dim),
                    static_cast<Eigen::Index>(dim));
  static_assert(std::endian::native == std::endian::little,
                "binary matrix IO assumes a little-endian host");
  for (uint64_t r = 0; r < dim; ++r) {
    for (uint64_t c = 0; c < dim; ++c) {
      double value = 0.0;
      std::memcpy(&value, bytes + 8 + (r * dim + c) * sizeof(double),
                  sizeof(double));
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = value;
    }
  }
  return m;
}

void write_matrix_binary(const Eigen::MatrixXd& m, const std::string& path) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw ParamError("binary matrix format requires a non-empty square matrix");
  }
  static_assert(std::endian::native == std::endian::little,
                "binary matrix IO assumes a little-endian host");
  std::string out;
  const auto dim = static_cast<uint64_t>(m.rows());
  out.reserve(8 + dim * dim * sizeof(double));
  put_u64_le(out, dim);
  for (uint64_t r = 0; r < dim; ++r) {
    for (uint64_t c = 0; c < dim; ++c) {
      const double value =
          m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
      char bytes[sizeof(double)];
      std::memcpy(bytes, &value, sizeof(double));
      out.append(bytes, sizeof(double));
    }
  }
  write_file(path, out);
}

}  // namespace spectrank::io
