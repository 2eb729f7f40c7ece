#include <cstdio>
#include <filesystem>
#include <unistd.h>
#include <fstream>
#include <string>

#include "doctest.h"
#include "spectrank/errors.hpp"
#include "spectrank/io.hpp"
#include "spectrank/synth.hpp"
#include "testutil.hpp"

using spectrank::IoError;
using spectrank::ParamError;
using spectrank::RngState;
namespace io = spectrank::io;
namespace synth = spectrank::synth;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("spectrank_io_test_" + std::to_string(::getpid()));
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

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("io: format_double round-trips") {
  CHECK(io::format_double(0.05) == "0.05");
  CHECK(io::format_double(1.0) == "1");
  CHECK(io::format_double(-2.25e-17) == "-2.25e-17");
}

TEST_CASE("io: UCI corpus writer emits 1-based triples") {
  TempDir dir;
  const auto corpus =
      testutil::make_corpus(3, {{{0, 2}, {2, 1}}, {{1, 3}}});
  const std::string path = dir.file("tiny.docword.txt");
  io::write_uci_corpus(corpus, path);
  CHECK(slurp(path) == "2\n3\n3\n1 1 2\n1 3 1\n2 2 3\n");
}

TEST_CASE("io: UCI corpus round trip preserves counts") {
  TempDir dir;
  RngState rng(61, 0);
  const auto params = synth::LdaParams::symmetric(3, 25, 1.0, 0.5);
  const auto [corpus, truth] =
      synth::generate_lda_corpus(params, 20, 9, rng);
  const std::string path = dir.file("round.docword.txt");
  io::write_uci_corpus(corpus, path);
  const auto back = io::read_uci_corpus(path);
  CHECK(back.vocab == corpus.vocab);
  REQUIRE(back.docs.size() == corpus.docs.size());
  for (size_t d = 0; d < corpus.docs.size(); ++d) {
    CHECK(back.docs[d].entries == corpus.docs[d].entries);
    CHECK(back.docs[d].length == corpus.docs[d].length);
  }
}

TEST_CASE("io: UCI reader reports offending line numbers") {
  TempDir dir;
  const std::string path = dir.file("bad.txt");

  {
    std::ofstream out(path);
    out << "2\n3\nnot_a_number\n";
  }
  CHECK_THROWS_WITH_AS(io::read_uci_corpus(path),
                       doctest::Contains(":3:"), IoError);

  {
    std::ofstream out(path);
    out << "2\n3\n2\n1 1 2\n1 9 1\n";
  }
  CHECK_THROWS_WITH_AS(io::read_uci_corpus(path),
                       doctest::Contains(":5:"), IoError);

  {
    std::ofstream out(path);
    out << "2\n3\n2\n1 1 0\n1 2 1\n";
  }
  CHECK_THROWS_AS(io::read_uci_corpus(path), IoError);

  {
    std::ofstream out(path);
    out << "2\n3\n5\n1 1 2\n";
  }
  CHECK_THROWS_AS(io::read_uci_corpus(path), IoError);

  CHECK_THROWS_AS(io::read_uci_corpus(dir.file("missing.txt")), IoError);
}

TEST_CASE("io: text matrix round trip") {
  TempDir dir;
  Eigen::MatrixXd m(2, 3);
  m << 1.5, -2.25e-17, 0.0, 3.0, 1e300, -7.125;
  const std::string path = dir.file("m.txt");
  io::write_matrix_text(m, path);
  const Eigen::MatrixXd back = io::read_matrix_text(path);
  REQUIRE(back.rows() == 2);
  REQUIRE(back.cols() == 3);
  CHECK((back - m).norm() == 0.0);

  {
    std::ofstream out(path);
    out << "2 2\n1 2\n3\n";
  }
  CHECK_THROWS_WITH_AS(io::read_matrix_text(path),
                       doctest::Contains(":3:"), IoError);
}

TEST_CASE("io: binary matrix round trip is bit-exact") {
  TempDir dir;
  RngState rng(62, 0);
  Eigen::MatrixXd m(5, 5);
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      m(i, j) = 2.0 * rng.uniform01() - 1.0;
    }
  }
  const std::string path = dir.file("m.bin");
  io::write_matrix_binary(m, path);
  CHECK(fs::file_size(path) == 8 + 5 * 5 * 8);
  const Eigen::MatrixXd back = io::read_matrix_binary(path);
  CHECK((back - m).norm() == 0.0);

  // Truncation is detected.
  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    const std::string partial = slurp(path);
    out.write("\x05\x00\x00\x00\x00\x00\x00\x00", 8);
    out.write("abc", 3);
  }
  CHECK_THROWS_AS(io::read_matrix_binary(path), IoError);

  CHECK_THROWS_AS(io::write_matrix_binary(Eigen::MatrixXd(2, 3),
                                          dir.file("rect.bin")),
                  ParamError);
}
