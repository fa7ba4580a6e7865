#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "ctxproj/corpus.hpp"
#include "ctxproj/errors.hpp"
#include "ctxproj/worked_example.hpp"
#include "doctest.h"
#include "support/oracles.hpp"

using ctxproj::CoocMatrix;
using ctxproj::CoocOptions;
using ctxproj::Matrix;
using ctxproj::Vocabulary;
using ctxproj::Weighting;

namespace {

namespace fs = std::filesystem;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("ctxproj_test_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path);
  out << contents;
}

// Ordered-pair enumeration straight from the counting contract.
Matrix brute_force_counts(const std::vector<std::string>& stream,
                          const Vocabulary& vocab, const CoocOptions& options) {
  const std::size_t n = vocab.size();
  Matrix s(n, n);
  for (std::size_t p = 0; p < stream.size(); ++p) {
    for (std::size_t q = 0; q < stream.size(); ++q) {
      if (p == q) continue;
      if (!options.symmetric && q < p) continue;  // forward-only in directed mode
      const std::size_t distance = p > q ? p - q : q - p;
      if (distance > options.window) continue;
      const std::size_t i = vocab.id_of(stream[p]);
      const std::size_t j = vocab.id_of(stream[q]);
      if (options.exclude_self && i == j) continue;
      s(i, j) += options.weighting == Weighting::uniform
                     ? 1.0
                     : 1.0 / static_cast<double>(distance);
    }
  }
  return s;
}

std::vector<std::string> random_stream(std::mt19937_64& rng, std::size_t length,
                                       std::size_t alphabet) {
  std::uniform_int_distribution<std::size_t> dist(0, alphabet - 1);
  std::vector<std::string> stream(length);
  for (auto& token : stream) token = std::string(1, static_cast<char>('a' + dist(rng)));
  return stream;
}

}  // namespace

TEST_CASE("build_vocabulary orders tokens by first occurrence") {
  const Vocabulary vocab = ctxproj::build_vocabulary({"a", "b", "a"});
  CHECK(vocab.tokens == std::vector<std::string>{"a", "b"});
  CHECK(vocab.id_of("a") == 0);
  CHECK(vocab.id_of("b") == 1);

  const Vocabulary river = ctxproj::build_vocabulary({"river", "bank", "flooded"});
  CHECK(river.id_of("river") == 0);
  CHECK(river.id_of("bank") == 1);
  CHECK(river.id_of("flooded") == 2);

  CHECK_THROWS_AS(ctxproj::build_vocabulary({}), ctxproj::EmptyCorpusError);
  CHECK_THROWS_AS(river.id_of("zzz"), ctxproj::UnknownTokenError);
}

TEST_CASE("count_cooccurrences matches the worked single-pair cases") {
  CoocOptions options;
  options.window = 1;

  const std::vector<std::string> ab = {"a", "b"};
  const Vocabulary vocab_ab = ctxproj::build_vocabulary(ab);
  const CoocMatrix s = ctxproj::count_cooccurrences(ab, vocab_ab, options);
  CHECK(s.entries(0, 0) == 0.0);
  CHECK(s.entries(0, 1) == 1.0);
  CHECK(s.entries(1, 0) == 1.0);
  CHECK(s.entries(1, 1) == 0.0);

  const std::vector<std::string> aba = {"a", "b", "a"};
  const CoocMatrix s2 =
      ctxproj::count_cooccurrences(aba, ctxproj::build_vocabulary(aba), options);
  CHECK(s2.entries(0, 1) == 2.0);
  CHECK(s2.entries(1, 0) == 2.0);
  CHECK(s2.entries(0, 0) == 0.0);
}

TEST_CASE("inverse-distance weighting uses 1/|p-q|") {
  const std::vector<std::string> abc = {"a", "b", "c"};
  const Vocabulary vocab = ctxproj::build_vocabulary(abc);
  CoocOptions options;
  options.window = 2;
  options.weighting = Weighting::inverse_distance;
  const CoocMatrix s = ctxproj::count_cooccurrences(abc, vocab, options);
  CHECK(s.entries(0, 2) == 0.5);
  CHECK(s.entries(2, 0) == 0.5);
  CHECK(s.entries == brute_force_counts(abc, vocab, options));
}

TEST_CASE("counting matches the ordered-pair oracle") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    const auto stream = random_stream(rng, 2 + trial % 40, 4);
    const Vocabulary vocab = ctxproj::build_vocabulary(stream);
    CoocOptions options;
    options.window = 1 + trial % 4;
    options.weighting = trial % 2 == 0 ? Weighting::uniform : Weighting::inverse_distance;
    options.symmetric = trial % 3 != 0;
    options.exclude_self = trial % 5 != 0;

    const CoocMatrix got = ctxproj::count_cooccurrences(stream, vocab, options);
    const Matrix want = brute_force_counts(stream, vocab, options);
    if (options.weighting == Weighting::uniform) {
      CHECK(got.entries == want);  // integer counts: exact
    } else {
      CHECK(ctxproj::max_abs_diff(got.entries, want) <= 1e-12);
    }

    if (options.symmetric) {
      for (std::size_t i = 0; i < got.n; ++i) {
        for (std::size_t j = 0; j < got.n; ++j) {
          CHECK(got.entries(i, j) == got.entries(j, i));
        }
      }
    }
    // Same stream, same result.
    CHECK(ctxproj::count_cooccurrences(stream, vocab, options).entries == got.entries);
  }
}

TEST_CASE("shard-merge: within-shard plus cross-shard pairs equals whole-stream") {
  std::mt19937_64 rng(43);
  const auto stream = random_stream(rng, 60, 3);
  const Vocabulary vocab = ctxproj::build_vocabulary(stream);
  CoocOptions options;
  options.window = 3;

  const Matrix whole = ctxproj::count_cooccurrences(stream, vocab, options).entries;

  const std::vector<std::size_t> cuts = {0, 17, 35, 60};
  Matrix merged(vocab.size(), vocab.size());
  for (std::size_t shard = 0; shard + 1 < cuts.size(); ++shard) {
    const std::vector<std::string> piece(stream.begin() + cuts[shard],
                                         stream.begin() + cuts[shard + 1]);
    const Matrix within = ctxproj::count_cooccurrences(piece, vocab, options).entries;
    for (std::size_t i = 0; i < merged.size(); ++i) merged.data()[i] += within.data()[i];
  }
  // Cross-shard pairs: endpoints in different shards, still within the window.
  auto shard_of = [&](std::size_t pos) {
    std::size_t shard = 0;
    while (pos >= cuts[shard + 1]) ++shard;
    return shard;
  };
  for (std::size_t p = 0; p < stream.size(); ++p) {
    for (std::size_t q = p + 1; q < stream.size() && q - p <= options.window; ++q) {
      if (shard_of(p) == shard_of(q)) continue;
      const std::size_t i = vocab.id_of(stream[p]);
      const std::size_t j = vocab.id_of(stream[q]);
      if (options.exclude_self && i == j) continue;
      merged(i, j) += 1.0;
      merged(j, i) += 1.0;
    }
  }
  CHECK(merged == whole);
}

TEST_CASE("matrix save/load round-trips exactly") {
  TempDir dir;
  const CoocMatrix& s = ctxproj::worked_example::cooccurrence();
  const Vocabulary& vocab = ctxproj::worked_example::vocabulary();

  ctxproj::save_model(s, vocab, dir.path / "s.cooc", dir.path / "s.vocab");
  const auto [loaded, loaded_vocab] =
      ctxproj::load_model(dir.path / "s.cooc", dir.path / "s.vocab");
  CHECK(loaded.entries == s.entries);
  CHECK(loaded.symmetric == s.symmetric);
  CHECK(loaded_vocab.tokens == vocab.tokens);

  // Fractional weights (inverse-distance counts) must survive the text
  // round trip bit for bit.
  const std::vector<std::string> stream = {"x", "y", "z", "x", "y", "z", "y"};
  const Vocabulary v2 = ctxproj::build_vocabulary(stream);
  CoocOptions options;
  options.window = 3;
  options.weighting = Weighting::inverse_distance;
  const CoocMatrix fractional = ctxproj::count_cooccurrences(stream, v2, options);
  ctxproj::save_matrix(fractional, dir.path / "f.cooc");
  CHECK(ctxproj::load_matrix(dir.path / "f.cooc").entries == fractional.entries);
}

TEST_CASE("loading rejects malformed matrix files") {
  TempDir dir;

  write_file(dir.path / "negative.cooc", "cooc v1 n=2 symmetric=1\n0\t1\t-3\n");
  CHECK_THROWS_AS(ctxproj::load_matrix(dir.path / "negative.cooc"), ctxproj::ParseError);

  // Conflicting mirror entries under the symmetric flag.
  write_file(dir.path / "asym.cooc", "cooc v1 n=2 symmetric=1\n0\t1\t2\n1\t0\t3\n");
  CHECK_THROWS_AS(ctxproj::load_matrix(dir.path / "asym.cooc"), ctxproj::ParseError);

  // The same entries are fine when the flag does not claim symmetry.
  write_file(dir.path / "directed.cooc", "cooc v1 n=2 symmetric=0\n0\t1\t2\n1\t0\t3\n");
  const CoocMatrix directed = ctxproj::load_matrix(dir.path / "directed.cooc");
  CHECK(directed.entries(0, 1) == 2.0);
  CHECK(directed.entries(1, 0) == 3.0);

  write_file(dir.path / "badheader.cooc", "cooc v2 n=2 symmetric=1\n");
  CHECK_THROWS_AS(ctxproj::load_matrix(dir.path / "badheader.cooc"), ctxproj::ParseError);

  write_file(dir.path / "range.cooc", "cooc v1 n=2 symmetric=1\n0\t5\t1\n");
  CHECK_THROWS_AS(ctxproj::load_matrix(dir.path / "range.cooc"), ctxproj::ParseError);

  write_file(dir.path / "text.cooc", "cooc v1 n=2 symmetric=1\n0\t1\tabc\n");
  CHECK_THROWS_AS(ctxproj::load_matrix(dir.path / "text.cooc"), ctxproj::ParseError);

  CHECK_THROWS_AS(ctxproj::load_matrix(dir.path / "missing.cooc"), ctxproj::IoError);

  try {
    ctxproj::load_matrix(dir.path / "negative.cooc");
  } catch (const ctxproj::ParseError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("vocabulary files reject duplicates and empty lines") {
  TempDir dir;
  write_file(dir.path / "dup.vocab", "a\nb\na\n");
  CHECK_THROWS_AS(ctxproj::load_vocabulary(dir.path / "dup.vocab"), ctxproj::ParseError);
  write_file(dir.path / "empty.vocab", "a\n\nb\n");
  CHECK_THROWS_AS(ctxproj::load_vocabulary(dir.path / "empty.vocab"),
                  ctxproj::ParseError);

  write_file(dir.path / "ok.vocab", "a\nb\nc\n");
  const Vocabulary vocab = ctxproj::load_vocabulary(dir.path / "ok.vocab");
  CHECK(vocab.tokens == std::vector<std::string>{"a", "b", "c"});
}

TEST_CASE("model loading checks vocabulary size against the matrix") {
  TempDir dir;
  write_file(dir.path / "m.cooc", "cooc v1 n=2 symmetric=1\n0\t1\t1\n");
  write_file(dir.path / "m.vocab", "a\nb\nc\n");
  CHECK_THROWS_AS(ctxproj::load_model(dir.path / "m.cooc", dir.path / "m.vocab"),
                  ctxproj::DimensionMismatchError);
}

TEST_CASE("tokenize splits on whitespace and passes UTF-8 through") {
  std::istringstream text("die Flüsse  überfluteten\ndie Ufer\tder Flüsse");
  const auto tokens = ctxproj::tokenize(text);
  CHECK(tokens == std::vector<std::string>{"die", "Flüsse", "überfluteten", "die",
                                           "Ufer", "der", "Flüsse"});
  const Vocabulary vocab = ctxproj::build_vocabulary(tokens);
  CHECK(vocab.size() == 5);
  CHECK(vocab.id_of("Flüsse") == 1);
}

TEST_CASE("unknown stream token is reported by name") {
  const Vocabulary vocab = ctxproj::build_vocabulary({"a", "b"});
  try {
    ctxproj::count_cooccurrences({"a", "zzz"}, vocab, {});
    FAIL("expected UnknownTokenError");
  } catch (const ctxproj::UnknownTokenError& e) {
    CHECK(e.token() == "zzz");
  }
}
