#include "ctxproj/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>

#include "ctxproj/errors.hpp"

namespace ctxproj {
namespace {

constexpr std::string_view kMatrixMagic = "cooc v1";

std::string format_double(double value) {
  char buffer[32];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) throw IoError("failed to format value");
  return std::string(buffer, end);
}

double parse_double(std::string_view text, std::size_t line) {
  double value = 0.0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw ParseError("malformed value \"" + std::string(text) + "\"", line);
  }
  return value;
}

std::size_t parse_index(std::string_view text, std::size_t line) {
  std::size_t value = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw ParseError("malformed index \"" + std::string(text) + "\"", line);
  }
  return value;
}

std::vector<std::string_view> split_fields(std::string_view text) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && (text[pos] == '\t' || text[pos] == ' ')) ++pos;
    std::size_t start = pos;
    while (pos < text.size() && text[pos] != '\t' && text[pos] != ' ') ++pos;
    if (pos > start) fields.push_back(text.substr(start, pos - start));
  }
  return fields;
}

double pair_weight(Weighting weighting, std::size_t distance) {
  return weighting == Weighting::uniform ? 1.0 : 1.0 / static_cast<double>(distance);
}

void strip_carriage_return(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace

bool Vocabulary::contains(std::string_view token) const {
  return index.find(std::string(token)) != index.end();
}

std::size_t Vocabulary::id_of(const std::string& token) const {
  auto it = index.find(token);
  if (it == index.end()) throw UnknownTokenError(token);
  return it->second;
}

CoocMatrix CoocMatrix::from_dense(Matrix entries, bool symmetric) {
  if (entries.rows() != entries.cols()) {
    throw DimensionMismatchError("co-occurrence matrix must be square");
  }
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const double v = entries.data()[i];
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("co-occurrence entries must be finite and >= 0");
    }
  }
  if (symmetric) {
    for (std::size_t i = 0; i < entries.rows(); ++i) {
      for (std::size_t j = i + 1; j < entries.cols(); ++j) {
        if (entries(i, j) != entries(j, i)) {
          throw std::invalid_argument("matrix claimed symmetric but is not");
        }
      }
    }
  }
  const std::size_t n = entries.rows();
  return CoocMatrix{n, std::move(entries), symmetric};
}

std::vector<std::string> tokenize(std::istream& input) {
  std::vector<std::string> tokens;
  std::string token;
  while (input >> token) tokens.push_back(token);
  return tokens;
}

Vocabulary build_vocabulary(const std::vector<std::string>& token_stream) {
  if (token_stream.empty()) throw EmptyCorpusError();
  Vocabulary vocab;
  for (const auto& token : token_stream) {
    if (token.empty()) throw std::invalid_argument("empty token in stream");
    auto [it, inserted] = vocab.index.try_emplace(token, vocab.tokens.size());
    if (inserted) vocab.tokens.push_back(token);
  }
  return vocab;
}

CoocMatrix count_cooccurrences(const std::vector<std::string>& token_stream,
                               const Vocabulary& vocab, const CoocOptions& options) {
  if (token_stream.empty()) throw EmptyCorpusError();
  if (options.window < 1) throw std::invalid_argument("window must be >= 1");

  std::vector<std::size_t> ids;
  ids.reserve(token_stream.size());
  for (const auto& token : token_stream) ids.push_back(vocab.id_of(token));

  const std::size_t n = vocab.size();
  Matrix s(n, n);
  for (std::size_t p = 0; p + 1 < ids.size(); ++p) {
    const std::size_t limit = std::min(ids.size() - 1, p + options.window);
    for (std::size_t q = p + 1; q <= limit; ++q) {
      if (options.exclude_self && ids[p] == ids[q]) continue;
      const double w = pair_weight(options.weighting, q - p);
      s(ids[p], ids[q]) += w;
      if (options.symmetric) s(ids[q], ids[p]) += w;
    }
  }
  return CoocMatrix{n, std::move(s), options.symmetric};
}

void save_vocabulary(const Vocabulary& vocab, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  for (const auto& token : vocab.tokens) out << token << '\n';
  if (!out) throw IoError("failed writing " + path.string());
}

Vocabulary load_vocabulary(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  Vocabulary vocab;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    strip_carriage_return(line);
    if (line.empty()) throw ParseError("empty token", line_number);
    auto [it, inserted] = vocab.index.try_emplace(line, vocab.tokens.size());
    if (!inserted) throw ParseError("duplicate token \"" + line + "\"", line_number);
    vocab.tokens.push_back(line);
  }
  return vocab;
}

void save_matrix(const CoocMatrix& matrix, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << kMatrixMagic << " n=" << matrix.n << " symmetric=" << (matrix.symmetric ? 1 : 0)
      << '\n';
  for (std::size_t i = 0; i < matrix.n; ++i) {
    const std::size_t j_begin = matrix.symmetric ? i : 0;
    for (std::size_t j = j_begin; j < matrix.n; ++j) {
      const double v = matrix.entries(i, j);
      if (v != 0.0) out << i << '\t' << j << '\t' << format_double(v) << '\n';
    }
  }
  if (!out) throw IoError("failed writing " + path.string());
}

CoocMatrix load_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());

  std::string line;
  if (!std::getline(in, line)) throw ParseError("missing header", 1);
  strip_carriage_return(line);

  std::size_t n = 0;
  bool symmetric = false;
  {
    std::istringstream header(line);
    std::string magic, version, n_field, sym_field;
    header >> magic >> version >> n_field >> sym_field;
    if (magic + " " + version != kMatrixMagic || n_field.rfind("n=", 0) != 0 ||
        sym_field.rfind("symmetric=", 0) != 0) {
      throw ParseError("malformed header \"" + line + "\"", 1);
    }
    n = parse_index(std::string_view(n_field).substr(2), 1);
    const auto sym_value = std::string_view(sym_field).substr(10);
    if (sym_value == "1") {
      symmetric = true;
    } else if (sym_value == "0") {
      symmetric = false;
    } else {
      throw ParseError("symmetric flag must be 0 or 1", 1);
    }
  }

  Matrix entries(n, n);
  std::vector<bool> assigned(n * n, false);
  std::size_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    strip_carriage_return(line);
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != 3) {
      throw ParseError("expected \"i\\tj\\tvalue\", got \"" + line + "\"", line_number);
    }
    const std::size_t i = parse_index(fields[0], line_number);
    const std::size_t j = parse_index(fields[1], line_number);
    if (i >= n || j >= n) throw ParseError("index out of range", line_number);
    const double v = parse_double(fields[2], line_number);
    if (!std::isfinite(v)) throw ParseError("non-finite entry", line_number);
    if (v < 0.0) throw ParseError("negative entry", line_number);

    auto store = [&](std::size_t r, std::size_t c) {
      if (assigned[r * n + c] && entries(r, c) != v) {
        throw ParseError("conflicting duplicate for entry (" + std::to_string(r) + ", " +
                             std::to_string(c) + ")",
                         line_number);
      }
      entries(r, c) = v;
      assigned[r * n + c] = true;
    };
    store(i, j);
    if (symmetric) store(j, i);
  }
  return CoocMatrix{n, std::move(entries), symmetric};
}

void save_model(const CoocMatrix& matrix, const Vocabulary& vocab,
                const std::filesystem::path& matrix_path,
                const std::filesystem::path& vocab_path) {
  if (matrix.n != vocab.size()) {
    throw DimensionMismatchError("matrix size does not match vocabulary size");
  }
  save_matrix(matrix, matrix_path);
  save_vocabulary(vocab, vocab_path);
}

std::pair<CoocMatrix, Vocabulary> load_model(const std::filesystem::path& matrix_path,
                                             const std::filesystem::path& vocab_path) {
  CoocMatrix matrix = load_matrix(matrix_path);
  Vocabulary vocab = load_vocabulary(vocab_path);
  if (matrix.n != vocab.size()) {
    throw DimensionMismatchError("matrix size " + std::to_string(matrix.n) +
                                 " does not match vocabulary size " +
                                 std::to_string(vocab.size()));
  }
  return {std::move(matrix), std::move(vocab)};
}

std::size_t nonzero_count(const CoocMatrix& matrix) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < matrix.entries.size(); ++i) {
    if (matrix.entries.data()[i] != 0.0) ++count;
  }
  return count;
}

}  // namespace ctxproj
