#include "ctxproj/params_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "ctxproj/errors.hpp"

namespace ctxproj {
namespace {

std::string format_double(double value) {
  char buffer[32];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) throw IoError("failed to format value");
  return std::string(buffer, end);
}

std::uint64_t parse_u64(const std::string& text, std::size_t line) {
  std::uint64_t value = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw ParseError("malformed integer \"" + text + "\"", line);
  }
  return value;
}

// Magic line, then key=value lines; '#' comments allowed.
std::map<std::string, std::string> read_manifest(const std::filesystem::path& path,
                                                 const std::string& expected_magic) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ParseError("missing manifest magic", 1);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != expected_magic) {
    throw ParseError("expected manifest magic \"" + expected_magic + "\"", 1);
  }
  std::map<std::string, std::string> fields;
  std::size_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected key=value", line_number);
    fields[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return fields;
}

std::uint64_t manifest_u64(const std::map<std::string, std::string>& fields,
                           const std::string& key) {
  auto it = fields.find(key);
  if (it == fields.end()) throw ParseError("manifest missing field \"" + key + "\"", 1);
  return parse_u64(it->second, 1);
}

}  // namespace

void save_dense_matrix(const Matrix& m, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << "mat v1 rows=" << m.rows() << " cols=" << m.cols() << '\n';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (m(i, j) != 0.0) out << i << '\t' << j << '\t' << format_double(m(i, j)) << '\n';
    }
  }
  if (!out) throw IoError("failed writing " + path.string());
}

Matrix load_dense_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ParseError("missing header", 1);
  if (!line.empty() && line.back() == '\r') line.pop_back();

  std::size_t rows = 0, cols = 0;
  {
    std::istringstream header(line);
    std::string magic, version, rows_field, cols_field;
    header >> magic >> version >> rows_field >> cols_field;
    if (magic != "mat" || version != "v1" || rows_field.rfind("rows=", 0) != 0 ||
        cols_field.rfind("cols=", 0) != 0) {
      throw ParseError("malformed header \"" + line + "\"", 1);
    }
    rows = parse_u64(rows_field.substr(5), 1);
    cols = parse_u64(cols_field.substr(5), 1);
  }

  Matrix m(rows, cols);
  std::size_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::size_t i = 0, j = 0;
    std::string value_text;
    if (!(fields >> i >> j >> value_text)) {
      throw ParseError("expected \"i\\tj\\tvalue\"", line_number);
    }
    if (i >= rows || j >= cols) throw ParseError("index out of range", line_number);
    double value = 0.0;
    auto [end, ec] =
        std::from_chars(value_text.data(), value_text.data() + value_text.size(), value);
    if (ec != std::errc() || end != value_text.data() + value_text.size() ||
        !std::isfinite(value)) {
      throw ParseError("malformed value \"" + value_text + "\"", line_number);
    }
    m(i, j) = value;
  }
  return m;
}

void save_attention_params(const AttentionParams& params,
                           const std::filesystem::path& dir, std::uint64_t seed) {
  std::filesystem::create_directories(dir);
  std::ofstream manifest(dir / "manifest.txt");
  if (!manifest) throw IoError("cannot write manifest in " + dir.string());
  manifest << "attn v1\n"
           << "width=" << params.width << '\n'
           << "d_k=" << params.key_dim << '\n'
           << "d_v=" << params.value_dim << '\n'
           << "seed=" << seed << '\n';
  save_dense_matrix(params.w_query, dir / "w_query.mat");
  save_dense_matrix(params.w_key, dir / "w_key.mat");
  save_dense_matrix(params.w_value, dir / "w_value.mat");
}

LoadedAttentionParams load_attention_params(const std::filesystem::path& dir) {
  const auto fields = read_manifest(dir / "manifest.txt", "attn v1");
  LoadedAttentionParams loaded;
  loaded.params.width = manifest_u64(fields, "width");
  loaded.params.key_dim = manifest_u64(fields, "d_k");
  loaded.params.value_dim = manifest_u64(fields, "d_v");
  loaded.seed = fields.count("seed") ? manifest_u64(fields, "seed") : 0;
  loaded.params.w_query = load_dense_matrix(dir / "w_query.mat");
  loaded.params.w_key = load_dense_matrix(dir / "w_key.mat");
  loaded.params.w_value = load_dense_matrix(dir / "w_value.mat");

  const AttentionParams& p = loaded.params;
  if (p.w_query.rows() != p.width || p.w_key.rows() != p.width ||
      p.w_value.rows() != p.width || p.w_query.cols() != p.key_dim ||
      p.w_key.cols() != p.key_dim || p.w_value.cols() != p.value_dim) {
    throw ParseError("matrix shapes disagree with manifest in " + dir.string(), 1);
  }
  return loaded;
}

void save_head_set(const HeadSet& heads, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::ofstream manifest(dir / "manifest.txt");
  if (!manifest) throw IoError("cannot write manifest in " + dir.string());
  manifest << "heads v1\n"
           << "head_count=" << heads.head_count << '\n'
           << "model_dim=" << heads.model_dim << '\n';
  for (std::size_t i = 0; i < heads.heads.size(); ++i) {
    const std::string stem = "head" + std::to_string(i);
    save_dense_matrix(heads.heads[i].w_query, dir / (stem + "_w_query.mat"));
    save_dense_matrix(heads.heads[i].w_key, dir / (stem + "_w_key.mat"));
    save_dense_matrix(heads.heads[i].w_value, dir / (stem + "_w_value.mat"));
  }
  save_dense_matrix(heads.w_output, dir / "w_output.mat");
}

HeadSet load_head_set(const std::filesystem::path& dir) {
  const auto fields = read_manifest(dir / "manifest.txt", "heads v1");
  HeadSet heads;
  heads.head_count = manifest_u64(fields, "head_count");
  heads.model_dim = manifest_u64(fields, "model_dim");
  for (std::size_t i = 0; i < heads.head_count; ++i) {
    const std::string stem = "head" + std::to_string(i);
    AttentionParams params;
    params.w_query = load_dense_matrix(dir / (stem + "_w_query.mat"));
    params.w_key = load_dense_matrix(dir / (stem + "_w_key.mat"));
    params.w_value = load_dense_matrix(dir / (stem + "_w_value.mat"));
    params.width = params.w_query.rows();
    params.key_dim = params.w_query.cols();
    params.value_dim = params.w_value.cols();
    heads.heads.push_back(std::move(params));
  }
  heads.w_output = load_dense_matrix(dir / "w_output.mat");
  return heads;
}

}  // namespace ctxproj
