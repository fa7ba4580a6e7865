// Command-line surface over the projection/prediction/attention pipeline.
// Results go to stdout (table or JSON), diagnostics to stderr.
// Exit codes: 0 success, 1 usage or data error, 2 reproduction failure.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ctxproj/corpus.hpp"
#include "ctxproj/directional.hpp"
#include "ctxproj/errors.hpp"
#include "ctxproj/kernels.hpp"
#include "ctxproj/multihead.hpp"
#include "ctxproj/params_io.hpp"
#include "ctxproj/positional.hpp"
#include "ctxproj/prediction.hpp"
#include "ctxproj/projection.hpp"
#include "ctxproj/rng.hpp"
#include "ctxproj/worked_example.hpp"
#include "json.hpp"

namespace {

using ctxproj::CoocMatrix;
using ctxproj::Matrix;
using ctxproj::Vocabulary;
using nlohmann::json;

enum class Format { table, json };

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

void print_matrix(const std::string& name, const Matrix& m) {
  std::printf("%s (%zux%zu):\n", name.c_str(), m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) std::printf(" %10.6g", m(r, c));
    std::printf("\n");
  }
}

void print_vector(const std::string& name, const std::vector<double>& v) {
  std::printf("%s:", name.c_str());
  for (double x : v) std::printf(" %.6g", x);
  std::printf("\n");
}

void emit(Format format, const json& document) {
  if (format == Format::json) std::printf("%s\n", document.dump(2).c_str());
}

struct Model {
  CoocMatrix s;
  Vocabulary vocab;
};

Model load_model_or_default(const std::string& matrix_path, const std::string& vocab_path) {
  if (matrix_path.empty() != vocab_path.empty()) {
    throw ctxproj::IoError("--matrix and --vocab must be given together");
  }
  if (matrix_path.empty()) {
    return {ctxproj::worked_example::cooccurrence(), ctxproj::worked_example::vocabulary()};
  }
  auto [s, vocab] = ctxproj::load_model(matrix_path, vocab_path);
  return {std::move(s), std::move(vocab)};
}

int cmd_build_cooc(const std::string& corpus_path, std::size_t window,
                   const std::string& weighting, const std::string& out_base) {
  std::ifstream in(corpus_path);
  if (!in) throw ctxproj::IoError("cannot open corpus " + corpus_path);
  const std::vector<std::string> tokens = ctxproj::tokenize(in);

  ctxproj::CoocOptions options;
  options.window = window;
  options.weighting = weighting == "invdist" ? ctxproj::Weighting::inverse_distance
                                             : ctxproj::Weighting::uniform;
  const Vocabulary vocab = ctxproj::build_vocabulary(tokens);
  const CoocMatrix s = ctxproj::count_cooccurrences(tokens, vocab, options);

  const std::string matrix_path = out_base + ".cooc";
  const std::string vocab_path = out_base + ".vocab";
  ctxproj::save_model(s, vocab, matrix_path, vocab_path);
  std::printf("n=%zu nonzeros=%zu\n", s.n, ctxproj::nonzero_count(s));
  std::printf("wrote %s and %s\n", matrix_path.c_str(), vocab_path.c_str());
  return 0;
}

int cmd_predict(const Model& model, const std::vector<std::string>& sequence,
                Format format) {
  const ctxproj::PredictionTrace trace =
      ctxproj::run_prediction(model.s, model.vocab, sequence);
  for (const auto& warning : trace.warnings) {
    std::fprintf(stderr, "warning: %s\n", warning.c_str());
  }
  const std::string argmax_token = model.vocab.tokens[trace.distribution.argmax];

  if (format == Format::table) {
    print_matrix("QS", trace.selected_rows);
    print_matrix("M", trace.kernel.scores);
    print_matrix("Norm(M)", trace.attention.scores);
    print_matrix("E", trace.evidence.entries);
    print_vector("e_global", trace.pooled);
    std::printf("%-12s %12s %12s\n", "token", "logit", "probability");
    for (std::size_t i = 0; i < model.vocab.size(); ++i) {
      std::printf("%-12s %12.6g %12.6g\n", model.vocab.tokens[i].c_str(),
                  trace.distribution.logits[i], trace.distribution.probabilities[i]);
    }
    std::printf("argmax: %s\n", argmax_token.c_str());
    return 0;
  }

  json distribution = json::array();
  for (std::size_t i = 0; i < model.vocab.size(); ++i) {
    distribution.push_back({{"token", model.vocab.tokens[i]},
                            {"logit", trace.distribution.logits[i]},
                            {"probability", trace.distribution.probabilities[i]}});
  }
  emit(format, json{{"command", "predict"},
                    {"inputs", {{"sequence", sequence}}},
                    {"results",
                     {{"QS", matrix_to_json(trace.selected_rows)},
                      {"M", matrix_to_json(trace.kernel.scores)},
                      {"NormM", matrix_to_json(trace.attention.scores)},
                      {"E", matrix_to_json(trace.evidence.entries)},
                      {"e_global", trace.pooled},
                      {"distribution", distribution},
                      {"argmax", argmax_token},
                      {"warnings", trace.warnings}}}});
  return 0;
}

int cmd_reproduce(Format format, const std::string& perturb) {
  Matrix entries = ctxproj::worked_example::cooccurrence().entries;
  if (!perturb.empty()) {
    std::size_t i = 0, j = 0;
    double delta = 0.0;
    if (std::sscanf(perturb.c_str(), "%zu,%zu,%lf", &i, &j, &delta) != 3) {
      throw ctxproj::IoError("--perturb expects \"i,j,delta\"");
    }
    entries = ctxproj::worked_example::perturbed_entries(i, j, delta);
  }

  const auto checks = ctxproj::worked_example::run_checks(entries);
  bool all_passed = true;
  std::string first_failure;
  for (const auto& check : checks) {
    if (!check.passed && all_passed) first_failure = check.name;
    all_passed = all_passed && check.passed;
  }

  if (format == Format::table) {
    for (const auto& check : checks) {
      std::printf("[%s] %-20s %s\n", check.passed ? "PASS" : "FAIL",
                  check.name.c_str(), check.detail.c_str());
    }
    std::printf("%s\n", all_passed ? "all checks passed" : "reproduction failed");
  } else {
    json check_list = json::array();
    for (const auto& check : checks) {
      check_list.push_back(
          {{"name", check.name}, {"passed", check.passed}, {"detail", check.detail}});
    }
    emit(format, json{{"command", "reproduce-paper"},
                      {"inputs", {{"perturb", perturb}}},
                      {"results", {{"checks", check_list}, {"all_passed", all_passed}}}});
  }
  if (!all_passed) {
    std::fprintf(stderr, "first failing quantity: %s\n", first_failure.c_str());
    return 2;
  }
  return 0;
}

int cmd_attend(const Model& model, const std::vector<std::string>& sequence,
               std::size_t key_dim, std::size_t value_dim, std::uint64_t seed,
               const std::string& init, Format format) {
  const ctxproj::Selector selector =
      ctxproj::selector_from_tokens(model.vocab, sequence);
  const std::size_t n = model.vocab.size();

  ctxproj::AttentionParams params;
  if (init == "zero") {
    params = ctxproj::random_attention_params(n, key_dim, value_dim, seed);
    params.w_query = Matrix(n, key_dim);
    params.w_key = Matrix(n, key_dim);
  } else if (init == "cooc") {
    // W_Q W_K^T equals the co-occurrence operator itself.
    params.width = n;
    params.key_dim = n;
    params.value_dim = value_dim;
    params.w_query = model.s.entries;
    params.w_key = Matrix::identity(n);
    params.w_value = ctxproj::GaussianSource(seed).matrix(
        n, value_dim, 1.0 / std::sqrt(static_cast<double>(value_dim)));
  } else {
    params = ctxproj::random_attention_params(n, key_dim, value_dim, seed);
  }

  const ctxproj::AttentionOutput out = ctxproj::attention(selector.rows, params);
  if (format == Format::table) {
    print_matrix("scores", out.scores);
    print_matrix("weights", out.weights);
    print_matrix("output", out.output);
    return 0;
  }
  emit(format, json{{"command", "attend"},
                    {"inputs",
                     {{"sequence", sequence},
                      {"dk", params.key_dim},
                      {"dv", params.value_dim},
                      {"seed", seed},
                      {"init", init}}},
                    {"results",
                     {{"scores", matrix_to_json(out.scores)},
                      {"weights", matrix_to_json(out.weights)},
                      {"output", matrix_to_json(out.output)}}}});
  return 0;
}

int cmd_heads(const Model& model, std::size_t head_count, std::size_t rank_per_head,
              const std::string& out_dir, Format format) {
  const ctxproj::HeadFactorization factorization =
      ctxproj::factor_heads(model.s, head_count, rank_per_head);
  if (!out_dir.empty()) {
    ctxproj::save_head_set(factorization.heads, out_dir);
    std::fprintf(stderr, "wrote head bundle to %s\n", out_dir.c_str());
  }

  if (format == Format::table) {
    print_vector("singular values", factorization.singular_values);
    std::printf("heads=%zu rank/head=%zu kept rank=%zu\n", head_count, rank_per_head,
                head_count * rank_per_head);
    std::printf("reconstruction error |S - sum S_i|_F = %.9g\n",
                factorization.reconstruction_error);
    return 0;
  }
  json kernels = json::array();
  for (const auto& kernel : factorization.head_kernels) {
    kernels.push_back(matrix_to_json(kernel));
  }
  emit(format, json{{"command", "heads"},
                    {"inputs", {{"heads", head_count}, {"dk", rank_per_head}}},
                    {"results",
                     {{"singular_values", factorization.singular_values},
                      {"head_kernels", kernels},
                      {"combined_kernel", matrix_to_json(factorization.combined_kernel)},
                      {"reconstruction_error", factorization.reconstruction_error}}}});
  return 0;
}

int cmd_positional(const Model& model, const std::vector<std::string>& seq_a,
                   const std::vector<std::string>& seq_b, double alpha,
                   const std::string& scheme, std::uint64_t seed, Format format) {
  ctxproj::PositionalParams params;
  params.scheme = scheme == "gaussian" ? ctxproj::PositionalScheme::seeded_gaussian
                                       : ctxproj::PositionalScheme::sinusoidal;
  params.amplitude = alpha;
  params.seed = seed;
  const ctxproj::OrderSensitivityReport report =
      ctxproj::order_sensitivity_report(model.s, model.vocab, seq_a, seq_b, params);

  if (format == Format::table) {
    std::printf("kernel distance without P: %.9g\n", report.distance_without_positions);
    std::printf("kernel distance with P:    %.9g\n", report.distance_with_positions);
    print_matrix("aligned total (seq A)", report.aligned_total_first);
    print_matrix("total (seq B)", report.total_second);
    return 0;
  }
  emit(format,
       json{{"command", "positional"},
            {"inputs",
             {{"seq_a", seq_a},
              {"seq_b", seq_b},
              {"alpha", alpha},
              {"scheme", scheme},
              {"seed", seed}}},
            {"results",
             {{"kernel_distance_without_P", report.distance_without_positions},
              {"kernel_distance_with_P", report.distance_with_positions},
              {"aligned_total_a", matrix_to_json(report.aligned_total_first)},
              {"total_b", matrix_to_json(report.total_second)}}}});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"contextual projection of co-occurrence statistics"};
  app.require_subcommand(1);
  app.fallthrough();  // app-level flags may follow the subcommand

  std::string format_name = "table";
  app.add_option("--format", format_name, "output format")
      ->check(CLI::IsMember({"table", "json"}))
      ->capture_default_str();

  std::string matrix_path, vocab_path;

  // build-cooc
  auto* build = app.add_subcommand("build-cooc", "count co-occurrences from a corpus");
  std::string corpus_path, weighting = "uniform", out_base = "model";
  std::size_t window = 2;
  build->add_option("corpus", corpus_path, "whitespace-tokenized UTF-8 text file")
      ->required();
  build->add_option("--window", window, "co-occurrence window")->capture_default_str();
  build->add_option("--weighting", weighting, "pair weighting")
      ->check(CLI::IsMember({"uniform", "invdist"}))
      ->capture_default_str();
  build->add_option("--out", out_base, "output base path (.cooc/.vocab appended)")
      ->capture_default_str();

  // predict
  auto* predict = app.add_subcommand("predict", "next-token distribution for a sequence");
  std::vector<std::string> sequence;
  predict->add_option("tokens", sequence, "input sequence")->required();
  predict->add_option("--matrix", matrix_path, "co-occurrence matrix file");
  predict->add_option("--vocab", vocab_path, "vocabulary file");

  // reproduce-paper
  auto* reproduce = app.add_subcommand(
      "reproduce-paper", "recompute the bundled worked example and verify its values");
  std::string perturb;
  reproduce->add_option("--perturb", perturb, "mutate fixture entry: i,j,delta");

  // attend
  auto* attend = app.add_subcommand("attend", "single attention layer over a sequence");
  std::vector<std::string> attend_sequence;
  std::size_t key_dim = 2, value_dim = 2, head_count = 2;
  std::uint64_t seed = 0;
  std::string init = "gaussian";
  double alpha = 1.0;
  std::string scheme = "sinusoidal";
  attend->add_option("tokens", attend_sequence, "input sequence")->required();
  attend->add_option("--dk", key_dim, "query/key dimension")->capture_default_str();
  attend->add_option("--dv", value_dim, "value dimension")->capture_default_str();
  attend->add_option("--seed", seed, "parameter seed")->capture_default_str();
  attend->add_option("--init", init, "parameter initialization")
      ->check(CLI::IsMember({"gaussian", "zero", "cooc"}))
      ->capture_default_str();
  attend->add_option("--matrix", matrix_path, "co-occurrence matrix file");
  attend->add_option("--vocab", vocab_path, "vocabulary file");

  // heads
  auto* heads = app.add_subcommand("heads", "factor the matrix into attention heads");
  std::string head_out_dir;
  heads->add_option("--heads", head_count, "head count")->capture_default_str();
  heads->add_option("--dk", key_dim, "rank per head")->capture_default_str();
  heads->add_option("--out", head_out_dir, "directory for the head bundle");
  heads->add_option("--matrix", matrix_path, "co-occurrence matrix file");
  heads->add_option("--vocab", vocab_path, "vocabulary file");

  // positional
  auto* positional =
      app.add_subcommand("positional", "order sensitivity of the augmented projection");
  std::vector<std::string> seq_a, seq_b;
  positional->add_option("--seq-a", seq_a, "first ordering")->required();
  positional->add_option("--seq-b", seq_b, "second ordering (a permutation)")->required();
  positional->add_option("--alpha", alpha, "positional amplitude")->capture_default_str();
  positional->add_option("--scheme", scheme, "positional scheme")
      ->check(CLI::IsMember({"sinusoidal", "gaussian"}))
      ->capture_default_str();
  positional->add_option("--seed", seed, "seed for the gaussian scheme")
      ->capture_default_str();
  positional->add_option("--matrix", matrix_path, "co-occurrence matrix file");
  positional->add_option("--vocab", vocab_path, "vocabulary file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  const Format format = format_name == "json" ? Format::json : Format::table;
  try {
    if (app.got_subcommand(build)) {
      return cmd_build_cooc(corpus_path, window, weighting, out_base);
    }
    if (app.got_subcommand(predict)) {
      return cmd_predict(load_model_or_default(matrix_path, vocab_path), sequence, format);
    }
    if (app.got_subcommand(reproduce)) {
      return cmd_reproduce(format, perturb);
    }
    if (app.got_subcommand(attend)) {
      return cmd_attend(load_model_or_default(matrix_path, vocab_path), attend_sequence,
                        key_dim, value_dim, seed, init, format);
    }
    if (app.got_subcommand(heads)) {
      return cmd_heads(load_model_or_default(matrix_path, vocab_path), head_count,
                       key_dim, head_out_dir, format);
    }
    if (app.got_subcommand(positional)) {
      return cmd_positional(load_model_or_default(matrix_path, vocab_path), seq_a, seq_b,
                            alpha, scheme, seed, format);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
