// Drives the installed binary end to end. The test runner passes its
// location through the CTXPROJ_CLI environment variable.

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr interleaved
};

const char* cli_path() {
  const char* path = std::getenv("CTXPROJ_CLI");
  REQUIRE_MESSAGE(path != nullptr, "CTXPROJ_CLI must point at the binary");
  return path;
}

RunResult run_cli(const std::string& args) {
  const std::string command = std::string(cli_path()) + " " + args + " 2>&1";
  RunResult result;
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buffer;
  std::size_t got = 0;
  while ((got = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) {
    result.output.append(buffer.data(), got);
  }
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("ctxproj_cli_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

}  // namespace

TEST_CASE("reproduce-paper passes on the clean fixture") {
  const RunResult result = run_cli("reproduce-paper");
  CAPTURE(result.output);
  CHECK(result.exit_code == 0);
  CHECK(result.output.find("FAIL") == std::string::npos);
}

TEST_CASE("reproduce-paper emits parseable json listing the pipeline checks") {
  const RunResult result = run_cli("--format json reproduce-paper");
  REQUIRE(result.exit_code == 0);
  const json document = json::parse(result.output);
  CHECK(document["command"] == "reproduce-paper");
  CHECK(document["results"]["all_passed"] == true);

  const auto& checks = document["results"]["checks"];
  std::size_t pipeline_checks = 0;
  for (const auto& check : checks) {
    CHECK(check["passed"] == true);
    const std::string name = check["name"];
    if (name.rfind("example", 0) == 0) ++pipeline_checks;
  }
  CHECK(pipeline_checks == 14);
}

TEST_CASE("a perturbed fixture flips reproduce-paper to exit 2") {
  const RunResult result = run_cli("reproduce-paper --perturb 0,1,1");
  CAPTURE(result.output);
  CHECK(result.exit_code == 2);
  CHECK(result.output.find("FAIL") != std::string::npos);
  CHECK(result.output.find("first failing quantity") != std::string::npos);
}

TEST_CASE("predict resolves both bundled sequences") {
  const RunResult geo = run_cli("predict river bank flooded");
  CHECK(geo.exit_code == 0);
  CHECK(geo.output.find("argmax: shore") != std::string::npos);

  const RunResult fin = run_cli("--format json predict bank loan");
  REQUIRE(fin.exit_code == 0);
  const json document = json::parse(fin.output);
  CHECK(document["results"]["argmax"] == "money");

  const RunResult unknown = run_cli("predict bank zzz");
  CHECK(unknown.exit_code == 1);
  CHECK(unknown.output.find("zzz") != std::string::npos);
}

TEST_CASE("json output is byte-identical across identical invocations") {
  const RunResult first = run_cli("--format json predict river bank flooded");
  const RunResult second = run_cli("--format json predict river bank flooded");
  CHECK(first.exit_code == 0);
  CHECK(first.output == second.output);
}

TEST_CASE("build-cooc writes the documented triplet format") {
  TempDir dir;
  const fs::path corpus = dir.path / "corpus.txt";
  std::ofstream(corpus) << "a b\n";
  const fs::path base = dir.path / "model";

  const RunResult result =
      run_cli("build-cooc " + corpus.string() + " --out " + base.string());
  CAPTURE(result.output);
  REQUIRE(result.exit_code == 0);

  std::ifstream matrix_file(base.string() + ".cooc");
  std::string header, triplet;
  std::getline(matrix_file, header);
  std::getline(matrix_file, triplet);
  CHECK(header == "cooc v1 n=2 symmetric=1");
  CHECK(triplet == "0\t1\t1");

  // The written model feeds predict.
  const RunResult predict = run_cli("predict a --matrix " + base.string() +
                                    ".cooc --vocab " + base.string() + ".vocab");
  CHECK(predict.exit_code == 0);

  const RunResult missing = run_cli("build-cooc " + (dir.path / "nope.txt").string());
  CHECK(missing.exit_code == 1);
}

TEST_CASE("heads reports the full-rank reconstruction") {
  const RunResult result = run_cli("--format json heads --heads 7 --dk 1");
  REQUIRE(result.exit_code == 0);
  const json document = json::parse(result.output);
  CHECK(document["results"]["reconstruction_error"].get<double>() <= 1e-8);
  CHECK(document["results"]["singular_values"].size() == 7);

  TempDir dir;
  const fs::path bundle = dir.path / "bundle";
  const RunResult saved = run_cli("heads --heads 2 --dk 2 --out " + bundle.string());
  CHECK(saved.exit_code == 0);
  CHECK(fs::exists(bundle / "manifest.txt"));
  CHECK(fs::exists(bundle / "head0_w_query.mat"));
  CHECK(fs::exists(bundle / "head1_w_value.mat"));
  CHECK(fs::exists(bundle / "w_output.mat"));
}

TEST_CASE("attend with a zero kernel prints uniform rows") {
  const RunResult result =
      run_cli("--format json attend river bank flooded --dk 1 --init zero");
  REQUIRE(result.exit_code == 0);
  const json document = json::parse(result.output);
  const auto& weights = document["results"]["weights"];
  for (const auto& row : weights) {
    for (const auto& w : row) {
      CHECK(w.get<double>() == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("attend can use the co-occurrence operator as its kernel factor") {
  const RunResult result = run_cli("--format json attend bank loan --init cooc");
  REQUIRE(result.exit_code == 0);
  const json document = json::parse(result.output);
  // scores = M / sqrt(n) with M = [[0,6],[6,0]] and n = 7.
  const double expected = 6.0 / std::sqrt(7.0);
  CHECK(document["results"]["scores"][0][1].get<double>() ==
        doctest::Approx(expected).epsilon(1e-12));
  CHECK(document["results"]["scores"][0][0].get<double>() == 0.0);
}

TEST_CASE("positional with zero amplitude reports two zero distances") {
  const RunResult result = run_cli(
      "--format json positional --seq-a river bank flooded "
      "--seq-b bank river flooded --alpha 0");
  REQUIRE(result.exit_code == 0);
  const json document = json::parse(result.output);
  CHECK(document["results"]["kernel_distance_without_P"].get<double>() == 0.0);
  CHECK(document["results"]["kernel_distance_with_P"].get<double>() == 0.0);

  const RunResult sensitive = run_cli(
      "--format json positional --seq-a river bank flooded "
      "--seq-b bank river flooded --alpha 1");
  REQUIRE(sensitive.exit_code == 0);
  const json on = json::parse(sensitive.output);
  CHECK(on["results"]["kernel_distance_with_P"].get<double>() > 1e-6);
}

TEST_CASE("usage errors exit with code 1") {
  CHECK(run_cli("no-such-command").exit_code == 1);
  CHECK(run_cli("predict --frobnicate x").exit_code == 1);
  CHECK(run_cli("").exit_code == 1);  // a subcommand is required
  CHECK(run_cli("--help").exit_code == 0);
}
