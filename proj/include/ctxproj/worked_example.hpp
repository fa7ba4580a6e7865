#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ctxproj/corpus.hpp"
#include "ctxproj/matrix.hpp"

namespace ctxproj::worked_example {

// Bundled seven-token fixture ("river bank ..." corpus) with reference
// values for the full projection/prediction pipeline on two sequences:
// "river bank flooded" and "bank loan". Used by the reproduce-paper CLI
// command and as the default model for the other commands.
const Vocabulary& vocabulary();
const CoocMatrix& cooccurrence();

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Recomputes both sequences' pipelines from the given entries and compares
// against the embedded reference values. The first check compares the
// entries against the fixture itself, so any mutation is caught even when
// it does not feed the printed quantities. Exact integer matrices are
// compared exactly; derived quantities both against their rounded
// two-decimal prints (5e-3 / 5e-2) and against the exact ratios (1e-9).
std::vector<CheckResult> run_checks(const Matrix& entries);

// Convenience: entries with a single mutated cell.
Matrix perturbed_entries(std::size_t i, std::size_t j, double delta);

}  // namespace ctxproj::worked_example
