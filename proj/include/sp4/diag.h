// Copyright 2026 The sp4 Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SP4_DIAG_H_
#define SP4_DIAG_H_

#include <optional>
#include <string>
#include <vector>

namespace sp4 {

// Half-open in spirit but stored inclusive: cols [col_begin, col_end], 1-based.
struct SourceSpan {
  std::string file;
  int line = 0;
  int col_begin = 0;
  int col_end = 0;

  bool operator==(const SourceSpan&) const = default;
};

enum class Severity { kError, kWarning };

// Where in the program the diagnostic arose; drives bug classification.
enum class Provenance {
  kNone,
  kParserRegion,
  kControlApply,
  kTableReads,
  kTableAction,
  kTableDefault,
};

// The five bug categories plus a catch-all for errors no heuristic claims.
enum class BugCategory {
  kParserBug,
  kControlBug,
  kTableReadsBug,
  kTableActionBug,
  kDefaultActionBug,
  kUnclassified,
};

struct Diagnostic {
  Severity severity = Severity::kError;
  SourceSpan span;
  std::string message;
  std::optional<BugCategory> category;
  Provenance provenance = Provenance::kNone;
  // Instance named by an invalid-header error; empty otherwise.
  std::string header;
  // Table and action the diagnostic arose in; empty outside table contexts.
  std::string table;
  std::string action;
};

std::string to_string(Severity s);
std::string to_string(BugCategory c);
std::string to_string(Provenance p);

// One rendered line: "<file>, line N, cols A-B: error <msg>" for errors and
// "<file>, line N, cols A-B: warning: <msg>" for warnings.
std::string render_line(const Diagnostic& d);

// Stable order: file, then line, then column, then severity (errors first on
// ties). render() applies it; byte-stable for golden tests.
void sort_diagnostics(std::vector<Diagnostic>& ds);
std::string render(std::vector<Diagnostic> ds);

int count_errors(const std::vector<Diagnostic>& ds);
int count_warnings(const std::vector<Diagnostic>& ds);

}  // namespace sp4

#endif  // SP4_DIAG_H_
