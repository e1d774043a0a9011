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

#include "sp4/diag.h"

#include <algorithm>
#include <sstream>

namespace sp4 {

std::string to_string(Severity s) {
  return s == Severity::kError ? "error" : "warning";
}

std::string to_string(BugCategory c) {
  switch (c) {
    case BugCategory::kParserBug:
      return "parser";
    case BugCategory::kControlBug:
      return "control";
    case BugCategory::kTableReadsBug:
      return "table-reads";
    case BugCategory::kTableActionBug:
      return "table-action";
    case BugCategory::kDefaultActionBug:
      return "default-action";
    case BugCategory::kUnclassified:
      return "unclassified";
  }
  return "unclassified";
}

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::kNone:
      return "none";
    case Provenance::kParserRegion:
      return "parser-region";
    case Provenance::kControlApply:
      return "control-apply";
    case Provenance::kTableReads:
      return "table-reads";
    case Provenance::kTableAction:
      return "table-action";
    case Provenance::kTableDefault:
      return "table-default";
  }
  return "none";
}

std::string render_line(const Diagnostic& d) {
  std::ostringstream os;
  os << d.span.file << ", line " << d.span.line << ", cols " << d.span.col_begin
     << "-" << d.span.col_end << ": ";
  // Errors follow the checker-output figure style with no colon; warnings
  // carry one.
  if (d.severity == Severity::kError) {
    os << "error " << d.message;
  } else {
    os << "warning: " << d.message;
  }
  return os.str();
}

void sort_diagnostics(std::vector<Diagnostic>& ds) {
  std::stable_sort(ds.begin(), ds.end(),
                   [](const Diagnostic& a, const Diagnostic& b) {
                     if (a.span.file != b.span.file)
                       return a.span.file < b.span.file;
                     if (a.span.line != b.span.line)
                       return a.span.line < b.span.line;
                     if (a.span.col_begin != b.span.col_begin)
                       return a.span.col_begin < b.span.col_begin;
                     return a.severity == Severity::kError &&
                            b.severity == Severity::kWarning;
                   });
}

std::string render(std::vector<Diagnostic> ds) {
  sort_diagnostics(ds);
  std::string out;
  for (const Diagnostic& d : ds) {
    out += render_line(d);
    out += '\n';
  }
  return out;
}

int count_errors(const std::vector<Diagnostic>& ds) {
  return static_cast<int>(std::count_if(
      ds.begin(), ds.end(),
      [](const Diagnostic& d) { return d.severity == Severity::kError; }));
}

int count_warnings(const std::vector<Diagnostic>& ds) {
  return static_cast<int>(std::count_if(
      ds.begin(), ds.end(),
      [](const Diagnostic& d) { return d.severity == Severity::kWarning; }));
}

}  // namespace sp4
