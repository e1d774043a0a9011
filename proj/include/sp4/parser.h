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

#ifndef SP4_PARSER_H_
#define SP4_PARSER_H_

#include <optional>
#include <string>
#include <vector>

#include "sp4/diag.h"
#include "sp4/syntax.h"

namespace sp4 {

struct ParseResult {
  std::optional<Program> program;
  // Parse and resolution errors; empty exactly when program is set.
  std::vector<Diagnostic> diagnostics;
};

// Parses and resolves a whole source file. On success every name reference
// (instances, fields, tables, actions, variables) is declared, declarations
// are unique, arities match and literals fit their widths.
ParseResult parse_program(const std::string& source_text,
                          const std::string& file_name = "<input>");

}  // namespace sp4

#endif  // SP4_PARSER_H_
