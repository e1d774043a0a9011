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
//
// Installed table entries: the text format they load from, first-match
// action selection against a header map, and the well-behavedness checks
// that keep selection from ever touching an instance an entry left invalid.

#ifndef SP4_CONTROL_PLANE_H_
#define SP4_CONTROL_PLANE_H_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sp4/diag.h"
#include "sp4/syntax.h"
#include "sp4/typecheck.h"
#include "sp4/values.h"

namespace sp4 {

enum class PatternKind { kWildcard, kExact, kTernary };

struct KeyPattern {
  PatternKind kind = PatternKind::kWildcard;
  Value value = false;      // exact and ternary
  BitVec mask;              // ternary only
};

struct Entry {
  std::vector<bool> valid_bits;    // parallel to the table's valids list
  std::vector<KeyPattern> keys;    // parallel to the table's reads list
  std::string action;
  std::vector<Value> data;
  int line = 0;                    // entries-file line, for diagnostics
};

// Miss behavior installed at runtime in place of the declared default.
struct DefaultOverride {
  std::string action;
  std::vector<Value> data;
  int line = 0;
};

struct TableEntries {
  std::vector<Entry> entries;
  std::optional<DefaultOverride> default_override;
};

struct TableState {
  std::map<std::string, TableEntries> tables;
  std::string file = "<entries>";  // origin, for validation diagnostics

  const TableEntries* find(const std::string& table) const;
};

struct LoadResult {
  std::optional<TableState> state;  // set exactly when there are no errors
  std::vector<Diagnostic> diagnostics;
};

// Line-oriented text, one entry per line:
//   table <name>: valids=<bits> keys=<pat,...> -> <action>(<data,...>)
// `valids=` covers the table's valids list in order (1 = matched valid) and
// is omitted when that list is empty; `keys=` likewise for reads. A pattern
// is `*` (wildcard), a value (exact), or value/mask (ternary); values are
// decimal or 0x hex at the key's declared width. A line
//   table <name>: default -> <action>(<data,...>)
// overrides the miss behavior. `#` starts a comment.
LoadResult load_entries(const std::string& text, const Program& p,
                        const std::string& file_name = "<entries>");

struct SelectResult {
  std::string action;        // empty: miss with no default (no-op)
  std::vector<Value> data;
  bool hit = false;          // an installed entry matched
  std::optional<Fault> fault;
};

// First entry in file order whose valid bits match the header map exactly
// over the table's valids list and whose key patterns match the evaluated
// reads. Wildcard and zero-mask keys are never evaluated, so entries can
// mask keys whose instances they match as invalid. On a miss the override,
// else the declared default, else a no-op is selected.
SelectResult select_action(const Program& p, const TableDecl& t,
                           const HeaderMap& h, const TableState& st);

// Per-table, per-action validity assumption sets from a checked program.
using TableAssumptions = std::map<std::string, std::vector<std::set<std::string>>>;

TableAssumptions collect_assumptions(const Program& p, const CheckResult& r);

// Rejects entries that could make select_action read an instance they do
// not pin valid, entries with action data that does not fit the action's
// parameters, and entries invoking an action while matching an instance the
// checker assumed valid for that action as invalid. Default overrides must
// name a declared action whose assumption set is empty. When this passes,
// select_action cannot fault for any header map.
std::vector<Diagnostic> validate_well_behaved(const Program& p,
                                              const TableState& st,
                                              const TableAssumptions& assume);

}  // namespace sp4

#endif  // SP4_CONTROL_PLANE_H_
