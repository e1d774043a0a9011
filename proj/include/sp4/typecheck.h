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

#ifndef SP4_TYPECHECK_H_
#define SP4_TYPECHECK_H_

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "sp4/diag.h"
#include "sp4/header_algebra.h"
#include "sp4/syntax.h"

namespace sp4 {

// Variable environment for action parameters.
using TypeEnv = std::map<std::string, BaseType>;

enum class PointKind { kBefore, kAfter };

// Type snapshot at a statement boundary. Statements are the non-Seq commands
// of every sequence spine, at any nesting depth outside action bodies;
// recorded in program order.
struct PointType {
  PointKind kind = PointKind::kBefore;
  SourceSpan span;
  HeaderType type;  // normalized
};

// Per-apply-site record of what a table contributed.
struct ApplyInfo {
  std::string table;
  SourceSpan span;
  HeaderType input;   // normalized type entering the apply
  HeaderType output;  // normalized type leaving the apply
  // Inferred validity assumptions, parallel to the table's action list.
  std::vector<std::set<std::string>> assumed_valid;
};

struct CheckOptions {
  // Type every table without a declared default action as if one had been
  // added: the fall-through term is dropped from the output sum. Bug
  // classification uses this to probe which errors a default action fixes.
  bool assume_defaulted_tables = false;
  // Same, for the named tables only; classification probes one at a time to
  // find the table whose default discharges an error.
  std::set<std::string> assume_defaulted;
};

struct CheckResult {
  HeaderType output;
  std::vector<Diagnostic> diagnostics;
  std::vector<PointType> points;
  std::vector<ApplyInfo> applies;

  bool ok() const { return count_errors(diagnostics) == 0; }
};

// Validity assumptions for one table, parallel to its action list.
struct ActionAssumptions {
  std::vector<std::set<std::string>> assumed_valid;
  std::vector<Diagnostic> warnings;
};

// How diagnostics name a base type: "bool" or "bits<W>".
std::string type_name(const BaseType& t);

// False for exact keys; a ternary key is maskable when every instance it
// reads is listed in the table's valids.
bool maskable(const TableDecl& t, const ExprPtr& e, MatchKind m);

// Grows each action's assumption set from empty: a failed validity check
// naming an instance in t.valids is assumed guaranteed by the control plane
// and the action is re-checked, until no check fails for such an instance.
// One warning per assumption. Trial-check diagnostics are discarded.
ActionAssumptions infer_control_validity(const Program& prog,
                                         const HeaderType& theta,
                                         const TableDecl& t);

// Expression typing. Validity and operand failures are reported through
// diags; checking recovers with the declared or expected type.
BaseType check_expression(const Program& prog, const TypeEnv& env,
                          const HeaderType& theta, const ExprPtr& e,
                          std::vector<Diagnostic>* diags);

// Action typing: body checked with parameters in scope; returns the
// parameter signature and the output type.
std::pair<std::vector<BaseType>, HeaderType> check_action(
    const Program& prog, const TypeEnv& env, const HeaderType& theta,
    const ActionDef& a, std::vector<Diagnostic>* diags);

// Table application: non-maskable keys are checked as reads, maskable keys
// are skipped with a warning, every action is checked under its assumption
// set, and the output sums the per-action results plus the unchanged input
// when no default action is declared.
CheckResult check_table_apply(const Program& prog, const HeaderType& theta,
                              const TableDecl& t, const CheckOptions& opts = {});

// Command typing. On a failed check the violation is reported and checking
// continues as if it had passed, so one root cause surfaces at every use
// site. A command entered with an uninhabited type checks as unreachable:
// output empty, no diagnostics.
CheckResult check_command(const Program& prog, const TypeEnv& env,
                          const HeaderType& theta, const CmdPtr& c,
                          const CheckOptions& opts = {});

// Whole program: body checked with no variables in scope, starting from the
// type with no valid instances.
CheckResult check_program(const Program& prog, const CheckOptions& opts = {});

// Union of a table's assumption sets over every apply site in r, parallel to
// the table's action list. Entry validation keys on this.
std::vector<std::set<std::string>> table_assumptions(const CheckResult& r,
                                                     const TableDecl& t);

}  // namespace sp4

#endif  // SP4_TYPECHECK_H_
