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
// Small-step execution over configurations of input stream, output stream,
// header map and remaining command. Reading or writing an instance that is
// not in the header map is the fault the static checker exists to rule out.

#ifndef SP4_INTERP_H_
#define SP4_INTERP_H_

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "sp4/control_plane.h"
#include "sp4/syntax.h"
#include "sp4/values.h"

namespace sp4 {

struct Config {
  BitStream input;
  BitStream output;  // append-only; pos is unused on the output side
  HeaderMap headers;
  CmdPtr command;
};

// Fills fields in declaration order from the stream; short input reads
// zeros and latches the stream's extended flag.
std::pair<FieldRecord, BitStream> deserialize(const HeaderTypeDecl& eta,
                                              BitStream in);

// Concatenates field bits in declaration order. Missing fields serialize
// as zeros.
std::vector<bool> serialize(const HeaderTypeDecl& eta, const FieldRecord& r);

// All fields zero.
FieldRecord init_value(const HeaderTypeDecl& eta);

// Evaluation is strict: every operand is evaluated, so a fault in any
// operand surfaces regardless of the others. Parameters must already be
// substituted away.
std::variant<Value, Fault> eval_expression(const Program& p,
                                           const HeaderMap& h,
                                           const ExprPtr& e);

// Instantiates an action body by replacing parameter references with the
// given argument values.
CmdPtr substitute_action(const ActionDef& a, const std::vector<Value>& args);

struct StepResult {
  Config config;
  std::string rule;  // behavioral label, e.g. "extract", "if-valid-false"
  SourceSpan span;
  std::optional<Fault> fault;
};

// Precondition: cfg.command is not Skip. Exactly one rule applies.
StepResult step(const Program& p, const TableState& st, Config cfg);

struct TraceStep {
  std::string rule;
  SourceSpan span;
  std::set<std::string> valid;  // header-map domain after the step
};

struct RunResult {
  Config config;  // final, or the configuration the fault arose in
  std::vector<TraceStep> trace;
  std::optional<Fault> fault;
  bool input_extended = false;
};

Config initial_config(const Program& p, BitStream packet);

// Steps until Skip or a fault. Always terminates: the command language has
// no loops and every step shrinks the remaining command.
RunResult run(const Program& p, const BitStream& packet, const TableState& st);

}  // namespace sp4

#endif  // SP4_INTERP_H_
