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
// Abstract syntax: programs are declarations (header types, instances,
// tables with inline actions) plus one top-level command. All nodes carry
// source spans and are immutable after parsing.

#ifndef SP4_SYNTAX_H_
#define SP4_SYNTAX_H_

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sp4/diag.h"
#include "sp4/header_algebra.h"
#include "sp4/values.h"

namespace sp4 {

struct BaseType {
  enum class Kind { kBool, kBits };
  Kind kind = Kind::kBool;
  int width = 0;  // kBits only, >= 1

  static BaseType boolean() { return {Kind::kBool, 0}; }
  static BaseType bits(int w) { return {Kind::kBits, w}; }
  bool operator==(const BaseType&) const = default;
};

std::string to_string(const BaseType& t);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

enum class ExprKind { kValue, kField, kVar, kConstApp };

struct Expr {
  ExprKind kind;
  SourceSpan span;
  Value value;              // kValue
  std::string header;       // kField
  std::string field;        // kField
  std::string var;          // kVar
  std::string op;           // kConstApp: ==, !=, &&, ||, !, +, -
  std::vector<ExprPtr> args;  // kConstApp
};

ExprPtr expr_value(Value v, SourceSpan span);
ExprPtr expr_field(std::string header, std::string field, SourceSpan span);
ExprPtr expr_var(std::string name, SourceSpan span);
ExprPtr expr_const_app(std::string op, std::vector<ExprPtr> args,
                       SourceSpan span);

struct Cmd;
using CmdPtr = std::shared_ptr<const Cmd>;

enum class CmdKind {
  kExtract,
  kEmit,
  kSeq,
  kIf,
  kIfValid,
  kApply,
  kSkip,
  kAdd,
  kRemove,
  kModify,
};

struct Cmd {
  CmdKind kind;
  SourceSpan span;
  std::string header;  // extract/emit/add/remove/modify/ifvalid
  std::string field;   // modify
  ExprPtr expr;        // modify rhs, if condition
  CmdPtr c1;           // seq / if / ifvalid
  CmdPtr c2;           // seq / if / ifvalid
  std::string table;   // apply
};

CmdPtr cmd_extract(std::string h, SourceSpan span);
CmdPtr cmd_emit(std::string h, SourceSpan span);
CmdPtr cmd_seq(CmdPtr a, CmdPtr b, SourceSpan span);
CmdPtr cmd_if(ExprPtr cond, CmdPtr then_c, CmdPtr else_c, SourceSpan span);
CmdPtr cmd_if_valid(std::string h, CmdPtr then_c, CmdPtr else_c,
                    SourceSpan span);
CmdPtr cmd_apply(std::string table, SourceSpan span);
CmdPtr cmd_skip(SourceSpan span);
CmdPtr cmd_add(std::string h, SourceSpan span);
CmdPtr cmd_remove(std::string h, SourceSpan span);
CmdPtr cmd_modify(std::string h, std::string f, ExprPtr e, SourceSpan span);

// Folds a statement list into a right-associated Seq spine; empty -> Skip.
CmdPtr cmd_seq_all(const std::vector<CmdPtr>& cs, SourceSpan span);

struct FieldDecl {
  std::string name;
  int width = 0;  // > 0
  SourceSpan span;
};

struct HeaderTypeDecl {
  std::string name;
  std::vector<FieldDecl> fields;
  SourceSpan span;
};

struct InstanceDecl {
  std::string name;
  std::string header_type;
  SourceSpan span;
};

struct Param {
  std::string name;
  BaseType type;
  SourceSpan span;
};

struct ActionDef {
  std::string name;
  std::vector<Param> params;
  CmdPtr body;  // add/remove/modify/seq/skip only
  SourceSpan span;
};

enum class MatchKind { kExact, kTernary };

std::string to_string(MatchKind m);

struct ReadKey {
  ExprPtr expr;
  MatchKind kind = MatchKind::kExact;
  SourceSpan span;
};

struct DefaultAction {
  std::string action;
  std::vector<Value> data;
  SourceSpan span;
};

struct TableDecl {
  std::string name;
  std::vector<std::string> valids;
  std::vector<ReadKey> reads;
  std::vector<ActionDef> actions;
  std::optional<DefaultAction> default_action;
  SourceSpan span;

  const ActionDef* find_action(const std::string& name) const;
};

struct Program {
  std::vector<HeaderTypeDecl> header_types;
  std::vector<InstanceDecl> instances;
  std::vector<TableDecl> tables;
  CmdPtr body;
  std::string file;

  const HeaderTypeDecl* find_header_type(const std::string& name) const;
  const InstanceDecl* find_instance(const std::string& name) const;
  const TableDecl* find_table(const std::string& name) const;

  // The declared-instance universe, in declaration order.
  InstanceUniverse universe() const;

  // Field lookup on an instance; nullopt when h or f is unknown.
  std::optional<BaseType> field_type(const std::string& h,
                                     const std::string& f) const;

  // Global action lookup: action names are unique across tables.
  const ActionDef* action_lookup(const std::string& name) const;
  // The table that declares an action.
  const TableDecl* table_of_action(const std::string& name) const;

  int header_bit_width(const std::string& type_name) const;
};

// Exactly the instances appearing in field references of e.
std::set<std::string> referenced_headers(const ExprPtr& e);

// Canonical concrete syntax; parse(pretty_print(p)) reproduces p and
// pretty_print is a fixpoint on parser output.
std::string pretty_print(const Program& p);
std::string pretty_print_command(const CmdPtr& c, int indent = 0);
std::string pretty_print_expr(const ExprPtr& e);

}  // namespace sp4

#endif  // SP4_SYNTAX_H_
