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

#include "sp4/syntax.h"

#include <sstream>
#include <utility>

namespace sp4 {

std::string to_string(const BaseType& t) {
  if (t.kind == BaseType::Kind::kBool) return "bool";
  return std::to_string(t.width);
}

std::string to_string(MatchKind m) {
  return m == MatchKind::kExact ? "exact" : "ternary";
}

namespace {

ExprPtr make_expr(Expr e) { return std::make_shared<const Expr>(std::move(e)); }
CmdPtr make_cmd(Cmd c) { return std::make_shared<const Cmd>(std::move(c)); }

}  // namespace

ExprPtr expr_value(Value v, SourceSpan span) {
  Expr e;
  e.kind = ExprKind::kValue;
  e.span = std::move(span);
  e.value = std::move(v);
  return make_expr(std::move(e));
}

ExprPtr expr_field(std::string header, std::string field, SourceSpan span) {
  Expr e;
  e.kind = ExprKind::kField;
  e.span = std::move(span);
  e.header = std::move(header);
  e.field = std::move(field);
  return make_expr(std::move(e));
}

ExprPtr expr_var(std::string name, SourceSpan span) {
  Expr e;
  e.kind = ExprKind::kVar;
  e.span = std::move(span);
  e.var = std::move(name);
  return make_expr(std::move(e));
}

ExprPtr expr_const_app(std::string op, std::vector<ExprPtr> args,
                       SourceSpan span) {
  Expr e;
  e.kind = ExprKind::kConstApp;
  e.span = std::move(span);
  e.op = std::move(op);
  e.args = std::move(args);
  return make_expr(std::move(e));
}

CmdPtr cmd_extract(std::string h, SourceSpan span) {
  Cmd c;
  c.kind = CmdKind::kExtract;
  c.span = std::move(span);
  c.header = std::move(h);
  return make_cmd(std::move(c));
}

CmdPtr cmd_emit(std::string h, SourceSpan span) {
  Cmd c;
  c.kind = CmdKind::kEmit;
  c.span = std::move(span);
  c.header = std::move(h);
  return make_cmd(std::move(c));
}

CmdPtr cmd_seq(CmdPtr a, CmdPtr b, SourceSpan span) {
  Cmd c;
  c.kind = CmdKind::kSeq;
  c.span = std::move(span);
  c.c1 = std::move(a);
  c.c2 = std::move(b);
  return make_cmd(std::move(c));
}

CmdPtr cmd_if(ExprPtr cond, CmdPtr then_c, CmdPtr else_c, SourceSpan span) {
  Cmd c;
  c.kind = CmdKind::kIf;
  c.span = std::move(span);
  c.expr = std::move(cond);
  c.c1 = std::move(then_c);
  c.c2 = std::move(else_c);
  return make_cmd(std::move(c));
}

CmdPtr cmd_if_valid(std::string h, CmdPtr then_c, CmdPtr else_c,
                    SourceSpan span) {
  Cmd c;
  c.kind = CmdKind::kIfValid;
  c.span = std::move(span);
  c.header = std::move(h);
  c.c1 = std::move(then_c);
  c.c2 = std::move(else_c);
  return make_cmd(std::move(c));
}

CmdPtr cmd_apply(std::string table, SourceSpan span) {
  Cmd c;
  c.kind = CmdKind::kApply;
  c.span = std::move(span);
  c.table = std::move(table);
  return make_cmd(std::move(c));
}

CmdPtr cmd_skip(SourceSpan span) {
  Cmd c;
  c.kind = CmdKind::kSkip;
  c.span = std::move(span);
  return make_cmd(std::move(c));
}

CmdPtr cmd_add(std::string h, SourceSpan span) {
  Cmd c;
  c.kind = CmdKind::kAdd;
  c.span = std::move(span);
  c.header = std::move(h);
  return make_cmd(std::move(c));
}

CmdPtr cmd_remove(std::string h, SourceSpan span) {
  Cmd c;
  c.kind = CmdKind::kRemove;
  c.span = std::move(span);
  c.header = std::move(h);
  return make_cmd(std::move(c));
}

CmdPtr cmd_modify(std::string h, std::string f, ExprPtr e, SourceSpan span) {
  Cmd c;
  c.kind = CmdKind::kModify;
  c.span = std::move(span);
  c.header = std::move(h);
  c.field = std::move(f);
  c.expr = std::move(e);
  return make_cmd(std::move(c));
}

CmdPtr cmd_seq_all(const std::vector<CmdPtr>& cs, SourceSpan span) {
  if (cs.empty()) return cmd_skip(span);
  CmdPtr acc = cs.back();
  for (auto it = std::next(cs.rbegin()); it != cs.rend(); ++it) {
    acc = cmd_seq(*it, acc, (*it)->span);
  }
  return acc;
}

const ActionDef* TableDecl::find_action(const std::string& target) const {
  for (const ActionDef& a : actions) {
    if (a.name == target) return &a;
  }
  return nullptr;
}

const HeaderTypeDecl* Program::find_header_type(const std::string& name) const {
  for (const HeaderTypeDecl& d : header_types) {
    if (d.name == name) return &d;
  }
  return nullptr;
}

const InstanceDecl* Program::find_instance(const std::string& name) const {
  for (const InstanceDecl& d : instances) {
    if (d.name == name) return &d;
  }
  return nullptr;
}

const TableDecl* Program::find_table(const std::string& name) const {
  for (const TableDecl& d : tables) {
    if (d.name == name) return &d;
  }
  return nullptr;
}

InstanceUniverse Program::universe() const {
  InstanceUniverse u;
  for (const InstanceDecl& d : instances) u.add(d.name);
  return u;
}

std::optional<BaseType> Program::field_type(const std::string& h,
                                            const std::string& f) const {
  const InstanceDecl* inst = find_instance(h);
  if (!inst) return std::nullopt;
  const HeaderTypeDecl* type = find_header_type(inst->header_type);
  if (!type) return std::nullopt;
  for (const FieldDecl& fd : type->fields) {
    if (fd.name == f) return BaseType::bits(fd.width);
  }
  return std::nullopt;
}

const ActionDef* Program::action_lookup(const std::string& name) const {
  for (const TableDecl& t : tables) {
    if (const ActionDef* a = t.find_action(name)) return a;
  }
  return nullptr;
}

const TableDecl* Program::table_of_action(const std::string& name) const {
  for (const TableDecl& t : tables) {
    if (t.find_action(name)) return &t;
  }
  return nullptr;
}

int Program::header_bit_width(const std::string& type_name) const {
  const HeaderTypeDecl* type = find_header_type(type_name);
  if (!type) return 0;
  int total = 0;
  for (const FieldDecl& f : type->fields) total += f.width;
  return total;
}

namespace {

void collect_headers(const ExprPtr& e, std::set<std::string>* out) {
  switch (e->kind) {
    case ExprKind::kValue:
    case ExprKind::kVar:
      return;
    case ExprKind::kField:
      out->insert(e->header);
      return;
    case ExprKind::kConstApp:
      for (const ExprPtr& a : e->args) collect_headers(a, out);
      return;
  }
}

}  // namespace

std::set<std::string> referenced_headers(const ExprPtr& e) {
  std::set<std::string> out;
  collect_headers(e, &out);
  return out;
}

namespace {

// Binding strengths for minimal parenthesization: || < && < ==/!= < +/-.
int op_precedence(const std::string& op) {
  if (op == "||") return 1;
  if (op == "&&") return 2;
  if (op == "==" || op == "!=") return 3;
  if (op == "+" || op == "-") return 4;
  return 5;  // unary !
}

void print_expr_rec(const ExprPtr& e, int parent_prec, std::string* out) {
  switch (e->kind) {
    case ExprKind::kValue:
      *out += value_to_string(e->value);
      return;
    case ExprKind::kField:
      *out += e->header + "." + e->field;
      return;
    case ExprKind::kVar:
      *out += e->var;
      return;
    case ExprKind::kConstApp: {
      if (e->op == "!") {
        *out += "!";
        print_expr_rec(e->args[0], 5, out);
        return;
      }
      int prec = op_precedence(e->op);
      bool paren = prec < parent_prec;
      if (paren) *out += "(";
      print_expr_rec(e->args[0], prec, out);
      *out += " " + e->op + " ";
      print_expr_rec(e->args[1], prec + 1, out);
      if (paren) *out += ")";
      return;
    }
  }
}

std::string indent_str(int n) { return std::string(2 * n, ' '); }

void print_cmd_rec(const CmdPtr& c, int indent, std::string* out) {
  switch (c->kind) {
    case CmdKind::kSeq:
      print_cmd_rec(c->c1, indent, out);
      print_cmd_rec(c->c2, indent, out);
      return;
    case CmdKind::kSkip:
      *out += indent_str(indent) + "skip\n";
      return;
    case CmdKind::kExtract:
      *out += indent_str(indent) + "extract(" + c->header + ")\n";
      return;
    case CmdKind::kEmit:
      *out += indent_str(indent) + "emit(" + c->header + ")\n";
      return;
    case CmdKind::kAdd:
      *out += indent_str(indent) + "add(" + c->header + ")\n";
      return;
    case CmdKind::kRemove:
      *out += indent_str(indent) + "remove(" + c->header + ")\n";
      return;
    case CmdKind::kApply:
      *out += indent_str(indent) + "apply(" + c->table + ")\n";
      return;
    case CmdKind::kModify:
      *out += indent_str(indent) + c->header + "." + c->field + " = " +
              pretty_print_expr(c->expr) + "\n";
      return;
    case CmdKind::kIf:
    case CmdKind::kIfValid: {
      std::string head = c->kind == CmdKind::kIf
                             ? pretty_print_expr(c->expr)
                             : "valid(" + c->header + ")";
      *out += indent_str(indent) + "if (" + head + ") {\n";
      print_cmd_rec(c->c1, indent + 1, out);
      *out += indent_str(indent) + "}";
      if (c->c2->kind != CmdKind::kSkip) {
        *out += " else {\n";
        print_cmd_rec(c->c2, indent + 1, out);
        *out += indent_str(indent) + "}";
      }
      *out += "\n";
      return;
    }
  }
}

}  // namespace

std::string pretty_print_expr(const ExprPtr& e) {
  std::string out;
  print_expr_rec(e, 0, &out);
  return out;
}

std::string pretty_print_command(const CmdPtr& c, int indent) {
  std::string out;
  print_cmd_rec(c, indent, &out);
  return out;
}

std::string pretty_print(const Program& p) {
  std::ostringstream os;
  for (const HeaderTypeDecl& h : p.header_types) {
    os << "header " << h.name << " {";
    for (std::size_t i = 0; i < h.fields.size(); ++i) {
      os << (i ? " " : "") << h.fields[i].name << ":" << h.fields[i].width;
    }
    os << "}\n";
  }
  for (const InstanceDecl& i : p.instances) {
    os << "instance " << i.name << ":" << i.header_type << "\n";
  }
  for (const TableDecl& t : p.tables) {
    os << "table " << t.name << " {\n";
    if (!t.valids.empty()) {
      os << "  valids {";
      for (std::size_t i = 0; i < t.valids.size(); ++i) {
        os << (i ? " " : "") << t.valids[i];
      }
      os << "}\n";
    }
    if (!t.reads.empty()) {
      os << "  reads {";
      for (std::size_t i = 0; i < t.reads.size(); ++i) {
        os << (i ? " " : "") << pretty_print_expr(t.reads[i].expr) << " : "
           << to_string(t.reads[i].kind);
      }
      os << "}\n";
    }
    os << "  actions {\n";
    for (const ActionDef& a : t.actions) {
      os << "    " << a.name << "(";
      for (std::size_t i = 0; i < a.params.size(); ++i) {
        os << (i ? ", " : "") << a.params[i].name << ":"
           << to_string(a.params[i].type);
      }
      os << ") {\n";
      os << pretty_print_command(a.body, 3);
      os << "    }\n";
    }
    os << "  }\n";
    if (t.default_action) {
      os << "  default_action = " << t.default_action->action << "(";
      for (std::size_t i = 0; i < t.default_action->data.size(); ++i) {
        os << (i ? ", " : "") << value_to_string(t.default_action->data[i]);
      }
      os << ")\n";
    }
    os << "}\n";
  }
  os << "control {\n";
  os << pretty_print_command(p.body, 1);
  os << "}\n";
  return os.str();
}

}  // namespace sp4
