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

#include "sp4/interp.h"

#include <cassert>
#include <map>
#include <utility>

namespace sp4 {

namespace {

// Keeps the low bits: truncates from the front or zero-extends on the left.
// Checked programs never need this; it gives unchecked programs a defined
// meaning instead of undefined behavior.
BitVec resize_bits(const BitVec& v, int w) {
  if (v.width == w) return v;
  BitVec out = BitVec::zeros(w);
  for (int i = 0; i < w && i < v.width; ++i) {
    out.bits[w - 1 - i] = v.bits[v.width - 1 - i];
  }
  return out;
}

BitVec to_bits(const Value& v) {
  if (std::holds_alternative<BitVec>(v)) return std::get<BitVec>(v);
  return BitVec::from_uint64(std::get<bool>(v) ? 1 : 0, 1);
}

bool to_bool(const Value& v) {
  if (std::holds_alternative<bool>(v)) return std::get<bool>(v);
  const BitVec& b = std::get<BitVec>(v);
  for (bool bit : b.bits) {
    if (bit) return true;
  }
  return false;
}

// Equality is width-sensitive: bit vectors of different widths, or a bool
// against a bit vector, compare unequal.
bool value_equal(const Value& a, const Value& b) {
  if (a.index() != b.index()) return false;
  if (std::holds_alternative<bool>(a)) {
    return std::get<bool>(a) == std::get<bool>(b);
  }
  return std::get<BitVec>(a) == std::get<BitVec>(b);
}

std::set<std::string> domain_set(const HeaderMap& h) {
  std::set<std::string> out;
  for (const auto& [name, record] : h) out.insert(name);
  return out;
}

Fault make_fault(SourceSpan span, std::string message, const HeaderMap& h) {
  return Fault{std::move(span), std::move(message), domain_set(h)};
}

ExprPtr substitute_expr(const ExprPtr& e,
                        const std::map<std::string, Value>& env) {
  switch (e->kind) {
    case ExprKind::kValue:
    case ExprKind::kField:
      return e;
    case ExprKind::kVar: {
      auto it = env.find(e->var);
      if (it == env.end()) return e;
      return expr_value(it->second, e->span);
    }
    case ExprKind::kConstApp: {
      std::vector<ExprPtr> args;
      args.reserve(e->args.size());
      for (const ExprPtr& a : e->args) args.push_back(substitute_expr(a, env));
      return expr_const_app(e->op, std::move(args), e->span);
    }
  }
  return e;
}

CmdPtr substitute_cmd(const CmdPtr& c,
                      const std::map<std::string, Value>& env) {
  switch (c->kind) {
    case CmdKind::kModify:
      return cmd_modify(c->header, c->field, substitute_expr(c->expr, env),
                        c->span);
    case CmdKind::kSeq:
      return cmd_seq(substitute_cmd(c->c1, env), substitute_cmd(c->c2, env),
                     c->span);
    case CmdKind::kIf:
      return cmd_if(substitute_expr(c->expr, env), substitute_cmd(c->c1, env),
                    substitute_cmd(c->c2, env), c->span);
    case CmdKind::kIfValid:
      return cmd_if_valid(c->header, substitute_cmd(c->c1, env),
                          substitute_cmd(c->c2, env), c->span);
    default:
      return c;  // extract/emit/add/remove/skip/apply reference no parameters
  }
}

}  // namespace

std::pair<FieldRecord, BitStream> deserialize(const HeaderTypeDecl& eta,
                                              BitStream in) {
  FieldRecord r;
  for (const FieldDecl& f : eta.fields) {
    BitVec v;
    v.width = f.width;
    v.bits = in.take(f.width);
    r[f.name] = std::move(v);
  }
  return {std::move(r), std::move(in)};
}

std::vector<bool> serialize(const HeaderTypeDecl& eta, const FieldRecord& r) {
  std::vector<bool> out;
  for (const FieldDecl& f : eta.fields) {
    auto it = r.find(f.name);
    if (it == r.end()) {
      out.insert(out.end(), f.width, false);
      continue;
    }
    const BitVec& v = it->second;
    for (int i = 0; i < f.width; ++i) {
      out.push_back(i < v.width ? static_cast<bool>(v.bits[i]) : false);
    }
  }
  return out;
}

FieldRecord init_value(const HeaderTypeDecl& eta) {
  FieldRecord r;
  for (const FieldDecl& f : eta.fields) r[f.name] = BitVec::zeros(f.width);
  return r;
}

std::variant<Value, Fault> eval_expression(const Program& p,
                                           const HeaderMap& h,
                                           const ExprPtr& e) {
  switch (e->kind) {
    case ExprKind::kValue:
      return e->value;
    case ExprKind::kVar:
      return make_fault(e->span, "unbound variable " + e->var, h);
    case ExprKind::kField: {
      auto hit = h.find(e->header);
      if (hit == h.end()) {
        return make_fault(
            e->span, "invalid access to " + e->header + "." + e->field, h);
      }
      auto fit = hit->second.find(e->field);
      if (fit == hit->second.end()) {
        return make_fault(e->span,
                          "unknown field " + e->header + "." + e->field, h);
      }
      return Value{fit->second};
    }
    case ExprKind::kConstApp: {
      std::vector<Value> args;
      args.reserve(e->args.size());
      for (const ExprPtr& a : e->args) {
        auto r = eval_expression(p, h, a);
        if (std::holds_alternative<Fault>(r)) return r;
        args.push_back(std::get<Value>(std::move(r)));
      }
      const std::string& op = e->op;
      if (op == "==") return Value{value_equal(args[0], args[1])};
      if (op == "!=") return Value{!value_equal(args[0], args[1])};
      if (op == "&&") return Value{to_bool(args[0]) && to_bool(args[1])};
      if (op == "||") return Value{to_bool(args[0]) || to_bool(args[1])};
      if (op == "!") return Value{!to_bool(args[0])};
      if (op == "+" || op == "-") {
        BitVec lhs = to_bits(args[0]);
        BitVec rhs = resize_bits(to_bits(args[1]), lhs.width);
        return Value{op == "+" ? lhs.add(rhs) : lhs.sub(rhs)};
      }
      return make_fault(e->span, "unknown operator '" + op + "'", h);
    }
  }
  return make_fault(e->span, "malformed expression", h);
}

CmdPtr substitute_action(const ActionDef& a, const std::vector<Value>& args) {
  std::map<std::string, Value> env;
  for (size_t i = 0; i < a.params.size() && i < args.size(); ++i) {
    env[a.params[i].name] = args[i];
  }
  return substitute_cmd(a.body, env);
}

StepResult step(const Program& p, const TableState& st, Config cfg) {
  const CmdPtr c = cfg.command;
  StepResult out;
  out.span = c->span;
  switch (c->kind) {
    case CmdKind::kSkip:
      // Precondition violation; report a no-op rather than diverge.
      out.config = std::move(cfg);
      out.rule = "skip";
      return out;
    case CmdKind::kSeq: {
      if (c->c1->kind == CmdKind::kSkip) {
        cfg.command = c->c2;
        out.config = std::move(cfg);
        out.rule = "skip";
        out.span = c->c1->span;
        return out;
      }
      cfg.command = c->c1;
      StepResult inner = step(p, st, std::move(cfg));
      if (inner.fault) return inner;
      // Fuse the trailing Seq(Skip, c2) -> c2 reduction so traces carry one
      // entry per executed primitive.
      inner.config.command = inner.config.command->kind == CmdKind::kSkip
                                 ? c->c2
                                 : cmd_seq(inner.config.command, c->c2,
                                           c->span);
      return inner;
    }
    case CmdKind::kExtract: {
      const InstanceDecl* inst = p.find_instance(c->header);
      const HeaderTypeDecl* eta =
          inst ? p.find_header_type(inst->header_type) : nullptr;
      if (eta != nullptr) {
        auto [record, rest] = deserialize(*eta, std::move(cfg.input));
        cfg.headers[c->header] = std::move(record);
        cfg.input = std::move(rest);
      }
      cfg.command = cmd_skip(c->span);
      out.config = std::move(cfg);
      out.rule = "extract";
      return out;
    }
    case CmdKind::kEmit: {
      auto it = cfg.headers.find(c->header);
      if (it == cfg.headers.end()) {
        out.rule = "emit-invalid";  // emitting an invalid header is a no-op
      } else {
        const InstanceDecl* inst = p.find_instance(c->header);
        const HeaderTypeDecl* eta =
            inst ? p.find_header_type(inst->header_type) : nullptr;
        if (eta != nullptr) {
          std::vector<bool> bits = serialize(*eta, it->second);
          cfg.output.bits.insert(cfg.output.bits.end(), bits.begin(),
                                 bits.end());
        }
        out.rule = "emit";
      }
      cfg.command = cmd_skip(c->span);
      out.config = std::move(cfg);
      return out;
    }
    case CmdKind::kAdd: {
      if (cfg.headers.count(c->header)) {
        out.rule = "add-valid";  // adding a valid header is a no-op
      } else {
        const InstanceDecl* inst = p.find_instance(c->header);
        const HeaderTypeDecl* eta =
            inst ? p.find_header_type(inst->header_type) : nullptr;
        if (eta != nullptr) cfg.headers[c->header] = init_value(*eta);
        out.rule = "add";
      }
      cfg.command = cmd_skip(c->span);
      out.config = std::move(cfg);
      return out;
    }
    case CmdKind::kRemove:
      cfg.headers.erase(c->header);  // removing an invalid header succeeds
      cfg.command = cmd_skip(c->span);
      out.config = std::move(cfg);
      out.rule = "remove";
      return out;
    case CmdKind::kModify: {
      auto it = cfg.headers.find(c->header);
      if (it == cfg.headers.end()) {
        out.fault = make_fault(
            c->span, "invalid access to " + c->header + "." + c->field,
            cfg.headers);
        out.config = std::move(cfg);
        out.rule = "modify";
        return out;
      }
      auto value = eval_expression(p, cfg.headers, c->expr);
      if (std::holds_alternative<Fault>(value)) {
        out.fault = std::get<Fault>(std::move(value));
        out.config = std::move(cfg);
        out.rule = "modify";
        return out;
      }
      std::optional<BaseType> ft = p.field_type(c->header, c->field);
      int width = ft && ft->kind == BaseType::Kind::kBits ? ft->width : 1;
      it->second[c->field] =
          resize_bits(to_bits(std::get<Value>(value)), width);
      cfg.command = cmd_skip(c->span);
      out.config = std::move(cfg);
      out.rule = "modify";
      return out;
    }
    case CmdKind::kIf: {
      auto value = eval_expression(p, cfg.headers, c->expr);
      if (std::holds_alternative<Fault>(value)) {
        out.fault = std::get<Fault>(std::move(value));
        out.config = std::move(cfg);
        out.rule = "if";
        return out;
      }
      bool taken = to_bool(std::get<Value>(value));
      cfg.command = taken ? c->c1 : c->c2;
      out.config = std::move(cfg);
      out.rule = taken ? "if-true" : "if-false";
      return out;
    }
    case CmdKind::kIfValid: {
      bool valid = cfg.headers.count(c->header) > 0;
      cfg.command = valid ? c->c1 : c->c2;
      out.config = std::move(cfg);
      out.rule = valid ? "if-valid-true" : "if-valid-false";
      return out;
    }
    case CmdKind::kApply: {
      const TableDecl* t = p.find_table(c->table);
      if (t == nullptr) {
        cfg.command = cmd_skip(c->span);
        out.config = std::move(cfg);
        out.rule = "apply-miss";
        return out;
      }
      SelectResult sel = select_action(p, *t, cfg.headers, st);
      if (sel.fault) {
        out.fault = std::move(sel.fault);
        out.config = std::move(cfg);
        out.rule = "apply";
        return out;
      }
      if (sel.action.empty()) {
        cfg.command = cmd_skip(c->span);
        out.config = std::move(cfg);
        out.rule = "apply-miss";
        return out;
      }
      const ActionDef* a = t->find_action(sel.action);
      cfg.command = a != nullptr ? substitute_action(*a, sel.data)
                                 : cmd_skip(c->span);
      out.config = std::move(cfg);
      out.rule = sel.hit ? "apply" : "apply-default";
      return out;
    }
  }
  out.config = std::move(cfg);
  out.rule = "skip";
  return out;
}

Config initial_config(const Program& p, BitStream packet) {
  Config cfg;
  cfg.input = std::move(packet);
  cfg.headers = {};
  cfg.command = p.body;
  return cfg;
}

RunResult run(const Program& p, const BitStream& packet,
              const TableState& st) {
  RunResult result;
  Config cfg = initial_config(p, packet);
  while (cfg.command->kind != CmdKind::kSkip) {
    StepResult s = step(p, st, std::move(cfg));
    if (s.fault) {
      result.config = std::move(s.config);
      result.fault = std::move(s.fault);
      result.input_extended = result.config.input.extended;
      return result;
    }
    cfg = std::move(s.config);
    result.trace.push_back(
        TraceStep{std::move(s.rule), s.span, domain_set(cfg.headers)});
  }
  result.config = std::move(cfg);
  result.input_extended = result.config.input.extended;
  return result;
}

}  // namespace sp4
