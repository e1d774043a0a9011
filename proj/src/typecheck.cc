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

#include "sp4/typecheck.h"

#include <algorithm>
#include <utility>
#include <variant>

namespace sp4 {

std::string type_name(const BaseType& t) {
  if (t.kind == BaseType::Kind::kBool) return "bool";
  return "bits<" + std::to_string(t.width) + ">";
}

namespace {

class Checker {
 public:
  Checker(const Program& prog, const CheckOptions& opts)
      : prog_(prog), opts_(opts), sink_(&diags_) {}

  CheckResult run_program() {
    return finish(cmd({}, ht_one(), prog_.body));
  }

  CheckResult run_command(const TypeEnv& env, const HeaderType& theta,
                          const CmdPtr& c) {
    return finish(cmd(env, normalize(theta), c));
  }

  CheckResult run_table_apply(const HeaderType& theta, const TableDecl& t) {
    return finish(apply_table(normalize(theta), t, t.span));
  }

  BaseType expr(const TypeEnv& env, const HeaderType& theta, const ExprPtr& e) {
    return check_expr(env, normalize(theta), e);
  }

  HeaderType action(const TypeEnv& env, const HeaderType& theta,
                    const ActionDef& a) {
    TypeEnv scope = env;
    for (const Param& p : a.params) scope[p.name] = p.type;
    PointsOff off(this);
    return cmd(scope, normalize(theta), a.body);
  }

  ActionAssumptions cv(const HeaderType& theta, const TableDecl& t) {
    return infer_cv(normalize(theta), t);
  }

  std::vector<Diagnostic> take_diags() { return std::move(diags_); }

 private:
  // Restores the diagnostic sink; trial checks collect into a local buffer.
  struct SinkSwap {
    Checker* c;
    std::vector<Diagnostic>* saved;
    SinkSwap(Checker* c, std::vector<Diagnostic>* sink)
        : c(c), saved(c->sink_) {
      c->sink_ = sink;
    }
    ~SinkSwap() { c->sink_ = saved; }
  };

  struct PointsOff {
    Checker* c;
    bool saved;
    explicit PointsOff(Checker* c) : c(c), saved(c->record_points_) {
      c->record_points_ = false;
    }
    ~PointsOff() { c->record_points_ = saved; }
  };

  // Scoped table/action attribution stamped onto emitted diagnostics.
  struct Attribution {
    Checker* c;
    Provenance prov;
    std::string table, action;
    Attribution(Checker* c, Provenance p, std::string t, std::string a)
        : c(c), prov(c->prov_), table(c->table_), action(c->action_) {
      c->prov_ = p;
      c->table_ = std::move(t);
      c->action_ = std::move(a);
    }
    ~Attribution() {
      c->prov_ = prov;
      c->table_ = table;
      c->action_ = action;
    }
  };

  void emit(Diagnostic d) {
    // A table applied at several sites would re-report identical lines;
    // collapse them so counts match what a reader sees.
    for (const Diagnostic& e : *sink_) {
      if (e.severity == d.severity && e.span == d.span &&
          e.message == d.message && e.table == d.table &&
          e.action == d.action) {
        return;
      }
    }
    sink_->push_back(std::move(d));
  }

  void report(Severity sev, const SourceSpan& span, std::string msg,
              std::string header) {
    Diagnostic d;
    d.severity = sev;
    d.span = span;
    d.message = std::move(msg);
    d.header = std::move(header);
    d.provenance = prov_;
    d.table = table_;
    d.action = action_;
    emit(std::move(d));
  }

  void error(const SourceSpan& span, std::string msg, std::string header = "") {
    report(Severity::kError, span, std::move(msg), std::move(header));
  }

  void warning(const SourceSpan& span, std::string msg,
               std::string header = "") {
    report(Severity::kWarning, span, std::move(msg), std::move(header));
  }

  void point(PointKind k, const SourceSpan& span, const HeaderType& ty) {
    if (record_points_) points_.push_back({k, span, ty});
  }

  CheckResult finish(HeaderType out) {
    CheckResult r;
    r.output = std::move(out);
    r.diagnostics = std::move(diags_);
    r.points = std::move(points_);
    r.applies = std::move(applies_);
    return r;
  }

  // theta is normalized on entry throughout.
  HeaderType cmd(const TypeEnv& env, const HeaderType& theta, const CmdPtr& c) {
    if (c->kind == CmdKind::kSeq) {
      HeaderType mid = cmd(env, theta, c->c1);
      return cmd(env, mid, c->c2);
    }
    point(PointKind::kBefore, c->span, theta);
    HeaderType out = statement(env, theta, c);
    point(PointKind::kAfter, c->span, out);
    return out;
  }

  HeaderType statement(const TypeEnv& env, const HeaderType& theta,
                       const CmdPtr& c) {
    // Unreachable code checks vacuously and stays unreachable.
    if (is_empty(theta)) return ht_zero();
    switch (c->kind) {
      case CmdKind::kSkip:
      case CmdKind::kEmit:
        return theta;
      case CmdKind::kExtract:
      case CmdKind::kAdd:
        return normalize(ht_concat(theta, ht_instance(c->header)));
      case CmdKind::kRemove:
        return normalize(remove(theta, c->header));
      case CmdKind::kModify: {
        if (!includes(theta, c->header)) {
          error(c->span, c->header + " not guaranteed to be valid", c->header);
        }
        BaseType rhs = check_expr(env, theta, c->expr);
        if (auto ft = prog_.field_type(c->header, c->field); ft && rhs != *ft) {
          error(c->expr->span, "type mismatch: cannot assign " +
                                   type_name(rhs) + " to " + c->header + "." +
                                   c->field + " (" + type_name(*ft) + ")");
        }
        return theta;
      }
      case CmdKind::kIf: {
        BaseType ct = check_expr(env, theta, c->expr);
        if (ct != BaseType::boolean()) {
          error(c->expr->span,
                "type mismatch: condition must be bool, got " + type_name(ct));
        }
        HeaderType t1 = cmd(env, theta, c->c1);
        HeaderType t2 = cmd(env, theta, c->c2);
        return normalize(ht_choice(t1, t2));
      }
      case CmdKind::kIfValid: {
        HeaderType t1 = cmd(env, normalize(restrict(theta, c->header)), c->c1);
        HeaderType t2 =
            cmd(env, normalize(neg_restrict(theta, c->header)), c->c2);
        return normalize(ht_choice(t1, t2));
      }
      case CmdKind::kApply: {
        const TableDecl* t = prog_.find_table(c->table);
        if (t == nullptr) {
          error(c->span, "unknown table " + c->table);
          return theta;
        }
        return apply_table(theta, *t, c->span);
      }
      case CmdKind::kSeq:
        break;  // handled by cmd()
    }
    return theta;
  }

  BaseType check_expr(const TypeEnv& env, const HeaderType& theta,
                      const ExprPtr& e) {
    switch (e->kind) {
      case ExprKind::kValue:
        if (std::holds_alternative<bool>(e->value)) return BaseType::boolean();
        return BaseType::bits(std::get<BitVec>(e->value).width);
      case ExprKind::kVar: {
        auto it = env.find(e->var);
        if (it == env.end()) {
          error(e->span, "unbound variable " + e->var);
          return BaseType::bits(1);
        }
        return it->second;
      }
      case ExprKind::kField: {
        if (!includes(theta, e->header)) {
          error(e->span, e->header + " not guaranteed to be valid", e->header);
        }
        auto ft = prog_.field_type(e->header, e->field);
        return ft ? *ft : BaseType::bits(1);
      }
      case ExprKind::kConstApp:
        break;
    }
    std::vector<BaseType> ts;
    ts.reserve(e->args.size());
    for (const ExprPtr& a : e->args) ts.push_back(check_expr(env, theta, a));
    const std::string& op = e->op;
    if (op == "!") {
      if (ts[0] != BaseType::boolean()) {
        error(e->span, "type mismatch: '!' applied to " + type_name(ts[0]));
      }
      return BaseType::boolean();
    }
    if (op == "&&" || op == "||") {
      if (ts[0] != BaseType::boolean() || ts[1] != BaseType::boolean()) {
        error(e->span, "type mismatch: '" + op + "' applied to " +
                           type_name(ts[0]) + " and " + type_name(ts[1]));
      }
      return BaseType::boolean();
    }
    if (op == "==" || op == "!=") {
      if (ts[0] != ts[1]) {
        error(e->span, "type mismatch: '" + op + "' compares " +
                           type_name(ts[0]) + " with " + type_name(ts[1]));
      }
      return BaseType::boolean();
    }
    if (op == "+" || op == "-") {
      bool widths_match = ts[0].kind == BaseType::Kind::kBits &&
                          ts[1].kind == BaseType::Kind::kBits &&
                          ts[0].width == ts[1].width;
      if (!widths_match) {
        error(e->span, "type mismatch: '" + op + "' applied to " +
                           type_name(ts[0]) + " and " + type_name(ts[1]));
      }
      if (ts[0].kind == BaseType::Kind::kBits) return ts[0];
      if (ts[1].kind == BaseType::Kind::kBits) return ts[1];
      return BaseType::bits(1);
    }
    error(e->span, "unknown operator '" + op + "'");
    return BaseType::bits(1);
  }

  ActionAssumptions infer_cv(const HeaderType& theta, const TableDecl& t) {
    ActionAssumptions res;
    res.assumed_valid.resize(t.actions.size());
    for (size_t i = 0; i < t.actions.size(); ++i) {
      const ActionDef& a = t.actions[i];
      std::set<std::string>& assumed = res.assumed_valid[i];
      std::vector<std::string> added;
      // Each round either settles or assumes one more instance from valids.
      for (size_t round = 0; round <= t.valids.size(); ++round) {
        std::vector<Diagnostic> trial;
        {
          SinkSwap swap(this, &trial);
          PointsOff off(this);
          TypeEnv scope;
          for (const Param& p : a.params) scope[p.name] = p.type;
          cmd(scope, normalize(restrict_all(theta, assumed)), a.body);
        }
        std::vector<std::string> newly;
        for (const Diagnostic& d : trial) {
          if (d.severity != Severity::kError || d.header.empty()) continue;
          if (std::find(t.valids.begin(), t.valids.end(), d.header) ==
              t.valids.end()) {
            continue;
          }
          if (assumed.count(d.header) != 0) continue;
          if (std::find(newly.begin(), newly.end(), d.header) == newly.end()) {
            newly.push_back(d.header);
          }
        }
        if (newly.empty()) break;
        for (const std::string& h : newly) {
          assumed.insert(h);
          added.push_back(h);
        }
      }
      for (const std::string& h : added) {
        Diagnostic w;
        w.severity = Severity::kWarning;
        w.span = a.span;
        w.message =
            "assuming " + h + " matched as valid for rules with action " +
            a.name;
        w.provenance = Provenance::kTableAction;
        w.header = h;
        w.table = t.name;
        w.action = a.name;
        res.warnings.push_back(std::move(w));
      }
    }
    return res;
  }

  HeaderType apply_table(const HeaderType& theta, const TableDecl& t,
                         const SourceSpan& site) {
    {
      Attribution attr(this, Provenance::kTableReads, t.name, "");
      for (const ReadKey& key : t.reads) {
        if (maskable(t, key.expr, key.kind)) {
          for (const std::string& h : referenced_headers(key.expr)) {
            warning(key.expr->span,
                    "assuming either " + h + " matched as valid or " +
                        pretty_print_expr(key.expr) + " wildcarded",
                    h);
          }
        } else {
          check_expr({}, theta, key.expr);
        }
      }
    }
    ActionAssumptions cv = infer_cv(theta, t);
    for (const Diagnostic& w : cv.warnings) emit(w);
    std::vector<HeaderType> terms;
    terms.reserve(t.actions.size());
    for (size_t i = 0; i < t.actions.size(); ++i) {
      const ActionDef& a = t.actions[i];
      Attribution attr(this, Provenance::kTableAction, t.name, a.name);
      TypeEnv scope;
      for (const Param& p : a.params) scope[p.name] = p.type;
      PointsOff off(this);
      terms.push_back(
          cmd(scope, normalize(restrict_all(theta, cv.assumed_valid[i])),
              a.body));
    }
    HeaderType sum = ht_choice_all(terms);
    bool defaulted = t.default_action.has_value() ||
                     opts_.assume_defaulted_tables ||
                     opts_.assume_defaulted.count(t.name) > 0;
    HeaderType out =
        defaulted ? normalize(sum) : normalize(ht_choice(theta, sum));
    ApplyInfo info;
    info.table = t.name;
    info.span = site;
    info.input = theta;
    info.output = out;
    info.assumed_valid = std::move(cv.assumed_valid);
    applies_.push_back(std::move(info));
    return out;
  }

  const Program& prog_;
  CheckOptions opts_;
  std::vector<Diagnostic> diags_;
  std::vector<PointType> points_;
  std::vector<ApplyInfo> applies_;
  std::vector<Diagnostic>* sink_;
  bool record_points_ = true;
  Provenance prov_ = Provenance::kNone;
  std::string table_;
  std::string action_;
};

}  // namespace

bool maskable(const TableDecl& t, const ExprPtr& e, MatchKind m) {
  if (m == MatchKind::kExact) return false;
  for (const std::string& h : referenced_headers(e)) {
    if (std::find(t.valids.begin(), t.valids.end(), h) == t.valids.end()) {
      return false;
    }
  }
  return true;
}

ActionAssumptions infer_control_validity(const Program& prog,
                                         const HeaderType& theta,
                                         const TableDecl& t) {
  Checker c(prog, CheckOptions{});
  return c.cv(theta, t);
}

BaseType check_expression(const Program& prog, const TypeEnv& env,
                          const HeaderType& theta, const ExprPtr& e,
                          std::vector<Diagnostic>* diags) {
  Checker c(prog, CheckOptions{});
  BaseType bt = c.expr(env, theta, e);
  std::vector<Diagnostic> ds = c.take_diags();
  diags->insert(diags->end(), ds.begin(), ds.end());
  return bt;
}

std::pair<std::vector<BaseType>, HeaderType> check_action(
    const Program& prog, const TypeEnv& env, const HeaderType& theta,
    const ActionDef& a, std::vector<Diagnostic>* diags) {
  Checker c(prog, CheckOptions{});
  HeaderType out = c.action(env, theta, a);
  std::vector<Diagnostic> ds = c.take_diags();
  diags->insert(diags->end(), ds.begin(), ds.end());
  std::vector<BaseType> sig;
  sig.reserve(a.params.size());
  for (const Param& p : a.params) sig.push_back(p.type);
  return {std::move(sig), std::move(out)};
}

CheckResult check_table_apply(const Program& prog, const HeaderType& theta,
                              const TableDecl& t, const CheckOptions& opts) {
  Checker c(prog, opts);
  return c.run_table_apply(theta, t);
}

CheckResult check_command(const Program& prog, const TypeEnv& env,
                          const HeaderType& theta, const CmdPtr& c,
                          const CheckOptions& opts) {
  Checker ck(prog, opts);
  return ck.run_command(env, theta, c);
}

CheckResult check_program(const Program& prog, const CheckOptions& opts) {
  Checker ck(prog, opts);
  return ck.run_program();
}

std::vector<std::set<std::string>> table_assumptions(const CheckResult& r,
                                                     const TableDecl& t) {
  std::vector<std::set<std::string>> out(t.actions.size());
  for (const ApplyInfo& ai : r.applies) {
    if (ai.table != t.name) continue;
    for (size_t i = 0; i < out.size() && i < ai.assumed_valid.size(); ++i) {
      out[i].insert(ai.assumed_valid[i].begin(), ai.assumed_valid[i].end());
    }
  }
  return out;
}

}  // namespace sp4
