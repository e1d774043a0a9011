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

#include "sp4/classify.h"

#include <algorithm>
#include <map>
#include <optional>

#include <json.hpp>

namespace sp4 {

namespace {

void flatten_spine(const CmdPtr& c, std::vector<CmdPtr>* out) {
  if (c->kind == CmdKind::kSeq) {
    flatten_spine(c->c1, out);
    flatten_spine(c->c2, out);
    return;
  }
  out->push_back(c);
}

bool contains_kind(const CmdPtr& c, CmdKind kind) {
  if (c == nullptr) return false;
  if (c->kind == kind) return true;
  return contains_kind(c->c1, kind) || contains_kind(c->c2, kind);
}

bool expr_has_span(const ExprPtr& e, const SourceSpan& s) {
  if (e == nullptr) return false;
  if (e->span == s) return true;
  for (const ExprPtr& a : e->args) {
    if (expr_has_span(a, s)) return true;
  }
  return false;
}

bool cmd_has_span(const CmdPtr& c, const SourceSpan& s) {
  if (c == nullptr) return false;
  if (c->span == s) return true;
  return expr_has_span(c->expr, s) || cmd_has_span(c->c1, s) ||
         cmd_has_span(c->c2, s);
}

bool has_apply_of(const CmdPtr& c, const std::string& table) {
  if (c == nullptr) return false;
  if (c->kind == CmdKind::kApply && c->table == table) return true;
  return has_apply_of(c->c1, table) || has_apply_of(c->c2, table);
}

bool same_diagnostic(const Diagnostic& a, const Diagnostic& b) {
  return a.severity == b.severity && a.span == b.span &&
         a.message == b.message;
}

bool still_present(const std::vector<Diagnostic>& ds, const Diagnostic& d) {
  return std::any_of(ds.begin(), ds.end(), [&](const Diagnostic& e) {
    return same_diagnostic(e, d);
  });
}

// True when typing every defaultless table as defaulted discharges d.
// Sound to read as "adding default actions fixes it": shrinking a table's
// output type only removes validity failures, never adds one.
bool defaults_discharge(const Program& p, const Diagnostic& d) {
  CheckOptions opts;
  opts.assume_defaulted_tables = true;
  return !still_present(check_program(p, opts).diagnostics, d);
}

// The single defaultless table whose defaulting alone discharges d; falls
// back to the first defaultless table when only a combination does.
std::string default_fix_table(const Program& p, const Diagnostic& d) {
  std::string first;
  for (const TableDecl& t : p.tables) {
    if (t.default_action) continue;
    if (first.empty()) first = t.name;
    CheckOptions opts;
    opts.assume_defaulted.insert(t.name);
    if (!still_present(check_program(p, opts).diagnostics, d)) return t.name;
  }
  return first;
}

// The top-level statement the diagnostic sits in; for table-borne
// diagnostics, the statement applying that table.
const Cmd* dominating_statement(const Program& p, const Diagnostic& d) {
  std::vector<CmdPtr> stmts = top_level_statements(p);
  if (!d.table.empty()) {
    for (const CmdPtr& s : stmts) {
      if (has_apply_of(s, d.table)) return s.get();
    }
  }
  for (const CmdPtr& s : stmts) {
    if (cmd_has_span(s, d.span)) return s.get();
  }
  return nullptr;
}

}  // namespace

std::vector<CmdPtr> top_level_statements(const Program& p) {
  std::vector<CmdPtr> out;
  flatten_spine(p.body, &out);
  return out;
}

std::vector<CmdPtr> parser_region(const Program& p) {
  std::vector<CmdPtr> stmts = top_level_statements(p);
  size_t end = 0;
  for (size_t i = 0; i < stmts.size(); ++i) {
    if (contains_kind(stmts[i], CmdKind::kApply)) break;
    if (contains_kind(stmts[i], CmdKind::kExtract)) end = i + 1;
  }
  stmts.resize(end);
  return stmts;
}

HeaderType parser_exit_type(const Program& p, const CheckResult& r) {
  std::vector<CmdPtr> region = parser_region(p);
  if (region.empty()) return ht_one();
  const SourceSpan& last = region.back()->span;
  const PointType* found = nullptr;
  for (const PointType& pt : r.points) {
    if (pt.kind == PointKind::kAfter && pt.span == last) found = &pt;
  }
  return found != nullptr ? found->type : ht_one();
}

BugCategory classify(const Program& p, const CheckResult& r,
                     const Diagnostic& d) {
  if (d.severity != Severity::kError || d.header.empty()) {
    return BugCategory::kUnclassified;
  }
  if (d.provenance == Provenance::kTableReads) {
    const TableDecl* t = p.find_table(d.table);
    bool listed = t != nullptr &&
                  std::find(t->valids.begin(), t->valids.end(), d.header) !=
                      t->valids.end();
    // Listed: the table meant to handle the instance's validity and the
    // key just cannot be masked. Unlisted: the apply site is unguarded.
    return listed ? BugCategory::kTableReadsBug : BugCategory::kControlBug;
  }
  if (d.provenance == Provenance::kTableAction ||
      d.provenance == Provenance::kTableDefault) {
    return BugCategory::kTableActionBug;
  }
  if (defaults_discharge(p, d)) return BugCategory::kDefaultActionBug;
  if (!is_empty(restrict(parser_exit_type(p, r), d.header))) {
    return BugCategory::kParserBug;
  }
  return BugCategory::kControlBug;
}

std::vector<Diagnostic> classify_diagnostics(const Program& p,
                                             const CheckResult& r) {
  std::vector<Diagnostic> out = r.diagnostics;
  for (Diagnostic& d : out) {
    if (d.severity == Severity::kError) d.category = classify(p, r, d);
  }
  return out;
}

std::vector<BugRecord> fold_root_causes(const Program& p,
                                        const CheckResult& r) {
  std::vector<Diagnostic> errors;
  for (const Diagnostic& d : r.diagnostics) {
    if (d.severity == Severity::kError) errors.push_back(d);
  }
  sort_diagnostics(errors);

  std::vector<BugRecord> records;
  std::map<std::string, size_t> index;
  for (const Diagnostic& d : errors) {
    BugCategory cat = classify(p, r, d);
    std::string site;
    switch (cat) {
      case BugCategory::kParserBug:
        site = "parser(" + d.header + ")";
        break;
      case BugCategory::kControlBug: {
        const Cmd* stmt = dominating_statement(p, d);
        int line = stmt != nullptr ? stmt->span.line : d.span.line;
        site = "guard(" + d.header + ", line " + std::to_string(line) + ")";
        break;
      }
      case BugCategory::kTableReadsBug:
        site = "reads(" + d.table + ")";
        break;
      case BugCategory::kTableActionBug:
        site = "action(" + d.table + "." + d.action + ")";
        break;
      case BugCategory::kDefaultActionBug:
        site = "default(" + default_fix_table(p, d) + ")";
        break;
      case BugCategory::kUnclassified:
        site = "diagnostic(" + std::to_string(d.span.line) + ":" +
               std::to_string(d.span.col_begin) + ")";
        break;
    }
    auto it = index.find(site);
    if (it == index.end()) {
      index[site] = records.size();
      BugRecord rec;
      rec.category = cat;
      rec.fix_site = site;
      records.push_back(std::move(rec));
      it = index.find(site);
    }
    Diagnostic classified = d;
    classified.category = cat;
    records[it->second].symptoms.push_back(std::move(classified));
  }
  return records;
}

std::string render_structured(const std::vector<Diagnostic>& ds) {
  nlohmann::json arr = nlohmann::json::array();
  for (const Diagnostic& d : ds) {
    nlohmann::json rec;
    rec["severity"] = to_string(d.severity);
    if (d.category) rec["category"] = to_string(*d.category);
    rec["file"] = d.span.file;
    rec["line"] = d.span.line;
    rec["col_begin"] = d.span.col_begin;
    rec["col_end"] = d.span.col_end;
    rec["message"] = d.message;
    if (!d.header.empty()) rec["header"] = d.header;
    if (!d.table.empty()) rec["table"] = d.table;
    if (!d.action.empty()) rec["action"] = d.action;
    arr.push_back(std::move(rec));
  }
  return arr.dump(2);
}

}  // namespace sp4
