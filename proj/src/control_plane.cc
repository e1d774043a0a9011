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

#include "sp4/control_plane.h"

#include <cctype>
#include <sstream>
#include <utility>

#include "sp4/interp.h"

namespace sp4 {

namespace {

bool mask_is_zero(const BitVec& m) {
  for (bool b : m.bits) {
    if (b) return false;
  }
  return true;
}

// The declared type of a read key, computed under a type where every
// instance is valid so no validity diagnostics fire.
std::vector<BaseType> key_types(const Program& p, const TableDecl& t) {
  std::vector<HeaderType> all;
  for (const InstanceDecl& inst : p.instances) {
    all.push_back(ht_instance(inst.name));
  }
  HeaderType everything = ht_concat_all(all);
  std::vector<BaseType> out;
  std::vector<Diagnostic> scratch;
  for (const ReadKey& key : t.reads) {
    out.push_back(check_expression(p, {}, everything, key.expr, &scratch));
  }
  return out;
}

// One comment-stripped line of the entries text.
class LineParser {
 public:
  LineParser(const std::string& text, std::string file, int line,
             std::vector<Diagnostic>* diags)
      : text_(text), line_(line), diags_(diags) {
    base_.file = std::move(file);
    base_.line = line;
  }

  bool failed() const { return failed_; }

  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  bool done() {
    skip_ws();
    return pos_ >= text_.size();
  }

  size_t pos() const { return pos_; }

  bool eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  bool peek_is(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  char raw_peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  void raw_advance() { ++pos_; }

  std::optional<std::string> ident() {
    skip_ws();
    size_t start = pos_;
    auto head = [](char c) {
      return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
    };
    auto tail = [](char c) {
      return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    };
    if (pos_ >= text_.size() || !head(text_[pos_])) return std::nullopt;
    ++pos_;
    while (pos_ < text_.size() && tail(text_[pos_])) ++pos_;
    return text_.substr(start, pos_ - start);
  }

  // Decimal or 0x hex, capped at 64 bits.
  std::optional<std::uint64_t> number() {
    skip_ws();
    size_t start = pos_;
    int radix = 10;
    if (pos_ + 1 < text_.size() && text_[pos_] == '0' &&
        (text_[pos_ + 1] == 'x' || text_[pos_ + 1] == 'X')) {
      radix = 16;
      pos_ += 2;
    }
    auto digit = [radix](char c) -> int {
      if (c >= '0' && c <= '9') return c - '0';
      if (radix == 16 && c >= 'a' && c <= 'f') return c - 'a' + 10;
      if (radix == 16 && c >= 'A' && c <= 'F') return c - 'A' + 10;
      return -1;
    };
    bool any = false;
    std::uint64_t v = 0;
    while (pos_ < text_.size() && digit(text_[pos_]) >= 0) {
      std::uint64_t d = static_cast<std::uint64_t>(digit(text_[pos_]));
      if (v > (UINT64_MAX - d) / radix) {
        error(start, "literal exceeds 64 bits");
        return std::nullopt;
      }
      v = v * radix + d;
      any = true;
      ++pos_;
    }
    if (!any) {
      pos_ = start;
      return std::nullopt;
    }
    return v;
  }

  SourceSpan span_from(size_t start) const {
    SourceSpan s = base_;
    s.col_begin = static_cast<int>(start) + 1;
    s.col_end = pos_ > start ? static_cast<int>(pos_)
                             : static_cast<int>(start) + 1;
    return s;
  }

  void error(size_t start, const std::string& msg) {
    failed_ = true;
    Diagnostic d;
    d.severity = Severity::kError;
    d.span = span_from(start);
    d.message = msg;
    diags_->push_back(d);
  }

  int line() const { return line_; }

 private:
  const std::string& text_;
  size_t pos_ = 0;
  int line_;
  SourceSpan base_;
  std::vector<Diagnostic>* diags_;
  bool failed_ = false;
};

struct RawLiteral {
  bool is_bool = false;
  bool bool_value = false;
  std::uint64_t number = 0;
  size_t start = 0;
};

// Parses `<action>(<lit>,...)`, then types the literals against the
// action's parameters.
std::optional<std::pair<std::string, std::vector<Value>>> parse_invocation(
    LineParser& lp, const TableDecl& t) {
  size_t astart = lp.pos();
  std::optional<std::string> aname = lp.ident();
  if (!aname) {
    lp.error(astart, "expected an action name");
    return std::nullopt;
  }
  const ActionDef* a = t.find_action(*aname);
  if (a == nullptr) {
    lp.error(astart, "unknown action " + *aname + " in table " + t.name);
    return std::nullopt;
  }
  if (!lp.eat('(')) {
    lp.error(lp.pos(), "expected '(' after action name");
    return std::nullopt;
  }
  std::vector<RawLiteral> raw;
  if (!lp.peek_is(')')) {
    while (true) {
      RawLiteral lit;
      lit.start = lp.pos();
      lp.skip_ws();
      lit.start = lp.pos();
      if (lp.peek_is('t') || lp.peek_is('f')) {
        std::optional<std::string> w = lp.ident();
        if (w == "true" || w == "false") {
          lit.is_bool = true;
          lit.bool_value = *w == "true";
        } else {
          lp.error(lit.start, "expected an argument literal");
          return std::nullopt;
        }
      } else {
        std::optional<std::uint64_t> n = lp.number();
        if (!n) {
          lp.error(lit.start, "expected an argument literal");
          return std::nullopt;
        }
        lit.number = *n;
      }
      raw.push_back(lit);
      if (!lp.eat(',')) break;
    }
  }
  if (!lp.eat(')')) {
    lp.error(lp.pos(), "expected ')'");
    return std::nullopt;
  }
  if (raw.size() != a->params.size()) {
    lp.error(astart, "action " + *aname + " takes " +
                         std::to_string(a->params.size()) +
                         " arguments, got " + std::to_string(raw.size()));
    return std::nullopt;
  }
  std::vector<Value> data;
  for (size_t i = 0; i < raw.size(); ++i) {
    const BaseType& pt = a->params[i].type;
    const RawLiteral& lit = raw[i];
    if (pt.kind == BaseType::Kind::kBool) {
      if (!lit.is_bool) {
        lp.error(lit.start, "argument " + std::to_string(i + 1) + " of " +
                                *aname + " must be true or false");
        return std::nullopt;
      }
      data.push_back(lit.bool_value);
    } else {
      if (lit.is_bool) {
        lp.error(lit.start, "argument " + std::to_string(i + 1) + " of " +
                                *aname + " must be a " + type_name(pt) +
                                " value");
        return std::nullopt;
      }
      if (!BitVec::fits(lit.number, pt.width)) {
        lp.error(lit.start, "argument " + std::to_string(i + 1) + " of " +
                                *aname + " does not fit in " + type_name(pt));
        return std::nullopt;
      }
      data.push_back(BitVec::from_uint64(lit.number, pt.width));
    }
  }
  return std::make_pair(*aname, std::move(data));
}

// One key pattern; `kt` is the read expression's declared type and `mk` its
// match kind. Exact keys admit plain values only: the data plane compares
// them unconditionally, so there is no way to install "don't care".
std::optional<KeyPattern> parse_pattern(LineParser& lp, const BaseType& kt,
                                        MatchKind mk, size_t index,
                                        const std::string& table) {
  std::string where = "key " + std::to_string(index + 1) + " of table " +
                      table + ": ";
  lp.skip_ws();
  size_t start = lp.pos();
  KeyPattern kp;
  if (lp.eat('*')) {
    if (mk == MatchKind::kExact) {
      lp.error(start, where + "exact keys cannot be wildcarded");
      return std::nullopt;
    }
    kp.kind = PatternKind::kWildcard;
    return kp;
  }
  if (kt.kind == BaseType::Kind::kBool) {
    std::optional<std::string> w = lp.ident();
    if (w != "true" && w != "false") {
      lp.error(start, where + "expected true, false or *");
      return std::nullopt;
    }
    if (mk == MatchKind::kTernary) {
      lp.error(start, where + "bool ternary keys admit only *");
      return std::nullopt;
    }
    kp.kind = PatternKind::kExact;
    kp.value = (*w == "true");
    return kp;
  }
  std::optional<std::uint64_t> v = lp.number();
  if (!v) {
    lp.error(start, where + "expected a value pattern");
    return std::nullopt;
  }
  if (!BitVec::fits(*v, kt.width)) {
    lp.error(start, where + "value does not fit in " + type_name(kt));
    return std::nullopt;
  }
  if (lp.eat('/')) {
    size_t mstart = lp.pos();
    std::optional<std::uint64_t> m = lp.number();
    if (!m) {
      lp.error(mstart, where + "expected a mask after '/'");
      return std::nullopt;
    }
    if (!BitVec::fits(*m, kt.width)) {
      lp.error(mstart, where + "mask does not fit in " + type_name(kt));
      return std::nullopt;
    }
    if (mk == MatchKind::kExact) {
      lp.error(start, where + "exact keys take a plain value");
      return std::nullopt;
    }
    kp.kind = PatternKind::kTernary;
    kp.value = BitVec::from_uint64(*v, kt.width);
    kp.mask = BitVec::from_uint64(*m, kt.width);
    return kp;
  }
  if (mk == MatchKind::kTernary) {
    lp.error(start, where + "ternary keys take value/mask or *");
    return std::nullopt;
  }
  kp.kind = PatternKind::kExact;
  kp.value = BitVec::from_uint64(*v, kt.width);
  return kp;
}

}  // namespace

const TableEntries* TableState::find(const std::string& table) const {
  auto it = tables.find(table);
  return it == tables.end() ? nullptr : &it->second;
}

LoadResult load_entries(const std::string& text, const Program& p,
                        const std::string& file_name) {
  LoadResult result;
  TableState state;
  state.file = file_name;
  std::map<std::string, std::vector<BaseType>> table_key_types;

  std::istringstream in(text);
  std::string raw_line;
  int line_no = 0;
  while (std::getline(in, raw_line)) {
    ++line_no;
    std::string line = raw_line.substr(0, raw_line.find('#'));
    LineParser lp(line, file_name, line_no, &result.diagnostics);
    if (lp.done()) continue;

    size_t start = lp.pos();
    std::optional<std::string> kw = lp.ident();
    if (kw != "table") {
      lp.error(start, "expected 'table'");
      continue;
    }
    size_t nstart = lp.pos();
    std::optional<std::string> tname = lp.ident();
    if (!tname) {
      lp.error(nstart, "expected a table name");
      continue;
    }
    const TableDecl* t = p.find_table(*tname);
    if (t == nullptr) {
      lp.error(nstart, "unknown table " + *tname);
      continue;
    }
    if (!lp.eat(':')) {
      lp.error(lp.pos(), "expected ':' after the table name");
      continue;
    }

    lp.skip_ws();
    size_t kwstart = lp.pos();
    if (lp.peek_is('d')) {
      std::optional<std::string> d = lp.ident();
      if (d == "default") {
        if (!lp.eat('-') || !lp.eat('>')) {
          lp.error(lp.pos(), "expected '->'");
          continue;
        }
        auto inv = parse_invocation(lp, *t);
        if (!inv) continue;
        if (!lp.done()) {
          lp.error(lp.pos(), "unexpected trailing input");
          continue;
        }
        TableEntries& te = state.tables[t->name];
        if (te.default_override) {
          lp.error(kwstart, "duplicate default override for table " + t->name);
          continue;
        }
        te.default_override =
            DefaultOverride{inv->first, std::move(inv->second), line_no};
        continue;
      }
      lp.error(kwstart, "expected 'default', 'valids=' or 'keys='");
      continue;
    }

    Entry entry;
    entry.line = line_no;

    if (!t->valids.empty()) {
      size_t vstart = lp.pos();
      std::optional<std::string> v = lp.ident();
      if (v != "valids" || !lp.eat('=')) {
        lp.error(vstart, "expected valids=<bits> for table " + t->name);
        continue;
      }
      lp.skip_ws();
      size_t bstart = lp.pos();
      while (lp.raw_peek() == '0' || lp.raw_peek() == '1') {
        entry.valid_bits.push_back(lp.raw_peek() == '1');
        lp.raw_advance();
      }
      if (entry.valid_bits.size() != t->valids.size()) {
        lp.error(bstart, "valids covers " + std::to_string(t->valids.size()) +
                             " instances, got " +
                             std::to_string(entry.valid_bits.size()));
        continue;
      }
    }

    if (!t->reads.empty()) {
      if (table_key_types.find(t->name) == table_key_types.end()) {
        table_key_types[t->name] = key_types(p, *t);
      }
      const std::vector<BaseType>& kts = table_key_types[t->name];
      size_t kstart = lp.pos();
      std::optional<std::string> k = lp.ident();
      if (k != "keys" || !lp.eat('=')) {
        lp.error(kstart, "expected keys=<pat,...> for table " + t->name);
        continue;
      }
      bool bad = false;
      for (size_t j = 0; j < t->reads.size(); ++j) {
        if (j > 0 && !lp.eat(',')) {
          lp.error(lp.pos(), "keys expects " +
                                 std::to_string(t->reads.size()) +
                                 " comma-separated patterns");
          bad = true;
          break;
        }
        auto kp = parse_pattern(lp, kts[j], t->reads[j].kind, j, t->name);
        if (!kp) {
          bad = true;
          break;
        }
        entry.keys.push_back(std::move(*kp));
      }
      if (bad) continue;
    }

    if (!lp.eat('-') || !lp.eat('>')) {
      lp.error(lp.pos(), "expected '->'");
      continue;
    }
    auto inv = parse_invocation(lp, *t);
    if (!inv) continue;
    entry.action = inv->first;
    entry.data = std::move(inv->second);
    if (!lp.done()) {
      lp.error(lp.pos(), "unexpected trailing input");
      continue;
    }
    state.tables[t->name].entries.push_back(std::move(entry));
  }

  if (count_errors(result.diagnostics) == 0) {
    result.state = std::move(state);
  }
  return result;
}

SelectResult select_action(const Program& p, const TableDecl& t,
                           const HeaderMap& h, const TableState& st) {
  SelectResult out;
  const TableEntries* te = st.find(t.name);
  if (te != nullptr) {
    for (const Entry& e : te->entries) {
      bool match = e.valid_bits.size() == t.valids.size() &&
                   e.keys.size() == t.reads.size();
      // The valid-bit screen runs before any key is evaluated; keys of a
      // non-matching validity shape are never touched.
      for (size_t i = 0; match && i < t.valids.size(); ++i) {
        bool have = h.count(t.valids[i]) > 0;
        if (e.valid_bits[i] != have) match = false;
      }
      for (size_t j = 0; match && j < t.reads.size(); ++j) {
        const KeyPattern& kp = e.keys[j];
        if (kp.kind == PatternKind::kWildcard) continue;
        if (kp.kind == PatternKind::kTernary && mask_is_zero(kp.mask)) {
          continue;
        }
        auto r = eval_expression(p, h, t.reads[j].expr);
        if (std::holds_alternative<Fault>(r)) {
          out.fault = std::get<Fault>(std::move(r));
          return out;
        }
        const Value& v = std::get<Value>(r);
        if (kp.kind == PatternKind::kExact) {
          if (!(v == kp.value)) match = false;
          continue;
        }
        if (!std::holds_alternative<BitVec>(v)) {
          match = false;
          continue;
        }
        const BitVec& got = std::get<BitVec>(v);
        const BitVec& want = std::get<BitVec>(kp.value);
        if (got.width != want.width || kp.mask.width != got.width) {
          match = false;
          continue;
        }
        for (int b = 0; b < got.width; ++b) {
          if (kp.mask.bits[b] && got.bits[b] != want.bits[b]) {
            match = false;
            break;
          }
        }
      }
      if (match) {
        out.action = e.action;
        out.data = e.data;
        out.hit = true;
        return out;
      }
    }
  }
  if (te != nullptr && te->default_override) {
    out.action = te->default_override->action;
    out.data = te->default_override->data;
    return out;
  }
  if (t.default_action) {
    out.action = t.default_action->action;
    out.data = t.default_action->data;
    return out;
  }
  return out;
}

TableAssumptions collect_assumptions(const Program& p, const CheckResult& r) {
  TableAssumptions out;
  for (const TableDecl& t : p.tables) {
    out[t.name] = table_assumptions(r, t);
  }
  return out;
}

namespace {

Diagnostic validation_error(const TableState& st, int line, std::string msg) {
  Diagnostic d;
  d.severity = Severity::kError;
  d.span = SourceSpan{st.file, line, 1, 1};
  d.message = std::move(msg);
  return d;
}

// Data typing shared by entries and default overrides.
void check_data(const TableState& st, int line, const std::string& where,
                const ActionDef& a, const std::vector<Value>& data,
                std::vector<Diagnostic>* out) {
  if (data.size() != a.params.size()) {
    out->push_back(validation_error(
        st, line, where + ": action " + a.name + " takes " +
                      std::to_string(a.params.size()) + " arguments, got " +
                      std::to_string(data.size())));
    return;
  }
  for (size_t i = 0; i < data.size(); ++i) {
    const BaseType& pt = a.params[i].type;
    bool ok;
    if (pt.kind == BaseType::Kind::kBool) {
      ok = std::holds_alternative<bool>(data[i]);
    } else {
      ok = std::holds_alternative<BitVec>(data[i]) &&
           std::get<BitVec>(data[i]).width == pt.width;
    }
    if (!ok) {
      out->push_back(validation_error(
          st, line, where + ": argument " + std::to_string(i + 1) + " of " +
                        a.name + " does not have type " + type_name(pt)));
    }
  }
}

}  // namespace

std::vector<Diagnostic> validate_well_behaved(const Program& p,
                                              const TableState& st,
                                              const TableAssumptions& assume) {
  std::vector<Diagnostic> out;
  for (const auto& [tname, te] : st.tables) {
    const TableDecl* t = p.find_table(tname);
    if (t == nullptr) {
      int line = te.entries.empty() ? 0 : te.entries.front().line;
      out.push_back(
          validation_error(st, line, "entries installed for unknown table " +
                                         tname));
      continue;
    }
    auto ait = assume.find(tname);
    const std::vector<std::set<std::string>>* as =
        ait == assume.end() ? nullptr : &ait->second;

    for (size_t k = 0; k < te.entries.size(); ++k) {
      const Entry& e = te.entries[k];
      std::string where = "entry " + std::to_string(k + 1) + " of table " +
                          tname;
      if (e.valid_bits.size() != t->valids.size() ||
          e.keys.size() != t->reads.size()) {
        out.push_back(validation_error(
            st, e.line, where + ": shape does not match the table"));
        continue;
      }

      // A non-skipped key is evaluated whenever the valid bits match, so
      // every instance it reads must be pinned valid by those bits.
      for (size_t j = 0; j < t->reads.size(); ++j) {
        const KeyPattern& kp = e.keys[j];
        if (kp.kind == PatternKind::kWildcard) continue;
        if (kp.kind == PatternKind::kTernary && mask_is_zero(kp.mask)) {
          continue;
        }
        for (const std::string& h : referenced_headers(t->reads[j].expr)) {
          bool pinned = false;
          for (size_t i = 0; i < t->valids.size(); ++i) {
            if (t->valids[i] == h && e.valid_bits[i]) pinned = true;
          }
          if (!pinned) {
            out.push_back(validation_error(
                st, e.line, where + ": key " + std::to_string(j + 1) +
                                " reads " + h +
                                " without matching it valid"));
          }
        }
      }

      const ActionDef* a = t->find_action(e.action);
      if (a == nullptr) {
        out.push_back(validation_error(
            st, e.line, where + ": unknown action " + e.action));
        continue;
      }
      check_data(st, e.line, where, *a, e.data, &out);

      if (as != nullptr) {
        for (size_t i = 0; i < t->actions.size(); ++i) {
          if (t->actions[i].name != e.action) continue;
          if (i >= as->size()) break;
          for (const std::string& h : (*as)[i]) {
            bool pinned = false;
            for (size_t v = 0; v < t->valids.size(); ++v) {
              if (t->valids[v] == h && e.valid_bits[v]) pinned = true;
            }
            if (!pinned) {
              out.push_back(validation_error(
                  st, e.line, where + ": action " + e.action + " requires " +
                                  h + " matched as valid"));
            }
          }
        }
      }
    }

    if (te.default_override) {
      const DefaultOverride& o = *te.default_override;
      std::string where = "default override of table " + tname;
      const ActionDef* a = t->find_action(o.action);
      if (a == nullptr) {
        out.push_back(validation_error(
            st, o.line, where + ": unknown action " + o.action));
        continue;
      }
      check_data(st, o.line, where, *a, o.data, &out);
      if (as != nullptr) {
        for (size_t i = 0; i < t->actions.size(); ++i) {
          if (t->actions[i].name != o.action || i >= as->size()) continue;
          for (const std::string& h : (*as)[i]) {
            out.push_back(validation_error(
                st, o.line, where + ": action " + o.action + " requires " + h +
                                " matched as valid, which a miss cannot " +
                                "guarantee"));
          }
        }
      }
    }
  }
  sort_diagnostics(out);
  return out;
}

}  // namespace sp4
