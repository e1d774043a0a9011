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
// Recursive-descent parser for the concrete syntax, followed by a resolution
// pass that enforces the declaration invariants. Syntax errors stop the
// parse; resolution collects every violation before giving up.

#include "sp4/parser.h"

#include <cctype>
#include <cstdint>
#include <map>
#include <set>
#include <utility>

namespace sp4 {

namespace {

Diagnostic make_error(SourceSpan span, std::string msg) {
  Diagnostic d;
  d.severity = Severity::kError;
  d.span = std::move(span);
  d.message = std::move(msg);
  return d;
}

}  // namespace

namespace {

enum class Tok {
  kIdent,
  kInt,
  kLBrace,
  kRBrace,
  kLParen,
  kRParen,
  kColon,
  kComma,
  kSemi,
  kDot,
  kPlus,
  kMinus,
  kBang,
  kAssign,
  kEq,
  kNe,
  kAndAnd,
  kOrOr,
  kEof,
};

struct Token {
  Tok type = Tok::kEof;
  std::string text;
  std::uint64_t int_value = 0;
  SourceSpan span;
};

const std::set<std::string>& keywords() {
  static const std::set<std::string> kKeywords = {
      "header", "instance", "table",   "control", "valids",
      "reads",  "actions",  "default_action",     "if",
      "else",   "valid",    "extract", "emit",    "add",
      "remove", "apply",    "skip",    "true",    "false",
      "exact",  "ternary",  "bool"};
  return kKeywords;
}

class Lexer {
 public:
  Lexer(const std::string& text, std::string file)
      : text_(text), file_(std::move(file)) {}

  // Returns tokens or a single diagnostic on a lexical error.
  bool run(std::vector<Token>* out, Diagnostic* error) {
    while (true) {
      skip_trivia();
      if (pos_ >= text_.size()) break;
      Token t;
      if (!lex_one(&t, error)) return false;
      out->push_back(std::move(t));
    }
    Token eof;
    eof.type = Tok::kEof;
    eof.span = {file_, line_, col_, col_};
    out->push_back(std::move(eof));
    return true;
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_trivia() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '/' && pos_ + 1 < text_.size() &&
                 text_[pos_ + 1] == '/') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  bool lex_one(Token* t, Diagnostic* error) {
    char c = text_[pos_];
    int start_col = col_;
    int start_line = line_;
    auto finish = [&](Tok type, const std::string& text) {
      t->type = type;
      t->text = text;
      t->span = {file_, start_line, start_col, col_ - 1};
    };
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string word;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
              text_[pos_] == '_')) {
        word += text_[pos_];
        advance();
      }
      finish(Tok::kIdent, word);
      return true;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string digits;
      bool hex = false;
      if (c == '0' && pos_ + 1 < text_.size() &&
          (text_[pos_ + 1] == 'x' || text_[pos_ + 1] == 'X')) {
        hex = true;
        advance();
        advance();
        while (pos_ < text_.size() &&
               std::isxdigit(static_cast<unsigned char>(text_[pos_]))) {
          digits += text_[pos_];
          advance();
        }
        if (digits.empty()) {
          *error = make_error({file_, start_line, start_col, col_ - 1},
                              "syntax error: malformed hex literal");
          return false;
        }
      } else {
        while (pos_ < text_.size() &&
               std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
          digits += text_[pos_];
          advance();
        }
      }
      std::uint64_t value = 0;
      for (char d : digits) {
        int digit = hex ? (std::isdigit(static_cast<unsigned char>(d))
                               ? d - '0'
                               : std::tolower(d) - 'a' + 10)
                        : d - '0';
        std::uint64_t next = hex ? value * 16 + digit : value * 10 + digit;
        if (next < value) {
          *error = make_error({file_, start_line, start_col, col_ - 1},
                              "syntax error: integer literal too large");
          return false;
        }
        value = next;
      }
      finish(Tok::kInt, digits);
      t->int_value = value;
      return true;
    }
    auto two = [&](char a, char b) {
      return c == a && pos_ + 1 < text_.size() && text_[pos_ + 1] == b;
    };
    if (two('=', '=')) {
      advance();
      advance();
      finish(Tok::kEq, "==");
      return true;
    }
    if (two('!', '=')) {
      advance();
      advance();
      finish(Tok::kNe, "!=");
      return true;
    }
    if (two('&', '&')) {
      advance();
      advance();
      finish(Tok::kAndAnd, "&&");
      return true;
    }
    if (two('|', '|')) {
      advance();
      advance();
      finish(Tok::kOrOr, "||");
      return true;
    }
    Tok single;
    switch (c) {
      case '{': single = Tok::kLBrace; break;
      case '}': single = Tok::kRBrace; break;
      case '(': single = Tok::kLParen; break;
      case ')': single = Tok::kRParen; break;
      case ':': single = Tok::kColon; break;
      case ',': single = Tok::kComma; break;
      case ';': single = Tok::kSemi; break;
      case '.': single = Tok::kDot; break;
      case '+': single = Tok::kPlus; break;
      case '-': single = Tok::kMinus; break;
      case '!': single = Tok::kBang; break;
      case '=': single = Tok::kAssign; break;
      default:
        *error = make_error(
          {file_, start_line, start_col, start_col},
          std::string("syntax error: unexpected character '") + c + "'");
        return false;
    }
    advance();
    finish(single, std::string(1, c));
    return true;
  }

  const std::string& text_;
  std::string file_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

// Thrown on the first syntax error; the diagnostic is already recorded.
struct SyntaxError {};

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::string file,
         std::vector<Diagnostic>* diags)
      : tokens_(std::move(tokens)), file_(std::move(file)), diags_(diags) {}

  std::optional<Program> run() {
    try {
      Program p;
      p.file = file_;
      while (!at(Tok::kEof) && !(at_keyword("control"))) {
        parse_declaration(&p);
      }
      expect_keyword("control");
      expect(Tok::kLBrace, "'{'");
      p.body = parse_statements(/*action_body=*/false);
      expect(Tok::kRBrace, "'}'");
      expect(Tok::kEof, "end of input");
      return p;
    } catch (const SyntaxError&) {
      return std::nullopt;
    }
  }

 private:
  const Token& peek(int ahead = 0) const {
    std::size_t i = pos_ + ahead;
    return i < tokens_.size() ? tokens_[i] : tokens_.back();
  }

  bool at(Tok t) const { return peek().type == t; }

  bool at_keyword(const std::string& kw) const {
    return peek().type == Tok::kIdent && peek().text == kw;
  }

  Token consume() { return tokens_[pos_++]; }

  [[noreturn]] void fail(const SourceSpan& span, const std::string& msg) {
    diags_->push_back(make_error(span, msg));
    throw SyntaxError{};
  }

  Token expect(Tok t, const std::string& what) {
    if (!at(t)) {
      fail(peek().span, "syntax error: expected " + what);
    }
    return consume();
  }

  Token expect_keyword(const std::string& kw) {
    if (!at_keyword(kw)) {
      fail(peek().span, "syntax error: expected '" + kw + "'");
    }
    return consume();
  }

  // A declared or referenced name; keywords are reserved.
  Token expect_name(const std::string& what) {
    Token t = expect(Tok::kIdent, what);
    if (keywords().count(t.text)) {
      fail(t.span, "syntax error: keyword '" + t.text + "' used as " + what);
    }
    return t;
  }

  void eat_separators() {
    while (at(Tok::kComma) || at(Tok::kSemi)) consume();
  }

  SourceSpan merge(const SourceSpan& a, const SourceSpan& b) const {
    if (a.line == b.line) return {a.file, a.line, a.col_begin, b.col_end};
    return a;
  }

  void parse_declaration(Program* p) {
    if (at_keyword("header")) {
      parse_header_decl(p);
    } else if (at_keyword("instance")) {
      parse_instance_decl(p);
    } else if (at_keyword("table")) {
      parse_table_decl(p);
    } else {
      fail(peek().span, "syntax error: expected a declaration or 'control'");
    }
  }

  void parse_header_decl(Program* p) {
    Token kw = expect_keyword("header");
    Token name = expect_name("header type name");
    expect(Tok::kLBrace, "'{'");
    HeaderTypeDecl decl;
    decl.name = name.text;
    decl.span = merge(kw.span, name.span);
    while (!at(Tok::kRBrace)) {
      Token fname = expect_name("field name");
      expect(Tok::kColon, "':'");
      Token width = expect(Tok::kInt, "field width");
      if (width.int_value == 0 || width.int_value > 1u << 20) {
        fail(width.span, "field width must be a positive integer");
      }
      FieldDecl f;
      f.name = fname.text;
      f.width = static_cast<int>(width.int_value);
      f.span = merge(fname.span, width.span);
      decl.fields.push_back(std::move(f));
      eat_separators();
    }
    expect(Tok::kRBrace, "'}'");
    p->header_types.push_back(std::move(decl));
  }

  void parse_instance_decl(Program* p) {
    Token kw = expect_keyword("instance");
    Token name = expect_name("instance name");
    expect(Tok::kColon, "':'");
    Token type = expect_name("header type name");
    InstanceDecl decl;
    decl.name = name.text;
    decl.header_type = type.text;
    decl.span = merge(kw.span, type.span);
    p->instances.push_back(std::move(decl));
  }

  void parse_table_decl(Program* p) {
    Token kw = expect_keyword("table");
    Token name = expect_name("table name");
    TableDecl decl;
    decl.name = name.text;
    decl.span = merge(kw.span, name.span);
    expect(Tok::kLBrace, "'{'");
    bool saw_valids = false, saw_reads = false, saw_actions = false;
    while (!at(Tok::kRBrace)) {
      if (at_keyword("valids")) {
        if (saw_valids) fail(peek().span, "duplicate valids block");
        saw_valids = true;
        consume();
        expect(Tok::kLBrace, "'{'");
        while (!at(Tok::kRBrace)) {
          decl.valids.push_back(expect_name("instance name").text);
          eat_separators();
        }
        consume();
      } else if (at_keyword("reads")) {
        if (saw_reads) fail(peek().span, "duplicate reads block");
        saw_reads = true;
        consume();
        expect(Tok::kLBrace, "'{'");
        while (!at(Tok::kRBrace)) {
          ReadKey key;
          key.expr = parse_expr();
          expect(Tok::kColon, "':'");
          if (at_keyword("exact")) {
            key.kind = MatchKind::kExact;
          } else if (at_keyword("ternary")) {
            key.kind = MatchKind::kTernary;
          } else {
            fail(peek().span, "syntax error: expected 'exact' or 'ternary'");
          }
          consume();
          key.span = key.expr->span;
          decl.reads.push_back(std::move(key));
          eat_separators();
        }
        consume();
      } else if (at_keyword("actions")) {
        if (saw_actions) fail(peek().span, "duplicate actions block");
        saw_actions = true;
        consume();
        expect(Tok::kLBrace, "'{'");
        while (!at(Tok::kRBrace)) {
          decl.actions.push_back(parse_action_def());
        }
        consume();
      } else if (at_keyword("default_action")) {
        if (decl.default_action) {
          fail(peek().span, "duplicate default_action");
        }
        Token da = consume();
        expect(Tok::kAssign, "'='");
        Token action = expect_name("action name");
        expect(Tok::kLParen, "'('");
        DefaultAction def;
        def.action = action.text;
        def.span = merge(da.span, action.span);
        while (!at(Tok::kRParen)) {
          def.data.push_back(parse_literal());
          eat_separators();
        }
        consume();
        decl.default_action = std::move(def);
      } else {
        fail(peek().span,
             "syntax error: expected valids, reads, actions or "
             "default_action");
      }
    }
    expect(Tok::kRBrace, "'}'");
    p->tables.push_back(std::move(decl));
  }

  ActionDef parse_action_def() {
    Token name = expect_name("action name");
    ActionDef def;
    def.name = name.text;
    def.span = name.span;
    expect(Tok::kLParen, "'('");
    while (!at(Tok::kRParen)) {
      Token pname = expect_name("parameter name");
      expect(Tok::kColon, "':'");
      Param param;
      param.name = pname.text;
      if (at_keyword("bool")) {
        consume();
        param.type = BaseType::boolean();
      } else {
        Token width = expect(Tok::kInt, "parameter width");
        if (width.int_value == 0 || width.int_value > 1u << 20) {
          fail(width.span, "parameter width must be a positive integer");
        }
        param.type = BaseType::bits(static_cast<int>(width.int_value));
      }
      param.span = pname.span;
      def.params.push_back(std::move(param));
      eat_separators();
    }
    consume();
    expect(Tok::kLBrace, "'{'");
    def.body = parse_statements(/*action_body=*/true);
    expect(Tok::kRBrace, "'}'");
    return def;
  }

  Value parse_literal() {
    if (at_keyword("true") || at_keyword("false")) {
      return Value{consume().text == "true"};
    }
    Token value = expect(Tok::kInt, "literal");
    expect(Tok::kColon, "':'");
    Token width = expect(Tok::kInt, "literal width");
    if (width.int_value == 0 || width.int_value > 1u << 20) {
      fail(width.span, "literal width must be a positive integer");
    }
    int w = static_cast<int>(width.int_value);
    if (!BitVec::fits(value.int_value, w)) {
      fail(merge(value.span, width.span),
           "literal value exceeds width " + std::to_string(w));
    }
    return Value{BitVec::from_uint64(value.int_value, w)};
  }

  CmdPtr parse_statements(bool action_body) {
    std::vector<CmdPtr> stmts;
    SourceSpan start = peek().span;
    while (!at(Tok::kRBrace) && !at(Tok::kEof)) {
      stmts.push_back(parse_statement(action_body));
      eat_separators();
    }
    return cmd_seq_all(stmts, start);
  }

  CmdPtr parse_header_arg_cmd(const std::string& kw,
                              CmdPtr (*make)(std::string, SourceSpan)) {
    Token head = expect_keyword(kw);
    expect(Tok::kLParen, "'('");
    Token name = expect_name("instance name");
    Token close = expect(Tok::kRParen, "')'");
    return make(name.text, merge(head.span, close.span));
  }

  CmdPtr parse_statement(bool action_body) {
    if (at_keyword("extract") || at_keyword("emit") || at_keyword("apply")) {
      if (action_body) {
        fail(peek().span, "syntax error: '" + peek().text +
                              "' is not allowed in an action body");
      }
    }
    if (at_keyword("extract")) return parse_header_arg_cmd("extract", cmd_extract);
    if (at_keyword("emit")) return parse_header_arg_cmd("emit", cmd_emit);
    if (at_keyword("add")) return parse_header_arg_cmd("add", cmd_add);
    if (at_keyword("remove")) return parse_header_arg_cmd("remove", cmd_remove);
    if (at_keyword("apply")) {
      Token head = expect_keyword("apply");
      expect(Tok::kLParen, "'('");
      Token name = expect_name("table name");
      Token close = expect(Tok::kRParen, "')'");
      return cmd_apply(name.text, merge(head.span, close.span));
    }
    if (at_keyword("skip")) {
      Token head = consume();
      return cmd_skip(head.span);
    }
    if (at_keyword("if")) {
      if (action_body) {
        fail(peek().span, "syntax error: 'if' is not allowed in an action "
                          "body");
      }
      return parse_if();
    }
    if (at(Tok::kIdent) && !keywords().count(peek().text)) {
      // Modify: h.f = e
      Token h = expect_name("instance name");
      expect(Tok::kDot, "'.'");
      Token f = expect_name("field name");
      SourceSpan target = merge(h.span, f.span);
      expect(Tok::kAssign, "'='");
      ExprPtr rhs = parse_expr();
      return cmd_modify(h.text, f.text, rhs, target);
    }
    fail(peek().span, "syntax error: expected a statement");
  }

  CmdPtr parse_if() {
    Token head = expect_keyword("if");
    expect(Tok::kLParen, "'('");
    if (at_keyword("valid") && peek(1).type == Tok::kLParen) {
      consume();
      consume();
      Token name = expect_name("instance name");
      expect(Tok::kRParen, "')'");
      Token close = expect(Tok::kRParen, "')'");
      SourceSpan span = merge(head.span, close.span);
      auto [then_c, else_c] = parse_branches(span);
      return cmd_if_valid(name.text, then_c, else_c, span);
    }
    ExprPtr cond = parse_expr();
    Token close = expect(Tok::kRParen, "')'");
    SourceSpan span = merge(head.span, close.span);
    auto [then_c, else_c] = parse_branches(span);
    return cmd_if(cond, then_c, else_c, span);
  }

  std::pair<CmdPtr, CmdPtr> parse_branches(const SourceSpan& head_span) {
    expect(Tok::kLBrace, "'{'");
    CmdPtr then_c = parse_statements(/*action_body=*/false);
    expect(Tok::kRBrace, "'}'");
    CmdPtr else_c;
    if (at_keyword("else")) {
      consume();
      expect(Tok::kLBrace, "'{'");
      else_c = parse_statements(/*action_body=*/false);
      expect(Tok::kRBrace, "'}'");
    } else {
      else_c = cmd_skip(head_span);
    }
    return {then_c, else_c};
  }

  ExprPtr parse_expr() { return parse_or(); }

  ExprPtr parse_or() {
    ExprPtr l = parse_and();
    while (at(Tok::kOrOr)) {
      consume();
      ExprPtr r = parse_and();
      SourceSpan span = merge(l->span, r->span);
      l = expr_const_app("||", {l, r}, span);
    }
    return l;
  }

  ExprPtr parse_and() {
    ExprPtr l = parse_equality();
    while (at(Tok::kAndAnd)) {
      consume();
      ExprPtr r = parse_equality();
      SourceSpan span = merge(l->span, r->span);
      l = expr_const_app("&&", {l, r}, span);
    }
    return l;
  }

  ExprPtr parse_equality() {
    ExprPtr l = parse_additive();
    while (at(Tok::kEq) || at(Tok::kNe)) {
      std::string op = consume().text;
      ExprPtr r = parse_additive();
      SourceSpan span = merge(l->span, r->span);
      l = expr_const_app(op, {l, r}, span);
    }
    return l;
  }

  ExprPtr parse_additive() {
    ExprPtr l = parse_unary();
    while (at(Tok::kPlus) || at(Tok::kMinus)) {
      std::string op = consume().text;
      ExprPtr r = parse_unary();
      SourceSpan span = merge(l->span, r->span);
      l = expr_const_app(op, {l, r}, span);
    }
    return l;
  }

  ExprPtr parse_unary() {
    if (at(Tok::kBang)) {
      Token bang = consume();
      ExprPtr arg = parse_unary();
      return expr_const_app("!", {arg}, merge(bang.span, arg->span));
    }
    return parse_primary();
  }

  ExprPtr parse_primary() {
    if (at_keyword("true") || at_keyword("false")) {
      Token t = consume();
      return expr_value(Value{t.text == "true"}, t.span);
    }
    if (at(Tok::kInt)) {
      Token value = consume();
      expect(Tok::kColon, "':' (bit-vector literals are value:width)");
      Token width = expect(Tok::kInt, "literal width");
      if (width.int_value == 0 || width.int_value > 1u << 20) {
        fail(width.span, "literal width must be a positive integer");
      }
      int w = static_cast<int>(width.int_value);
      if (!BitVec::fits(value.int_value, w)) {
        fail(merge(value.span, width.span),
             "literal value exceeds width " + std::to_string(w));
      }
      return expr_value(Value{BitVec::from_uint64(value.int_value, w)},
                        merge(value.span, width.span));
    }
    if (at(Tok::kLParen)) {
      consume();
      ExprPtr inner = parse_expr();
      expect(Tok::kRParen, "')'");
      return inner;
    }
    if (at(Tok::kIdent) && !keywords().count(peek().text)) {
      Token name = consume();
      if (at(Tok::kDot)) {
        consume();
        Token field = expect_name("field name");
        return expr_field(name.text, field.text, merge(name.span, field.span));
      }
      return expr_var(name.text, name.span);
    }
    fail(peek().span, "syntax error: expected an expression");
  }

  std::vector<Token> tokens_;
  std::string file_;
  std::vector<Diagnostic>* diags_;
  std::size_t pos_ = 0;
};

// Collects every declaration/reference violation in one pass.
class Resolver {
 public:
  Resolver(const Program& p, std::vector<Diagnostic>* diags)
      : p_(p), diags_(diags) {}

  void run() {
    check_unique_names();
    for (const InstanceDecl& inst : p_.instances) {
      if (!p_.find_header_type(inst.header_type)) {
        error(inst.span, "unknown header type " + inst.header_type);
      }
    }
    if (static_cast<int>(p_.instances.size()) > kMaxInstances) {
      error(p_.instances.back().span,
            "too many header instances (limit " +
                std::to_string(kMaxInstances) + ")");
    }
    for (const TableDecl& t : p_.tables) check_table(t);
    check_command(p_.body, /*params=*/nullptr);
  }

 private:
  void error(const SourceSpan& span, const std::string& msg) {
    diags_->push_back(make_error(span, msg));
  }

  void check_unique_names() {
    std::map<std::string, const char*> seen;
    auto declare = [&](const std::string& name, const SourceSpan& span,
                       const char* kind) {
      auto [it, inserted] = seen.emplace(name, kind);
      if (!inserted) error(span, "duplicate declaration " + name);
    };
    for (const HeaderTypeDecl& d : p_.header_types) {
      declare(d.name, d.span, "header type");
      std::set<std::string> fields;
      for (const FieldDecl& f : d.fields) {
        if (!fields.insert(f.name).second) {
          error(f.span, "duplicate field " + f.name + " in " + d.name);
        }
      }
    }
    for (const InstanceDecl& d : p_.instances) declare(d.name, d.span, "instance");
    for (const TableDecl& t : p_.tables) {
      declare(t.name, t.span, "table");
      for (const ActionDef& a : t.actions) declare(a.name, a.span, "action");
    }
  }

  void check_instance_ref(const std::string& name, const SourceSpan& span) {
    if (!p_.find_instance(name)) error(span, "unknown instance " + name);
  }

  void check_expr(const ExprPtr& e, const std::vector<Param>* params) {
    switch (e->kind) {
      case ExprKind::kValue:
        return;
      case ExprKind::kField: {
        const InstanceDecl* inst = p_.find_instance(e->header);
        if (!inst) {
          error(e->span, "unknown instance " + e->header);
          return;
        }
        if (!p_.field_type(e->header, e->field)) {
          error(e->span, "unknown field " + e->field + " on " +
                             inst->header_type);
        }
        return;
      }
      case ExprKind::kVar: {
        if (params) {
          for (const Param& param : *params) {
            if (param.name == e->var) return;
          }
        }
        error(e->span, "unknown name " + e->var);
        return;
      }
      case ExprKind::kConstApp:
        for (const ExprPtr& a : e->args) check_expr(a, params);
        return;
    }
  }

  void check_command(const CmdPtr& c, const std::vector<Param>* params) {
    switch (c->kind) {
      case CmdKind::kSkip:
        return;
      case CmdKind::kExtract:
      case CmdKind::kEmit:
      case CmdKind::kAdd:
      case CmdKind::kRemove:
        check_instance_ref(c->header, c->span);
        return;
      case CmdKind::kModify: {
        const InstanceDecl* inst = p_.find_instance(c->header);
        if (!inst) {
          error(c->span, "unknown instance " + c->header);
        } else if (!p_.field_type(c->header, c->field)) {
          error(c->span,
                "unknown field " + c->field + " on " + inst->header_type);
        }
        check_expr(c->expr, params);
        return;
      }
      case CmdKind::kApply:
        if (!p_.find_table(c->table)) {
          error(c->span, "unknown table " + c->table);
        }
        return;
      case CmdKind::kSeq:
        check_command(c->c1, params);
        check_command(c->c2, params);
        return;
      case CmdKind::kIf:
        check_expr(c->expr, params);
        check_command(c->c1, params);
        check_command(c->c2, params);
        return;
      case CmdKind::kIfValid:
        check_instance_ref(c->header, c->span);
        check_command(c->c1, params);
        check_command(c->c2, params);
        return;
    }
  }

  void check_table(const TableDecl& t) {
    for (const std::string& v : t.valids) {
      if (!p_.find_instance(v)) error(t.span, "unknown instance " + v);
    }
    for (const ReadKey& key : t.reads) {
      check_expr(key.expr, nullptr);
    }
    for (const ActionDef& a : t.actions) {
      std::set<std::string> param_names;
      for (const Param& param : a.params) {
        if (!param_names.insert(param.name).second) {
          error(param.span, "duplicate parameter " + param.name);
        }
        if (p_.find_instance(param.name) || p_.find_table(param.name) ||
            p_.find_header_type(param.name)) {
          error(param.span,
                "parameter " + param.name + " shadows a declaration");
        }
      }
      check_command(a.body, &a.params);
    }
    if (t.default_action) {
      const ActionDef* a = t.find_action(t.default_action->action);
      if (!a) {
        error(t.default_action->span,
              "unknown action " + t.default_action->action + " in table " +
                  t.name);
        return;
      }
      if (a->params.size() != t.default_action->data.size()) {
        error(t.default_action->span,
              "default_action data arity mismatch for " + a->name +
                  ": expected " + std::to_string(a->params.size()) +
                  ", got " + std::to_string(t.default_action->data.size()));
        return;
      }
      for (std::size_t i = 0; i < a->params.size(); ++i) {
        const Value& v = t.default_action->data[i];
        const BaseType& want = a->params[i].type;
        bool ok = want.kind == BaseType::Kind::kBool
                      ? std::holds_alternative<bool>(v)
                      : std::holds_alternative<BitVec>(v) &&
                            std::get<BitVec>(v).width == want.width;
        if (!ok) {
          error(t.default_action->span,
                "default_action data type mismatch for parameter " +
                    a->params[i].name);
        }
      }
    }
  }

  const Program& p_;
  std::vector<Diagnostic>* diags_;
};

}  // namespace

ParseResult parse_program(const std::string& source_text,
                          const std::string& file_name) {
  ParseResult result;
  std::vector<Token> tokens;
  Diagnostic lex_error;
  Lexer lexer(source_text, file_name);
  if (!lexer.run(&tokens, &lex_error)) {
    result.diagnostics.push_back(std::move(lex_error));
    return result;
  }
  Parser parser(std::move(tokens), file_name, &result.diagnostics);
  std::optional<Program> p = parser.run();
  if (!p) return result;
  Resolver resolver(*p, &result.diagnostics);
  resolver.run();
  if (!result.diagnostics.empty()) return result;
  result.program = std::move(p);
  return result;
}

}  // namespace sp4
