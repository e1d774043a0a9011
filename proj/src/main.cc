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
// Command-line front end. Three subcommands over one program file:
//   check  parse, type-check, classify and print diagnostics
//   run    execute a packet against the program and optional table entries
//   types  print the header-validity type at every statement boundary
//
// Exit codes are uniform: 0 success, 1 the program is at fault (type errors,
// or a runtime invalid access), 2 the invocation is at fault (unreadable
// files, malformed program/entries/packet, ill-behaved entries).

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sp4/classify.h"
#include "sp4/control_plane.h"
#include "sp4/header_algebra.h"
#include "sp4/interp.h"
#include "sp4/parser.h"
#include "sp4/typecheck.h"

namespace sp4 {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitProgramFault = 1;
constexpr int kExitBadInput = 2;

std::optional<std::string> slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Parses the program or reports why it did not; nullopt means exit 2.
std::optional<Program> load_program(const std::string& path) {
  std::optional<std::string> text = slurp(path);
  if (!text) {
    std::cerr << "sp4: cannot read " << path << "\n";
    return std::nullopt;
  }
  ParseResult pr = parse_program(*text, path);
  if (!pr.program) {
    std::cout << render(pr.diagnostics);
    return std::nullopt;
  }
  return pr.program;
}

// Loads and validates entries against the program's inferred assumptions.
// nullopt means the diagnostics were printed and the caller must exit 2.
std::optional<TableState> load_validated_entries(const Program& prog,
                                                 const CheckResult& checked,
                                                 const std::string& path) {
  std::optional<std::string> text = slurp(path);
  if (!text) {
    std::cerr << "sp4: cannot read " << path << "\n";
    return std::nullopt;
  }
  LoadResult lr = load_entries(*text, prog);
  for (Diagnostic& d : lr.diagnostics) d.span.file = path;
  if (!lr.state) {
    std::cout << render(lr.diagnostics);
    return std::nullopt;
  }
  lr.state->file = path;
  TableAssumptions assumptions;
  for (const TableDecl& t : prog.tables)
    assumptions[t.name] = table_assumptions(checked, t);
  std::vector<Diagnostic> bad =
      validate_well_behaved(prog, *lr.state, assumptions);
  if (!bad.empty()) {
    std::cout << render(bad);
    return std::nullopt;
  }
  return *lr.state;
}

int cmd_check(const std::string& program_path, const std::string& entries_path,
              bool structured, bool fail_on_warning) {
  std::optional<Program> prog = load_program(program_path);
  if (!prog) return kExitBadInput;
  CheckResult r = check_program(*prog);
  std::vector<Diagnostic> diags = classify_diagnostics(*prog, r);
  if (!entries_path.empty() &&
      !load_validated_entries(*prog, r, entries_path)) {
    return kExitBadInput;
  }
  sort_diagnostics(diags);
  if (structured) {
    std::cout << render_structured(diags) << "\n";
  } else {
    std::cout << render(diags);
  }
  if (count_errors(diags) > 0) return kExitProgramFault;
  if (fail_on_warning && count_warnings(diags) > 0) return kExitProgramFault;
  return kExitOk;
}

int cmd_run(const std::string& program_path, const std::string& entries_path,
            const std::string& packet_hex) {
  std::optional<Program> prog = load_program(program_path);
  if (!prog) return kExitBadInput;
  std::string hex = packet_hex;
  if (hex.rfind("0x", 0) == 0 || hex.rfind("0X", 0) == 0) hex = hex.substr(2);
  std::optional<BitStream> packet = BitStream::from_hex(hex);
  if (!packet) {
    std::cerr << "sp4: --packet is not a hex string\n";
    return kExitBadInput;
  }
  // Running does not require the program to type-check; the check result only
  // feeds entry validation with the per-table assumption sets.
  TableState state;
  if (!entries_path.empty()) {
    CheckResult r = check_program(*prog);
    std::optional<TableState> loaded =
        load_validated_entries(*prog, r, entries_path);
    if (!loaded) return kExitBadInput;
    state = *loaded;
  }
  RunResult res = run(*prog, *packet, state);
  if (res.fault) {
    Diagnostic d;
    d.severity = Severity::kError;
    d.span = res.fault->span;
    d.message = res.fault->message;
    std::cout << render_line(d) << "\n";
    return kExitProgramFault;
  }
  const std::vector<bool>& out = res.config.output.bits;
  std::cout << "output: " << (out.empty() ? "-" : bits_to_hex(out)) << " ("
            << out.size() << " bits)\n";
  std::cout << "valid:";
  if (res.config.headers.empty()) {
    std::cout << " -";
  } else {
    for (const auto& [name, record] : res.config.headers)
      std::cout << " " << name;
  }
  std::cout << "\n";
  if (res.input_extended)
    std::cout << "note: input shorter than extracted headers; zero-extended\n";
  return kExitOk;
}

std::string render_denotation(const InstanceUniverse& u, const Denotation& d) {
  std::string out = "{";
  for (std::size_t i = 0; i < d.alts.size(); ++i) {
    if (i) out += ",";
    out += "{";
    std::vector<std::string> names = instance_set_names(u, d.alts[i]);
    for (std::size_t j = 0; j < names.size(); ++j) {
      if (j) out += ",";
      out += names[j];
    }
    out += "}";
  }
  return out + "}";
}

int cmd_types(const std::string& program_path, std::size_t max_denotation,
              bool structured) {
  std::optional<Program> prog = load_program(program_path);
  if (!prog) return kExitBadInput;
  CheckResult r = check_program(*prog);
  InstanceUniverse u = prog->universe();
  auto denotation_of = [&](const HeaderType& t) -> std::optional<Denotation> {
    if (max_denotation == 0) return std::nullopt;
    return denote(t, u, max_denotation);
  };
  if (structured) {
    nlohmann::json arr = nlohmann::json::array();
    for (const PointType& p : r.points) {
      nlohmann::json rec;
      rec["file"] = p.span.file;
      rec["line"] = p.span.line;
      rec["col_begin"] = p.span.col_begin;
      rec["col_end"] = p.span.col_end;
      rec["kind"] = p.kind == PointKind::kBefore ? "before" : "after";
      rec["type"] = print_type(p.type);
      if (std::optional<Denotation> d = denotation_of(p.type)) {
        nlohmann::json alts = nlohmann::json::array();
        for (const InstanceSet& a : d->alts)
          alts.push_back(instance_set_names(u, a));
        rec["denotation"] = std::move(alts);
      }
      arr.push_back(std::move(rec));
    }
    std::cout << arr.dump(2) << "\n";
    return kExitOk;
  }
  auto print_point = [&](const PointType& p, const char* label) {
    std::cout << p.span.file << ", line " << p.span.line << ", cols "
              << p.span.col_begin << "-" << p.span.col_end << ": " << label
              << print_type(p.type);
    if (std::optional<Denotation> d = denotation_of(p.type))
      std::cout << " = " << render_denotation(u, *d);
    std::cout << "\n";
  };
  // A statement whose entry and exit types agree prints as one line; the
  // before/after points of a compound statement bracket its inner points, so
  // only adjacent pairs collapse.
  for (std::size_t i = 0; i < r.points.size(); ++i) {
    const PointType& p = r.points[i];
    if (p.kind == PointKind::kBefore && i + 1 < r.points.size() &&
        r.points[i + 1].kind == PointKind::kAfter &&
        r.points[i + 1].span == p.span &&
        print_type(r.points[i + 1].type) == print_type(p.type)) {
      print_point(p, "");
      ++i;
      continue;
    }
    print_point(p, p.kind == PointKind::kBefore ? "before " : "after ");
  }
  return kExitOk;
}

int sp4_main(int argc, char** argv) {
  CLI::App app{"Header-validity checker and interpreter for match-action "
               "pipeline programs"};
  app.require_subcommand(1);

  std::string program_path;
  std::string entries_path;
  std::string packet_hex;
  bool structured = false;
  bool fail_on_warning = false;
  std::size_t max_denotation = 0;

  CLI::App* check = app.add_subcommand(
      "check", "Type-check a program and print classified diagnostics");
  check->add_option("program", program_path, "Program file")->required();
  check->add_option("--entries", entries_path,
                    "Table entries file to validate against the program");
  check->add_flag("--structured", structured,
                  "Emit diagnostics as a JSON array");
  check->add_flag("--fail-on-warning", fail_on_warning,
                  "Exit 1 when warnings were printed");

  CLI::App* run = app.add_subcommand(
      "run", "Execute the program on a packet and print the result");
  run->add_option("program", program_path, "Program file")->required();
  run->add_option("--packet", packet_hex, "Input packet as hex")->required();
  run->add_option("--entries", entries_path, "Table entries file");

  CLI::App* types = app.add_subcommand(
      "types", "Print the header-validity type at each statement boundary");
  types->add_option("program", program_path, "Program file")->required();
  types->add_option("--max-denotation", max_denotation,
                    "Also print denotations with at most this many "
                    "alternatives (0 disables)");
  types->add_flag("--structured", structured,
                  "Emit the points as a JSON array");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitBadInput;
  }

  if (check->parsed())
    return cmd_check(program_path, entries_path, structured, fail_on_warning);
  if (run->parsed()) return cmd_run(program_path, entries_path, packet_hex);
  return cmd_types(program_path, max_denotation, structured);
}

}  // namespace
}  // namespace sp4

int main(int argc, char** argv) { return sp4::sp4_main(argc, argv); }
