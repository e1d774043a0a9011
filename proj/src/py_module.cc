// Copyright 2026 The sp4 Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Python bindings: parse, check, run and per-point types over programs,
// plus the header-set algebra on textual type notation. Structured results
// come back as plain dicts and lists so callers need no wrapper types.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "sp4/classify.h"
#include "sp4/control_plane.h"
#include "sp4/diag.h"
#include "sp4/header_algebra.h"
#include "sp4/interp.h"
#include "sp4/parser.h"
#include "sp4/syntax.h"
#include "sp4/typecheck.h"
#include "sp4/values.h"

namespace py = pybind11;

namespace sp4 {
namespace {

std::string render_all(const std::vector<Diagnostic>& ds) {
  std::string out;
  for (const Diagnostic& d : ds) {
    if (!out.empty()) out += "\n";
    out += render_line(d);
  }
  return out;
}

py::dict diagnostic_dict(const Diagnostic& d) {
  py::dict out;
  out["severity"] = to_string(d.severity);
  out["file"] = d.span.file;
  out["line"] = d.span.line;
  out["col_begin"] = d.span.col_begin;
  out["col_end"] = d.span.col_end;
  out["message"] = d.message;
  out["rendered"] = render_line(d);
  if (d.category.has_value()) {
    out["category"] = to_string(*d.category);
  } else {
    out["category"] = py::none();
  }
  if (!d.header.empty()) out["header"] = d.header;
  if (!d.table.empty()) out["table"] = d.table;
  if (!d.action.empty()) out["action"] = d.action;
  return out;
}

Program parse_or_throw(const std::string& source, const std::string& file) {
  ParseResult pr = parse_program(source, file);
  if (!pr.program) {
    std::vector<Diagnostic> ds = pr.diagnostics;
    sort_diagnostics(ds);
    throw py::value_error(render_all(ds));
  }
  return *pr.program;
}

InstanceUniverse universe_of(const std::vector<std::string>& names) {
  return InstanceUniverse(names);
}

HeaderType type_or_throw(const std::string& notation) {
  std::optional<HeaderType> t = parse_type(notation);
  if (!t) throw py::value_error("malformed type notation: " + notation);
  return *t;
}

TableState entries_or_throw(const Program& p, const CheckResult& checked,
                            const std::string& text,
                            const std::string& file) {
  LoadResult lr = load_entries(text, p, file);
  if (!lr.state) {
    std::vector<Diagnostic> ds = lr.diagnostics;
    sort_diagnostics(ds);
    throw py::value_error(render_all(ds));
  }
  TableAssumptions assume = collect_assumptions(p, checked);
  std::vector<Diagnostic> problems =
      validate_well_behaved(p, *lr.state, assume);
  if (!problems.empty()) {
    sort_diagnostics(problems);
    throw py::value_error(render_all(problems));
  }
  return *lr.state;
}

py::dict check_dict(const Program& p) {
  CheckResult r = check_program(p);
  std::vector<Diagnostic> ds = classify_diagnostics(p, r);
  sort_diagnostics(ds);
  py::dict out;
  out["ok"] = count_errors(ds) == 0;
  out["errors"] = count_errors(ds);
  out["warnings"] = count_warnings(ds);
  py::list diags;
  for (const Diagnostic& d : ds) diags.append(diagnostic_dict(d));
  out["diagnostics"] = diags;
  out["output_type"] = print_type(r.output);
  return out;
}

py::dict run_dict(const Program& p, const std::string& packet_hex,
                  const std::optional<std::string>& entries_text) {
  std::string hex = packet_hex;
  if (hex.rfind("0x", 0) == 0 || hex.rfind("0X", 0) == 0) {
    hex = hex.substr(2);
  }
  std::optional<BitStream> packet = BitStream::from_hex(hex);
  if (!packet) throw py::value_error("packet is not a hex string");
  TableState st;
  if (entries_text.has_value()) {
    CheckResult checked = check_program(p);
    st = entries_or_throw(p, checked, *entries_text, "<entries>");
  }
  RunResult rr = run(p, *packet, st);
  py::dict out;
  out["output_hex"] = bits_to_hex(rr.config.output.bits);
  out["output_bits"] = rr.config.output.bits.size();
  out["valid"] = header_map_domain(rr.config.headers);
  out["input_extended"] = rr.input_extended;
  if (rr.fault.has_value()) {
    py::dict f;
    f["message"] = rr.fault->message;
    f["file"] = rr.fault->span.file;
    f["line"] = rr.fault->span.line;
    f["col_begin"] = rr.fault->span.col_begin;
    f["col_end"] = rr.fault->span.col_end;
    out["fault"] = f;
  } else {
    out["fault"] = py::none();
  }
  return out;
}

py::list point_types_list(const Program& p) {
  CheckResult r = check_program(p);
  py::list out;
  for (const PointType& pt : r.points) {
    py::dict rec;
    rec["file"] = pt.span.file;
    rec["line"] = pt.span.line;
    rec["col_begin"] = pt.span.col_begin;
    rec["col_end"] = pt.span.col_end;
    rec["kind"] = pt.kind == PointKind::kBefore ? "before" : "after";
    rec["type"] = print_type(pt.type);
    out.append(rec);
  }
  return out;
}

std::optional<std::vector<std::vector<std::string>>> denote_names(
    const std::string& notation, const std::vector<std::string>& instances,
    std::size_t cap) {
  InstanceUniverse u = universe_of(instances);
  std::optional<Denotation> d = denote(type_or_throw(notation), u, cap);
  if (!d) return std::nullopt;
  std::vector<std::vector<std::string>> out;
  for (const InstanceSet& s : d->alts) out.push_back(instance_set_names(u, s));
  return out;
}

}  // namespace
}  // namespace sp4

PYBIND11_MODULE(_sp4core, m) {
  m.doc() =
      "Validity-typed packet program toolkit: parsing, static checking, "
      "execution, and the header-set type algebra.";

  py::class_<sp4::Program>(m, "Program")
      .def_property_readonly("file",
                             [](const sp4::Program& p) { return p.file; })
      .def_property_readonly("instances",
                             [](const sp4::Program& p) {
                               std::vector<std::string> out;
                               for (const auto& i : p.instances) {
                                 out.push_back(i.name);
                               }
                               return out;
                             })
      .def_property_readonly("tables",
                             [](const sp4::Program& p) {
                               std::vector<std::string> out;
                               for (const auto& t : p.tables) {
                                 out.push_back(t.name);
                               }
                               return out;
                             })
      .def("__str__",
           [](const sp4::Program& p) { return sp4::pretty_print(p); });

  m.def("parse", &sp4::parse_or_throw, py::arg("source"),
        py::arg("file") = "<input>",
        "Parses and resolves a program; raises ValueError with rendered "
        "diagnostics when the source is malformed.");

  m.def("check", &sp4::check_dict, py::arg("program"),
        "Checks a program. Returns a dict with ok, errors, warnings, "
        "diagnostics (classified), and the final output_type.");

  m.def("run", &sp4::run_dict, py::arg("program"), py::arg("packet_hex"),
        py::arg("entries") = std::nullopt,
        "Executes a program on a packet, optionally with installed entries "
        "(validated first). Returns output bits, valid instances and any "
        "fault.");

  m.def("point_types", &sp4::point_types_list, py::arg("program"),
        "The recorded type at every program point, in order.");

  m.def(
      "denote",
      [](const std::string& notation, const std::vector<std::string>& insts,
         std::size_t cap) { return sp4::denote_names(notation, insts, cap); },
      py::arg("type"), py::arg("instances"),
      py::arg("cap") = sp4::kDefaultDenotationCap,
      "The header sets a type stands for, as name lists; None when the "
      "alternative count exceeds cap.");

  m.def(
      "entails",
      [](const std::vector<std::string>& valid, const std::string& notation,
         const std::vector<std::string>& insts) {
        sp4::InstanceUniverse u = sp4::universe_of(insts);
        std::set<std::string> s(valid.begin(), valid.end());
        return sp4::entails(s, sp4::type_or_throw(notation), u);
      },
      py::arg("valid"), py::arg("type"), py::arg("instances"),
      "True when the valid set is one of the type's alternatives.");

  m.def(
      "subtype",
      [](const std::string& t1, const std::string& t2,
         const std::vector<std::string>& insts) {
        sp4::InstanceUniverse u = sp4::universe_of(insts);
        return sp4::subtype(sp4::type_or_throw(t1), sp4::type_or_throw(t2),
                            u);
      },
      py::arg("t1"), py::arg("t2"), py::arg("instances"),
      "True when every header set of t1 is one of t2's.");

  m.def(
      "normalize_type",
      [](const std::string& notation) {
        return sp4::print_type(sp4::normalize(sp4::type_or_throw(notation)));
      },
      py::arg("type"),
      "The type's simplified textual form (same denotation).");
}
