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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>
#include <vector>

#include "sp4/parser.h"
#include "sp4/typecheck.h"

namespace sp4 {
namespace {

Program parse_ok(const std::string& src) {
  ParseResult r = parse_program(src, "test.sp4");
  for (const Diagnostic& d : r.diagnostics) {
    INFO(render_line(d));
    CHECK(false);
  }
  REQUIRE(r.program.has_value());
  return *r.program;
}

HeaderType ht(const std::string& text) {
  auto t = parse_type(text);
  REQUIRE(t.has_value());
  return *t;
}

Denotation sets(const InstanceUniverse& u,
                const std::vector<std::vector<std::string>>& alts) {
  std::vector<InstanceSet> ss;
  for (const auto& names : alts) {
    ss.push_back(make_instance_set(u, {names.begin(), names.end()}));
  }
  return make_denotation(std::move(ss));
}

const char* kPrelude =
    "header eth_t {dstAddr:48 srcAddr:48 etherType:16} "
    "header ipv4_t {ttl:8 protocol:8} "
    "header vlan_t {vid:12 etherType:16} "
    "header tcp_t {syn:1 dstPort:16} "
    "instance eth:eth_t instance ipv4:ipv4_t "
    "instance vlan:vlan_t instance tcp:tcp_t ";

TEST_CASE("extract appends the extracted instance") {
  Program p = parse_ok(std::string(kPrelude) + "control {extract(ipv4)}");
  CheckResult r = check_command(p, {}, ht("eth"), p.body);
  CHECK(r.ok());
  CHECK(structurally_equal(r.output, ht("eth.ipv4")));
}

TEST_CASE("modify of a possibly invalid instance is reported") {
  Program p = parse_ok(std::string(kPrelude) + "control {ipv4.ttl = 5:8}");
  CheckResult r = check_command(p, {}, ht("eth.(ipv4+1)"), p.body);
  REQUIRE(r.diagnostics.size() == 1);
  CHECK(r.diagnostics[0].message == "ipv4 not guaranteed to be valid");
  CHECK(r.diagnostics[0].header == "ipv4");
  CHECK(r.diagnostics[0].severity == Severity::kError);
  // Recovery: the output type is the input type, as if the check had passed.
  CHECK(structurally_equal(r.output, ht("eth.(ipv4+1)")));
}

TEST_CASE("validity branching refines and rejoins") {
  Program p = parse_ok(std::string(kPrelude) +
                       "control {if (valid(vlan)) {vlan.vid = 3:12} "
                       "else {skip}}");
  CheckResult r = check_command(p, {}, ht("eth.(vlan+1)"), p.body);
  CHECK(r.ok());
  InstanceUniverse u = p.universe();
  CHECK(*denote(r.output, u) == sets(u, {{"eth", "vlan"}, {"eth"}}));
}

TEST_CASE("expression typing") {
  Program p = parse_ok(std::string(kPrelude) + "control {skip}");
  std::vector<Diagnostic> ds;

  BaseType t1 = check_expression(p, {}, ht("eth"),
                                 expr_field("eth", "etherType", {}), &ds);
  CHECK(t1 == BaseType::bits(16));
  CHECK(ds.empty());

  BaseType t2 = check_expression(p, {}, ht("eth.(tcp+1)"),
                                 expr_field("tcp", "syn", {}), &ds);
  CHECK(t2 == BaseType::bits(1));
  REQUIRE(ds.size() == 1);
  CHECK(ds[0].message == "tcp not guaranteed to be valid");

  ds.clear();
  TypeEnv env{{"x", BaseType::bits(48)}};
  CHECK(check_expression(p, env, ht("eth"), expr_var("x", {}), &ds) ==
        BaseType::bits(48));
  CHECK(ds.empty());
}

TEST_CASE("operator signatures") {
  Program p = parse_ok(std::string(kPrelude) + "control {skip}");
  std::vector<Diagnostic> ds;
  ExprPtr ttl = expr_field("ipv4", "ttl", {});
  ExprPtr one8 = expr_value(Value{BitVec::from_uint64(1, 8)}, {});
  ExprPtr one16 = expr_value(Value{BitVec::from_uint64(1, 16)}, {});

  CHECK(check_expression(p, {}, ht("ipv4"),
                         expr_const_app("-", {ttl, one8}, {}),
                         &ds) == BaseType::bits(8));
  CHECK(ds.empty());

  CHECK(check_expression(p, {}, ht("ipv4"),
                         expr_const_app("==", {ttl, one8}, {}),
                         &ds) == BaseType::boolean());
  CHECK(ds.empty());

  // Mismatched widths recover with the left operand's width.
  CHECK(check_expression(p, {}, ht("ipv4"),
                         expr_const_app("+", {ttl, one16}, {}),
                         &ds) == BaseType::bits(8));
  REQUIRE(ds.size() == 1);
  CHECK(ds[0].message ==
        "type mismatch: '+' applied to bits<8> and bits<16>");

  ds.clear();
  ExprPtr cmp = expr_const_app("==", {ttl, one8}, {});
  CHECK(check_expression(p, {}, ht("ipv4"),
                         expr_const_app("&&", {cmp, one8}, {}),
                         &ds) == BaseType::boolean());
  REQUIRE(ds.size() == 1);
  CHECK(ds[0].message ==
        "type mismatch: '&&' applied to bool and bits<8>");
}

TEST_CASE("action typing") {
  Program p = parse_ok(std::string(kPrelude) + "control {skip}");
  std::vector<Diagnostic> ds;

  ActionDef nop;
  nop.name = "nop";
  nop.body = cmd_skip({});
  auto [sig0, out0] = check_action(p, {}, ht("eth"), nop, &ds);
  CHECK(sig0.empty());
  CHECK(structurally_equal(out0, ht("eth")));
  CHECK(ds.empty());

  ActionDef rewrite;
  rewrite.name = "rewrite_macs";
  rewrite.params = {{"src", BaseType::bits(48), {}},
                    {"dst", BaseType::bits(48), {}}};
  rewrite.body =
      cmd_seq(cmd_modify("eth", "srcAddr", expr_var("src", {}), {}),
              cmd_modify("eth", "dstAddr", expr_var("dst", {}), {}), {});
  auto [sig1, out1] = check_action(p, {}, ht("eth.ipv4"), rewrite, &ds);
  REQUIRE(sig1.size() == 2);
  CHECK(sig1[0] == BaseType::bits(48));
  CHECK(structurally_equal(out1, ht("eth.ipv4")));
  CHECK(ds.empty());

  ActionDef pop;
  pop.name = "pop_tag";
  pop.body = cmd_seq(
      cmd_modify("eth", "etherType", expr_field("vlan", "etherType", {}), {}),
      cmd_remove("vlan", {}), {});
  auto [sig2, out2] = check_action(p, {}, ht("eth.vlan"), pop, &ds);
  CHECK(sig2.empty());
  InstanceUniverse u = p.universe();
  CHECK(*denote(out2, u) == sets(u, {{"eth"}}));
  CHECK(ds.empty());
}

TEST_CASE("maskable keys") {
  Program p = parse_ok(std::string(kPrelude) +
                       "table port_vlan { valids {vlan} "
                       "reads {vlan.vid : ternary eth.etherType : exact "
                       "tcp.dstPort : ternary} "
                       "actions { nop() {skip} } } "
                       "control {extract(eth) apply(port_vlan)}");
  const TableDecl* t = p.find_table("port_vlan");
  REQUIRE(t != nullptr);
  CHECK(maskable(*t, t->reads[0].expr, t->reads[0].kind));
  CHECK_FALSE(maskable(*t, t->reads[1].expr, t->reads[1].kind));
  CHECK_FALSE(maskable(*t, t->reads[2].expr, t->reads[2].kind));
}

TEST_CASE("control validity assumptions grow from failed checks") {
  Program p = parse_ok(
      "header fabric_t {etherType:16} header eth_t {etherType:16} "
      "instance fabric_header_cpu:fabric_t instance eth:eth_t "
      "table fabric { valids {fabric_header_cpu} "
      "actions { terminate_cpu_packet() { "
      "eth.etherType = fabric_header_cpu.etherType "
      "remove(fabric_header_cpu) } } } "
      "control {extract(eth) apply(fabric)}");
  const TableDecl* t = p.find_table("fabric");
  REQUIRE(t != nullptr);

  ActionAssumptions cv =
      infer_control_validity(p, ht("eth.(fabric_header_cpu+1)"), *t);
  REQUIRE(cv.assumed_valid.size() == 1);
  CHECK(cv.assumed_valid[0] == std::set<std::string>{"fabric_header_cpu"});
  REQUIRE(cv.warnings.size() == 1);
  CHECK(cv.warnings[0].severity == Severity::kWarning);
  CHECK(cv.warnings[0].message ==
        "assuming fabric_header_cpu matched as valid for rules with action "
        "terminate_cpu_packet");

  // Without the instance in valids nothing may be assumed.
  TableDecl bare = *t;
  bare.valids.clear();
  ActionAssumptions none =
      infer_control_validity(p, ht("eth.(fabric_header_cpu+1)"), bare);
  CHECK(none.assumed_valid[0].empty());
  CHECK(none.warnings.empty());
}

TEST_CASE("action errors that assumptions cannot fix are reported") {
  Program p = parse_ok(std::string(kPrelude) +
                       "table bad { actions { leak() { "
                       "eth.etherType = tcp.dstPort } } } "
                       "control {extract(eth) apply(bad)}");
  const TableDecl* t = p.find_table("bad");
  CheckResult r = check_table_apply(p, ht("eth.(tcp+1)"), *t);
  REQUIRE(r.diagnostics.size() == 1);
  CHECK(r.diagnostics[0].message == "tcp not guaranteed to be valid");
  CHECK(r.diagnostics[0].provenance == Provenance::kTableAction);
  CHECK(r.diagnostics[0].table == "bad");
  CHECK(r.diagnostics[0].action == "leak");
}

TEST_CASE("table output keeps the fall-through alternative by default") {
  Program p = parse_ok(
      "header eth_t {a:8} header val_t {v:32} "
      "instance eth:eth_t instance nc_value_1:val_t "
      "table add_value_1 { actions { add_act() { add(nc_value_1) } } } "
      "control {extract(eth) apply(add_value_1)}");
  const TableDecl* t = p.find_table("add_value_1");

  CheckResult r = check_table_apply(p, ht("eth"), *t);
  CHECK(r.ok());
  CHECK(print_type(r.output) == "eth+eth.nc_value_1");
  REQUIRE(r.applies.size() == 1);
  CHECK(r.applies[0].table == "add_value_1");
  CHECK(print_type(r.applies[0].input) == "eth");

  // Probing the would-be-defaulted shape drops the fall-through term.
  CheckOptions probe;
  probe.assume_defaulted_tables = true;
  CheckResult rp = check_table_apply(p, ht("eth"), *t, probe);
  CHECK(print_type(rp.output) == "eth.nc_value_1");
}

TEST_CASE("a declared default action replaces the fall-through term") {
  Program p = parse_ok(
      "header eth_t {a:8} header val_t {v:32} "
      "instance eth:eth_t instance nc_value_1:val_t "
      "table add_value_1 { actions { add_act() { add(nc_value_1) } } "
      "default_action = add_act() } "
      "control {extract(eth) apply(add_value_1)}");
  CheckResult r = check_table_apply(p, ht("eth"), *p.find_table("add_value_1"));
  CHECK(r.ok());
  CHECK(print_type(r.output) == "eth.nc_value_1");
}

TEST_CASE("exact keys over optional instances are errors, ternary warns") {
  const char* decls =
      "header eth_t {etherType:16} header vlan_t {vid:12} "
      "instance eth:eth_t instance vlan0:vlan_t instance vlan1:vlan_t ";
  std::string tail =
      "actions { nop() {skip} } } control {extract(eth) apply(port_vlan)}";

  Program exact = parse_ok(std::string(decls) +
                           "table port_vlan { valids {vlan0 vlan1} "
                           "reads {vlan0.vid : exact vlan1.vid : exact} " +
                           tail);
  CheckResult re = check_table_apply(
      exact, ht("eth.(vlan0+1).(vlan1+1)"), *exact.find_table("port_vlan"));
  CHECK(count_errors(re.diagnostics) == 2);
  CHECK(count_warnings(re.diagnostics) == 0);
  for (const Diagnostic& d : re.diagnostics) {
    CHECK(d.provenance == Provenance::kTableReads);
    CHECK(d.table == "port_vlan");
  }

  Program tern = parse_ok(std::string(decls) +
                          "table port_vlan { valids {vlan0 vlan1} "
                          "reads {vlan0.vid : ternary vlan1.vid : ternary} " +
                          tail);
  CheckResult rt = check_table_apply(
      tern, ht("eth.(vlan0+1).(vlan1+1)"), *tern.find_table("port_vlan"));
  CHECK(count_errors(rt.diagnostics) == 0);
  REQUIRE(count_warnings(rt.diagnostics) == 2);
  CHECK(rt.diagnostics[0].message ==
        "assuming either vlan0 matched as valid or vlan0.vid wildcarded");
  CHECK(rt.diagnostics[1].message ==
        "assuming either vlan1 matched as valid or vlan1.vid wildcarded");
}

TEST_CASE("whole program starts with nothing valid") {
  Program p = parse_ok("header h_t {a:8} instance h:h_t control {skip}");
  CheckResult r = check_program(p);
  CHECK(r.ok());
  CHECK(structurally_equal(r.output, ht("1")));
  REQUIRE(r.points.size() == 2);
  CHECK(r.points[0].kind == PointKind::kBefore);
  CHECK(structurally_equal(r.points[0].type, ht("1")));
}

TEST_CASE("parse graph yields all extraction alternatives") {
  Program p = parse_ok(
      "header eth_t {etherType:16} header vlan_t {etherType:16 vid:12} "
      "header ipv4_t {ttl:8} "
      "instance eth:eth_t instance vlan:vlan_t instance ipv4:ipv4_t "
      "control { extract(eth) "
      "if (eth.etherType == 0x8100:16) { extract(vlan) "
      "  if (vlan.etherType == 0x0800:16) { extract(ipv4) } "
      "} else { if (eth.etherType == 0x0800:16) { extract(ipv4) } } "
      "skip }");
  CheckResult r = check_program(p);
  CHECK(r.ok());
  InstanceUniverse u = p.universe();
  Denotation want = sets(
      u, {{"eth"}, {"eth", "vlan"}, {"eth", "ipv4"}, {"eth", "vlan", "ipv4"}});
  CHECK(*denote(r.output, u) == want);

  // The last statement's entry point sees the same set.
  CmdPtr last = p.body;
  while (last->kind == CmdKind::kSeq) last = last->c2;
  bool found = false;
  for (const PointType& pt : r.points) {
    if (pt.kind == PointKind::kBefore && pt.span == last->span) {
      found = true;
      CHECK(*denote(pt.type, u) == want);
    }
  }
  CHECK(found);
}

TEST_CASE("unreachable branches are not checked") {
  Program p = parse_ok(std::string(kPrelude) +
                       "control { extract(eth) "
                       "if (valid(vlan)) { tcp.dstPort = 1:16 } else {skip} }");
  CheckResult r = check_program(p);
  CHECK(r.ok());
  CHECK(structurally_equal(r.output, ht("eth")));
}

TEST_CASE("one root cause surfaces at every use site") {
  Program p = parse_ok(std::string(kPrelude) +
                       "control { extract(eth) ipv4.ttl = ipv4.ttl - 1:8 }");
  CheckResult r = check_program(p);
  CHECK(count_errors(r.diagnostics) == 2);
  for (const Diagnostic& d : r.diagnostics) CHECK(d.header == "ipv4");
}

TEST_CASE("smaller input types yield smaller output types") {
  Program p = parse_ok(std::string(kPrelude) +
                       "control { if (valid(vlan)) {vlan.vid = 1:12} "
                       "else {skip} }");
  InstanceUniverse u = p.universe();
  CheckResult big = check_command(p, {}, ht("eth.(vlan+1)"), p.body);
  CheckResult small = check_command(p, {}, ht("eth.vlan"), p.body);
  CHECK(big.ok());
  CHECK(small.ok());
  CHECK(subtype(small.output, big.output, u));
}

TEST_CASE("checking is deterministic") {
  std::string src = std::string(kPrelude) +
                    "control { ipv4.ttl = ipv4.ttl - 1:8 "
                    "if (tcp.syn == 1:1) {skip} else {skip} }";
  Program p = parse_ok(src);
  CheckResult a = check_program(p);
  CheckResult b = check_program(p);
  CHECK(render(a.diagnostics) == render(b.diagnostics));
  CHECK(structurally_equal(a.output, b.output));
}

}  // namespace
}  // namespace sp4
