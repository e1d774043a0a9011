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

#include "sp4/control_plane.h"
#include "sp4/interp.h"
#include "sp4/parser.h"

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

BitStream stream_of(const std::string& bits) {
  BitStream s;
  for (char c : bits) s.bits.push_back(c == '1');
  return s;
}

std::string bit_string(const std::vector<bool>& bits) {
  std::string out;
  for (bool b : bits) out += b ? '1' : '0';
  return out;
}

std::vector<std::string> rule_names(const RunResult& r) {
  std::vector<std::string> out;
  for (const TraceStep& t : r.trace) out.push_back(t.rule);
  return out;
}

const char* kPrelude =
    "header eth_t {dstAddr:48 srcAddr:48 etherType:16} "
    "header ipv4_t {ttl:8 protocol:8} "
    "header vlan_t {vid:12 etherType:16} "
    "header tcp_t {syn:1 dstPort:16} "
    "instance eth:eth_t instance ipv4:ipv4_t "
    "instance vlan:vlan_t instance tcp:tcp_t ";

TEST_CASE("deserialize fills fields in declaration order") {
  Program p = parse_ok("header h_t {f:3 g:2} instance h:h_t control {skip}");
  const HeaderTypeDecl* eta = p.find_header_type("h_t");
  REQUIRE(eta != nullptr);

  auto [record, rest] = deserialize(*eta, stream_of("110001"));
  CHECK(record.at("f") == BitVec::from_uint64(6, 3));  // bits 110
  CHECK(record.at("g") == BitVec::from_uint64(0, 2));  // bits 00
  CHECK(bit_string(rest.take(1)) == "1");
  CHECK_FALSE(rest.extended);
}

TEST_CASE("deserialize zero-extends a short input and latches the flag") {
  Program p = parse_ok("header h_t {f:3 g:2} instance h:h_t control {skip}");
  const HeaderTypeDecl* eta = p.find_header_type("h_t");

  auto [record, rest] = deserialize(*eta, stream_of("11"));
  CHECK(record.at("f") == BitVec::from_uint64(6, 3));
  CHECK(record.at("g") == BitVec::zeros(2));
  CHECK(rest.extended);
}

TEST_CASE("serialize concatenates fields and inverts deserialize") {
  Program p = parse_ok("header h_t {f:3 g:2} instance h:h_t control {skip}");
  const HeaderTypeDecl* eta = p.find_header_type("h_t");

  auto [record, rest] = deserialize(*eta, stream_of("10110"));
  CHECK(bit_string(serialize(*eta, record)) == "10110");

  FieldRecord zeros = init_value(*eta);
  CHECK(bit_string(serialize(*eta, zeros)) == "00000");
}

TEST_CASE("expression evaluation") {
  Program p = parse_ok(std::string(kPrelude) + "control {skip}");
  HeaderMap h;
  h["ipv4"] = FieldRecord{{"ttl", BitVec::from_uint64(3, 8)},
                          {"protocol", BitVec::from_uint64(6, 8)}};

  auto parse_expr = [&](const std::string& text) {
    Program q = parse_ok(std::string(kPrelude) + "control {ipv4.ttl = " +
                         text + "}");
    return q.body->kind == CmdKind::kSeq ? q.body->c1->expr : q.body->expr;
  };

  SUBCASE("field read") {
    auto r = eval_expression(p, h, parse_expr("ipv4.ttl"));
    REQUIRE(std::holds_alternative<Value>(r));
    CHECK(std::get<Value>(r) == Value{BitVec::from_uint64(3, 8)});
  }
  SUBCASE("addition wraps modulo the width") {
    auto r = eval_expression(p, h, parse_expr("3:8 + 255:8"));
    REQUIRE(std::holds_alternative<Value>(r));
    CHECK(std::get<Value>(r) == Value{BitVec::from_uint64(2, 8)});
  }
  SUBCASE("subtraction wraps modulo the width") {
    auto r = eval_expression(p, h, parse_expr("0:8 - 1:8"));
    REQUIRE(std::holds_alternative<Value>(r));
    CHECK(std::get<Value>(r) == Value{BitVec::from_uint64(255, 8)});
  }
  SUBCASE("comparison and boolean operators") {
    auto r = eval_expression(p, h, parse_expr("ipv4.ttl == 3:8"));
    CHECK(std::get<Value>(r) == Value{true});
    r = eval_expression(p, h, parse_expr("ipv4.ttl != 3:8"));
    CHECK(std::get<Value>(r) == Value{false});
    r = eval_expression(p, h, parse_expr("!(ipv4.ttl == 3:8)"));
    CHECK(std::get<Value>(r) == Value{false});
    r = eval_expression(p, h,
                        parse_expr("ipv4.ttl == 3:8 && ipv4.protocol == 6:8"));
    CHECK(std::get<Value>(r) == Value{true});
    r = eval_expression(p, h,
                        parse_expr("ipv4.ttl == 9:8 || ipv4.protocol == 6:8"));
    CHECK(std::get<Value>(r) == Value{true});
  }
  SUBCASE("reading a field of an invalid instance faults") {
    ExprPtr e = parse_expr("tcp.dstPort");
    auto r = eval_expression(p, h, e);
    REQUIRE(std::holds_alternative<Fault>(r));
    const Fault& f = std::get<Fault>(r);
    CHECK(f.message == "invalid access to tcp.dstPort");
    CHECK(f.span == e->span);
    CHECK(f.valid_instances == std::set<std::string>{"ipv4"});
  }
  SUBCASE("evaluation is strict, so a fault in any operand surfaces") {
    auto r = eval_expression(p, h,
                             parse_expr("ipv4.ttl == 3:8 || tcp.syn == 1:1"));
    REQUIRE(std::holds_alternative<Fault>(r));
    CHECK(std::get<Fault>(r).message == "invalid access to tcp.syn");
  }
}

TEST_CASE("extract, modify and emit round a packet through a header") {
  Program p = parse_ok(
      "header h_t {f:4 g:4} instance h:h_t "
      "control {extract(h) h.f = h.f + 1:4 emit(h)}");
  RunResult r = run(p, stream_of("10010110"), TableState{});
  REQUIRE_FALSE(r.fault.has_value());
  CHECK(r.config.command->kind == CmdKind::kSkip);
  // f = 1001 + 1 = 1010; g unchanged.
  CHECK(bit_string(r.config.output.bits) == "10100110");
  CHECK(rule_names(r) ==
        std::vector<std::string>{"extract", "modify", "emit"});
  CHECK(r.trace.back().valid == std::set<std::string>{"h"});
  CHECK_FALSE(r.input_extended);
}

TEST_CASE("emitting an invalid header is a no-op") {
  Program p = parse_ok(std::string(kPrelude) + "control {emit(vlan)}");
  RunResult r = run(p, stream_of(""), TableState{});
  REQUIRE_FALSE(r.fault.has_value());
  CHECK(r.config.output.bits.empty());
  CHECK(rule_names(r) == std::vector<std::string>{"emit-invalid"});
}

TEST_CASE("add initializes to zeros and is a no-op on a valid header") {
  Program p = parse_ok(
      "header h_t {f:4} instance h:h_t "
      "control {add(h) emit(h) h.f = 7:4 add(h) emit(h)}");
  RunResult r = run(p, stream_of(""), TableState{});
  REQUIRE_FALSE(r.fault.has_value());
  // First emit sees zeros; the second add must not reset f.
  CHECK(bit_string(r.config.output.bits) == "00000111");
  CHECK(rule_names(r) == std::vector<std::string>{"add", "emit", "modify",
                                                  "add-valid", "emit"});
}

TEST_CASE("remove drops the instance and succeeds when already invalid") {
  Program p = parse_ok(
      "header h_t {f:4} instance h:h_t "
      "control {add(h) remove(h) remove(h) emit(h)}");
  RunResult r = run(p, stream_of(""), TableState{});
  REQUIRE_FALSE(r.fault.has_value());
  CHECK(r.config.output.bits.empty());
  CHECK(rule_names(r) == std::vector<std::string>{"add", "remove", "remove",
                                                  "emit-invalid"});
  CHECK(r.trace[0].valid == std::set<std::string>{"h"});
  CHECK(r.trace[1].valid.empty());
}

TEST_CASE("validity branching at runtime") {
  Program p = parse_ok(
      std::string(kPrelude) +
      "control {extract(eth) "
      "if (valid(vlan)) {emit(vlan)} else {emit(eth)}}");
  RunResult r = run(p, stream_of(std::string(112, '0')), TableState{});
  REQUIRE_FALSE(r.fault.has_value());
  CHECK(rule_names(r) == std::vector<std::string>{"extract", "if-valid-false",
                                                  "emit"});
}

TEST_CASE("boolean conditions choose the branch") {
  Program p = parse_ok(
      "header h_t {f:4} instance h:h_t "
      "control {add(h) h.f = 3:4 "
      "if (h.f == 3:4) {h.f = 1:4} else {h.f = 2:4} emit(h)}");
  RunResult r = run(p, stream_of(""), TableState{});
  REQUIRE_FALSE(r.fault.has_value());
  CHECK(bit_string(r.config.output.bits) == "0001");
  CHECK(rule_names(r) == std::vector<std::string>{"add", "modify", "if-true",
                                                  "modify", "emit"});
}

TEST_CASE("modifying an invalid instance faults with location and domain") {
  Program p = parse_ok(std::string(kPrelude) +
                       "control {extract(eth) vlan.vid = 1:12}");
  RunResult r = run(p, stream_of(std::string(112, '1')), TableState{});
  REQUIRE(r.fault.has_value());
  CHECK(r.fault->message == "invalid access to vlan.vid");
  CHECK(r.fault->valid_instances == std::set<std::string>{"eth"});
  // The completed prefix stays in the trace.
  CHECK(rule_names(r) == std::vector<std::string>{"extract"});
}

TEST_CASE("reading an invalid instance in a condition faults at the read") {
  Program p = parse_ok(std::string(kPrelude) +
                       "control {extract(eth) "
                       "if (tcp.syn == 1:1) {skip} else {skip}}");
  RunResult r = run(p, stream_of(std::string(112, '0')), TableState{});
  REQUIRE(r.fault.has_value());
  CHECK(r.fault->message == "invalid access to tcp.syn");
  CHECK(r.fault->valid_instances == std::set<std::string>{"eth"});
}

TEST_CASE("short input zero-extends and reports extension") {
  Program p = parse_ok(std::string(kPrelude) + "control {extract(eth)}");
  RunResult r = run(p, stream_of("1"), TableState{});
  REQUIRE_FALSE(r.fault.has_value());
  CHECK(r.input_extended);
  CHECK(r.config.headers.at("eth").at("dstAddr") ==
        BitVec::from_uint64(std::uint64_t{1} << 47, 48));
}

TEST_CASE("skip statements step over; a trailing skip is the final state") {
  Program p = parse_ok("header h_t {f:4} instance h:h_t "
                       "control {skip add(h) skip}");
  RunResult r = run(p, stream_of(""), TableState{});
  REQUIRE_FALSE(r.fault.has_value());
  CHECK(rule_names(r) == std::vector<std::string>{"skip", "add"});
  CHECK(r.config.command->kind == CmdKind::kSkip);
}

TEST_CASE("apply runs the selected action with data substituted") {
  Program p = parse_ok(
      "header h_t {f:4 g:4} instance h:h_t "
      "table set_g { valids {h} reads {h.f : exact} "
      "actions { set(v:4) { h.g = v } nop() {skip} } } "
      "control {extract(h) apply(set_g) emit(h)}");
  LoadResult lr = load_entries(
      "table set_g: valids=1 keys=9 -> set(5)\n", p, "t.entries");
  REQUIRE(lr.state.has_value());

  RunResult r = run(p, stream_of("10010000"), *lr.state);
  REQUIRE_FALSE(r.fault.has_value());
  CHECK(bit_string(r.config.output.bits) == "10010101");
  CHECK(rule_names(r) == std::vector<std::string>{"extract", "apply", "modify",
                                                  "emit"});

  // A non-matching key misses; with no default the apply is a no-op.
  RunResult miss = run(p, stream_of("00010000"), *lr.state);
  REQUIRE_FALSE(miss.fault.has_value());
  CHECK(bit_string(miss.config.output.bits) == "00010000");
  CHECK(rule_names(miss) == std::vector<std::string>{"extract", "apply-miss",
                                                     "emit"});
}

TEST_CASE("a declared default action runs on a miss") {
  Program p = parse_ok(
      "header h_t {f:4 g:4} instance h:h_t "
      "table set_g { valids {h} reads {h.f : exact} "
      "actions { set(v:4) { h.g = v } } "
      "default_action = set(15:4) } "
      "control {extract(h) apply(set_g) emit(h)}");
  RunResult r = run(p, stream_of("00100000"), TableState{});
  REQUIRE_FALSE(r.fault.has_value());
  CHECK(bit_string(r.config.output.bits) == "00101111");
  CHECK(rule_names(r) == std::vector<std::string>{"extract", "apply-default",
                                                  "modify", "emit"});
}

TEST_CASE("an installed override replaces the declared miss behavior") {
  Program p = parse_ok(
      "header h_t {f:4 g:4} instance h:h_t "
      "table set_g { valids {h} reads {h.f : exact} "
      "actions { set(v:4) { h.g = v } } "
      "default_action = set(15:4) } "
      "control {extract(h) apply(set_g) emit(h)}");
  LoadResult lr =
      load_entries("table set_g: default -> set(3)\n", p, "t.entries");
  REQUIRE(lr.state.has_value());

  RunResult r = run(p, stream_of("00100000"), *lr.state);
  REQUIRE_FALSE(r.fault.has_value());
  CHECK(bit_string(r.config.output.bits) == "00100011");
  CHECK(rule_names(r) == std::vector<std::string>{"extract", "apply-default",
                                                  "modify", "emit"});
}

TEST_CASE("guarding table reads on unextracted headers faults at the key") {
  // A monitor that reads a TCP flag for every packet, including packets
  // whose parse never extracted tcp.
  Program p = parse_ok(
      std::string(kPrelude) +
      "table watch { valids {} reads {tcp.syn : exact} "
      "actions { nop() {skip} } } "
      "control {extract(eth) "
      "if (eth.etherType == 0x0800:16) {extract(ipv4)} else {skip} "
      "apply(watch)}");
  LoadResult lr =
      load_entries("table watch: keys=1 -> nop()\n", p, "t.entries");
  REQUIRE(lr.state.has_value());

  std::string packet(112, '0');  // etherType 0, so ipv4 is never extracted
  RunResult r = run(p, stream_of(packet), *lr.state);
  REQUIRE(r.fault.has_value());
  CHECK(r.fault->message == "invalid access to tcp.syn");
  CHECK(r.fault->valid_instances == std::set<std::string>{"eth"});

  const TableDecl* t = p.find_table("watch");
  CHECK(r.fault->span == t->reads[0].expr->span);
}

TEST_CASE("runs terminate with the remaining command fully consumed") {
  Program p = parse_ok(
      std::string(kPrelude) +
      "control {extract(eth) "
      "if (valid(eth)) {extract(ipv4) remove(ipv4)} else {skip} "
      "emit(eth)}");
  RunResult r = run(p, stream_of(std::string(300, '1')), TableState{});
  REQUIRE_FALSE(r.fault.has_value());
  CHECK(r.config.command->kind == CmdKind::kSkip);
  CHECK(r.config.headers.count("eth") == 1);
  CHECK(r.config.headers.count("ipv4") == 0);
}

}  // namespace
}  // namespace sp4
