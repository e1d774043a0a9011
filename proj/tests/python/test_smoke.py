# Copyright 2026 The sp4 Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""End-to-end smoke tests for the python bindings."""

import os
import sys

_pkg_dir = os.environ.get("SP4_PY_PACKAGE_DIR")
if _pkg_dir and _pkg_dir not in sys.path:
    sys.path.insert(0, _pkg_dir)

import pytest

import sp4

ECHO = """
header eth_t {dstAddr:48 srcAddr:48 etherType:16}
instance eth:eth_t
control {
  extract(eth)
  emit(eth)
}
"""

UNSAFE = """
header eth_t {etherType:16}
header vlan_t {vid:12}
instance eth:eth_t
instance vlan:vlan_t
control {
  extract(eth)
  vlan.vid = 1:12
}
"""

GUARDED = """
header eth_t {etherType:16}
header vlan_t {vid:12}
instance eth:eth_t
instance vlan:vlan_t
control {
  extract(eth)
  if (eth.etherType == 0x8100:16) {
    extract(vlan)
    vlan.vid = 1:12
  } else {
    skip
  }
}
"""

TABLED = """
header eth_t {dstAddr:48 etherType:16}
instance eth:eth_t
table route {
  valids { eth }
  reads { eth.dstAddr : exact }
  actions {
    set_type(v:16) {
      eth.etherType = v
    }
    nop() {
      skip
    }
  }
  default_action = nop()
}
control {
  extract(eth)
  apply(route)
  emit(eth)
}
"""


def test_parse_rejects_malformed_source():
    with pytest.raises(ValueError):
        sp4.parse("control { extract(nowhere) }")


def test_check_flags_unguarded_access():
    report = sp4.check(sp4.parse(UNSAFE, "unsafe.sp4"))
    assert not report["ok"]
    assert report["errors"] == 1
    diag = report["diagnostics"][0]
    assert diag["severity"] == "error"
    assert "vlan not guaranteed to be valid" in diag["message"]
    assert diag["file"] == "unsafe.sp4"


def test_check_accepts_guarded_program():
    report = sp4.check(sp4.parse(GUARDED))
    assert report["ok"]
    assert report["errors"] == 0
    assert report["output_type"] == "eth.vlan+eth"


def test_run_round_trips_an_echo():
    program = sp4.parse(ECHO)
    result = sp4.run(program, "0x112233445566aabbccddeeff0800")
    assert result["fault"] is None
    assert result["output_hex"] == "112233445566aabbccddeeff0800"
    assert result["output_bits"] == 112
    assert result["valid"] == ["eth"]


def test_run_reports_a_fault_with_location():
    result = sp4.run(sp4.parse(UNSAFE, "unsafe.sp4"), "ffff")
    assert result["fault"] is not None
    assert "invalid access to vlan.vid" in result["fault"]["message"]
    assert result["fault"]["file"] == "unsafe.sp4"


def test_run_with_entries_applies_the_matching_action():
    program = sp4.parse(TABLED)
    entries = "table route: valids=1 keys=0x112233445566 -> set_type(0x9999)\n"
    result = sp4.run(program, "112233445566" + "0800", entries=entries)
    assert result["fault"] is None
    assert result["output_hex"] == "1122334455669999"


def test_run_rejects_ill_behaved_entries():
    program = sp4.parse(TABLED)
    with pytest.raises(ValueError, match="takes 1 arguments, got 0"):
        sp4.run(program, "00", entries="table route: valids=1 keys=0 -> set_type()\n")


def test_point_types_cover_the_body():
    points = sp4.point_types(sp4.parse(ECHO))
    assert points[0]["kind"] == "before"
    assert points[0]["type"] == "1"
    assert points[-1]["type"] == "eth"


def test_denotation_of_a_choice():
    sets = sp4.denote("eth.(vlan+1)", ["eth", "vlan"])
    assert sets == [["eth"], ["eth", "vlan"]]


def test_entailment_and_subtyping():
    u = ["eth", "vlan"]
    assert sp4.entails(["eth"], "eth.(vlan+1)", u)
    assert not sp4.entails(["vlan"], "eth.(vlan+1)", u)
    assert sp4.subtype("eth.vlan", "eth.(vlan+1)", u)
    assert not sp4.subtype("eth.(vlan+1)", "eth.vlan", u)
    assert sp4.normalize_type("eth.(vlan+0)+0") == "eth.vlan"
