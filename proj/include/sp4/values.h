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
// Runtime value representations: fixed-width bit vectors, field records,
// the header map, and bit streams. Shared by the AST (literals), the
// interpreter and the control plane.

#ifndef SP4_VALUES_H_
#define SP4_VALUES_H_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "sp4/diag.h"

namespace sp4 {

// Fixed-width bit vector, most significant bit first.
struct BitVec {
  int width = 0;
  std::vector<bool> bits;  // size == width

  static BitVec zeros(int w);
  // Truncates v modulo 2^w.
  static BitVec from_uint64(std::uint64_t v, int w);
  // Low 64 bits.
  std::uint64_t to_uint64() const;
  // True when the value is representable in w bits without truncation.
  static bool fits(std::uint64_t v, int w);

  BitVec add(const BitVec& other) const;  // wrap mod 2^width
  BitVec sub(const BitVec& other) const;  // wrap mod 2^width

  std::string to_bit_string() const;
  // Decimal when the width fits in 64 bits, hex otherwise.
  std::string to_literal_string() const;

  bool operator==(const BitVec&) const = default;
};

using Value = std::variant<bool, BitVec>;

std::string value_to_string(const Value& v);

// Field name -> value; iteration order is irrelevant (serialization follows
// the header-type declaration order).
using FieldRecord = std::map<std::string, BitVec>;

// Valid instances only: presence in the map is validity.
using HeaderMap = std::map<std::string, FieldRecord>;

std::vector<std::string> header_map_domain(const HeaderMap& h);

// Input-side bit stream. Reads past the end zero-extend (the stream is
// conceptually infinite) and latch the `extended` flag so runs can report it.
struct BitStream {
  std::vector<bool> bits;
  std::size_t pos = 0;
  bool extended = false;

  static std::optional<BitStream> from_hex(const std::string& hex);
  // Consumes n bits, zero-extending when the stream runs short.
  std::vector<bool> take(int n);
  std::size_t remaining() const { return bits.size() - pos; }
};

std::string bits_to_hex(const std::vector<bool>& bits);

// Runtime fault: a field of an instance outside the header map was read, or
// a write targeted such an instance.
struct Fault {
  SourceSpan span;
  std::string message;
  std::set<std::string> valid_instances;  // header-map domain at the fault
};

}  // namespace sp4

#endif  // SP4_VALUES_H_
