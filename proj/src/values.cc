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

#include "sp4/values.h"

#include <cctype>

namespace sp4 {

BitVec BitVec::zeros(int w) {
  BitVec v;
  v.width = w;
  v.bits.assign(w, false);
  return v;
}

BitVec BitVec::from_uint64(std::uint64_t v, int w) {
  BitVec out = zeros(w);
  for (int i = 0; i < w && i < 64; ++i) {
    out.bits[w - 1 - i] = (v >> i) & 1;
  }
  return out;
}

std::uint64_t BitVec::to_uint64() const {
  std::uint64_t v = 0;
  int take = width < 64 ? width : 64;
  for (int i = 0; i < take; ++i) {
    v = (v << 1) | (bits[width - take + i] ? 1u : 0u);
  }
  return v;
}

bool BitVec::fits(std::uint64_t v, int w) {
  if (w >= 64) return true;
  return v < (std::uint64_t{1} << w);
}

BitVec BitVec::add(const BitVec& other) const {
  BitVec out = zeros(width);
  bool carry = false;
  for (int i = width - 1; i >= 0; --i) {
    bool a = bits[i];
    bool b = i < other.width ? other.bits[i] : false;
    out.bits[i] = a ^ b ^ carry;
    carry = (a && b) || (carry && (a ^ b));
  }
  return out;
}

BitVec BitVec::sub(const BitVec& other) const {
  // a - b = a + ~b + 1 (two's complement, wraps mod 2^width).
  BitVec negated = zeros(width);
  for (int i = 0; i < width; ++i) {
    negated.bits[i] = !(i < other.width ? other.bits[i] : false);
  }
  BitVec one = zeros(width);
  if (width > 0) one.bits[width - 1] = true;
  return add(negated).add(one);
}

std::string BitVec::to_bit_string() const {
  std::string s;
  s.reserve(width);
  for (bool b : bits) s += b ? '1' : '0';
  return s;
}

std::string BitVec::to_literal_string() const {
  if (width <= 64) return std::to_string(to_uint64());
  std::string hex = "0x";
  // Pad to a whole number of nibbles on the left.
  int pad = (4 - width % 4) % 4;
  int acc = 0, n = 0;
  std::string digits;
  for (int i = -pad; i < width; ++i) {
    acc = (acc << 1) | (i >= 0 && bits[i] ? 1 : 0);
    if (++n == 4) {
      digits += "0123456789abcdef"[acc];
      acc = 0;
      n = 0;
    }
  }
  return hex + digits;
}

std::string value_to_string(const Value& v) {
  if (std::holds_alternative<bool>(v)) {
    return std::get<bool>(v) ? "true" : "false";
  }
  const BitVec& bv = std::get<BitVec>(v);
  return bv.to_literal_string() + ":" + std::to_string(bv.width);
}

std::vector<std::string> header_map_domain(const HeaderMap& h) {
  std::vector<std::string> out;
  out.reserve(h.size());
  for (const auto& [name, record] : h) out.push_back(name);
  return out;
}

std::optional<BitStream> BitStream::from_hex(const std::string& hex) {
  BitStream s;
  for (char c : hex) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    int nibble;
    if (c >= '0' && c <= '9') {
      nibble = c - '0';
    } else if (c >= 'a' && c <= 'f') {
      nibble = c - 'a' + 10;
    } else if (c >= 'A' && c <= 'F') {
      nibble = c - 'A' + 10;
    } else {
      return std::nullopt;
    }
    for (int i = 3; i >= 0; --i) s.bits.push_back((nibble >> i) & 1);
  }
  return s;
}

std::vector<bool> BitStream::take(int n) {
  std::vector<bool> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    if (pos < bits.size()) {
      out.push_back(bits[pos++]);
    } else {
      extended = true;
      out.push_back(false);
    }
  }
  return out;
}

std::string bits_to_hex(const std::vector<bool>& bits) {
  std::string out;
  int acc = 0, n = 0;
  for (bool b : bits) {
    acc = (acc << 1) | (b ? 1 : 0);
    if (++n == 4) {
      out += "0123456789abcdef"[acc];
      acc = 0;
      n = 0;
    }
  }
  // Trailing bits short of a nibble are padded with zeros on the right.
  if (n > 0) out += "0123456789abcdef"[acc << (4 - n)];
  return out;
}

}  // namespace sp4
