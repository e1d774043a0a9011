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
// The header-validity type algebra: terms 0, 1, h, concatenation and choice,
// their set-of-sets denotation, and the five syntactic operators (restrict,
// neg_restrict, includes, remove, is_empty) plus entailment, subtyping and
// normalization.

#ifndef SP4_HEADER_ALGEBRA_H_
#define SP4_HEADER_ALGEBRA_H_

#include <array>
#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace sp4 {

// At most this many declared instances per program; inner denotation sets are
// fixed-width bitsets over the declared-instance universe.
inline constexpr int kMaxInstances = 256;

inline constexpr std::size_t kDefaultDenotationCap = 1u << 16;

enum class TypeKind { kZero, kOne, kInstance, kConcat, kChoice };

struct HType;
// Immutable, shareable term; all algebra functions are pure.
using HeaderType = std::shared_ptr<const HType>;

struct HType {
  TypeKind kind;
  std::string instance;  // kInstance only
  HeaderType left;       // kConcat / kChoice
  HeaderType right;      // kConcat / kChoice
};

HeaderType ht_zero();
HeaderType ht_one();
HeaderType ht_instance(std::string name);
HeaderType ht_concat(HeaderType l, HeaderType r);
HeaderType ht_choice(HeaderType l, HeaderType r);

// Concat / choice over a whole list; empty lists give the unit (1 resp. 0).
HeaderType ht_concat_all(const std::vector<HeaderType>& ts);
HeaderType ht_choice_all(const std::vector<HeaderType>& ts);

// Structural (syntactic) equality. Type comparisons elsewhere are semantic;
// this exists for the normalize rewrite "T+T -> T" and for tests.
bool structurally_equal(const HeaderType& a, const HeaderType& b);

// Declared-instance universe, in declaration order. Lookup is by name.
class InstanceUniverse {
 public:
  InstanceUniverse() = default;
  explicit InstanceUniverse(std::vector<std::string> names);

  // Returns false when the universe is full (kMaxInstances).
  bool add(const std::string& name);
  std::optional<int> index_of(const std::string& name) const;
  const std::string& name_of(int index) const { return names_[index]; }
  int size() const { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& names() const { return names_; }

 private:
  std::vector<std::string> names_;
};

// One alternative of co-valid instances, as a bitset over the universe.
struct InstanceSet {
  std::array<std::uint64_t, kMaxInstances / 64> words{};

  void set(int i) { words[i / 64] |= std::uint64_t{1} << (i % 64); }
  void reset(int i) { words[i / 64] &= ~(std::uint64_t{1} << (i % 64)); }
  bool test(int i) const {
    return (words[i / 64] >> (i % 64)) & std::uint64_t{1};
  }
  bool empty() const;
  int count() const;
  bool is_subset_of(const InstanceSet& other) const;
  InstanceSet union_with(const InstanceSet& other) const;

  auto operator<=>(const InstanceSet&) const = default;
};

InstanceSet make_instance_set(const InstanceUniverse& u,
                              const std::vector<std::string>& names);
std::vector<std::string> instance_set_names(const InstanceUniverse& u,
                                            const InstanceSet& s);

// Canonical denotation: sorted, deduplicated alternatives.
struct Denotation {
  std::vector<InstanceSet> alts;

  bool contains(const InstanceSet& s) const;
  bool is_subset_of(const Denotation& other) const;
  bool operator==(const Denotation&) const = default;
};

Denotation make_denotation(std::vector<InstanceSet> alts);

// Exact set-of-sets semantics. Returns nullopt when the number of
// alternatives would exceed `cap` (a resource diagnostic upstream, never a
// truncated answer).
std::optional<Denotation> denote(const HeaderType& t, const InstanceUniverse& u,
                                 std::size_t cap = kDefaultDenotationCap);

// Keeps only alternatives containing h: [[restrict(T,h)]] = {A in [[T]] | h in A}.
HeaderType restrict(const HeaderType& t, const std::string& h);

// Keeps only alternatives not containing h.
HeaderType neg_restrict(const HeaderType& t, const std::string& h);

// True iff h is valid in every alternative and the denotation is nonempty;
// by definition false on 0 and on 1.
bool includes(const HeaderType& t, const std::string& h);

// Drops h from every alternative: [[remove(T,h)]] = {A \ {h} | A in [[T]]}.
HeaderType remove(const HeaderType& t, const std::string& h);

// True iff the denotation is the empty set of alternatives.
bool is_empty(const HeaderType& t);

// Fold of restrict over every name in S (order-independent).
HeaderType restrict_all(const HeaderType& t, const std::set<std::string>& hs);

// Denotation-preserving simplification: 0.T -> 0, T.0 -> 0, 1.T -> T,
// T.1 -> T, 0+T -> T, T+0 -> T, T+T -> T (syntactic equality), with
// flattened right-associated concat/choice spines.
HeaderType normalize(const HeaderType& t);

// True iff valid_set is one of T's alternatives.
bool entails(const std::set<std::string>& valid_set, const HeaderType& t,
             const InstanceUniverse& u);

// True iff [[t1]] is a subset of [[t2]].
bool subtype(const HeaderType& t1, const HeaderType& t2,
             const InstanceUniverse& u);

// Semantic equality: equal denotations.
bool type_equal(const HeaderType& t1, const HeaderType& t2,
                const InstanceUniverse& u);

// Textual notation: 0, 1, names, '.', '+', parentheses. '.' binds tighter.
std::string print_type(const HeaderType& t);

// Parses the print_type notation; returns nullopt on malformed input.
std::optional<HeaderType> parse_type(const std::string& text);

}  // namespace sp4

#endif  // SP4_HEADER_ALGEBRA_H_
