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

#include "sp4/header_algebra.h"

#include <algorithm>
#include <bit>
#include <cctype>
#include <utility>

namespace sp4 {

namespace {

HeaderType make_node(TypeKind kind, std::string instance, HeaderType left,
                     HeaderType right) {
  HType node;
  node.kind = kind;
  node.instance = std::move(instance);
  node.left = std::move(left);
  node.right = std::move(right);
  return std::make_shared<const HType>(std::move(node));
}

}  // namespace

HeaderType ht_zero() {
  static const HeaderType kZero = make_node(TypeKind::kZero, {}, {}, {});
  return kZero;
}

HeaderType ht_one() {
  static const HeaderType kOne = make_node(TypeKind::kOne, {}, {}, {});
  return kOne;
}

HeaderType ht_instance(std::string name) {
  return make_node(TypeKind::kInstance, std::move(name), {}, {});
}

HeaderType ht_concat(HeaderType l, HeaderType r) {
  return make_node(TypeKind::kConcat, {}, std::move(l), std::move(r));
}

HeaderType ht_choice(HeaderType l, HeaderType r) {
  return make_node(TypeKind::kChoice, {}, std::move(l), std::move(r));
}

HeaderType ht_concat_all(const std::vector<HeaderType>& ts) {
  if (ts.empty()) return ht_one();
  HeaderType acc = ts.back();
  for (auto it = std::next(ts.rbegin()); it != ts.rend(); ++it) {
    acc = ht_concat(*it, acc);
  }
  return acc;
}

HeaderType ht_choice_all(const std::vector<HeaderType>& ts) {
  if (ts.empty()) return ht_zero();
  HeaderType acc = ts.back();
  for (auto it = std::next(ts.rbegin()); it != ts.rend(); ++it) {
    acc = ht_choice(*it, acc);
  }
  return acc;
}

bool structurally_equal(const HeaderType& a, const HeaderType& b) {
  if (a.get() == b.get()) return true;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case TypeKind::kZero:
    case TypeKind::kOne:
      return true;
    case TypeKind::kInstance:
      return a->instance == b->instance;
    case TypeKind::kConcat:
    case TypeKind::kChoice:
      return structurally_equal(a->left, b->left) &&
             structurally_equal(a->right, b->right);
  }
  return false;
}

InstanceUniverse::InstanceUniverse(std::vector<std::string> names)
    : names_(std::move(names)) {}

bool InstanceUniverse::add(const std::string& name) {
  if (size() >= kMaxInstances) return false;
  names_.push_back(name);
  return true;
}

std::optional<int> InstanceUniverse::index_of(const std::string& name) const {
  for (int i = 0; i < size(); ++i) {
    if (names_[i] == name) return i;
  }
  return std::nullopt;
}

bool InstanceSet::empty() const {
  for (std::uint64_t w : words) {
    if (w != 0) return false;
  }
  return true;
}

int InstanceSet::count() const {
  int n = 0;
  for (std::uint64_t w : words) n += std::popcount(w);
  return n;
}

bool InstanceSet::is_subset_of(const InstanceSet& other) const {
  for (std::size_t i = 0; i < words.size(); ++i) {
    if ((words[i] & ~other.words[i]) != 0) return false;
  }
  return true;
}

InstanceSet InstanceSet::union_with(const InstanceSet& other) const {
  InstanceSet out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    out.words[i] = words[i] | other.words[i];
  }
  return out;
}

InstanceSet make_instance_set(const InstanceUniverse& u,
                              const std::vector<std::string>& names) {
  InstanceSet s;
  for (const std::string& n : names) {
    if (auto i = u.index_of(n)) s.set(*i);
  }
  return s;
}

std::vector<std::string> instance_set_names(const InstanceUniverse& u,
                                            const InstanceSet& s) {
  std::vector<std::string> out;
  for (int i = 0; i < u.size(); ++i) {
    if (s.test(i)) out.push_back(u.name_of(i));
  }
  return out;
}

bool Denotation::contains(const InstanceSet& s) const {
  return std::binary_search(alts.begin(), alts.end(), s);
}

bool Denotation::is_subset_of(const Denotation& other) const {
  for (const InstanceSet& a : alts) {
    if (!other.contains(a)) return false;
  }
  return true;
}

Denotation make_denotation(std::vector<InstanceSet> alts) {
  std::sort(alts.begin(), alts.end());
  alts.erase(std::unique(alts.begin(), alts.end()), alts.end());
  return Denotation{std::move(alts)};
}

namespace {

// Pairwise product loops are bounded independently of how well alternatives
// deduplicate, so adversarial terms fail fast instead of spinning.
bool denote_rec(const HeaderType& t, const InstanceUniverse& u,
                std::size_t cap, std::size_t work_limit, Denotation* out) {
  switch (t->kind) {
    case TypeKind::kZero:
      out->alts.clear();
      return true;
    case TypeKind::kOne:
      out->alts = {InstanceSet{}};
      return true;
    case TypeKind::kInstance: {
      auto idx = u.index_of(t->instance);
      InstanceSet s;
      if (idx) s.set(*idx);
      out->alts = {s};
      return true;
    }
    case TypeKind::kConcat: {
      Denotation l, r;
      if (!denote_rec(t->left, u, cap, work_limit, &l)) return false;
      if (!denote_rec(t->right, u, cap, work_limit, &r)) return false;
      if (l.alts.size() * r.alts.size() > work_limit) return false;
      std::vector<InstanceSet> prod;
      prod.reserve(l.alts.size() * r.alts.size());
      for (const InstanceSet& a : l.alts) {
        for (const InstanceSet& b : r.alts) {
          prod.push_back(a.union_with(b));
        }
      }
      *out = make_denotation(std::move(prod));
      return out->alts.size() <= cap;
    }
    case TypeKind::kChoice: {
      Denotation l, r;
      if (!denote_rec(t->left, u, cap, work_limit, &l)) return false;
      if (!denote_rec(t->right, u, cap, work_limit, &r)) return false;
      std::vector<InstanceSet> both = std::move(l.alts);
      both.insert(both.end(), r.alts.begin(), r.alts.end());
      *out = make_denotation(std::move(both));
      return out->alts.size() <= cap;
    }
  }
  return false;
}

}  // namespace

std::optional<Denotation> denote(const HeaderType& t, const InstanceUniverse& u,
                                 std::size_t cap) {
  Denotation d;
  std::size_t work_limit = std::max<std::size_t>(cap * 64, 1u << 22);
  if (!denote_rec(t, u, cap, work_limit, &d)) return std::nullopt;
  return d;
}

HeaderType restrict(const HeaderType& t, const std::string& h) {
  switch (t->kind) {
    case TypeKind::kZero:
      return ht_zero();
    case TypeKind::kOne:
      return ht_zero();
    case TypeKind::kInstance:
      return t->instance == h ? t : ht_zero();
    case TypeKind::kConcat:
      return ht_choice(ht_concat(restrict(t->left, h), t->right),
                       ht_concat(t->left, restrict(t->right, h)));
    case TypeKind::kChoice:
      return ht_choice(restrict(t->left, h), restrict(t->right, h));
  }
  return ht_zero();
}

HeaderType neg_restrict(const HeaderType& t, const std::string& h) {
  switch (t->kind) {
    case TypeKind::kZero:
      return ht_zero();
    case TypeKind::kOne:
      return ht_one();
    case TypeKind::kInstance:
      return t->instance == h ? ht_zero() : t;
    case TypeKind::kConcat:
      return ht_concat(neg_restrict(t->left, h), neg_restrict(t->right, h));
    case TypeKind::kChoice:
      return ht_choice(neg_restrict(t->left, h), neg_restrict(t->right, h));
  }
  return ht_zero();
}

namespace {

// Syntactic recursion, sound only on terms with no syntactic 0 subterm;
// includes() normalizes first to establish that.
bool includes_nonzero(const HeaderType& t, const std::string& h) {
  switch (t->kind) {
    case TypeKind::kZero:
      return false;
    case TypeKind::kOne:
      return false;
    case TypeKind::kInstance:
      return t->instance == h;
    case TypeKind::kConcat:
      return includes_nonzero(t->left, h) || includes_nonzero(t->right, h);
    case TypeKind::kChoice:
      return includes_nonzero(t->left, h) && includes_nonzero(t->right, h);
  }
  return false;
}

}  // namespace

bool includes(const HeaderType& t, const std::string& h) {
  return includes_nonzero(normalize(t), h);
}

HeaderType remove(const HeaderType& t, const std::string& h) {
  switch (t->kind) {
    case TypeKind::kZero:
      return ht_zero();
    case TypeKind::kOne:
      return ht_one();
    case TypeKind::kInstance:
      return t->instance == h ? ht_one() : t;
    case TypeKind::kConcat:
      return ht_concat(remove(t->left, h), remove(t->right, h));
    case TypeKind::kChoice:
      return ht_choice(remove(t->left, h), remove(t->right, h));
  }
  return ht_zero();
}

bool is_empty(const HeaderType& t) {
  switch (t->kind) {
    case TypeKind::kZero:
      return true;
    case TypeKind::kOne:
    case TypeKind::kInstance:
      return false;
    case TypeKind::kConcat:
      // A concatenation is empty when either factor is.
      return is_empty(t->left) || is_empty(t->right);
    case TypeKind::kChoice:
      return is_empty(t->left) && is_empty(t->right);
  }
  return false;
}

HeaderType restrict_all(const HeaderType& t, const std::set<std::string>& hs) {
  HeaderType acc = t;
  for (const std::string& h : hs) acc = restrict(acc, h);
  return acc;
}

namespace {

void flatten_spine(const HeaderType& t, TypeKind kind,
                   std::vector<HeaderType>* out) {
  if (t->kind == kind) {
    flatten_spine(t->left, kind, out);
    flatten_spine(t->right, kind, out);
  } else {
    out->push_back(t);
  }
}

}  // namespace

HeaderType normalize(const HeaderType& t) {
  switch (t->kind) {
    case TypeKind::kZero:
    case TypeKind::kOne:
    case TypeKind::kInstance:
      return t;
    case TypeKind::kConcat: {
      HeaderType l = normalize(t->left);
      HeaderType r = normalize(t->right);
      std::vector<HeaderType> factors;
      flatten_spine(l, TypeKind::kConcat, &factors);
      flatten_spine(r, TypeKind::kConcat, &factors);
      std::vector<HeaderType> kept;
      for (const HeaderType& f : factors) {
        if (f->kind == TypeKind::kZero) return ht_zero();
        if (f->kind == TypeKind::kOne) continue;
        kept.push_back(f);
      }
      return ht_concat_all(kept);
    }
    case TypeKind::kChoice: {
      HeaderType l = normalize(t->left);
      HeaderType r = normalize(t->right);
      std::vector<HeaderType> alts;
      flatten_spine(l, TypeKind::kChoice, &alts);
      flatten_spine(r, TypeKind::kChoice, &alts);
      std::vector<HeaderType> kept;
      for (const HeaderType& a : alts) {
        if (a->kind == TypeKind::kZero) continue;
        bool dup = false;
        for (const HeaderType& k : kept) {
          if (structurally_equal(a, k)) {
            dup = true;
            break;
          }
        }
        if (!dup) kept.push_back(a);
      }
      return ht_choice_all(kept);
    }
  }
  return t;
}

bool entails(const std::set<std::string>& valid_set, const HeaderType& t,
             const InstanceUniverse& u) {
  InstanceSet s;
  for (const std::string& n : valid_set) {
    auto i = u.index_of(n);
    if (!i) return false;
    s.set(*i);
  }
  auto d = denote(t, u);
  return d.has_value() && d->contains(s);
}

bool subtype(const HeaderType& t1, const HeaderType& t2,
             const InstanceUniverse& u) {
  auto d1 = denote(t1, u);
  auto d2 = denote(t2, u);
  if (!d1 || !d2) return false;
  return d1->is_subset_of(*d2);
}

bool type_equal(const HeaderType& t1, const HeaderType& t2,
                const InstanceUniverse& u) {
  auto d1 = denote(t1, u);
  auto d2 = denote(t2, u);
  if (!d1 || !d2) return false;
  return *d1 == *d2;
}

namespace {

void print_rec(const HeaderType& t, int parent_prec, std::string* out) {
  switch (t->kind) {
    case TypeKind::kZero:
      *out += '0';
      return;
    case TypeKind::kOne:
      *out += '1';
      return;
    case TypeKind::kInstance:
      *out += t->instance;
      return;
    case TypeKind::kConcat: {
      bool paren = parent_prec > 1;
      if (paren) *out += '(';
      print_rec(t->left, 2, out);
      *out += '.';
      print_rec(t->right, 1, out);
      if (paren) *out += ')';
      return;
    }
    case TypeKind::kChoice: {
      bool paren = parent_prec > 0;
      if (paren) *out += '(';
      print_rec(t->left, 1, out);
      *out += '+';
      print_rec(t->right, 0, out);
      if (paren) *out += ')';
      return;
    }
  }
}

struct TypeParser {
  const std::string& text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  bool eat(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  // Right-associative, mirroring the printer's spine shape.
  std::optional<HeaderType> parse_choice() {
    auto l = parse_concat();
    if (!l) return std::nullopt;
    if (eat('+')) {
      auto r = parse_choice();
      if (!r) return std::nullopt;
      return ht_choice(*l, *r);
    }
    return l;
  }

  std::optional<HeaderType> parse_concat() {
    auto l = parse_atom();
    if (!l) return std::nullopt;
    if (eat('.')) {
      auto r = parse_concat();
      if (!r) return std::nullopt;
      return ht_concat(*l, *r);
    }
    return l;
  }

  std::optional<HeaderType> parse_atom() {
    skip_ws();
    if (pos >= text.size()) return std::nullopt;
    char c = text[pos];
    if (c == '0') {
      ++pos;
      return ht_zero();
    }
    if (c == '1') {
      ++pos;
      return ht_one();
    }
    if (c == '(') {
      ++pos;
      auto inner = parse_choice();
      if (!inner || !eat(')')) return std::nullopt;
      return inner;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos;
      while (pos < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[pos])) ||
              text[pos] == '_')) {
        ++pos;
      }
      return ht_instance(text.substr(start, pos - start));
    }
    return std::nullopt;
  }
};

}  // namespace

std::string print_type(const HeaderType& t) {
  std::string out;
  print_rec(t, 0, &out);
  return out;
}

std::optional<HeaderType> parse_type(const std::string& text) {
  TypeParser p{text};
  auto t = p.parse_choice();
  if (!t) return std::nullopt;
  p.skip_ws();
  if (p.pos != text.size()) return std::nullopt;
  return t;
}

}  // namespace sp4
