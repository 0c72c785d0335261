// Copyright 2026 The grlt Authors
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

#pragma once

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace grlt {

/// Index of a group element. Element 0 is always the identity.
using Element = int;

/// One letter of a word: a generator (by position in Group::generators())
/// raised to a nonzero power.
struct Letter {
  int generator = 0;
  int exponent = 1;

  friend bool operator==(const Letter&, const Letter&) = default;
};

/// A word in the generators. Stored in normal form: adjacent letters on the
/// same generator are merged and zero exponents are dropped.
class Word {
 public:
  Word() = default;
  Word(std::initializer_list<Letter> letters);
  explicit Word(std::vector<Letter> letters);

  const std::vector<Letter>& letters() const { return letters_; }
  bool empty() const { return letters_.empty(); }

  /// Total number of generator applications, sum of |exponent|.
  int length() const;

  friend bool operator==(const Word&, const Word&) = default;

 private:
  std::vector<Letter> letters_;
};

/// Structural description of a group as produced by the constructors below.
/// Character tables and named representations dispatch on it.
struct GroupSpec {
  enum class Kind { cyclic, dihedral, symmetric, product, octahedral, custom };

  Kind kind = Kind::custom;
  int n = 0;
  std::vector<GroupSpec> factors;  // product only: exactly two

  static GroupSpec cyclic(int n) { return {Kind::cyclic, n, {}}; }
  static GroupSpec dihedral(int n) { return {Kind::dihedral, n, {}}; }
  static GroupSpec symmetric(int n) { return {Kind::symmetric, n, {}}; }
  static GroupSpec octahedral() { return {Kind::octahedral, 0, {}}; }
  static GroupSpec product(GroupSpec a, GroupSpec b) {
    return {Kind::product, 0, {std::move(a), std::move(b)}};
  }

  /// Nesting depth of product constructors (0 for non-products).
  int product_depth() const;

  /// Short name, e.g. "C4", "D3", "S4", "D4xD4", "O".
  std::string name() const;

  /// Parses "c4", "d3", "s4", "o", "product:d4,d4" or "d4*d4*c2".
  static GroupSpec parse(std::string_view text);

  friend bool operator==(const GroupSpec&, const GroupSpec&) = default;
};

/// A finite group given by its multiplication table, with a designated list
/// of generators and relator words.
///
/// Groups are immutable once constructed and are shared through GroupPtr.
class Group {
 public:
  /// Wraps a raw table without validating the group axioms (use
  /// verify_group for that). The table must be order x order with entries in
  /// range; element 0 is taken as the identity.
  static std::shared_ptr<const Group> from_table(
      std::string name, std::vector<std::vector<Element>> table,
      std::vector<Element> generators, std::vector<Word> relators,
      GroupSpec spec = {});

  const std::string& name() const { return name_; }
  int order() const { return order_; }
  const GroupSpec& spec() const { return spec_; }

  static constexpr Element identity() { return 0; }

  Element mul(Element a, Element b) const {
    return table_[static_cast<std::size_t>(a) * order_ + b];
  }
  /// Inverse of g, or -1 when the table has no inverse for g.
  Element inverse(Element g) const { return inverse_[g]; }
  Element power(Element g, int exponent) const;

  const std::vector<Element>& generators() const { return generators_; }
  const std::vector<Word>& relators() const { return relators_; }
  const std::vector<std::vector<Element>>& conjugacy_classes() const {
    return classes_;
  }

  /// A shortest word in the generators evaluating to g. Empty for the
  /// identity. Throws ContractError if g is not reachable.
  const Word& word_for(Element g) const;

  /// Index of the conjugacy class containing g.
  int class_of(Element g) const { return class_of_[g]; }

  /// The table as rows, for serialization and tests.
  std::vector<std::vector<Element>> table() const;

 private:
  Group() = default;

  std::string name_;
  int order_ = 0;
  std::vector<Element> table_;
  std::vector<Element> inverse_;
  std::vector<Element> generators_;
  std::vector<Word> relators_;
  std::vector<std::vector<Element>> classes_;
  std::vector<int> class_of_;
  std::vector<Word> words_;
  std::vector<bool> reachable_;
  GroupSpec spec_;
};

using GroupPtr = std::shared_ptr<const Group>;

/// Builds one of the supported families. Element indexing is fixed:
///  - cyclic(n): element k is k mod n, generator 1.
///  - dihedral(n): element k + n*f is r^k s^f; generators (r, s) with
///    relators r^n, s^2, (rs)^2. dihedral(1) is presented as {a | a^2}.
///  - symmetric(n): permutations in lexicographic order, composition
///    (pq)(i) = p(q(i)); generators the transposition (0 1) and the n-cycle.
///  - product(G, H): element g + |G|*h; generators of G then of H.
GroupPtr build_group(const GroupSpec& spec);
GroupPtr cyclic(int n);
GroupPtr dihedral(int n);
GroupPtr symmetric(int n);
GroupPtr product(const GroupPtr& a, const GroupPtr& b);

/// Permutations of {0..n-1} in the element order used by symmetric(n):
/// entry e is the image array of element e.
std::vector<std::vector<int>> symmetric_permutations(int n);

/// Left-to-right product of generator powers; negative exponents use
/// inverses. Throws IndexError on an out-of-range generator position.
Element evaluate_word(const Group& group, const Word& word);

/// Partition of the elements into conjugacy classes, each sorted, classes
/// ordered by their smallest element.
std::vector<std::vector<Element>> conjugacy_classes(const Group& group);

struct GroupDiagnostics {
  bool latin_square = true;
  bool associative = true;
  bool identity = true;
  bool inverses = true;
  bool relators = true;
  bool generates = true;
  std::vector<std::string> failures;

  bool ok() const {
    return latin_square && associative && identity && inverses && relators &&
           generates;
  }
};

/// Checks every group invariant exhaustively. Never throws on failures.
GroupDiagnostics verify_group(const Group& group);

/// Text format: `group <name> <order>`, the table rows, a `generators` line,
/// a `relators <count>` line and one relator per line as signed 1-based
/// generator letters (-k is the inverse of generator k).
void write_group(std::ostream& out, const Group& group);
GroupPtr read_group(std::istream& in);

}  // namespace grlt
