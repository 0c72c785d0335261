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

#include "grlt/group.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <deque>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "grlt/errors.hpp"
#include "grlt/octahedral.hpp"

namespace grlt {

namespace {

constexpr int kMaxSymmetric = 5;
constexpr int kMaxProductDepth = 4;
constexpr int kMaxOrder = 4096;

std::vector<Letter> normalize(std::vector<Letter> letters) {
  std::vector<Letter> out;
  out.reserve(letters.size());
  for (const Letter& l : letters) {
    if (l.exponent == 0) continue;
    if (!out.empty() && out.back().generator == l.generator) {
      out.back().exponent += l.exponent;
      if (out.back().exponent == 0) out.pop_back();
    } else {
      out.push_back(l);
    }
  }
  return out;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

Word::Word(std::initializer_list<Letter> letters)
    : letters_(normalize(std::vector<Letter>(letters))) {}

Word::Word(std::vector<Letter> letters) : letters_(normalize(std::move(letters))) {}

int Word::length() const {
  int n = 0;
  for (const Letter& l : letters_) n += std::abs(l.exponent);
  return n;
}

int GroupSpec::product_depth() const {
  if (kind != Kind::product) return 0;
  int depth = 0;
  for (const GroupSpec& f : factors) depth = std::max(depth, f.product_depth());
  return depth + 1;
}

std::string GroupSpec::name() const {
  switch (kind) {
    case Kind::cyclic:
      return "C" + std::to_string(n);
    case Kind::dihedral:
      return "D" + std::to_string(n);
    case Kind::symmetric:
      return "S" + std::to_string(n);
    case Kind::octahedral:
      return "O";
    case Kind::product:
      return factors.at(0).name() + "x" + factors.at(1).name();
    case Kind::custom:
      break;
  }
  return "custom";
}

GroupSpec GroupSpec::parse(std::string_view text) {
  std::string s = lower(text);
  std::vector<std::string> parts;
  auto split = [&parts](const std::string& body, char sep) {
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, sep)) parts.push_back(item);
  };
  if (s.rfind("product:", 0) == 0) {
    split(s.substr(8), ',');
  } else if (s.find('*') != std::string::npos) {
    split(s, '*');
  } else if (s.find('x') != std::string::npos) {
    split(s, 'x');
  }
  if (!parts.empty()) {
    if (parts.size() < 2) throw ConfigError("product needs at least two factors: '" + s + "'");
    GroupSpec acc = parse(parts[0]);
    for (std::size_t i = 1; i < parts.size(); ++i) acc = product(acc, parse(parts[i]));
    return acc;
  }
  if (s == "o" || s == "octahedral") return octahedral();
  if (s.size() < 2) throw ConfigError("unrecognized group spec '" + std::string(text) + "'");
  int n = 0;
  const std::string digits = s.substr(1);
  if (!std::all_of(digits.begin(), digits.end(),
                   [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
    throw ConfigError("unrecognized group spec '" + std::string(text) + "'");
  }
  n = std::stoi(digits);
  switch (s[0]) {
    case 'c':
      return cyclic(n);
    case 'd':
      return dihedral(n);
    case 's':
      return symmetric(n);
    default:
      throw ConfigError("unrecognized group spec '" + std::string(text) + "'");
  }
}

std::shared_ptr<const Group> Group::from_table(std::string name,
                                               std::vector<std::vector<Element>> table,
                                               std::vector<Element> generators,
                                               std::vector<Word> relators, GroupSpec spec) {
  const int order = static_cast<int>(table.size());
  if (order < 1) throw ConfigError("group table must be nonempty");
  auto g = std::shared_ptr<Group>(new Group());
  g->name_ = std::move(name);
  g->order_ = order;
  g->spec_ = std::move(spec);
  g->table_.reserve(static_cast<std::size_t>(order) * order);
  for (const auto& row : table) {
    if (static_cast<int>(row.size()) != order) throw ShapeError("group table must be square");
    for (Element e : row) {
      if (e < 0 || e >= order) throw IndexError("group table entry out of range");
      g->table_.push_back(e);
    }
  }
  for (Element e : generators) {
    if (e < 0 || e >= order) throw IndexError("generator index out of range");
  }
  g->generators_ = std::move(generators);
  for (const Word& w : relators) {
    for (const Letter& l : w.letters()) {
      if (l.generator < 0 || l.generator >= static_cast<int>(g->generators_.size())) {
        throw IndexError("relator references unknown generator position " +
                         std::to_string(l.generator));
      }
    }
  }
  g->relators_ = std::move(relators);

  g->inverse_.assign(order, -1);
  for (Element a = 0; a < order; ++a) {
    for (Element b = 0; b < order; ++b) {
      if (g->mul(a, b) == identity() && g->mul(b, a) == identity()) {
        g->inverse_[a] = b;
        break;
      }
    }
  }

  // Shortest positive words by breadth-first search over right multiplication.
  g->words_.assign(order, Word{});
  g->reachable_.assign(order, false);
  g->reachable_[0] = true;
  std::deque<Element> queue{0};
  while (!queue.empty()) {
    const Element cur = queue.front();
    queue.pop_front();
    for (int k = 0; k < static_cast<int>(g->generators_.size()); ++k) {
      const Element next = g->mul(cur, g->generators_[k]);
      if (g->reachable_[next]) continue;
      g->reachable_[next] = true;
      std::vector<Letter> letters = g->words_[cur].letters();
      letters.push_back({k, 1});
      g->words_[next] = Word(std::move(letters));
      queue.push_back(next);
    }
  }

  g->classes_ = grlt::conjugacy_classes(*g);
  g->class_of_.assign(order, -1);
  for (int c = 0; c < static_cast<int>(g->classes_.size()); ++c) {
    for (Element e : g->classes_[c]) g->class_of_[e] = c;
  }
  return g;
}

Element Group::power(Element g, int exponent) const {
  Element base = g;
  if (exponent < 0) {
    base = inverse(g);
    if (base < 0) throw ContractError("element has no inverse in table");
    exponent = -exponent;
  }
  Element acc = identity();
  for (int i = 0; i < exponent; ++i) acc = mul(acc, base);
  return acc;
}

const Word& Group::word_for(Element g) const {
  if (g < 0 || g >= order_) throw IndexError("element index out of range");
  if (!reachable_[g]) {
    throw ContractError("element " + std::to_string(g) + " is not generated by the generators");
  }
  return words_[g];
}

std::vector<std::vector<Element>> Group::table() const {
  std::vector<std::vector<Element>> rows(order_, std::vector<Element>(order_));
  for (Element a = 0; a < order_; ++a)
    for (Element b = 0; b < order_; ++b) rows[a][b] = mul(a, b);
  return rows;
}

Element evaluate_word(const Group& group, const Word& word) {
  Element acc = Group::identity();
  const int ngen = static_cast<int>(group.generators().size());
  for (const Letter& l : word.letters()) {
    if (l.generator < 0 || l.generator >= ngen) {
      throw IndexError("word references generator position " + std::to_string(l.generator) +
                       " but the group has " + std::to_string(ngen));
    }
    acc = group.mul(acc, group.power(group.generators()[l.generator], l.exponent));
  }
  return acc;
}

std::vector<std::vector<Element>> conjugacy_classes(const Group& group) {
  const int n = group.order();
  std::vector<bool> seen(n, false);
  std::vector<std::vector<Element>> classes;
  for (Element g = 0; g < n; ++g) {
    if (seen[g]) continue;
    std::vector<Element> cls;
    for (Element h = 0; h < n; ++h) {
      const Element hinv = group.inverse(h);
      if (hinv < 0) continue;
      const Element c = group.mul(group.mul(h, g), hinv);
      if (!seen[c]) {
        seen[c] = true;
        cls.push_back(c);
      }
    }
    if (cls.empty()) {
      seen[g] = true;
      cls.push_back(g);
    }
    std::sort(cls.begin(), cls.end());
    classes.push_back(std::move(cls));
  }
  std::sort(classes.begin(), classes.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return classes;
}

GroupDiagnostics verify_group(const Group& group) {
  GroupDiagnostics d;
  const int n = group.order();
  auto fail = [&d](bool& flag, std::string msg) {
    if (flag) d.failures.push_back(std::move(msg));
    flag = false;
  };

  for (int i = 0; i < n; ++i) {
    std::vector<bool> row(n, false), col(n, false);
    for (int j = 0; j < n; ++j) {
      row[group.mul(i, j)] = true;
      col[group.mul(j, i)] = true;
    }
    if (std::find(row.begin(), row.end(), false) != row.end())
      fail(d.latin_square, "row " + std::to_string(i) + " is not a permutation");
    if (std::find(col.begin(), col.end(), false) != col.end())
      fail(d.latin_square, "column " + std::to_string(i) + " is not a permutation");
  }

  for (int a = 0; a < n && d.associative; ++a)
    for (int b = 0; b < n && d.associative; ++b)
      for (int c = 0; c < n; ++c) {
        if (group.mul(group.mul(a, b), c) != group.mul(a, group.mul(b, c))) {
          fail(d.associative, "associativity fails at (" + std::to_string(a) + "," +
                                  std::to_string(b) + "," + std::to_string(c) + ")");
          break;
        }
      }

  for (int g = 0; g < n; ++g) {
    if (group.mul(0, g) != g || group.mul(g, 0) != g)
      fail(d.identity, "element 0 is not a two-sided identity for " + std::to_string(g));
    const Element inv = group.inverse(g);
    if (inv < 0 || group.mul(g, inv) != 0)
      fail(d.inverses, "element " + std::to_string(g) + " has no inverse");
  }

  if (d.inverses) {
    for (std::size_t k = 0; k < group.relators().size(); ++k) {
      if (evaluate_word(group, group.relators()[k]) != 0)
        fail(d.relators, "relator " + std::to_string(k) + " does not evaluate to the identity");
    }
  } else if (!group.relators().empty()) {
    fail(d.relators, "relators not checkable without inverses");
  }

  std::vector<bool> reached(n, false);
  reached[0] = true;
  std::deque<Element> queue{0};
  int count = 1;
  while (!queue.empty()) {
    const Element cur = queue.front();
    queue.pop_front();
    for (Element gen : group.generators()) {
      const Element next = group.mul(cur, gen);
      if (!reached[next]) {
        reached[next] = true;
        ++count;
        queue.push_back(next);
      }
    }
  }
  if (count != n)
    fail(d.generates, "generators reach " + std::to_string(count) + " of " +
                          std::to_string(n) + " elements");
  return d;
}

GroupPtr cyclic(int n) {
  if (n < 1) throw SizeBoundError("cyclic group needs n >= 1");
  if (n > kMaxOrder) throw SizeBoundError("cyclic group order exceeds bound");
  std::vector<std::vector<Element>> t(n, std::vector<Element>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) t[a][b] = (a + b) % n;
  return Group::from_table(GroupSpec::cyclic(n).name(), std::move(t), {n > 1 ? 1 : 0},
                           {Word{{0, n}}}, GroupSpec::cyclic(n));
}

GroupPtr dihedral(int n) {
  if (n < 1) throw SizeBoundError("dihedral group needs n >= 1");
  if (2 * n > kMaxOrder) throw SizeBoundError("dihedral group order exceeds bound");
  const int order = 2 * n;
  auto index = [n](int k, int f) { return ((k % n) + n) % n + n * f; };
  std::vector<std::vector<Element>> t(order, std::vector<Element>(order));
  for (int a = 0; a < order; ++a) {
    for (int b = 0; b < order; ++b) {
      const int ka = a % n, fa = a / n, kb = b % n, fb = b / n;
      t[a][b] = index(ka + (fa ? -kb : kb), (fa + fb) % 2);
    }
  }
  const GroupSpec spec = GroupSpec::dihedral(n);
  if (n == 1) {
    return Group::from_table(spec.name(), std::move(t), {1}, {Word{{0, 2}}}, spec);
  }
  std::vector<Word> relators{Word{{0, n}}, Word{{1, 2}}, Word{{0, 1}, {1, 1}, {0, 1}, {1, 1}}};
  return Group::from_table(spec.name(), std::move(t), {1, n}, std::move(relators), spec);
}

std::vector<std::vector<int>> symmetric_permutations(int n) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<int>> perms;
  do {
    perms.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return perms;
}

GroupPtr symmetric(int n) {
  if (n < 1 || n > kMaxSymmetric)
    throw SizeBoundError("symmetric group supported for 1 <= n <= " +
                         std::to_string(kMaxSymmetric) + ", got " + std::to_string(n));
  const auto perms = symmetric_permutations(n);
  const int order = static_cast<int>(perms.size());
  auto find = [&perms](const std::vector<int>& p) {
    return static_cast<Element>(std::lower_bound(perms.begin(), perms.end(), p) - perms.begin());
  };
  std::vector<std::vector<Element>> t(order, std::vector<Element>(order));
  std::vector<int> c(n);
  for (int a = 0; a < order; ++a) {
    for (int b = 0; b < order; ++b) {
      for (int i = 0; i < n; ++i) c[i] = perms[a][perms[b][i]];
      t[a][b] = find(c);
    }
  }
  const GroupSpec spec = GroupSpec::symmetric(n);
  if (n == 1) return Group::from_table(spec.name(), std::move(t), {}, {}, spec);

  std::vector<int> swap(n), cycle(n);
  std::iota(swap.begin(), swap.end(), 0);
  std::swap(swap[0], swap[1]);
  for (int i = 0; i < n; ++i) cycle[i] = (i + 1) % n;
  if (n == 2) return Group::from_table(spec.name(), std::move(t), {find(swap)}, {Word{{0, 2}}}, spec);

  // <s, c | s^2, c^n, (sc)^(n-1), (s c^-j s c^j)^2 for 2 <= j <= n/2>
  std::vector<Word> relators{Word{{0, 2}}, Word{{1, n}}};
  std::vector<Letter> sc;
  for (int i = 0; i < n - 1; ++i) {
    sc.push_back({0, 1});
    sc.push_back({1, 1});
  }
  relators.emplace_back(std::move(sc));
  for (int j = 2; j <= n / 2; ++j) {
    relators.push_back(Word{{0, 1}, {1, -j}, {0, 1}, {1, j}, {0, 1}, {1, -j}, {0, 1}, {1, j}});
  }
  return Group::from_table(spec.name(), std::move(t), {find(swap), find(cycle)},
                           std::move(relators), spec);
}

GroupPtr product(const GroupPtr& a, const GroupPtr& b) {
  const GroupSpec spec = GroupSpec::product(a->spec(), b->spec());
  if (spec.product_depth() > kMaxProductDepth)
    throw ConfigError("product nesting depth " + std::to_string(spec.product_depth()) +
                      " exceeds " + std::to_string(kMaxProductDepth));
  const int na = a->order(), nb = b->order();
  if (na * nb > kMaxOrder) throw SizeBoundError("product group order exceeds bound");
  const int order = na * nb;
  std::vector<std::vector<Element>> t(order, std::vector<Element>(order));
  for (int x = 0; x < order; ++x)
    for (int y = 0; y < order; ++y)
      t[x][y] = a->mul(x % na, y % na) + na * b->mul(x / na, y / na);

  std::vector<Element> gens;
  for (Element g : a->generators()) gens.push_back(g);
  for (Element g : b->generators()) gens.push_back(na * g);
  const int offset = static_cast<int>(a->generators().size());

  std::vector<Word> relators = a->relators();
  for (const Word& w : b->relators()) {
    std::vector<Letter> shifted;
    for (Letter l : w.letters()) shifted.push_back({l.generator + offset, l.exponent});
    relators.emplace_back(std::move(shifted));
  }
  // Generators of different factors commute.
  for (int i = 0; i < offset; ++i)
    for (int j = offset; j < static_cast<int>(gens.size()); ++j)
      relators.push_back(Word{{i, 1}, {j, 1}, {i, -1}, {j, -1}});

  return Group::from_table(spec.name(), std::move(t), std::move(gens), std::move(relators), spec);
}

GroupPtr build_group(const GroupSpec& spec) {
  switch (spec.kind) {
    case GroupSpec::Kind::cyclic:
      return cyclic(spec.n);
    case GroupSpec::Kind::dihedral:
      return dihedral(spec.n);
    case GroupSpec::Kind::symmetric:
      return symmetric(spec.n);
    case GroupSpec::Kind::octahedral:
      return octahedral_rotations().group;
    case GroupSpec::Kind::product:
      if (spec.product_depth() > kMaxProductDepth)
        throw ConfigError("product nesting depth " + std::to_string(spec.product_depth()) +
                          " exceeds " + std::to_string(kMaxProductDepth));
      return product(build_group(spec.factors.at(0)), build_group(spec.factors.at(1)));
    case GroupSpec::Kind::custom:
      break;
  }
  throw ConfigError("cannot build a custom group from a spec");
}

void write_group(std::ostream& out, const Group& group) {
  out << "group " << group.name() << ' ' << group.order() << '\n';
  for (Element a = 0; a < group.order(); ++a) {
    for (Element b = 0; b < group.order(); ++b) out << (b ? " " : "") << group.mul(a, b);
    out << '\n';
  }
  out << "generators";
  for (Element g : group.generators()) out << ' ' << g;
  out << '\n' << "relators " << group.relators().size() << '\n';
  for (const Word& w : group.relators()) {
    bool first = true;
    for (const Letter& l : w.letters()) {
      const int letter = (l.generator + 1) * (l.exponent > 0 ? 1 : -1);
      for (int k = 0; k < std::abs(l.exponent); ++k) {
        out << (first ? "" : " ") << letter;
        first = false;
      }
    }
    out << '\n';
  }
}

GroupPtr read_group(std::istream& in) {
  auto offset = [&in]() {
    const auto pos = in.tellg();
    return pos < 0 ? std::size_t{0} : static_cast<std::size_t>(pos);
  };
  std::string tag, name;
  int order = 0;
  if (!(in >> tag >> name >> order) || tag != "group" || order < 1)
    throw FormatError("expected header 'group <name> <order>'", offset());
  std::vector<std::vector<Element>> table(order, std::vector<Element>(order));
  for (auto& row : table)
    for (auto& e : row)
      if (!(in >> e)) throw FormatError("truncated multiplication table", offset());
  if (!(in >> tag) || tag != "generators") throw FormatError("expected 'generators'", offset());
  std::string line;
  std::getline(in, line);
  std::vector<Element> gens;
  {
    std::istringstream ls(line);
    Element g;
    while (ls >> g) gens.push_back(g);
  }
  std::size_t count = 0;
  if (!(in >> tag >> count) || tag != "relators") throw FormatError("expected 'relators <n>'", offset());
  std::getline(in, line);
  std::vector<Word> relators;
  for (std::size_t k = 0; k < count; ++k) {
    if (!std::getline(in, line)) throw FormatError("truncated relator list", offset());
    std::istringstream ls(line);
    std::vector<Letter> letters;
    int v = 0;
    while (ls >> v) {
      if (v == 0) throw FormatError("relator letter 0 is invalid", offset());
      letters.push_back({std::abs(v) - 1, v > 0 ? 1 : -1});
    }
    relators.emplace_back(std::move(letters));
  }

  GroupSpec spec;
  try {
    GroupSpec parsed = GroupSpec::parse(name);
    if (parsed.name() == name) {
      GroupPtr reference = build_group(parsed);
      if (reference->table() == table && reference->generators() == gens &&
          reference->relators() == relators)
        spec = parsed;
    }
  } catch (const Error&) {
  }
  return Group::from_table(name, std::move(table), std::move(gens), std::move(relators), spec);
}

}  // namespace grlt
