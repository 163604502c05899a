#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "abtk/core.hpp"
#include "abtk/paths.hpp"
#include "abtk/poset.hpp"

namespace abtk {

/// Free-group word; entries are +-(index+1).
using Word = std::vector<int>;

inline void free_reduce(Word& w) {
  Word out;
  for (int x : w) {
    if (!out.empty() && out.back() == -x)
      out.pop_back();
    else
      out.push_back(x);
  }
  w = std::move(out);
}

inline Word inverse_word(const Word& w) {
  Word out;
  out.reserve(w.size());
  for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(-*it);
  return out;
}

inline void cyclic_reduce(Word& w) {
  free_reduce(w);
  while (w.size() >= 2 && w.front() == -w.back()) {
    w.erase(w.begin());
    w.pop_back();
    free_reduce(w);
  }
}

inline std::string word_to_string(const Word& w) {
  if (w.empty()) return "1";
  std::string s;
  for (int x : w) {
    if (!s.empty()) s += ' ';
    s += 'g' + std::to_string(std::abs(x) - 1);
    if (x < 0) s += "^-1";
  }
  return s;
}

enum class Homotopic { yes, no, unknown };

namespace detail {

inline long long rank_mod_p(std::vector<std::vector<long long>> m, long long p) {
  long long rank = 0;
  std::size_t rows = m.size();
  if (rows == 0) return 0;
  std::size_t cols = m[0].size();
  auto modinv = [&](long long a) {
    long long b = p - 2, r = 1;
    a %= p;
    while (b) {
      if (b & 1) r = r * a % p;
      a = a * a % p;
      b >>= 1;
    }
    return r;
  };
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < rows; ++col) {
    std::size_t piv = row;
    while (piv < rows && (m[piv][col] % p + p) % p == 0) ++piv;
    if (piv == rows) continue;
    std::swap(m[row], m[piv]);
    long long inv = modinv((m[row][col] % p + p) % p);
    for (std::size_t r2 = row + 1; r2 < rows; ++r2) {
      long long f = (m[r2][col] % p + p) % p * inv % p;
      if (!f) continue;
      for (std::size_t c2 = col; c2 < cols; ++c2)
        m[r2][c2] = ((m[r2][c2] - f * m[row][c2]) % p + p) % p;
    }
    ++row;
    ++rank;
  }
  return rank;
}

}  // namespace detail

/// Edge-path presentation of the fundamental group of the poset's order
/// complex: generators are the non-tree comparability edges, relators come
/// from inclusion chains o < a < c. A greedy Tietze pass eliminates
/// generators occurring once in some relator; on the shipped nets this
/// empties the relator set, leaving a free basis in which loop words are a
/// complete homotopy invariant.
class Pi1Presentation {
public:
  struct Edge {
    DiamondId sub, sup;  // canonical orientation: sub -> sup is exponent +1
    bool tree = false;
    int generator = -1;  // index among non-tree edges, -1 for tree edges
  };

  Pi1Presentation(const CausalPoset& p, DiamondId base) : poset_(&p), base_(base) {
    p.require(base);
    build_edges();
    build_tree();
    build_relators();
    abelianized_rank();
    tietze_reduce();
  }

  const CausalPoset& poset() const { return *poset_; }
  DiamondId base() const { return base_; }
  const std::vector<Edge>& edges() const { return edges_; }
  int generator_count() const { return gen_count_; }
  const std::vector<Word>& relators() const { return relators_; }
  int h1_rank() const { return h1_rank_; }
  bool reduces_to_free() const { return free_; }
  /// Surviving generator indices, the free basis when reduces_to_free().
  const std::vector<int>& basis() const { return basis_; }

  /// Word of one original generator in the reduced basis.
  const Word& generator_word(int gen) const { return expanded_[gen]; }

  /// Tree path base -> x.
  PosetPath tree_path(DiamondId x) const {
    poset_->require(x);
    std::vector<PathStep> steps;
    for (DiamondId at = x; at != base_; at = parent_[at]) {
      if (parent_[at] < 0) throw Error("poset not pathwise connected", std::to_string(x));
      steps.push_back({at, parent_[at]});
    }
    std::reverse(steps.begin(), steps.end());
    return PosetPath(*poset_, base_, std::move(steps));
  }

  /// Canonical loop at the base for an original generator: tree path to the
  /// edge, the edge itself, tree path back.
  PosetPath generator_loop(int gen) const {
    const Edge& e = edges_[gen_edges_[gen]];
    PosetPath up = tree_path(e.sub);
    PosetPath back = reverse_path(tree_path(e.sup));
    std::vector<PathStep> steps = up.steps();
    steps.push_back({e.sup, e.sub});
    steps.insert(steps.end(), back.steps().begin(), back.steps().end());
    return PosetPath(*poset_, base_, std::move(steps));
  }

  /// Raw word of a path: one +-generator per non-tree edge traversed.
  Word raw_word(const PosetPath& p) const {
    Word w;
    for (const auto& s : p.steps()) {
      if (s.source == s.target) continue;
      auto it = edge_lookup_.find(key(s.source, s.target));
      if (it == edge_lookup_.end()) throw Error("invalid path", "step on non-comparable pair");
      const Edge& e = edges_[it->second];
      if (e.tree) continue;
      int sign = (s.source == e.sub) ? +1 : -1;
      w.push_back(sign * (e.generator + 1));
    }
    free_reduce(w);
    return w;
  }

  /// Reduced word of a loop in the free basis. Loops based away from the
  /// presentation base are conjugated along the tree, which is free.
  Word loop_class(const PosetPath& p) const {
    if (!p.is_loop()) throw Error("not a loop at base");
    Word raw = raw_word(p);
    Word out;
    for (int x : raw) {
      const Word& gw = expanded_[std::abs(x) - 1];
      if (x > 0)
        out.insert(out.end(), gw.begin(), gw.end());
      else {
        Word inv = inverse_word(gw);
        out.insert(out.end(), inv.begin(), inv.end());
      }
    }
    free_reduce(out);
    return out;
  }

  Homotopic are_homotopic(const PosetPath& p, const PosetPath& q) const {
    Word wp = loop_class(p), wq = loop_class(q);
    if (wp == wq) return Homotopic::yes;
    return free_ ? Homotopic::no : Homotopic::unknown;
  }

private:
  static std::pair<DiamondId, DiamondId> key(DiamondId a, DiamondId b) {
    return {std::min(a, b), std::max(a, b)};
  }

  void build_edges() {
    const int n = poset_->size();
    for (DiamondId a = 0; a < n; ++a)
      for (DiamondId b = a + 1; b < n; ++b) {
        if (!poset_->comparable(a, b)) continue;
        Edge e;
        e.sub = poset_->leq(a, b) ? a : b;
        e.sup = poset_->leq(a, b) ? b : a;
        edge_lookup_[key(a, b)] = static_cast<int>(edges_.size());
        edges_.push_back(e);
      }
  }

  void build_tree() {
    const int n = poset_->size();
    parent_.assign(n, -1);
    std::vector<bool> seen(n, false);
    std::queue<DiamondId> q;
    q.push(base_);
    seen[base_] = true;
    while (!q.empty()) {
      DiamondId x = q.front();
      q.pop();
      for (DiamondId y : poset_->comparables(x))
        if (!seen[y]) {
          seen[y] = true;
          parent_[y] = x;
          edges_[edge_lookup_.at(key(x, y))].tree = true;
          q.push(y);
        }
    }
    for (int i = 0; i < n; ++i)
      if (!seen[i]) throw Error("poset not pathwise connected", std::to_string(i));
    for (auto& e : edges_)
      if (!e.tree) {
        e.generator = gen_count_++;
        gen_edges_.push_back(static_cast<int>(&e - edges_.data()));
      }
  }

  std::optional<int> edge_letter(DiamondId from, DiamondId to) const {
    const Edge& e = edges_[edge_lookup_.at(key(from, to))];
    if (e.tree) return std::nullopt;
    return (from == e.sub ? +1 : -1) * (e.generator + 1);
  }

  void build_relators() {
    const int n = poset_->size();
    for (DiamondId o = 0; o < n; ++o)
      for (DiamondId a = 0; a < n; ++a) {
        if (a == o || !poset_->leq(o, a)) continue;
        for (DiamondId c = 0; c < n; ++c) {
          if (c == a || c == o || !poset_->leq(a, c)) continue;
          Word w;  // o -> a -> c -> o
          if (auto l = edge_letter(o, a)) w.push_back(*l);
          if (auto l = edge_letter(a, c)) w.push_back(*l);
          if (auto l = edge_letter(c, o)) w.push_back(*l);
          free_reduce(w);
          if (!w.empty()) relators_.push_back(std::move(w));
        }
      }
    std::sort(relators_.begin(), relators_.end());
    relators_.erase(std::unique(relators_.begin(), relators_.end()), relators_.end());
  }

  void abelianized_rank() {
    std::vector<std::vector<long long>> m;
    for (const Word& r : relators_) {
      std::vector<long long> row(gen_count_, 0);
      for (int x : r) row[std::abs(x) - 1] += x > 0 ? 1 : -1;
      m.push_back(std::move(row));
    }
    long long rank = 0;
    if (!m.empty() && gen_count_ > 0)
      rank = std::max(detail::rank_mod_p(m, 1000000007LL), detail::rank_mod_p(m, 998244353LL));
    h1_rank_ = gen_count_ - static_cast<int>(rank);
  }

  void tietze_reduce() {
    std::vector<Word> rels = relators_;
    std::vector<bool> alive(gen_count_, true);
    elim_sub_.assign(gen_count_, Word{});
    bool changed = true;
    while (changed) {
      changed = false;
      for (Word& r : rels) cyclic_reduce(r);
      rels.erase(std::remove_if(rels.begin(), rels.end(), [](const Word& w) { return w.empty(); }),
                 rels.end());
      for (std::size_t ri = 0; ri < rels.size() && !changed; ++ri) {
        const Word& r = rels[ri];
        for (std::size_t pos = 0; pos < r.size(); ++pos) {
          int g = std::abs(r[pos]) - 1;
          int occurrences = 0;
          for (int x : r) occurrences += std::abs(x) - 1 == g;
          if (occurrences != 1) continue;
          // rotate so the g-letter leads: g^e v == 1  =>  g = v^-1 (e=+1) or v (e=-1)
          Word rot(r.begin() + pos, r.end());
          rot.insert(rot.end(), r.begin(), r.begin() + pos);
          Word v(rot.begin() + 1, rot.end());
          elim_sub_[g] = rot[0] > 0 ? inverse_word(v) : v;
          alive[g] = false;
          rels.erase(rels.begin() + ri);
          for (Word& other : rels) substitute(other, g, elim_sub_[g]);
          changed = true;
          break;
        }
      }
    }
    free_ = rels.empty();
    residual_relators_ = std::move(rels);
    for (int g = 0; g < gen_count_; ++g)
      if (alive[g]) basis_.push_back(g);
    std::vector<int> basis_pos(gen_count_, -1);
    for (std::size_t i = 0; i < basis_.size(); ++i) basis_pos[basis_[i]] = static_cast<int>(i);
    expanded_.assign(gen_count_, Word{});
    std::vector<char> state(gen_count_, 0);
    for (int g = 0; g < gen_count_; ++g) expand(g, alive, basis_pos, state);
  }

  static void substitute(Word& w, int gen, const Word& replacement) {
    Word out;
    for (int x : w) {
      if (std::abs(x) - 1 != gen) {
        out.push_back(x);
      } else if (x > 0) {
        out.insert(out.end(), replacement.begin(), replacement.end());
      } else {
        Word inv = inverse_word(replacement);
        out.insert(out.end(), inv.begin(), inv.end());
      }
    }
    free_reduce(out);
    w = std::move(out);
  }

  void expand(int g, const std::vector<bool>& alive, const std::vector<int>& basis_pos,
              std::vector<char>& state) {
    if (state[g] == 2) return;
    state[g] = 2;
    if (alive[g]) {
      expanded_[g] = {basis_pos[g] + 1};
      return;
    }
    Word out;
    for (int x : elim_sub_[g]) {
      int h = std::abs(x) - 1;
      expand(h, alive, basis_pos, state);
      if (x > 0)
        out.insert(out.end(), expanded_[h].begin(), expanded_[h].end());
      else {
        Word inv = inverse_word(expanded_[h]);
        out.insert(out.end(), inv.begin(), inv.end());
      }
    }
    free_reduce(out);
    expanded_[g] = std::move(out);
  }

  const CausalPoset* poset_;
  DiamondId base_;
  std::vector<Edge> edges_;
  std::map<std::pair<DiamondId, DiamondId>, int> edge_lookup_;
  std::vector<DiamondId> parent_;
  std::vector<int> gen_edges_;  // generator index -> edge index
  int gen_count_ = 0;
  std::vector<Word> relators_;
  std::vector<Word> residual_relators_;
  std::vector<Word> elim_sub_;
  std::vector<Word> expanded_;
  std::vector<int> basis_;
  int h1_rank_ = 0;
  bool free_ = false;
};

inline Pi1Presentation pi1_presentation(const CausalPoset& p, DiamondId base) {
  return Pi1Presentation(p, base);
}

/// Path-approximation of an edge curve in the base complex. Every curve edge
/// is covered by a diamond and consecutive covering diamonds are made
/// comparable through a sub-diamond of their overlap containing the shared
/// curve vertex.
inline PosetPath approximate_curve(const CausalPoset& P, const std::vector<VertexId>& curve,
                                   bool closed) {
  if (curve.empty()) throw Error("invalid curve", "no vertices");
  std::vector<VertexId> vs = curve;
  if (closed && vs.size() > 1 && vs.front() == vs.back()) vs.pop_back();
  for (VertexId v : vs)
    if (!P.base().has_vertex(v)) throw Error("invalid curve", "unknown vertex " + std::to_string(v));

  const int m = static_cast<int>(vs.size());
  if (m == 1 || std::all_of(vs.begin(), vs.end(), [&](VertexId v) { return v == vs[0]; })) {
    auto d = P.diamond_containing(vs[0]);
    if (!d) throw Error("cover too coarse", "vertex " + std::to_string(vs[0]));
    return PosetPath::trivial(P, *d);
  }

  const int segments = closed ? m : m - 1;
  std::vector<DiamondId> covers(segments);
  for (int i = 0; i < segments; ++i) {
    VertexId u = vs[i], v = vs[(i + 1) % m];
    if (!P.base().has_edge(u, v))
      throw Error("invalid curve", "vertices " + std::to_string(u) + "," + std::to_string(v) +
                                       " not joined by a base edge");
    auto d = P.diamond_containing_all({u, v});
    if (!d) throw Error("cover too coarse",
                        "segment " + std::to_string(u) + "-" + std::to_string(v));
    covers[i] = *d;
  }

  auto overlap_diamond = [&](DiamondId a, DiamondId b, VertexId at) {
    std::vector<VertexId> inter;
    const auto& sa = P.diamond(a).support;
    const auto& sb = P.diamond(b).support;
    std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(inter));
    auto d = P.diamond_within(inter, at);
    if (!d) throw Error("cover too coarse", "overlap at vertex " + std::to_string(at));
    return *d;
  };

  DiamondId start;
  if (closed)
    start = overlap_diamond(covers[segments - 1], covers[0], vs[0]);
  else {
    auto d = P.diamond_within(P.diamond(covers[0]).support, vs[0]);
    if (!d) throw Error("cover too coarse", "vertex " + std::to_string(vs[0]));
    start = *d;
  }

  std::vector<PathStep> steps;
  DiamondId at = start;
  auto push = [&](DiamondId to) {
    if (to != at) steps.push_back({to, at});
    at = to;
  };
  for (int i = 0; i < segments; ++i) {
    push(covers[i]);
    DiamondId next;
    if (i + 1 < segments)
      next = overlap_diamond(covers[i], covers[i + 1], vs[i + 1]);
    else if (closed)
      next = start;
    else {
      auto d = P.diamond_within(P.diamond(covers[i]).support, vs[m - 1]);
      if (!d) throw Error("cover too coarse", "vertex " + std::to_string(vs[m - 1]));
      next = *d;
    }
    push(next);
  }
  return PosetPath(P, start, std::move(steps));
}

}  // namespace abtk
