#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "abtk/base_complex.hpp"
#include "abtk/core.hpp"

namespace abtk {

/// A diamond is identified with its (connected, tree-shaped) vertex support.
struct Diamond {
  DiamondId id = -1;
  std::vector<VertexId> support;  // sorted
};

struct Violation {
  std::string code;                  // stable machine-readable label
  std::string detail;                // human-readable witness description
  std::vector<DiamondId> witnesses;  // diamonds involved
};

/// Outcome of validate_net. Violations are data, not errors.
struct ValidationReport {
  std::vector<Violation> violations;
  bool valid() const { return violations.empty(); }
};

/// Finite poset of diamonds over a base complex. Order is support inclusion;
/// causal disjointness requires disjoint supports with no joining base edge
/// (a one-vertex buffer, the discrete shadow of disjoint closures on a
/// Cauchy surface). Immutable after construction.
class CausalPoset {
public:
  /// Builds from an explicit cover. When `declared_disjoint` is absent the
  /// buffer rule derives the relation; when present it is taken verbatim
  /// (validate_net will report axiom breaches in hand-made relations).
  static CausalPoset from_cover(BaseComplex base, std::vector<std::vector<VertexId>> supports,
                                std::optional<std::vector<std::pair<DiamondId, DiamondId>>>
                                    declared_disjoint = std::nullopt) {
    CausalPoset p(std::move(base));
    for (auto& s : supports) {
      std::sort(s.begin(), s.end());
      s.erase(std::unique(s.begin(), s.end()), s.end());
      if (s.empty()) throw Error("diamond support is empty");
      for (VertexId v : s)
        if (!p.base_.has_vertex(v))
          throw Error("diamond support vertex not in complex", std::to_string(v));
    }
    std::sort(supports.begin(), supports.end(),
              [](const auto& a, const auto& b) {
                if (a.size() != b.size()) return a.size() < b.size();
                return a < b;
              });
    supports.erase(std::unique(supports.begin(), supports.end()), supports.end());
    for (auto& s : supports) {
      Diamond d;
      d.id = static_cast<DiamondId>(p.diamonds_.size());
      d.support = std::move(s);
      p.diamonds_.push_back(std::move(d));
    }
    p.index_relations(declared_disjoint);
    return p;
  }

  const BaseComplex& base() const { return base_; }
  int size() const { return static_cast<int>(diamonds_.size()); }
  const Diamond& diamond(DiamondId o) const {
    require(o);
    return diamonds_[o];
  }
  const std::vector<Diamond>& diamonds() const { return diamonds_; }

  bool contains(DiamondId o) const { return o >= 0 && o < size(); }
  void require(DiamondId o) const {
    if (!contains(o)) throw Error("no such diamond", std::to_string(o));
  }

  /// support(a) subseteq support(b)
  bool leq(DiamondId a, DiamondId b) const {
    require(a);
    require(b);
    return leq_[a][b];
  }
  bool comparable(DiamondId a, DiamondId b) const { return leq(a, b) || leq(b, a); }
  bool disjoint(DiamondId a, DiamondId b) const {
    require(a);
    require(b);
    return disjoint_[a][b];
  }

  /// Diamonds strictly comparable with o, ascending.
  const std::vector<DiamondId>& comparables(DiamondId o) const {
    require(o);
    return comparables_[o];
  }

  std::optional<DiamondId> find(const std::vector<VertexId>& support) const {
    std::vector<VertexId> s(support);
    std::sort(s.begin(), s.end());
    auto it = by_support_.find(s);
    return it == by_support_.end() ? std::nullopt : std::make_optional(it->second);
  }

  /// Smallest-id diamond whose support contains vertex v.
  std::optional<DiamondId> diamond_containing(VertexId v) const {
    for (const auto& d : diamonds_)
      if (std::binary_search(d.support.begin(), d.support.end(), v)) return d.id;
    return std::nullopt;
  }

  /// Smallest-id diamond whose support contains all of `vs`.
  std::optional<DiamondId> diamond_containing_all(const std::vector<VertexId>& vs) const {
    for (const auto& d : diamonds_) {
      bool ok = true;
      for (VertexId v : vs)
        if (!std::binary_search(d.support.begin(), d.support.end(), v)) {
          ok = false;
          break;
        }
      if (ok) return d.id;
    }
    return std::nullopt;
  }

  /// Smallest-id diamond contained in `region` (sorted vertex set) containing v.
  std::optional<DiamondId> diamond_within(const std::vector<VertexId>& region, VertexId v) const {
    for (const auto& d : diamonds_) {
      if (!std::binary_search(d.support.begin(), d.support.end(), v)) continue;
      if (std::includes(region.begin(), region.end(), d.support.begin(), d.support.end()))
        return d.id;
    }
    return std::nullopt;
  }

private:
  explicit CausalPoset(BaseComplex base) : base_(std::move(base)) {}

  bool supports_buffer_disjoint(const Diamond& a, const Diamond& b) const {
    std::vector<VertexId> inter;
    std::set_intersection(a.support.begin(), a.support.end(), b.support.begin(), b.support.end(),
                          std::back_inserter(inter));
    if (!inter.empty()) return false;
    for (VertexId u : a.support)
      for (VertexId v : base_.neighbors(u))
        if (std::binary_search(b.support.begin(), b.support.end(), v)) return false;
    return true;
  }

  void index_relations(
      const std::optional<std::vector<std::pair<DiamondId, DiamondId>>>& declared) {
    const int n = size();
    leq_.assign(n, std::vector<bool>(n, false));
    disjoint_.assign(n, std::vector<bool>(n, false));
    comparables_.assign(n, {});
    for (int a = 0; a < n; ++a) {
      by_support_[diamonds_[a].support] = a;
      for (int b = 0; b < n; ++b)
        leq_[a][b] = std::includes(diamonds_[b].support.begin(), diamonds_[b].support.end(),
                                   diamonds_[a].support.begin(), diamonds_[a].support.end());
    }
    if (declared) {
      for (auto [a, b] : *declared) {
        require(a);
        require(b);
        disjoint_[a][b] = disjoint_[b][a] = true;
      }
    } else {
      for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
          if (supports_buffer_disjoint(diamonds_[a], diamonds_[b]))
            disjoint_[a][b] = disjoint_[b][a] = true;
    }
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (a != b && (leq_[a][b] || leq_[b][a])) comparables_[a].push_back(b);
  }

  BaseComplex base_;
  std::vector<Diamond> diamonds_;
  std::vector<std::vector<bool>> leq_;
  std::vector<std::vector<bool>> disjoint_;
  std::vector<std::vector<DiamondId>> comparables_;
  std::map<std::vector<VertexId>, DiamondId> by_support_;
};

enum class NetKind { line, circle, wedge };

namespace detail {

inline std::vector<std::vector<VertexId>> line_intervals(int n) {
  std::vector<std::vector<VertexId>> out;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      if (j - i + 1 == n) continue;  // proper
      std::vector<VertexId> s;
      for (int v = i; v <= j; ++v) s.push_back(v);
      out.push_back(std::move(s));
    }
  return out;
}

/// Arcs of the n-cycle with 1..n-3 vertices; the cap keeps every diamond's
/// causal complement inhabited, which the transporter constructions need.
inline std::vector<std::vector<VertexId>> circle_arcs(int n, int offset = 0,
                                                      const std::vector<VertexId>* labels = nullptr) {
  std::vector<std::vector<VertexId>> out;
  for (int len = 1; len <= n - 3; ++len)
    for (int start = 0; start < n; ++start) {
      std::vector<VertexId> s;
      for (int k = 0; k < len; ++k) {
        int idx = (start + k) % n;
        s.push_back(labels ? (*labels)[idx] : offset + idx);
      }
      std::sort(s.begin(), s.end());
      out.push_back(std::move(s));
    }
  return out;
}

}  // namespace detail

/// Fixture nets over graph Cauchy surfaces. line(N): all proper vertex
/// intervals. circle(N): arcs of 1..N-3 vertices. wedge(N1,N2): per-circle
/// arcs of the two cycles sharing vertex 0.
inline CausalPoset build_net(NetKind kind, int n1, int n2 = 0) {
  switch (kind) {
    case NetKind::line: {
      if (n1 < 3) throw Error("fixture too small for required disjointness", "line needs N >= 3");
      return CausalPoset::from_cover(make_line_complex(n1), detail::line_intervals(n1));
    }
    case NetKind::circle: {
      if (n1 < 6) throw Error("fixture too small for required disjointness", "circle needs N >= 6");
      return CausalPoset::from_cover(make_circle_complex(n1), detail::circle_arcs(n1));
    }
    case NetKind::wedge: {
      if (n1 < 6 || n2 < 6)
        throw Error("fixture too small for required disjointness", "wedge needs N1,N2 >= 6");
      auto supports = detail::circle_arcs(n1);
      std::vector<VertexId> second_cycle{0};
      for (int i = 0; i < n2 - 1; ++i) second_cycle.push_back(n1 + i);
      auto arcs2 = detail::circle_arcs(n2, 0, &second_cycle);
      supports.insert(supports.end(), arcs2.begin(), arcs2.end());
      return CausalPoset::from_cover(make_wedge_complex(n1, n2), std::move(supports));
    }
  }
  throw Error("unknown net kind");
}

/// All diamonds causally disjoint from o, ascending.
inline std::vector<DiamondId> causal_complement(const CausalPoset& p, DiamondId o) {
  p.require(o);
  std::vector<DiamondId> out;
  for (int a = 0; a < p.size(); ++a)
    if (p.disjoint(o, a)) out.push_back(a);
  return out;
}

namespace detail {

/// BFS connectivity of `members` through comparability edges that stay
/// inside `members`.
inline bool poset_connected_within(const CausalPoset& p, const std::vector<DiamondId>& members) {
  if (members.size() <= 1) return true;
  std::set<DiamondId> in(members.begin(), members.end());
  std::set<DiamondId> seen{members.front()};
  std::queue<DiamondId> q;
  q.push(members.front());
  while (!q.empty()) {
    DiamondId x = q.front();
    q.pop();
    for (DiamondId y : p.comparables(x))
      if (in.count(y) && seen.insert(y).second) q.push(y);
  }
  return seen.size() == in.size();
}

inline std::vector<VertexId> closed_neighborhood(const BaseComplex& base,
                                                 const std::vector<VertexId>& support) {
  std::set<VertexId> cl(support.begin(), support.end());
  for (VertexId v : support)
    for (VertexId w : base.neighbors(v)) cl.insert(w);
  return {cl.begin(), cl.end()};
}

}  // namespace detail

/// Checks the net axioms: partial-order laws and their agreement with
/// support inclusion, disjointness laws (irreflexive, symmetric, hereditary,
/// exclusive with comparability), the covering property, and the causal
/// complement geometry. A complement check only fires when the geometry
/// could support a better answer: emptiness is measured against the support
/// leaving room in the base, and disconnectedness is reported only when the
/// open complement region is itself connected (so the cover, not the base
/// geometry, is at fault).
inline ValidationReport validate_net(const CausalPoset& p) {
  ValidationReport report;
  const int n = p.size();
  auto add = [&](std::string code, std::string detail, std::vector<DiamondId> w) {
    report.violations.push_back({std::move(code), std::move(detail), std::move(w)});
  };

  for (int a = 0; a < n; ++a) {
    if (!p.leq(a, a)) add("order not reflexive", "diamond " + std::to_string(a), {a});
    for (int b = 0; b < n; ++b) {
      if (a != b && p.leq(a, b) && p.leq(b, a))
        add("order not antisymmetric", std::to_string(a) + " <= " + std::to_string(b) + " <= " +
                                           std::to_string(a), {a, b});
      if (p.disjoint(a, b) != p.disjoint(b, a))
        add("disjointness not symmetric", std::to_string(a) + "," + std::to_string(b), {a, b});
    }
    if (p.disjoint(a, a)) add("disjointness not irreflexive", "diamond " + std::to_string(a), {a});
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (!p.leq(a, b)) continue;
      for (int c = 0; c < n; ++c)
        if (p.leq(b, c) && !p.leq(a, c))
          add("order not transitive",
              std::to_string(a) + " <= " + std::to_string(b) + " <= " + std::to_string(c),
              {a, b, c});
    }

  // Disjointness heredity: o' <= o and o _|_ a imply o' _|_ a.
  for (int o = 0; o < n; ++o)
    for (int a = 0; a < n; ++a) {
      if (!p.disjoint(o, a)) continue;
      if (p.comparable(o, a))
        add("disjointness/comparability conflict",
            "diamonds " + std::to_string(o) + " and " + std::to_string(a), {o, a});
      for (int sub = 0; sub < n; ++sub)
        if (sub != o && p.leq(sub, o) && !p.disjoint(sub, a))
          add("disjointness heredity violation",
              std::to_string(sub) + " <= " + std::to_string(o) + " but not " +
                  std::to_string(sub) + " _|_ " + std::to_string(a),
              {sub, o, a});
    }

  // Covering property of the supports.
  for (VertexId v : p.base().vertices()) {
    bool covered = false;
    for (const auto& d : p.diamonds())
      if (std::binary_search(d.support.begin(), d.support.end(), v)) {
        covered = true;
        break;
      }
    if (!covered) add("vertex not covered", "vertex " + std::to_string(v), {});
  }

  // Diamond supports must be connected and tree-shaped (simply connected).
  for (const auto& d : p.diamonds()) {
    if (!p.base().connected_subset(d.support))
      add("diamond support not connected", "diamond " + std::to_string(d.id), {d.id});
    else if (!p.base().tree_subset(d.support))
      add("diamond support not simply connected", "diamond " + std::to_string(d.id), {d.id});
  }

  // Causal complement geometry.
  for (int o = 0; o < n; ++o) {
    if (p.diamond(o).support.size() == p.base().vertices().size()) {
      add("empty causal complement", "at diamond " + std::to_string(o), {o});
      continue;
    }
    const auto complement = causal_complement(p, o);
    if (complement.empty() || detail::poset_connected_within(p, complement)) continue;
    const auto cl = detail::closed_neighborhood(p.base(), p.diamond(o).support);
    std::vector<VertexId> region;
    std::set_difference(p.base().vertices().begin(), p.base().vertices().end(), cl.begin(),
                        cl.end(), std::back_inserter(region));
    if (!region.empty() && p.base().connected_subset(region))
      add("disconnected causal complement", "at diamond " + std::to_string(o), {o});
  }

  return report;
}

}  // namespace abtk
