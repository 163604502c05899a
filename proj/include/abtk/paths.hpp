#pragma once

#include <vector>

#include "abtk/core.hpp"
#include "abtk/poset.hpp"

namespace abtk {

/// One elementary path (target, source) between comparable diamonds,
/// traversed source -> target.
struct PathStep {
  DiamondId target;
  DiamondId source;
  bool operator==(const PathStep&) const = default;
};

/// A composable chain of elementary steps, stored in traversal order:
/// steps[0].source is the source of the whole path, steps.back().target its
/// target, and consecutive steps share the intermediate diamond.
class PosetPath {
public:
  static PosetPath trivial(const CausalPoset& p, DiamondId at) {
    p.require(at);
    return PosetPath(at, {});
  }

  PosetPath(const CausalPoset& p, DiamondId source, std::vector<PathStep> steps)
      : PosetPath(source, std::move(steps)) {
    p.require(source_);
    DiamondId at = source_;
    for (const auto& s : steps_) {
      p.require(s.target);
      if (s.source != at) throw Error("invalid path", "steps do not chain");
      if (s.source != s.target && !p.comparable(s.source, s.target))
        throw Error("invalid path", "step on non-comparable pair");
      at = s.target;
    }
  }

  DiamondId source() const { return source_; }
  DiamondId target() const { return steps_.empty() ? source_ : steps_.back().target; }
  bool is_loop() const { return source() == target(); }
  const std::vector<PathStep>& steps() const { return steps_; }
  std::size_t length() const { return steps_.size(); }

  /// Opposite path: each step swapped, order reversed.
  PosetPath reversed() const {
    std::vector<PathStep> rev;
    rev.reserve(steps_.size());
    for (auto it = steps_.rbegin(); it != steps_.rend(); ++it)
      rev.push_back({it->source, it->target});
    return PosetPath(target(), std::move(rev));
  }

  bool operator==(const PosetPath&) const = default;

private:
  PosetPath(DiamondId source, std::vector<PathStep> steps)
      : source_(source), steps_(std::move(steps)) {}

  DiamondId source_;
  std::vector<PathStep> steps_;

  friend PosetPath compose_paths(const PosetPath&, const PosetPath&);
};

/// p * q: traverse q first, then p. Requires target(q) == source(p).
inline PosetPath compose_paths(const PosetPath& p, const PosetPath& q) {
  if (q.target() != p.source()) throw Error("non-composable paths");
  std::vector<PathStep> steps = q.steps();
  steps.insert(steps.end(), p.steps().begin(), p.steps().end());
  return PosetPath(q.source(), std::move(steps));
}

inline PosetPath reverse_path(const PosetPath& p) { return p.reversed(); }

/// Deterministic shortest path through the comparability graph (BFS with
/// ascending-id tie break).
inline PosetPath find_path(const CausalPoset& P, DiamondId from, DiamondId to) {
  P.require(from);
  P.require(to);
  if (from == to) return PosetPath::trivial(P, from);
  std::vector<DiamondId> parent(P.size(), -1);
  std::vector<bool> seen(P.size(), false);
  std::queue<DiamondId> q;
  q.push(from);
  seen[from] = true;
  while (!q.empty()) {
    DiamondId x = q.front();
    q.pop();
    if (x == to) break;
    for (DiamondId y : P.comparables(x))
      if (!seen[y]) {
        seen[y] = true;
        parent[y] = x;
        q.push(y);
      }
  }
  if (!seen[to]) throw Error("poset not pathwise connected",
                             std::to_string(from) + " -> " + std::to_string(to));
  std::vector<PathStep> steps;
  for (DiamondId at = to; at != from; at = parent[at]) steps.push_back({at, parent[at]});
  std::reverse(steps.begin(), steps.end());
  return PosetPath(P, from, std::move(steps));
}

}  // namespace abtk
