#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <vector>

#include "abtk/core.hpp"
#include "abtk/homotopy.hpp"
#include "abtk/paths.hpp"
#include "abtk/poset.hpp"

namespace abtk {

/// Closed real edge cochain: one weight per declared base edge, in radians
/// of phase per traversal along the declared orientation. Traversing against
/// the orientation negates.
class FlatPotential {
public:
  explicit FlatPotential(const BaseComplex& base, std::vector<double> weights)
      : base_(&base), weights_(std::move(weights)) {
    if (weights_.size() != base.edges().size())
      throw Error("potential weight count does not match edge count");
  }

  static FlatPotential zero(const BaseComplex& base) {
    return FlatPotential(base, std::vector<double>(base.edges().size(), 0.0));
  }

  const BaseComplex& base() const { return *base_; }
  const std::vector<double>& weights() const { return weights_; }

  double weight(VertexId u, VertexId v) const {
    auto [idx, sign] = base_->oriented_edge(u, v);
    return sign * weights_[idx];
  }

  /// dA = 0: oriented boundary sum over every declared 2-cell vanishes.
  /// Vacuous on graph bases.
  bool closed(double tol = 1e-12) const {
    for (const auto& face : base_->faces()) {
      // orient the triangle by chaining vertices through its three edges
      const auto e0 = base_->edges()[face[0]];
      double sum = weights_[face[0]];
      const VertexId v0 = e0[0];
      VertexId at = e0[1];
      bool used[3] = {true, false, false};
      for (int step = 0; step < 2; ++step) {
        bool advanced = false;
        for (int k = 1; k < 3 && !advanced; ++k) {
          if (used[k]) continue;
          const auto e = base_->edges()[face[k]];
          if (e[0] == at) {
            sum += weights_[face[k]];
            at = e[1];
          } else if (e[1] == at) {
            sum -= weights_[face[k]];
            at = e[0];
          } else {
            continue;
          }
          used[k] = true;
          advanced = true;
        }
        if (!advanced) return false;
      }
      if (at != v0 || std::abs(sum) > tol) return false;
    }
    return true;
  }

private:
  const BaseComplex* base_;
  std::vector<double> weights_;
};

/// Per-diamond primitives phi_o with d(phi_o) = A on the support,
/// anchored at the support's minimal vertex.
struct PrimitiveTable {
  std::map<DiamondId, std::map<VertexId, double>> phi;

  double value(DiamondId o, VertexId v) const {
    auto it = phi.find(o);
    if (it == phi.end()) throw Error("no such diamond", std::to_string(o));
    auto jt = it->second.find(v);
    if (jt == it->second.end())
      throw Error("vertex outside diamond support", std::to_string(v));
    return jt->second;
  }
};

/// Real comparable-pair cocycle A^hat with A^hat_{oa} = phi_o - phi_a for
/// a <= o, extended antisymmetrically.
class AbelianCocycle {
public:
  AbelianCocycle(const CausalPoset& p, std::map<std::pair<DiamondId, DiamondId>, double> up)
      : poset_(&p), up_(std::move(up)) {}

  const CausalPoset& poset() const { return *poset_; }

  /// Value on the ordered pair (o, a); + when a <= o, negated when o <= a.
  double value(DiamondId o, DiamondId a) const {
    if (o == a) return 0.0;
    if (poset_->leq(a, o)) return up_.at({o, a});
    if (poset_->leq(o, a)) return -up_.at({a, o});
    throw Error("invalid path", "pair not comparable");
  }

  std::complex<double> transition_phase(DiamondId o, DiamondId a) const {
    return std::polar(1.0, value(o, a));
  }

private:
  const CausalPoset* poset_;
  std::map<std::pair<DiamondId, DiamondId>, double> up_;
};

/// Integrates A over a spanning tree of each diamond support from the
/// minimal-id vertex. Supports must be tree-shaped, so the choice of path
/// inside the support is immaterial.
inline PrimitiveTable local_primitives(const CausalPoset& P, const FlatPotential& A) {
  if (!A.closed()) throw Error("potential not closed");
  PrimitiveTable table;
  for (const auto& d : P.diamonds()) {
    if (!P.base().tree_subset(d.support))
      throw Error("diamond support not contractible", "diamond " + std::to_string(d.id));
    auto& phi = table.phi[d.id];
    const VertexId root = d.support.front();
    phi[root] = 0.0;
    // BFS through support edges accumulating weights
    std::vector<VertexId> frontier{root};
    while (!frontier.empty()) {
      std::vector<VertexId> next;
      for (VertexId u : frontier)
        for (VertexId v : P.base().neighbors(u)) {
          if (!std::binary_search(d.support.begin(), d.support.end(), v)) continue;
          if (phi.count(v)) continue;
          phi[v] = phi[u] + A.weight(u, v);
          next.push_back(v);
        }
      frontier = std::move(next);
    }
  }
  return table;
}

/// A^hat_{oa} = (phi_o - phi_a) checked to be constant over the support of a.
inline AbelianCocycle abelian_cocycle(const CausalPoset& P, const PrimitiveTable& primitives,
                                      double tol = 1e-12) {
  std::map<std::pair<DiamondId, DiamondId>, double> up;
  for (const auto& sup : P.diamonds())
    for (DiamondId sub : P.comparables(sup.id)) {
      if (!P.leq(sub, sup.id) || sub == sup.id) continue;
      const auto& support = P.diamond(sub).support;
      const double first = primitives.value(sup.id, support.front()) -
                           primitives.value(sub, support.front());
      for (VertexId v : support) {
        const double diff = primitives.value(sup.id, v) - primitives.value(sub, v);
        if (std::abs(diff - first) > tol)
          throw Error("primitive mismatch (support not connected?)",
                      "pair (" + std::to_string(sup.id) + "," + std::to_string(sub) + ")");
      }
      up[{sup.id, sub}] = first;
    }
  return AbelianCocycle(P, std::move(up));
}

inline std::complex<double> transition_phase(const AbelianCocycle& A, DiamondId o, DiamondId a) {
  return A.transition_phase(o, a);
}

/// Sum of A^hat over the steps of a loop. Each step (b,a) contributes
/// A^hat_{ab}; with this orientation the sum over a path approximation
/// reproduces the oriented edge sum of the underlying curve exactly, so
/// loop_integral(approximate_curve(curve)) == direct_edge_sum(curve).
inline double loop_integral(const AbelianCocycle& A, const PosetPath& p) {
  if (!p.is_loop()) throw Error("open path");
  double sum = 0.0;
  for (const auto& s : p.steps()) sum += A.value(s.source, s.target);
  return sum;
}

/// Same sum for open paths, used by frame bookkeeping.
inline double path_sum(const AbelianCocycle& A, const PosetPath& p) {
  double sum = 0.0;
  for (const auto& s : p.steps()) sum += A.value(s.source, s.target);
  return sum;
}

/// Oriented edge-weight sum of a base-complex curve; the integral oracle
/// that loop_integral must reproduce on path approximations.
inline double direct_edge_sum(const FlatPotential& A, const std::vector<VertexId>& curve,
                              bool closed) {
  if (curve.size() < 2) return 0.0;
  std::vector<VertexId> vs = curve;
  if (closed && vs.front() == vs.back()) vs.pop_back();
  double sum = 0.0;
  const int m = static_cast<int>(vs.size());
  const int segments = closed ? m : m - 1;
  for (int i = 0; i < segments; ++i) sum += A.weight(vs[i], vs[(i + 1) % m]);
  return sum;
}

/// A + d(chi): edge (u,v) gains chi(v) - chi(u).
inline FlatPotential gauge_transform(const FlatPotential& A,
                                     const std::map<VertexId, double>& chi) {
  auto at = [&](VertexId v) {
    auto it = chi.find(v);
    return it == chi.end() ? 0.0 : it->second;
  };
  std::vector<double> w = A.weights();
  const auto& edges = A.base().edges();
  for (std::size_t i = 0; i < edges.size(); ++i) w[i] += at(edges[i][1]) - at(edges[i][0]);
  return FlatPotential(A.base(), std::move(w));
}

/// Compares exp(-i * loop integral) of two potentials over every basis
/// generator loop of the presentation.
inline bool same_character(const FlatPotential& A, const FlatPotential& B,
                           const CausalPoset& P, const Pi1Presentation& pres,
                           double tol = 1e-12) {
  auto ca = abelian_cocycle(P, local_primitives(P, A));
  auto cb = abelian_cocycle(P, local_primitives(P, B));
  for (int gen : pres.basis()) {
    auto loop = pres.generator_loop(gen);
    const auto pa = std::polar(1.0, -loop_integral(ca, loop));
    const auto pb = std::polar(1.0, -loop_integral(cb, loop));
    if (std::abs(pa - pb) > tol) return false;
  }
  return true;
}

/// Non-tree edges of the canonical base-complex spanning tree (BFS from the
/// minimal vertex); one per H1 generator of the base graph.
inline std::vector<int> base_cotree_edges(const BaseComplex& base) {
  std::map<VertexId, bool> seen;
  std::vector<VertexId> order{base.vertices().front()};
  seen[order.front()] = true;
  std::vector<bool> tree_edge(base.edges().size(), false);
  for (std::size_t i = 0; i < order.size(); ++i)
    for (VertexId v : base.neighbors(order[i]))
      if (!seen[v]) {
        seen[v] = true;
        tree_edge[base.oriented_edge(order[i], v).first] = true;
        order.push_back(v);
      }
  std::vector<int> cotree;
  for (std::size_t e = 0; e < base.edges().size(); ++e)
    if (!tree_edge[e]) cotree.push_back(static_cast<int>(e));
  return cotree;
}

/// Signed crossing counts of a loop over the base cotree edges; integers up
/// to float noise, a complete winding invariant on the fixtures.
inline std::vector<double> loop_windings(const CausalPoset& P, const PosetPath& loop) {
  const auto& base = P.base();
  std::vector<double> row;
  for (int e : base_cotree_edges(base)) {
    std::vector<double> unit(base.edges().size(), 0.0);
    unit[e] = 1.0;
    auto hat = abelian_cocycle(P, local_primitives(P, FlatPotential(base, unit)));
    row.push_back(loop_integral(hat, loop));
  }
  return row;
}

/// Realises prescribed loop integrals on the presentation's basis generator
/// loops by weighting the non-tree edges of a base-complex spanning tree.
inline FlatPotential potential_from_character(const CausalPoset& P, const Pi1Presentation& pres,
                                              const std::vector<double>& chi) {
  if (!pres.reduces_to_free()) throw Error("torsion not supported");
  const int r = static_cast<int>(pres.basis().size());
  if (static_cast<int>(chi.size()) != r)
    throw Error("torsion not supported", "character size does not match free rank");

  const auto& base = P.base();
  const std::vector<int> cotree = base_cotree_edges(base);
  if (static_cast<int>(cotree.size()) != r)
    throw Error("torsion not supported", "base H1 rank does not match presentation");

  // winding matrix: basis loop k across cotree edge j
  std::vector<std::vector<double>> W(r, std::vector<double>(r, 0.0));
  for (int j = 0; j < r; ++j) {
    std::vector<double> unit(base.edges().size(), 0.0);
    unit[cotree[j]] = 1.0;
    auto cocycle = abelian_cocycle(P, local_primitives(P, FlatPotential(base, unit)));
    for (int k = 0; k < r; ++k)
      W[k][j] = loop_integral(cocycle, pres.generator_loop(pres.basis()[k]));
  }

  // solve W x = chi by Gaussian elimination (tiny integer matrices)
  std::vector<std::vector<double>> M = W;
  std::vector<double> rhs = chi;
  for (int c = 0; c < r; ++c) {
    int piv = c;
    for (int k = c + 1; k < r; ++k)
      if (std::abs(M[k][c]) > std::abs(M[piv][c])) piv = k;
    if (std::abs(M[piv][c]) < 1e-9) throw Error("torsion not supported", "degenerate winding matrix");
    std::swap(M[c], M[piv]);
    std::swap(rhs[c], rhs[piv]);
    for (int k = 0; k < r; ++k) {
      if (k == c) continue;
      const double f = M[k][c] / M[c][c];
      for (int c2 = c; c2 < r; ++c2) M[k][c2] -= f * M[c][c2];
      rhs[k] -= f * rhs[c];
    }
  }
  std::vector<double> weights(base.edges().size(), 0.0);
  for (int j = 0; j < r; ++j) weights[cotree[j]] = rhs[j] / M[j][j];
  return FlatPotential(base, std::move(weights));
}

}  // namespace abtk
