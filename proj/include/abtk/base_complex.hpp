#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <queue>
#include <set>
#include <vector>

#include "abtk/core.hpp"

namespace abtk {

/// A finite 1-complex with optional triangular 2-cells: the discretised
/// Cauchy-surface geometry every net of diamonds lives over. Edges are
/// ordered pairs; the orientation matters for 1-form weights.
class BaseComplex {
public:
  BaseComplex(std::vector<VertexId> vertices,
              std::vector<std::array<VertexId, 2>> edges,
              std::vector<std::array<int, 3>> faces = {})
      : vertices_(std::move(vertices)), edges_(std::move(edges)), faces_(std::move(faces)) {
    std::sort(vertices_.begin(), vertices_.end());
    vertices_.erase(std::unique(vertices_.begin(), vertices_.end()), vertices_.end());
    if (vertices_.empty()) throw Error("complex has no vertices");
    const std::set<VertexId> vset(vertices_.begin(), vertices_.end());
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      const auto [u, v] = edges_[i];
      if (!vset.count(u) || !vset.count(v) || u == v)
        throw Error("edge endpoint not a declared vertex",
                    "edge " + std::to_string(i));
      adjacency_[u].push_back(v);
      adjacency_[v].push_back(u);
      edge_index_[{u, v}] = static_cast<int>(i);
    }
    for (auto& [v, nbrs] : adjacency_) {
      std::sort(nbrs.begin(), nbrs.end());
      nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
    }
    for (std::size_t f = 0; f < faces_.size(); ++f) {
      for (int e : faces_[f])
        if (e < 0 || e >= static_cast<int>(edges_.size()))
          throw Error("face references unknown edge", "face " + std::to_string(f));
      if (!face_is_closed(faces_[f]))
        throw Error("face boundary is not a closed edge cycle", "face " + std::to_string(f));
    }
    if (!connected_subset(vertices_)) throw Error("complex is not connected");
  }

  const std::vector<VertexId>& vertices() const { return vertices_; }
  const std::vector<std::array<VertexId, 2>>& edges() const { return edges_; }
  const std::vector<std::array<int, 3>>& faces() const { return faces_; }

  bool has_vertex(VertexId v) const {
    return std::binary_search(vertices_.begin(), vertices_.end(), v);
  }

  const std::vector<VertexId>& neighbors(VertexId v) const {
    static const std::vector<VertexId> none;
    auto it = adjacency_.find(v);
    return it == adjacency_.end() ? none : it->second;
  }

  bool has_edge(VertexId u, VertexId v) const {
    return edge_index_.count({u, v}) || edge_index_.count({v, u});
  }

  /// Index of the edge joining u and v plus the sign of the traversal u->v
  /// relative to the declared orientation.
  std::pair<int, int> oriented_edge(VertexId u, VertexId v) const {
    if (auto it = edge_index_.find({u, v}); it != edge_index_.end()) return {it->second, +1};
    if (auto it = edge_index_.find({v, u}); it != edge_index_.end()) return {it->second, -1};
    throw Error("no such edge", std::to_string(u) + "-" + std::to_string(v));
  }

  /// Connectivity of the subgraph induced by `subset` (sorted vertex ids).
  bool connected_subset(const std::vector<VertexId>& subset) const {
    if (subset.empty()) return true;
    std::set<VertexId> in(subset.begin(), subset.end());
    std::set<VertexId> seen;
    std::queue<VertexId> q;
    q.push(subset.front());
    seen.insert(subset.front());
    while (!q.empty()) {
      VertexId x = q.front();
      q.pop();
      for (VertexId y : neighbors(x))
        if (in.count(y) && seen.insert(y).second) q.push(y);
    }
    return seen.size() == in.size();
  }

  /// Number of edges internal to `subset`.
  int induced_edge_count(const std::vector<VertexId>& subset) const {
    std::set<VertexId> in(subset.begin(), subset.end());
    int n = 0;
    for (const auto& [u, v] : edges_)
      if (in.count(u) && in.count(v)) ++n;
    return n;
  }

  /// A subset is tree-shaped when its induced subcomplex is connected and
  /// acyclic; this is the discrete reading of "simply connected support".
  bool tree_subset(const std::vector<VertexId>& subset) const {
    return connected_subset(subset) &&
           induced_edge_count(subset) == static_cast<int>(subset.size()) - 1;
  }

  /// First-homology rank of the underlying graph, E - V + 1 for connected bases.
  int graph_h1_rank() const {
    return static_cast<int>(edges_.size()) - static_cast<int>(vertices_.size()) + 1;
  }

private:
  bool face_is_closed(const std::array<int, 3>& face) const {
    // Each vertex met by the three boundary edges must occur exactly twice.
    std::map<VertexId, int> deg;
    for (int e : face) {
      deg[edges_[e][0]]++;
      deg[edges_[e][1]]++;
    }
    return deg.size() == 3 &&
           std::all_of(deg.begin(), deg.end(), [](auto& kv) { return kv.second == 2; });
  }

  std::vector<VertexId> vertices_;
  std::vector<std::array<VertexId, 2>> edges_;
  std::vector<std::array<int, 3>> faces_;
  std::map<VertexId, std::vector<VertexId>> adjacency_;
  std::map<std::pair<VertexId, VertexId>, int> edge_index_;
};

/// Path graph v0 - v1 - ... - v{n-1}.
inline BaseComplex make_line_complex(int n) {
  std::vector<VertexId> vs(n);
  for (int i = 0; i < n; ++i) vs[i] = i;
  std::vector<std::array<VertexId, 2>> es;
  for (int i = 0; i + 1 < n; ++i) es.push_back({i, i + 1});
  return BaseComplex(std::move(vs), std::move(es));
}

/// Cycle graph on n vertices, edges oriented v_i -> v_{i+1 mod n}.
inline BaseComplex make_circle_complex(int n) {
  std::vector<VertexId> vs(n);
  for (int i = 0; i < n; ++i) vs[i] = i;
  std::vector<std::array<VertexId, 2>> es;
  for (int i = 0; i < n; ++i) es.push_back({i, (i + 1) % n});
  return BaseComplex(std::move(vs), std::move(es));
}

/// Two cycles of sizes n1 and n2 sharing the single vertex 0.
/// First cycle: 0,1,...,n1-1; second cycle: 0,n1,n1+1,...,n1+n2-2.
inline BaseComplex make_wedge_complex(int n1, int n2) {
  std::vector<VertexId> vs;
  for (int i = 0; i < n1 + n2 - 1; ++i) vs.push_back(i);
  std::vector<std::array<VertexId, 2>> es;
  for (int i = 0; i < n1; ++i) es.push_back({i, (i + 1) % n1});
  es.push_back({0, n1});
  for (int i = n1; i < n1 + n2 - 2; ++i) es.push_back({i, i + 1});
  es.push_back({n1 + n2 - 2, 0});
  return BaseComplex(std::move(vs), std::move(es));
}

}  // namespace abtk
