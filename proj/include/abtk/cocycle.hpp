#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "abtk/core.hpp"
#include "abtk/homotopy.hpp"
#include "abtk/paths.hpp"
#include "abtk/poset.hpp"

namespace abtk {

using Mat = Eigen::MatrixXcd;
using Cplx = std::complex<double>;

/// Unitary matrix 1-cocycle on the comparable pairs of a poset. Values are
/// stored for upward pairs (sup, sub); the opposite orientation is the
/// adjoint and z(o,o) = 1.
class UnitaryCocycle {
public:
  UnitaryCocycle(const CausalPoset& p, int dim, double tolerance = 1e-9)
      : poset_(&p), dim_(dim), tol_(tolerance) {
    if (dim < 1) throw Error("cocycle dimension must be positive");
  }

  static UnitaryCocycle identity(const CausalPoset& p, int dim) {
    UnitaryCocycle z(p, dim);
    z.fill([&](DiamondId, DiamondId) -> Mat { return Mat::Identity(dim, dim); });
    return z;
  }

  /// z(b,a) := t_b t_a^*; unitarily trivial by construction.
  static UnitaryCocycle coboundary(const CausalPoset& p, const std::vector<Mat>& t) {
    if (static_cast<int>(t.size()) != p.size()) throw Error("coboundary family incomplete");
    const int n = static_cast<int>(t.front().rows());
    UnitaryCocycle z(p, n);
    z.fill([&](DiamondId sup, DiamondId sub) -> Mat { return t[sup] * t[sub].adjoint(); });
    return z;
  }

  /// Builds every upward value from a callback (sup, sub) -> matrix.
  void fill(const std::function<Mat(DiamondId, DiamondId)>& f) {
    for (const auto& d : poset_->diamonds())
      for (DiamondId sub : poset_->comparables(d.id))
        if (poset_->leq(sub, d.id)) up_[{d.id, sub}] = f(d.id, sub);
  }

  void set(DiamondId sup, DiamondId sub, Mat m) {
    if (!poset_->leq(sub, sup)) throw Error("invalid path", "pair not comparable");
    up_[{sup, sub}] = std::move(m);
  }

  const CausalPoset& poset() const { return *poset_; }
  int dim() const { return dim_; }
  double tolerance() const { return tol_; }

  bool has_value(DiamondId b, DiamondId a) const {
    if (b == a) return true;
    if (poset_->leq(a, b)) return up_.count({b, a});
    if (poset_->leq(b, a)) return up_.count({a, b});
    return false;
  }

  Mat value(DiamondId b, DiamondId a) const {
    if (b == a) return Mat::Identity(dim_, dim_);
    if (poset_->leq(a, b)) {
      auto it = up_.find({b, a});
      if (it == up_.end()) throw Error("cocycle not total",
                                       "(" + std::to_string(b) + "," + std::to_string(a) + ")");
      return it->second;
    }
    if (poset_->leq(b, a)) {
      auto it = up_.find({a, b});
      if (it == up_.end()) throw Error("cocycle not total",
                                       "(" + std::to_string(a) + "," + std::to_string(b) + ")");
      return it->second.adjoint();
    }
    throw Error("invalid path", "pair not comparable");
  }

private:
  const CausalPoset* poset_;
  int dim_;
  double tol_;
  std::map<std::pair<DiamondId, DiamondId>, Mat> up_;
};

struct CocycleReport {
  std::vector<std::string> violations;
  bool valid() const { return violations.empty(); }
};

inline CocycleReport check_cocycle(const UnitaryCocycle& z) {
  CocycleReport report;
  const auto& p = z.poset();
  const int n = z.dim();
  const double tol = z.tolerance();
  for (const auto& d : p.diamonds())
    for (DiamondId sub : p.comparables(d.id)) {
      if (!p.leq(sub, d.id)) continue;
      if (!z.has_value(d.id, sub))
        throw Error("cocycle not total",
                    "(" + std::to_string(d.id) + "," + std::to_string(sub) + ")");
      const Mat v = z.value(d.id, sub);
      if ((v * v.adjoint() - Mat::Identity(n, n)).norm() > tol)
        report.violations.push_back("unitarity violation at (" + std::to_string(d.id) + "," +
                                    std::to_string(sub) + ")");
      if ((z.value(sub, d.id) - v.adjoint()).norm() > tol)
        report.violations.push_back("adjoint symmetry violation at (" + std::to_string(d.id) +
                                    "," + std::to_string(sub) + ")");
    }
  // chain law over all inclusions a <= o <= c
  for (const auto& dc : p.diamonds())
    for (DiamondId o : p.comparables(dc.id)) {
      if (!p.leq(o, dc.id)) continue;
      for (DiamondId a : p.comparables(o)) {
        if (a == dc.id || !p.leq(a, o)) continue;
        if ((z.value(dc.id, a) - z.value(dc.id, o) * z.value(o, a)).norm() > tol)
          report.violations.push_back("cocycle equation violation at (" + std::to_string(dc.id) +
                                      "," + std::to_string(o) + "," + std::to_string(a) + ")");
      }
    }
  return report;
}

/// z(p) = z(step_k) ... z(step_1).
inline Mat evaluate_path(const UnitaryCocycle& z, const PosetPath& p) {
  Mat m = Mat::Identity(z.dim(), z.dim());
  for (const auto& s : p.steps()) {
    if (s.source == s.target) continue;
    m = z.value(s.target, s.source) * m;
  }
  return m;
}

/// Chosen paths from a pole to every diamond, p_ee trivial.
struct PathFrame {
  DiamondId pole;
  std::map<DiamondId, PosetPath> paths;

  const PosetPath& at(DiamondId a) const {
    auto it = paths.find(a);
    if (it == paths.end()) throw Error("incomplete path frame", std::to_string(a));
    return it->second;
  }
};

/// Frame along the BFS tree from the pole (ascending-id tie break).
inline PathFrame build_path_frame(const CausalPoset& P, DiamondId pole) {
  P.require(pole);
  PathFrame frame{pole, {}};
  std::vector<DiamondId> parent(P.size(), -1);
  std::vector<bool> seen(P.size(), false);
  std::queue<DiamondId> q;
  q.push(pole);
  seen[pole] = true;
  while (!q.empty()) {
    DiamondId x = q.front();
    q.pop();
    for (DiamondId y : P.comparables(x))
      if (!seen[y]) {
        seen[y] = true;
        parent[y] = x;
        q.push(y);
      }
  }
  for (int a = 0; a < P.size(); ++a) {
    if (!seen[a]) throw Error("poset not pathwise connected", std::to_string(a));
    std::vector<PathStep> steps;
    for (DiamondId at = a; at != pole; at = parent[at]) steps.push_back({at, parent[at]});
    std::reverse(steps.begin(), steps.end());
    frame.paths.emplace(a, PosetPath(P, pole, std::move(steps)));
  }
  return frame;
}

/// Images of the presentation generators under a cocycle, i.e. the holonomy
/// representation of pi1 evaluated on tree-closed generator loops.
struct HolonomyRep {
  const Pi1Presentation* pres = nullptr;
  int dim = 1;
  std::vector<Mat> gen_images;    // one per original generator
  std::vector<Mat> basis_images;  // one per reduced basis generator
  bool topologically_trivial = true;
};

inline Mat eval_word_in_images(const Word& w, const std::vector<Mat>& images, int dim) {
  Mat m = Mat::Identity(dim, dim);
  for (int x : w) {
    const Mat& g = images[std::abs(x) - 1];
    m = m * (x > 0 ? g : Mat(g.adjoint()));
  }
  return m;
}

/// Builds a holonomy representation from prescribed unitaries for the
/// reduced basis generators.
inline HolonomyRep rep_from_basis_images(const Pi1Presentation& pres, std::vector<Mat> basis_images,
                                         double tol = 1e-9) {
  HolonomyRep rep;
  rep.pres = &pres;
  rep.dim = basis_images.empty() ? 1 : static_cast<int>(basis_images.front().rows());
  rep.basis_images = std::move(basis_images);
  if (static_cast<int>(rep.basis_images.size()) != static_cast<int>(pres.basis().size()))
    throw Error("basis image count does not match presentation");
  for (int g = 0; g < pres.generator_count(); ++g)
    rep.gen_images.push_back(eval_word_in_images(pres.generator_word(g), rep.basis_images, rep.dim));
  rep.topologically_trivial = true;
  for (const Mat& m : rep.gen_images)
    if ((m - Mat::Identity(rep.dim, rep.dim)).norm() > tol) rep.topologically_trivial = false;
  return rep;
}

inline HolonomyRep holonomy_rep(const UnitaryCocycle& z, const Pi1Presentation& pres) {
  HolonomyRep rep;
  rep.pres = &pres;
  rep.dim = z.dim();
  const double tol = z.tolerance();
  for (int g = 0; g < pres.generator_count(); ++g)
    rep.gen_images.push_back(evaluate_path(z, pres.generator_loop(g)));
  for (const Word& r : pres.relators()) {
    const Mat m = eval_word_in_images(r, rep.gen_images, rep.dim);
    if ((m - Mat::Identity(rep.dim, rep.dim)).norm() > tol)
      throw Error("not a cocycle on this poset (homotopy violation)", word_to_string(r));
  }
  for (int b : pres.basis()) rep.basis_images.push_back(rep.gen_images[b]);
  rep.topologically_trivial = true;
  for (const Mat& m : rep.gen_images)
    if ((m - Mat::Identity(rep.dim, rep.dim)).norm() > tol) rep.topologically_trivial = false;
  return rep;
}

/// Charged (topologically trivial) and topological (pole-valued) components
/// of z with respect to a path frame: z = u_z join z_c.
inline std::pair<UnitaryCocycle, UnitaryCocycle> split_components(const UnitaryCocycle& z,
                                                                  const PathFrame& frame) {
  const auto& p = z.poset();
  UnitaryCocycle zc(p, z.dim(), z.tolerance());
  UnitaryCocycle uz(p, z.dim(), z.tolerance());
  zc.fill([&](DiamondId sup, DiamondId sub) -> Mat {
    // z(p_{sup,e} * p_{e,sub})
    return evaluate_path(z, frame.at(sup)) * evaluate_path(z, frame.at(sub)).adjoint();
  });
  uz.fill([&](DiamondId sup, DiamondId sub) -> Mat {
    // z(p_{e,sup} * (sup,sub) * p_{sub,e})
    return evaluate_path(z, frame.at(sup)).adjoint() * z.value(sup, sub) *
           evaluate_path(z, frame.at(sub));
  });
  return {zc, uz};
}

/// (u join z_c)(b,a) = z_c(p_{be}) u(b,a) z_c(p_{be})^* . z_c(b,a).
inline UnitaryCocycle join(const UnitaryCocycle& u, const UnitaryCocycle& zc,
                           const PathFrame& frame) {
  if (u.dim() != zc.dim()) throw Error("incompatible dimensions");
  UnitaryCocycle z(zc.poset(), zc.dim(), zc.tolerance());
  z.fill([&](DiamondId sup, DiamondId sub) -> Mat {
    const Mat conj = evaluate_path(zc, frame.at(sup));
    return conj * u.value(sup, sub) * conj.adjoint() * zc.value(sup, sub);
  });
  return z;
}

namespace detail {

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline int matrix_rank(const Mat& m, double tol = 1e-9) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::BDCSVD<Mat> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0) return 0;
  const double cutoff = tol * std::max(1.0, sv(0));
  int r = 0;
  for (int i = 0; i < sv.size(); ++i) r += sv(i) > cutoff;
  return r;
}

/// Orthonormal column basis of the nullspace of m.
inline Mat nullspace(const Mat& m, double tol = 1e-9) {
  Eigen::BDCSVD<Mat> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cutoff = sv.size() ? tol * std::max(1.0, sv(0)) : tol;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i) rank += sv(i) > cutoff;
  return svd.matrixV().rightCols(m.cols() - rank);
}

}  // namespace detail

/// Complex dimension of { X : X U_i = U_i X for all i }.
inline int commutant_dimension(const std::vector<Mat>& mats, double tol = 1e-9) {
  if (mats.empty()) throw Error("commutant of empty set");
  const int n = static_cast<int>(mats.front().rows());
  const Mat id = Mat::Identity(n, n);
  Mat system(static_cast<int>(mats.size()) * n * n, n * n);
  for (std::size_t i = 0; i < mats.size(); ++i)
    system.middleRows(static_cast<int>(i) * n * n, n * n) =
        detail::kron(id, mats[i]) - detail::kron(mats[i].transpose(), id);
  return n * n - detail::matrix_rank(system, tol);
}

/// Span closure of a generating set under products, as an orthonormal basis
/// of vectorised matrices. Stabilises in at most n^2 rounds.
inline std::vector<Mat> algebra_span(const std::vector<Mat>& gens, double tol = 1e-9) {
  if (gens.empty()) throw Error("algebra of empty set");
  const int n = static_cast<int>(gens.front().rows());
  std::vector<Mat> basis;
  Mat stacked(0, n * n);
  auto try_add = [&](const Mat& m) {
    Mat candidate(stacked.rows() + 1, n * n);
    candidate.topRows(stacked.rows()) = stacked;
    candidate.bottomRows(1) = Eigen::Map<const Mat>(m.data(), 1, n * n);
    if (detail::matrix_rank(candidate, tol) > detail::matrix_rank(stacked, tol)) {
      stacked = std::move(candidate);
      basis.push_back(m);
      return true;
    }
    return false;
  };
  try_add(Mat::Identity(n, n));
  for (const Mat& g : gens) try_add(g);
  bool grew = true;
  while (grew) {
    grew = false;
    const auto snapshot = basis;
    for (const Mat& a : snapshot)
      for (const Mat& g : gens)
        if (try_add(a * g)) grew = true;
  }
  return basis;
}

/// tau(z): size of the irreducible block of the algebra generated by the
/// holonomy images. The generated algebra must be a factor.
inline int topological_dimension(const UnitaryCocycle& z, const Pi1Presentation& pres) {
  const HolonomyRep rep = holonomy_rep(z, pres);
  const int n = z.dim();
  std::vector<Mat> gens = rep.gen_images;
  if (gens.empty()) gens.push_back(Mat::Identity(n, n));
  const auto span = algebra_span(gens);
  const int cdim = commutant_dimension(gens);

  // center = span ∩ commutant
  const int nn = n * n;
  Mat span_rows(static_cast<int>(span.size()), nn);
  for (std::size_t i = 0; i < span.size(); ++i)
    span_rows.row(static_cast<int>(i)) = Eigen::Map<const Mat>(span[i].data(), 1, nn);
  Mat comm_sys(static_cast<int>(gens.size()) * nn, nn);
  const Mat id = Mat::Identity(n, n);
  for (std::size_t i = 0; i < gens.size(); ++i)
    comm_sys.middleRows(static_cast<int>(i) * nn, nn) =
        detail::kron(id, gens[i]) - detail::kron(gens[i].transpose(), id);
  const Mat comm_basis = detail::nullspace(comm_sys);  // columns
  Mat joint(span_rows.rows() + comm_basis.cols(), nn);
  joint.topRows(span_rows.rows()) = span_rows;
  joint.bottomRows(comm_basis.cols()) = comm_basis.transpose();
  const int center_dim = static_cast<int>(span.size()) + static_cast<int>(comm_basis.cols()) -
                         detail::matrix_rank(joint);
  if (center_dim != 1) throw Error("holonomy algebra not a factor",
                                   "center dimension " + std::to_string(center_dim));

  const double tau = n / std::sqrt(static_cast<double>(cdim));
  const int rounded = static_cast<int>(std::lround(tau));
  if (std::abs(tau - rounded) > 1e-6)
    throw Error("holonomy algebra not a factor", "non-integer dimension");
  return rounded;
}

/// Basis of families t_a with t_b z(b,a) = z'(b,a) t_a on all comparable
/// pairs. Empty result means no nonzero intertwiner.
inline std::vector<std::map<DiamondId, Mat>> intertwiner_space(const UnitaryCocycle& z,
                                                               const UnitaryCocycle& zp,
                                                               double tol = 1e-9) {
  if (&z.poset() != &zp.poset()) throw Error("intertwiners need a common poset");
  const auto& p = z.poset();
  const int n = z.dim(), np = zp.dim();
  const int block = np * n;  // unknown t_a is np x n
  const int unknowns = p.size() * block;

  std::vector<std::pair<DiamondId, DiamondId>> pairs;
  for (const auto& d : p.diamonds())
    for (DiamondId a : p.comparables(d.id)) pairs.push_back({d.id, a});

  Mat system = Mat::Zero(static_cast<int>(pairs.size()) * block, unknowns);
  const Mat idn = Mat::Identity(n, n);
  const Mat idnp = Mat::Identity(np, np);
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto [b, a] = pairs[k];
    // vec(t_b z(b,a)) - vec(z'(b,a) t_a) = 0, column-major vec
    system.block(static_cast<int>(k) * block, b * block, block, block) =
        detail::kron(z.value(b, a).transpose(), idnp);
    system.block(static_cast<int>(k) * block, a * block, block, block) -=
        detail::kron(idn, zp.value(b, a));
  }
  const Mat null_basis = detail::nullspace(system, tol);
  std::vector<std::map<DiamondId, Mat>> out;
  for (int c = 0; c < null_basis.cols(); ++c) {
    std::map<DiamondId, Mat> family;
    for (int a = 0; a < p.size(); ++a) {
      Mat t(np, n);
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < np; ++i) t(i, j) = null_basis(a * block + j * np + i, c);
      family[a] = std::move(t);
    }
    out.push_back(std::move(family));
  }
  return out;
}

/// Locally constant transition data of the flat bundle reconstructed from a
/// holonomy representation: identity on tree edges, the generator word's
/// image on the rest.
struct FlatBundleData {
  std::map<std::pair<DiamondId, DiamondId>, Mat> transitions;  // upward pairs
};

inline FlatBundleData flat_bundle_from_holonomy(const Pi1Presentation& pres,
                                                const HolonomyRep& rep, double tol = 1e-9) {
  for (const Word& r : pres.relators()) {
    const Mat m = eval_word_in_images(r, rep.gen_images, rep.dim);
    if ((m - Mat::Identity(rep.dim, rep.dim)).norm() > tol)
      throw Error("not flat", word_to_string(r));
  }
  FlatBundleData data;
  for (const auto& e : pres.edges()) {
    Mat t = e.tree ? Mat::Identity(rep.dim, rep.dim) : rep.gen_images[e.generator];
    data.transitions[{e.sup, e.sub}] = std::move(t);
  }
  // products around every order-complex 2-simplex must close up
  const auto& p = pres.poset();
  auto trans = [&](DiamondId to, DiamondId from) -> Mat {
    if (p.leq(from, to)) return data.transitions.at({to, from});
    return data.transitions.at({from, to}).adjoint();
  };
  for (const auto& dc : p.diamonds())
    for (DiamondId o : p.comparables(dc.id)) {
      if (!p.leq(o, dc.id)) continue;
      for (DiamondId a : p.comparables(o)) {
        if (a == dc.id || !p.leq(a, o)) continue;
        const Mat prod = trans(a, dc.id) * trans(dc.id, o) * trans(o, a);
        if ((prod - Mat::Identity(rep.dim, rep.dim)).norm() > tol)
          throw Error("not flat", "simplex (" + std::to_string(a) + "," + std::to_string(o) +
                                      "," + std::to_string(dc.id) + ")");
      }
    }
  return data;
}

/// Transition data reread as a unitary cocycle.
inline UnitaryCocycle cocycle_from_flat_bundle(const CausalPoset& p, const FlatBundleData& data,
                                               int dim) {
  UnitaryCocycle z(p, dim);
  z.fill([&](DiamondId sup, DiamondId sub) -> Mat { return data.transitions.at({sup, sub}); });
  return z;
}

/// Degree-1 character: argument of each basis generator image (dim 1 only).
inline std::map<int, double> character_data(const HolonomyRep& rep) {
  if (rep.dim != 1) throw Error("character data requires a one-dimensional representation");
  std::map<int, double> out;
  for (std::size_t k = 0; k < rep.basis_images.size(); ++k)
    out[static_cast<int>(k)] = std::arg(rep.basis_images[k](0, 0));
  return out;
}

/// Evaluates the representation on an arbitrary loop through its raw edge word.
inline Mat rep_on_loop(const Pi1Presentation& pres, const HolonomyRep& rep, const PosetPath& loop) {
  return eval_word_in_images(pres.raw_word(loop), rep.gen_images, rep.dim);
}

/// Hol join (zeta ⊕ ... ⊕ zeta): the multiplet cocycle with topological part
/// induced by the representation along the frame and charged part n copies
/// of the scalar cocycle zeta.
inline UnitaryCocycle assemble_multiplet(const Pi1Presentation& pres, const HolonomyRep& rep,
                                         const UnitaryCocycle& zeta, const PathFrame& frame) {
  if (rep.dim < 1) throw Error("dimension 0 multiplet");
  if (zeta.dim() != 1) throw Error("incompatible dimensions", "zeta must be one-dimensional");
  if (!holonomy_rep(zeta, pres).topologically_trivial)
    throw Error("zeta is not topologically trivial");
  const auto& p = zeta.poset();
  const int n = rep.dim;

  UnitaryCocycle u(p, n, zeta.tolerance());
  u.fill([&](DiamondId sup, DiamondId sub) -> Mat {
    // image of the frame-closed loop p_{e,sup} * (sup,sub) * p_{sub,e}
    auto loop = compose_paths(reverse_path(frame.at(sup)),
                              compose_paths(PosetPath(p, sub, {{sup, sub}}), frame.at(sub)));
    return rep_on_loop(pres, rep, loop);
  });
  UnitaryCocycle zeta_n(p, n, zeta.tolerance());
  zeta_n.fill([&](DiamondId sup, DiamondId sub) -> Mat {
    return Mat(zeta.value(sup, sub)(0, 0) * Mat::Identity(n, n));
  });
  return join(u, zeta_n, frame);
}

}  // namespace abtk
