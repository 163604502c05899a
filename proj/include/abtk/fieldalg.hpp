#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <set>
#include <vector>

#include "abtk/core.hpp"
#include "abtk/paths.hpp"
#include "abtk/poset.hpp"

namespace abtk {

/// Unit scalar tracked exactly: an integer sign and a real argument carried
/// as a plain sum. Purely symbolic computations never touch the argument,
/// so their signs are exact; twisted phases accumulate as exact double sums.
struct PhaseScalar {
  int sign = +1;
  double arg = 0.0;

  std::complex<double> value() const { return double(sign) * std::polar(1.0, arg); }

  PhaseScalar& operator*=(const PhaseScalar& o) {
    sign *= o.sign;
    arg += o.arg;
    return *this;
  }
  friend PhaseScalar operator*(PhaseScalar a, const PhaseScalar& b) { return a *= b; }

  PhaseScalar conjugated() const { return {sign, -arg}; }
  void negate() { sign = -sign; }

  bool is_exactly(int s) const { return sign == s && arg == 0.0; }
  bool approx(const PhaseScalar& o, double tol = 1e-12) const {
    return std::abs(value() - o.value()) < tol;
  }
  bool operator==(const PhaseScalar&) const = default;
};

/// One localized field generator: the unitary at diamond o, optionally
/// adjointed.
struct FieldLetter {
  DiamondId o;
  bool dag = false;
  bool operator==(const FieldLetter&) const = default;
};

/// scalar * product of field letters, the ambient *-algebra element.
struct FieldWord {
  PhaseScalar scalar;
  std::vector<FieldLetter> letters;

  static FieldWord one() { return {}; }
  static FieldWord generator(DiamondId o, bool dag = false) { return {{}, {{o, dag}}}; }

  bool is_scalar() const { return letters.empty(); }
  int charge() const {
    int c = 0;
    for (const auto& l : letters) c += l.dag ? -1 : 1;
    return c;
  }

  FieldWord operator*(const FieldWord& rhs) const {
    FieldWord out;
    out.scalar = scalar * rhs.scalar;
    out.letters = letters;
    out.letters.insert(out.letters.end(), rhs.letters.begin(), rhs.letters.end());
    return out;
  }

  FieldWord adjoint() const {
    FieldWord out;
    out.scalar = scalar.conjugated();
    for (auto it = letters.rbegin(); it != letters.rend(); ++it)
      out.letters.push_back({it->o, !it->dag});
    return out;
  }

  bool operator==(const FieldWord&) const = default;
};

/// Rewriting to the canonical form of the signed partial-commutation monoid.
/// The relations: letters at one diamond with opposite flags cancel
/// (unitarity), and letters at causally disjoint diamonds anticommute,
/// whatever their flags. Letters at distinct non-disjoint diamonds never
/// reorder.
///
/// Two phases. First, cancellation to a fixpoint: a pair at the same
/// diamond with opposite flags annihilates once every letter between the
/// two commutes with that diamond, contributing the parity of the letters
/// crossed. Second, the lexicographically least linearisation: repeatedly
/// extract the smallest-diamond letter that commutes with everything before
/// it, again tracking crossing parity. Adjacent-swap bubbling alone is not
/// enough here; a letter disjoint from two mutually blocking neighbours has
/// sorted-looking local minima on both sides of them.
inline FieldWord normal_form(FieldWord w, const CausalPoset& P) {
  auto& ls = w.letters;
  bool cancelled = true;
  while (cancelled) {
    cancelled = false;
    for (std::size_t i = 0; i < ls.size() && !cancelled; ++i)
      for (std::size_t j = i + 1; j < ls.size(); ++j) {
        if (ls[j].o == ls[i].o) {
          if (ls[j].dag != ls[i].dag) {
            if ((j - i - 1) % 2 == 1) w.scalar.negate();
            ls.erase(ls.begin() + j);
            ls.erase(ls.begin() + i);
            cancelled = true;
          }
          break;  // a same-diamond letter blocks the scan either way
        }
        if (!P.disjoint(ls[i].o, ls[j].o)) break;
      }
  }

  std::vector<FieldLetter> out;
  out.reserve(ls.size());
  while (!ls.empty()) {
    std::size_t best = ls.size();
    for (std::size_t i = 0; i < ls.size(); ++i) {
      bool movable = true;
      for (std::size_t k = 0; k < i && movable; ++k)
        movable = ls[k].o != ls[i].o && P.disjoint(ls[k].o, ls[i].o);
      if (movable && (best == ls.size() || ls[i].o < ls[best].o)) best = i;
    }
    if (best % 2 == 1) w.scalar.negate();
    out.push_back(ls[best]);
    ls.erase(ls.begin() + best);
  }
  w.letters = std::move(out);
  return w;
}

/// Transporter-shaped cocycle of localized field words: the value on a
/// comparable pair (b,a) is phase * (b-dagger letters)^|n| (a letters)^|n|,
/// n the charge label. An optional per-pair phase table carries a twist.
class FieldCocycle {
public:
  using PhaseFn = std::function<PhaseScalar(DiamondId, DiamondId)>;

  FieldCocycle(const CausalPoset& p, int charge, PhaseFn phase = {})
      : poset_(&p), charge_(charge), phase_(std::move(phase)) {}

  static FieldCocycle trivial(const CausalPoset& p) { return FieldCocycle(p, 0); }

  const CausalPoset& poset() const { return *poset_; }
  int charge() const { return charge_; }
  bool has_twist() const { return static_cast<bool>(phase_); }

  /// Word of the ordered comparable pair (target, source).
  FieldWord value(DiamondId target, DiamondId source) const {
    if (target != source && !poset_->comparable(target, source))
      throw Error("invalid path", "pair not comparable");
    FieldWord w;
    if (phase_) w.scalar = phase_(target, source);
    const int n = std::abs(charge_);
    const bool dag_first = charge_ >= 0;
    for (int k = 0; k < n; ++k) w.letters.push_back({target, dag_first});
    for (int k = 0; k < n; ++k) w.letters.push_back({source, !dag_first});
    return normal_form(std::move(w), *poset_);
  }

  /// z(p) = z(step_k) ... z(step_1), reduced.
  FieldWord evaluate(const PosetPath& p) const {
    FieldWord acc = FieldWord::one();
    for (const auto& s : p.steps()) {
      if (s.source == s.target) continue;
      acc = value(s.target, s.source) * acc;
    }
    return normal_form(std::move(acc), *poset_);
  }

private:
  const CausalPoset* poset_;
  int charge_;
  PhaseFn phase_;
};

/// Dirac charge transporter z(b,a) = phi_b^* phi_a, or its conjugate
/// z-bar(b,a) = phi_b phi_a^* built from the adjoint generators.
inline FieldCocycle transporter(const CausalPoset& P, bool conjugate = false) {
  return FieldCocycle(P, conjugate ? -1 : +1);
}

/// z^(x n): transporter words from n-fold products of field letters.
inline FieldCocycle power(const FieldCocycle& z, int n) {
  if (n == 0) throw Error("power requires a nonzero exponent");
  return FieldCocycle(z.poset(), z.charge() * n);
}

namespace detail {

/// Smallest-id diamond causally disjoint from everything in `constraints`.
inline std::optional<DiamondId> disjoint_from_all(const CausalPoset& P,
                                                  const std::vector<DiamondId>& constraints) {
  for (int c = 0; c < P.size(); ++c) {
    bool ok = true;
    for (DiamondId d : constraints)
      if (!P.disjoint(c, d)) {
        ok = false;
        break;
      }
    if (ok) return c;
  }
  return std::nullopt;
}

inline std::vector<DiamondId> path_support(const PosetPath& p) {
  std::set<DiamondId> s{p.source()};
  for (const auto& st : p.steps()) {
    s.insert(st.source);
    s.insert(st.target);
  }
  return {s.begin(), s.end()};
}

}  // namespace detail

/// (z x z')(o,a) := z(o,a) z(p1) z'(o,a) z(p1)^* with p1 : o1 -> a and o1
/// causally disjoint from o and a. The auxiliary diamond is the smallest-id
/// qualifying one when not supplied.
inline FieldWord tensor_product(const FieldCocycle& z, const FieldCocycle& zp, DiamondId o,
                                DiamondId a, const CausalPoset& P,
                                std::optional<DiamondId> aux = std::nullopt) {
  if (o != a && !P.comparable(o, a)) throw Error("invalid path", "pair not comparable");
  if (!aux) aux = detail::disjoint_from_all(P, {o, a});
  if (!aux) throw Error("insufficient causal disjointness");
  const PosetPath p1 = find_path(P, *aux, a);
  const FieldWord zp1 = z.evaluate(p1);
  FieldWord out = z.value(o, a) * zp1 * zp.value(o, a) * zp1.adjoint();
  return normal_form(std::move(out), P);
}

/// Statistics operator of z at diamond a: the permutation-symmetry scalar
/// epsilon_a = (z(q)* x z(p)*) (z(p) x z(q)) with p the trivial path at a
/// and q : a -> o for a causally disjoint o. Evaluates to -1 for the Dirac
/// transporter and +1 for even-charge composites.
inline PhaseScalar statistics_phase(const FieldCocycle& z, DiamondId a, const CausalPoset& P) {
  P.require(a);
  // smallest admissible pair o _|_ a, o1 _|_ {o, a}
  std::optional<DiamondId> o, o1;
  for (DiamondId cand : causal_complement(P, a)) {
    if (auto aux = detail::disjoint_from_all(P, {a, cand})) {
      o = cand;
      o1 = aux;
      break;
    }
  }
  if (!o || !o1)
    throw Error("insufficient causal disjointness", "diamond " + std::to_string(a));
  const PosetPath q = find_path(P, a, *o);
  const PosetPath p1 = find_path(P, *o1, a);

  const FieldWord zq = z.evaluate(q);
  const FieldWord zp1 = z.evaluate(p1);
  // z(q)* x z(p)* = z(q)* . z(p1) z(p)* z(p1)*  with z(p) = 1
  const FieldWord left = zq.adjoint() * zp1 * zp1.adjoint();
  // z(p) x z(q) = z(p1) z(q) z(p1)*
  const FieldWord right = zp1 * zq * zp1.adjoint();
  const FieldWord eps = normal_form(left * right, P);
  if (!eps.is_scalar()) throw Error("statistics undefined for this cocycle");
  return eps.scalar;
}

/// rho^z(o)_a(A) = z(p) A z(p-bar) with p : e -> o and e causally disjoint
/// from every diamond carrying a letter of A. The source is the smallest-id
/// qualifying diamond when not supplied; the result does not depend on the
/// choice.
inline FieldWord localized_endomorphism(const FieldCocycle& z, DiamondId o, const FieldWord& A,
                                        const CausalPoset& P,
                                        std::optional<PosetPath> path = std::nullopt) {
  P.require(o);
  if (!path) {
    std::vector<DiamondId> constraints;
    for (const auto& l : A.letters) constraints.push_back(l.o);
    const auto e = detail::disjoint_from_all(P, constraints);
    if (!e) throw Error("insufficient causal disjointness", "no source for the transport path");
    path = find_path(P, *e, o);
  }
  const FieldWord zp = z.evaluate(*path);
  return normal_form(zp * A * zp.adjoint(), P);
}

}  // namespace abtk
