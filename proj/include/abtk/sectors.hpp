#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "abtk/cocycle.hpp"
#include "abtk/core.hpp"
#include "abtk/fieldalg.hpp"
#include "abtk/flatpot.hpp"
#include "abtk/homotopy.hpp"

namespace abtk {

/// Topological twist: a U(1) phase per comparable pair satisfying the
/// cocycle relation, stored as exact argument sums. The orientation is
/// fixed so that the transporter twisted by a potential A has holonomy
/// exp(-i loop_integral(A)) on forward loops.
class Twist {
public:
  Twist(const CausalPoset& p, std::map<std::pair<DiamondId, DiamondId>, double> arg_up)
      : poset_(&p), arg_up_(std::move(arg_up)) {}

  static Twist trivial(const CausalPoset& p) {
    Twist t(p, {});
    for (const auto& d : p.diamonds())
      for (DiamondId sub : p.comparables(d.id))
        if (p.leq(sub, d.id)) t.arg_up_[{d.id, sub}] = 0.0;
    return t;
  }

  const CausalPoset& poset() const { return *poset_; }

  double arg(DiamondId b, DiamondId a) const {
    if (b == a) return 0.0;
    if (poset_->leq(a, b)) return arg_up_.at({b, a});
    if (poset_->leq(b, a)) return -arg_up_.at({a, b});
    throw Error("invalid path", "pair not comparable");
  }

  PhaseScalar phase(DiamondId b, DiamondId a) const { return {+1, arg(b, a)}; }
  std::complex<double> value(DiamondId b, DiamondId a) const { return phase(b, a).value(); }

  /// Accumulated argument along a path, in evaluation orientation.
  double path_arg(const PosetPath& p) const {
    double s = 0.0;
    for (const auto& st : p.steps())
      if (st.source != st.target) s += arg(st.target, st.source);
    return s;
  }

  bool cocycle_ok(double tol = 1e-12) const {
    for (const auto& dc : poset_->diamonds())
      for (DiamondId o : poset_->comparables(dc.id)) {
        if (!poset_->leq(o, dc.id)) continue;
        for (DiamondId a : poset_->comparables(o)) {
          if (a == dc.id || !poset_->leq(a, o)) continue;
          if (std::abs(arg(dc.id, o) + arg(o, a) - arg(dc.id, a)) > tol) return false;
        }
      }
    return true;
  }

private:
  const CausalPoset* poset_;
  std::map<std::pair<DiamondId, DiamondId>, double> arg_up_;
};

/// sigma from the pair cocycle of a flat potential. The stored argument is
/// +A^hat on upward pairs; combined with the transporter's evaluation order
/// this yields loop values exp(-i * loop_integral).
inline Twist twist_from_potential(const AbelianCocycle& hat) {
  const auto& p = hat.poset();
  std::map<std::pair<DiamondId, DiamondId>, double> args;
  for (const auto& d : p.diamonds())
    for (DiamondId sub : p.comparables(d.id))
      if (p.leq(sub, d.id)) args[{d.id, sub}] = hat.value(d.id, sub);
  return Twist(p, std::move(args));
}

/// Gauge action of the inclusion morphism on a localized word: a charge-n
/// word picks up the n-th power of the pair phase.
inline FieldWord twisted_morphism(const Twist& sigma, DiamondId o, DiamondId a, FieldWord w) {
  w.scalar.arg += w.charge() * sigma.arg(o, a);
  return w;
}

/// Charge-1 transporter decorated with the twist phases.
inline FieldCocycle twisted_transporter(const CausalPoset& P, const Twist& sigma) {
  return FieldCocycle(P, +1, [sigma](DiamondId b, DiamondId a) { return sigma.phase(b, a); });
}

/// z = (phase part) join (charged part): the phase part is the pole-valued
/// scalar twist u(b,a) = sigma over the frame-closed loop of (b,a); the
/// charged part is the transporter with frame phases, unitarily equivalent
/// to the untwisted transporter through the family `intertwiner`.
struct Factorization {
  Twist phase_part;
  FieldCocycle charged_part;
  std::map<DiamondId, PhaseScalar> intertwiner;
};

inline Factorization factorize(const Twist& sigma, const PathFrame& frame) {
  const auto& p = sigma.poset();
  std::map<DiamondId, double> S;
  for (const auto& d : p.diamonds()) S[d.id] = sigma.path_arg(frame.at(d.id));

  std::map<std::pair<DiamondId, DiamondId>, double> u_args;
  for (const auto& d : p.diamonds())
    for (DiamondId sub : p.comparables(d.id))
      if (p.leq(sub, d.id)) u_args[{d.id, sub}] = -S[d.id] + sigma.arg(d.id, sub) + S[sub];
  Twist phase_part(p, std::move(u_args));

  auto sb = std::make_shared<std::map<DiamondId, double>>(S);
  FieldCocycle charged(p, +1, [sb](DiamondId b, DiamondId a) {
    return PhaseScalar{+1, sb->at(b) - sb->at(a)};
  });

  std::map<DiamondId, PhaseScalar> t;
  for (const auto& [a, s] : S) t[a] = PhaseScalar{+1, s};
  return {std::move(phase_part), std::move(charged), std::move(t)};
}

/// Per-pair scalar of z against the untwisted transporter, recovering the
/// twist of a twisted transporter exactly.
inline Twist sector_to_twist(const FieldCocycle& z) {
  const auto& p = z.poset();
  const FieldCocycle z1 = transporter(p, z.charge() < 0);
  std::map<std::pair<DiamondId, DiamondId>, double> args;
  for (const auto& d : p.diamonds())
    for (DiamondId sub : p.comparables(d.id)) {
      if (!p.leq(sub, d.id)) continue;
      FieldWord w = normal_form(z.value(d.id, sub) * z1.value(d.id, sub).adjoint(), p);
      if (!w.is_scalar() || w.scalar.sign != +1)
        throw Error("statistics undefined for this cocycle", "not a twisted transporter");
      args[{d.id, sub}] = w.scalar.arg;
    }
  return Twist(p, std::move(args));
}

inline FieldCocycle twist_to_sector(const CausalPoset& P, const Twist& sigma) {
  return twisted_transporter(P, sigma);
}

/// Quantum numbers of a sector.
struct SectorReport {
  std::optional<int> charge;  // field cocycles only
  std::optional<int> kappa;   // statistics phase, field cocycles only
  std::optional<int> d;       // statistical dimension, field cocycles only
  int tau = 1;
  std::map<int, double> character;  // basis generator -> holonomy argument
  bool trivial = true;
  std::vector<double> periods;  // representing potential, dim-1 characters only
};

namespace detail {

inline double principal_arg(double x) {
  double y = std::remainder(x, 2.0 * M_PI);
  if (y <= -M_PI) y += 2.0 * M_PI;
  return y;
}

}  // namespace detail

inline SectorReport analyze(const UnitaryCocycle& z, const Pi1Presentation& pres) {
  SectorReport report;
  report.tau = topological_dimension(z, pres);
  const auto rep = holonomy_rep(z, pres);
  report.trivial = rep.topologically_trivial;
  if (z.dim() == 1) {
    for (const auto& [k, phase] : character_data(rep)) {
      report.character[k] = phase;
      report.periods.push_back(detail::principal_arg(-phase));
    }
  } else {
    for (std::size_t k = 0; k < rep.basis_images.size(); ++k)
      report.character[static_cast<int>(k)] =
          std::arg(rep.basis_images[k].determinant());  // determinant character
  }
  return report;
}

inline SectorReport analyze(const FieldCocycle& z, const CausalPoset& P,
                            const Pi1Presentation& pres) {
  SectorReport report;
  report.charge = z.charge();
  report.d = 1;

  // statistics at the first diamond with enough causal room
  std::optional<PhaseScalar> eps;
  for (int a = 0; a < P.size() && !eps; ++a) {
    try {
      eps = statistics_phase(z, a, P);
    } catch (const Error&) {
      continue;
    }
  }
  if (!eps) throw Error("insufficient causal disjointness", "no statistics base");
  report.kappa = eps->sign;

  // U(1) shadow of the transporter scalars carries the topology
  UnitaryCocycle shadow(P, 1);
  shadow.fill([&](DiamondId sup, DiamondId sub) -> Mat {
    const FieldWord w = z.value(sup, sub);
    Mat m(1, 1);
    m(0, 0) = w.scalar.value();
    return m;
  });
  report.tau = topological_dimension(shadow, pres);
  const auto rep = holonomy_rep(shadow, pres);
  report.trivial = rep.topologically_trivial;
  for (const auto& [k, phase] : character_data(rep)) {
    report.character[k] = phase;
    report.periods.push_back(detail::principal_arg(-phase));
  }
  return report;
}

}  // namespace abtk
