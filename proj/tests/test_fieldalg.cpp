#include <random>

#include "abtk/fieldalg.hpp"
#include "catch2/catch_amalgamated.hpp"
#include "oracles.hpp"

using namespace abtk;

namespace {

FieldWord word_of(std::initializer_list<FieldLetter> letters) {
  FieldWord w;
  w.letters = letters;
  return w;
}

FieldWord random_word(const CausalPoset& P, std::mt19937& rng, int max_len = 12) {
  std::uniform_int_distribution<int> len(0, max_len);
  std::uniform_int_distribution<int> diamond(0, P.size() - 1);
  std::bernoulli_distribution dag(0.5);
  FieldWord w;
  const int n = len(rng);
  for (int i = 0; i < n; ++i) w.letters.push_back({diamond(rng), dag(rng)});
  return w;
}

PosetPath random_walk_to(const CausalPoset& P, DiamondId from, DiamondId to, std::mt19937& rng,
                         int wander = 6) {
  PosetPath path = PosetPath::trivial(P, from);
  DiamondId at = from;
  std::uniform_int_distribution<int> hops(0, wander);
  const int n = hops(rng);
  for (int i = 0; i < n; ++i) {
    const auto& nbrs = P.comparables(at);
    std::uniform_int_distribution<std::size_t> pick(0, nbrs.size() - 1);
    DiamondId next = nbrs[pick(rng)];
    path = compose_paths(PosetPath(P, at, {{next, at}}), path);
    at = next;
  }
  return compose_paths(find_path(P, at, to), path);
}

}  // namespace

TEST_CASE("normal form implements the generator relations") {
  auto P = build_net(NetKind::circle, 8);
  DiamondId o0 = *P.find({0});
  DiamondId o2 = *P.find({2});
  DiamondId o4 = *P.find({4});
  REQUIRE(P.disjoint(o0, o2));
  REQUIRE(P.disjoint(o0, o4));
  REQUIRE(P.disjoint(o2, o4));

  SECTION("unitarity cancellations") {
    auto w1 = normal_form(word_of({{o0, false}, {o0, true}}), P);
    CHECK(w1.is_scalar());
    CHECK(w1.scalar.is_exactly(+1));
    auto w2 = normal_form(word_of({{o0, true}, {o0, false}}), P);
    CHECK(w2.is_scalar());
    CHECK(w2.scalar.is_exactly(+1));
  }

  SECTION("disjoint letters anticommute into canonical order") {
    // phi_2^* phi_0 = - phi_0 phi_2^*
    auto w = normal_form(word_of({{o2, true}, {o0, false}}), P);
    CHECK(w.letters == std::vector<FieldLetter>{{o0, false}, {o2, true}});
    CHECK(w.scalar.is_exactly(-1));
  }

  SECTION("observables slide past disjoint letters with no sign") {
    // (phi_0^* phi_2) phi_4 and phi_4 (phi_0^* phi_2) normalise identically
    auto left = normal_form(word_of({{o0, true}, {o2, false}, {o4, false}}), P);
    auto right = normal_form(word_of({{o4, false}, {o0, true}, {o2, false}}), P);
    CHECK(left == right);
    CHECK(left.scalar.is_exactly(+1));
  }

  SECTION("non-disjoint letters are never reordered") {
    DiamondId pair01 = *P.find({0, 1});
    auto w = normal_form(word_of({{pair01, false}, {o0, false}}), P);
    CHECK(w.letters == std::vector<FieldLetter>{{pair01, false}, {o0, false}});
  }

  SECTION("normal form is idempotent") {
    std::mt19937 rng(99);
    for (int t = 0; t < 200; ++t) {
      auto w = normal_form(random_word(P, rng), P);
      CHECK(normal_form(w, P) == w);
    }
  }

  SECTION("adjoint is an antihomomorphism through the rewriting") {
    std::mt19937 rng(123);
    for (int t = 0; t < 200; ++t) {
      auto v = random_word(P, rng, 6);
      auto w = random_word(P, rng, 6);
      CHECK(normal_form((v * w).adjoint(), P) ==
            normal_form(w.adjoint() * v.adjoint(), P));
      CHECK(normal_form(normal_form(w, P).adjoint(), P) == normal_form(w.adjoint(), P));
    }
  }

  SECTION("charge is additive and rewrite-invariant") {
    std::mt19937 rng(321);
    for (int t = 0; t < 200; ++t) {
      auto v = random_word(P, rng, 6);
      auto w = random_word(P, rng, 6);
      CHECK((v * w).charge() == v.charge() + w.charge());
      CHECK(normal_form(v, P).charge() == v.charge());
    }
  }
}

namespace {

// A random walk through the relations: adjacent anticommutations in either
// direction, plus insertions and cancellations of adjacent unitarity pairs.
// The result is a different representative of the same algebra element.
FieldWord random_equivalent(FieldWord w, const CausalPoset& P, std::mt19937& rng, int moves) {
  std::uniform_int_distribution<int> kind(0, 3);
  std::uniform_int_distribution<int> diamond(0, P.size() - 1);
  std::bernoulli_distribution dag(0.5);
  for (int m = 0; m < moves; ++m) {
    auto& ls = w.letters;
    switch (kind(rng)) {
      case 0:
      case 1: {  // swap a random adjacent disjoint pair
        std::vector<std::size_t> sites;
        for (std::size_t i = 0; i + 1 < ls.size(); ++i)
          if (ls[i].o != ls[i + 1].o && P.disjoint(ls[i].o, ls[i + 1].o)) sites.push_back(i);
        if (sites.empty()) break;
        std::size_t i = sites[std::uniform_int_distribution<std::size_t>(0, sites.size() - 1)(rng)];
        std::swap(ls[i], ls[i + 1]);
        w.scalar.negate();
        break;
      }
      case 2: {  // insert phi phi^* somewhere
        std::size_t at = std::uniform_int_distribution<std::size_t>(0, ls.size())(rng);
        const DiamondId o = diamond(rng);
        const bool d = dag(rng);
        ls.insert(ls.begin() + at, {{o, d}, {o, !d}});
        break;
      }
      case 3: {  // cancel a random adjacent unitarity pair
        std::vector<std::size_t> sites;
        for (std::size_t i = 0; i + 1 < ls.size(); ++i)
          if (ls[i].o == ls[i + 1].o && ls[i].dag != ls[i + 1].dag) sites.push_back(i);
        if (sites.empty()) break;
        std::size_t i = sites[std::uniform_int_distribution<std::size_t>(0, sites.size() - 1)(rng)];
        ls.erase(ls.begin() + i, ls.begin() + i + 2);
        break;
      }
    }
  }
  return w;
}

}  // namespace

TEST_CASE("confluence over random words and rewrite orders") {
  auto P = build_net(NetKind::circle, 8);
  std::mt19937 rng(2718);
  for (int t = 0; t < 1000; ++t) {
    const FieldWord w = random_word(P, rng);
    const FieldWord canonical = normal_form(w, P);
    const FieldWord other = normal_form(random_equivalent(w, P, rng, 24), P);
    REQUIRE(other.letters == canonical.letters);
    REQUIRE(other.scalar.sign == canonical.scalar.sign);
    REQUIRE(other.scalar.arg == canonical.scalar.arg);
  }
}

TEST_CASE("graded locality") {
  auto P = build_net(NetKind::circle, 8);
  std::mt19937 rng(55);
  // charge-0 words supported inside {0,1,2} commute with far-away letters
  DiamondId region = *P.find({0, 1, 2});
  std::vector<DiamondId> inside;
  for (const auto& d : P.diamonds())
    if (P.leq(d.id, region)) inside.push_back(d.id);
  std::vector<DiamondId> far;
  for (const auto& d : P.diamonds()) {
    bool ok = true;
    for (DiamondId i : inside) ok = ok && P.disjoint(d.id, i);
    if (ok) far.push_back(d.id);
  }
  REQUIRE_FALSE(far.empty());

  std::uniform_int_distribution<std::size_t> pick_in(0, inside.size() - 1);
  std::uniform_int_distribution<std::size_t> pick_far(0, far.size() - 1);
  std::bernoulli_distribution dag(0.5);
  int found = 0;
  for (int t = 0; t < 400; ++t) {
    FieldWord w;
    for (int i = 0; i < 6; ++i) w.letters.push_back({inside[pick_in(rng)], dag(rng)});
    if (w.charge() != 0) continue;
    ++found;
    FieldWord ell = FieldWord::generator(far[pick_far(rng)], dag(rng));
    CHECK(normal_form(w * ell, P) == normal_form(ell * w, P));
  }
  REQUIRE(found > 20);
}

TEST_CASE("transporters") {
  auto P = build_net(NetKind::circle, 8);
  auto z = transporter(P);
  auto zbar = transporter(P, true);

  SECTION("values are the two-letter transporter words") {
    DiamondId sup = *P.find({0, 1});
    DiamondId sub = *P.find({0});
    auto w = z.value(sup, sub);
    CHECK(w.letters == std::vector<FieldLetter>{{sup, true}, {sub, false}});
    CHECK(w.charge() == 0);
    auto wb = zbar.value(sup, sub);
    CHECK(wb.letters == std::vector<FieldLetter>{{sup, false}, {sub, true}});
  }

  SECTION("adjoint pairs compose to one") {
    DiamondId sup = *P.find({2, 3});
    DiamondId sub = *P.find({3});
    auto prod = normal_form(z.value(sub, sup) * z.value(sup, sub), P);
    CHECK(prod.is_scalar());
    CHECK(prod.scalar.is_exactly(+1));
  }

  SECTION("cocycle law on every inclusion chain") {
    for (const auto& dc : P.diamonds())
      for (DiamondId o : P.comparables(dc.id)) {
        if (!P.leq(o, dc.id)) continue;
        for (DiamondId a : P.comparables(o)) {
          if (a == dc.id || !P.leq(a, o)) continue;
          auto lhs = normal_form(z.value(dc.id, o) * z.value(o, a), P);
          CHECK(lhs == z.value(dc.id, a));
        }
      }
  }

  SECTION("loops evaluate to exactly one") {
    std::mt19937 rng(7);
    for (int t = 0; t < 25; ++t) {
      auto loop = random_walk_to(P, 0, 0, rng, 10);
      auto w = z.evaluate(loop);
      CHECK(w.is_scalar());
      CHECK(w.scalar.is_exactly(+1));
      auto wb = zbar.evaluate(loop);
      CHECK(wb.is_scalar());
      CHECK(wb.scalar.is_exactly(+1));
    }
  }

  SECTION("path evaluation telescopes to the endpoint word") {
    std::mt19937 rng(13);
    DiamondId from = *P.find({4});
    DiamondId to = *P.find({1, 2});
    auto path = random_walk_to(P, from, to, rng);
    auto w = z.evaluate(path);
    auto expected = normal_form(FieldWord::generator(to, true) * FieldWord::generator(from), P);
    CHECK(w == expected);
  }
}

TEST_CASE("powers of the transporter") {
  auto P = build_net(NetKind::circle, 8);
  auto z = transporter(P);

  SECTION("first power is the transporter itself") {
    auto z1 = power(z, 1);
    DiamondId sup = *P.find({0, 1});
    CHECK(z1.value(sup, *P.find({0})) == z.value(sup, *P.find({0})));
  }

  SECTION("squares telescope on loops") {
    auto z2 = power(z, 2);
    std::mt19937 rng(31);
    auto loop = random_walk_to(P, 2, 2, rng, 8);
    auto w = z2.evaluate(loop);
    CHECK(w.is_scalar());
    CHECK(w.scalar.is_exactly(+1));
    DiamondId sup = *P.find({0, 1});
    CHECK(z2.value(sup, *P.find({0})).charge() == 0);
    CHECK(z2.value(sup, *P.find({0})).letters.size() == 4);
  }

  SECTION("inverse power is the conjugate transporter") {
    auto zm = power(z, -1);
    auto zbar = transporter(P, true);
    for (const auto& d : P.diamonds())
      for (DiamondId a : P.comparables(d.id))
        CHECK(zm.value(d.id, a) == zbar.value(d.id, a));
  }

  SECTION("zero power is rejected") {
    CHECK_THROWS_WITH(power(z, 0), Catch::Matchers::ContainsSubstring("nonzero"));
  }
}

TEST_CASE("tensor products") {
  auto P = build_net(NetKind::circle, 8);
  auto z = transporter(P);
  auto zbar = transporter(P, true);
  auto iota = FieldCocycle::trivial(P);

  SECTION("trivial against trivial") {
    DiamondId sup = *P.find({0, 1});
    auto w = tensor_product(iota, iota, sup, *P.find({0}), P);
    CHECK(w.is_scalar());
    CHECK(w.scalar.is_exactly(+1));
  }

  SECTION("z against its conjugate is exactly one on every comparable pair") {
    for (const auto& d : P.diamonds())
      for (DiamondId a : P.comparables(d.id)) {
        auto w = tensor_product(z, zbar, d.id, a, P);
        REQUIRE(w.is_scalar());
        REQUIRE(w.scalar.is_exactly(+1));
      }
  }

  SECTION("z against itself is a charge-2 word") {
    DiamondId sup = *P.find({0, 1});
    auto w = tensor_product(z, z, sup, *P.find({0}), P);
    CHECK_FALSE(w.is_scalar());
    CHECK(w.charge() == 0);
    CHECK(w.letters.size() == 4);
  }

  SECTION("no auxiliary diamond means no tensor structure") {
    auto small = CausalPoset::from_cover(make_line_complex(3), {{0}, {0, 1}});
    auto t = FieldCocycle::trivial(small);
    CHECK_THROWS_WITH(tensor_product(t, t, 1, 0, small),
                      Catch::Matchers::ContainsSubstring("insufficient causal disjointness"));
  }
}

TEST_CASE("statistics phases") {
  auto P = build_net(NetKind::circle, 8);
  auto z = transporter(P);

  SECTION("the Dirac transporter is a Fermi sector") {
    int evaluated = 0;
    for (const auto& d : P.diamonds()) {
      if (d.support.size() > 3) continue;  // no room for the auxiliary diamond
      auto eps = statistics_phase(z, d.id, P);
      REQUIRE(eps.is_exactly(-1));
      ++evaluated;
    }
    CHECK(evaluated == 24);
    CHECK_THROWS_WITH(statistics_phase(z, *P.find({0, 1, 2, 3}), P),
                      Catch::Matchers::ContainsSubstring("insufficient causal disjointness"));
  }

  SECTION("the trivial cocycle is Bose") {
    auto eps = statistics_phase(FieldCocycle::trivial(P), *P.find({0}), P);
    CHECK(eps.is_exactly(+1));
  }

  SECTION("charge-2 composites are Bose") {
    auto eps = statistics_phase(power(z, 2), *P.find({0}), P);
    CHECK(eps.is_exactly(+1));
  }

  SECTION("the conjugate sector is Fermi too") {
    auto eps = statistics_phase(transporter(P, true), *P.find({0}), P);
    CHECK(eps.is_exactly(-1));
  }

  SECTION("statistics needs causal room") {
    auto small = CausalPoset::from_cover(make_line_complex(3), {{0}, {1}, {2}});
    auto t = FieldCocycle::trivial(small);
    CHECK_THROWS_WITH(statistics_phase(t, 1, small),
                      Catch::Matchers::ContainsSubstring("insufficient causal disjointness"));
  }
}

TEST_CASE("localized endomorphisms") {
  auto P = build_net(NetKind::circle, 8);
  auto z = transporter(P);
  DiamondId o = *P.find({0});

  SECTION("acts as the identity on causally disjoint observables") {
    // charge-0 word in diamonds disjoint from o
    FieldWord A;
    A.letters = {{*P.find({3}), true}, {*P.find({4, 5}), false}};
    REQUIRE(P.disjoint(o, A.letters[0].o));
    REQUIRE(P.disjoint(o, A.letters[1].o));
    CHECK(localized_endomorphism(z, o, A, P) == normal_form(A, P));
  }

  SECTION("trivial transport path conjugates by one") {
    FieldWord A = FieldWord::generator(*P.find({3}));
    auto out = localized_endomorphism(z, o, A, P, PosetPath::trivial(P, o));
    CHECK(out == normal_form(A, P));
  }

  SECTION("path independence, including the source diamond") {
    std::mt19937 rng(77);
    FieldWord A;
    A.letters = {{*P.find({4}), false}, {*P.find({4}), false}};  // charge 2 at {4}
    const auto reference = localized_endomorphism(z, o, A, P);
    for (int t = 0; t < 10; ++t) {
      for (DiamondId e : causal_complement(P, A.letters[0].o)) {
        auto path = random_walk_to(P, e, o, rng);
        CHECK(localized_endomorphism(z, o, A, P, path) == reference);
      }
    }
  }

  SECTION("transport identity along arbitrary paths") {
    std::mt19937 rng(78);
    FieldWord A = FieldWord::generator(*P.find({4}));
    DiamondId target = *P.find({1, 2});
    for (int t = 0; t < 20; ++t) {
      auto p = random_walk_to(P, o, target, rng);
      auto lhs = normal_form(z.evaluate(p) * localized_endomorphism(z, o, A, P), P);
      auto rhs = normal_form(localized_endomorphism(z, target, A, P) * z.evaluate(p), P);
      CHECK(lhs == rhs);
    }
  }

  SECTION("charge-0 outputs stay in the commutant of disjoint letters") {
    FieldWord A;
    A.letters = {{*P.find({4}), true}, {*P.find({4, 5}), false}};
    auto out = localized_endomorphism(z, o, A, P);
    REQUIRE(out.charge() == 0);
    FieldWord ell = FieldWord::generator(*P.find({2}), false);
    bool disjoint_all = P.disjoint(*P.find({2}), *P.find({4})) &&
                        P.disjoint(*P.find({2}), *P.find({4, 5})) &&
                        P.disjoint(*P.find({2}), o);
    if (disjoint_all)
      CHECK(normal_form(out * ell, P) == normal_form(ell * out, P));
  }

  SECTION("a word covering the whole surface has no transport source") {
    FieldWord A;
    A.letters = {{*P.find({0}), false}, {*P.find({2}), false},
                 {*P.find({4}), false}, {*P.find({6}), false}};
    CHECK_THROWS_WITH(localized_endomorphism(z, o, A, P),
                      Catch::Matchers::ContainsSubstring("insufficient causal disjointness"));
  }
}
