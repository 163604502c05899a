#include <algorithm>
#include <set>

#include "abtk/poset.hpp"
#include "catch2/catch_amalgamated.hpp"
#include "oracles.hpp"

using namespace abtk;

namespace {

bool has_code(const ValidationReport& r, const std::string& code) {
  return std::any_of(r.violations.begin(), r.violations.end(),
                     [&](const Violation& v) { return v.code == code; });
}

std::set<std::vector<VertexId>> support_set(const CausalPoset& p) {
  std::set<std::vector<VertexId>> s;
  for (const auto& d : p.diamonds()) s.insert(d.support);
  return s;
}

}  // namespace

TEST_CASE("line net enumerates proper vertex intervals") {
  auto p = build_net(NetKind::line, 5);

  // Oracle: connected subsets of a path graph are exactly its intervals.
  std::set<std::vector<VertexId>> expected;
  for (const auto& s : oracle::connected_subsets(p.base()))
    if (s.size() < 5) expected.insert(s);

  CHECK(p.size() == 14);
  CHECK(support_set(p) == expected);
  CHECK(validate_net(p).valid());

  // Deterministic ids: ordered by (size, lexicographic support).
  CHECK(p.diamond(0).support == std::vector<VertexId>{0});
  CHECK(p.diamond(4).support == std::vector<VertexId>{4});
  CHECK(p.diamond(5).support == std::vector<VertexId>{0, 1});
}

TEST_CASE("circle net enumerates arcs with inhabited complements") {
  auto p = build_net(NetKind::circle, 6);

  // Oracle: connected proper subsets of the 6-cycle whose causal complement
  // (buffer rule) contains another such subset.
  std::vector<std::vector<VertexId>> arcs;
  for (const auto& s : oracle::connected_subsets(p.base()))
    if (s.size() < 6) arcs.push_back(s);
  std::set<std::vector<VertexId>> expected;
  for (const auto& a : arcs)
    for (const auto& b : arcs)
      if (oracle::buffer_disjoint(p.base(), a, b)) {
        expected.insert(a);
        break;
      }

  CHECK(p.size() == 18);
  CHECK(support_set(p) == expected);
  CHECK(validate_net(p).valid());

  int per_length[4] = {0, 0, 0, 0};
  for (const auto& d : p.diamonds()) per_length[d.support.size()]++;
  CHECK(per_length[1] == 6);
  CHECK(per_length[2] == 6);
  CHECK(per_length[3] == 6);
}

TEST_CASE("undersized fixtures are rejected") {
  CHECK_THROWS_WITH(build_net(NetKind::circle, 4),
                    Catch::Matchers::ContainsSubstring("fixture too small"));
  CHECK_THROWS_WITH(build_net(NetKind::circle, 5),
                    Catch::Matchers::ContainsSubstring("fixture too small"));
  CHECK_THROWS_WITH(build_net(NetKind::line, 2),
                    Catch::Matchers::ContainsSubstring("fixture too small"));
  CHECK_THROWS_WITH(build_net(NetKind::wedge, 6, 5),
                    Catch::Matchers::ContainsSubstring("fixture too small"));
}

TEST_CASE("wedge net validates and covers both circles") {
  auto p = build_net(NetKind::wedge, 6, 6);
  CHECK(p.size() == 35);  // 18 + 18 arcs, {0} shared
  CHECK(validate_net(p).valid());
  CHECK(p.find({0}).has_value());
  CHECK(p.find({0, 1}).has_value());
  CHECK(p.find({0, 6}).has_value());
  CHECK_FALSE(p.find({5, 6}).has_value());  // no cross-circle arc avoiding the joint
}

TEST_CASE("causal complement matches the brute-force definition") {
  auto p = build_net(NetKind::circle, 6);
  for (const auto& d : p.diamonds())
    CHECK(causal_complement(p, d.id) == oracle::complement_by_definition(p, d.id));

  SECTION("one-vertex arc sees the far arc with a one-vertex gap each side") {
    DiamondId o = *p.find({0});
    auto c = causal_complement(p, o);
    CHECK(std::count(c.begin(), c.end(), *p.find({2, 3, 4})) == 1);
    CHECK(std::count(c.begin(), c.end(), *p.find({1})) == 0);
  }

  SECTION("three-vertex arc leaves exactly the opposite vertex") {
    DiamondId o = *p.find({0, 1, 2});
    CHECK(causal_complement(p, o) == std::vector<DiamondId>{*p.find({4})});
  }

  SECTION("complement never contains a comparable diamond") {
    for (const auto& d : p.diamonds())
      for (DiamondId a : causal_complement(p, d.id)) CHECK_FALSE(p.comparable(d.id, a));
  }

  SECTION("unknown diamond id") {
    CHECK_THROWS_WITH(causal_complement(p, 99), Catch::Matchers::ContainsSubstring("no such diamond"));
  }
}

TEST_CASE("line complement of an end segment") {
  auto p = build_net(NetKind::line, 5);
  DiamondId o = *p.find({0});
  auto c = causal_complement(p, o);
  // Oracle: every segment not containing v0 or v1.
  std::vector<DiamondId> expected;
  for (const auto& d : p.diamonds()) {
    bool touches = std::binary_search(d.support.begin(), d.support.end(), 0) ||
                   std::binary_search(d.support.begin(), d.support.end(), 1);
    if (!touches) expected.push_back(d.id);
  }
  CHECK(c == expected);
  CHECK(c.size() == 6);
}

TEST_CASE("disjointness heredity holds on all fixtures") {
  for (auto p : {build_net(NetKind::circle, 6), build_net(NetKind::line, 5),
                 build_net(NetKind::wedge, 6, 6)}) {
    for (int o = 0; o < p.size(); ++o)
      for (int a = 0; a < p.size(); ++a) {
        if (!p.disjoint(o, a)) continue;
        for (int sub = 0; sub < p.size(); ++sub)
          if (p.leq(sub, o)) CHECK(p.disjoint(sub, a));
      }
  }
}

TEST_CASE("complement subposets are pathwise connected on circle fixtures") {
  for (int n : {6, 8}) {
    auto p = build_net(NetKind::circle, n);
    for (const auto& d : p.diamonds()) {
      auto c = causal_complement(p, d.id);
      REQUIRE_FALSE(c.empty());
      CHECK(detail::poset_connected_within(p, c));
    }
  }
}

TEST_CASE("validate_net reports hand-injected axiom violations") {
  SECTION("disjointness against comparability") {
    auto p = CausalPoset::from_cover(make_line_complex(3), {{0}, {0, 1}},
                                     std::vector<std::pair<DiamondId, DiamondId>>{{0, 1}});
    auto r = validate_net(p);
    CHECK(has_code(r, "disjointness/comparability conflict"));
  }

  SECTION("empty causal complement") {
    auto p = CausalPoset::from_cover(make_line_complex(3), {{0}, {1}, {2}, {0, 1, 2}});
    auto r = validate_net(p);
    CHECK(has_code(r, "empty causal complement"));
  }

  SECTION("disconnected causal complement through a too-coarse cover") {
    auto p = CausalPoset::from_cover(make_circle_complex(6), {{0}, {2}, {4}});
    auto r = validate_net(p);
    CHECK(has_code(r, "disconnected causal complement"));
  }

  SECTION("heredity violation in a declared relation") {
    auto p = CausalPoset::from_cover(make_circle_complex(6), {{0}, {0, 1}, {3}},
                                     std::vector<std::pair<DiamondId, DiamondId>>{{1, 2}});
    auto r = validate_net(p);
    CHECK(has_code(r, "disjointness heredity violation"));
  }

  SECTION("support shape violations") {
    auto disc = CausalPoset::from_cover(make_circle_complex(6), {{0}, {2}, {4}, {0, 2}});
    CHECK(has_code(validate_net(disc), "diamond support not connected"));
    auto loopy = CausalPoset::from_cover(make_circle_complex(6), {{0}, {2}, {4}, {0, 1, 2, 3, 4, 5}});
    CHECK(has_code(validate_net(loopy), "diamond support not simply connected"));
  }
}
