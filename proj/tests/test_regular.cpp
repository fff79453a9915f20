#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "gq/gq_search.hpp"
#include "gq/regular_search.hpp"

using namespace gq;

namespace {

using ElementSet = std::set<std::vector<int>>;

ElementSet element_set(const PermGroup& G) {
  ElementSet s;
  for (const auto& e : G.elements()) s.insert(std::vector<int>(e.images().begin(), e.images().end()));
  return s;
}

ElementSet conjugated(const ElementSet& s, const Permutation& g) {
  const Permutation gi = g.inverse();
  ElementSet out;
  for (const auto& x : s) {
    const auto y = gi * Permutation(x) * g;
    out.insert(std::vector<int>(y.images().begin(), y.images().end()));
  }
  return out;
}

// Brute force over every ambient element.
bool conjugate_in(const PermGroup& A, const ElementSet& a, const ElementSet& b) {
  for (const auto& g : A.elements())
    if (conjugated(a, g) == b) return true;
  return false;
}

std::vector<ElementSet> representatives(const RegularClassTable& t) {
  std::vector<ElementSet> out;
  for (const auto& c : t.classes) out.push_back(element_set(PermGroup(t.degree, c.generators)));
  return out;
}

std::multiset<std::string> descriptions(const RegularClassTable& t) {
  std::multiset<std::string> out;
  for (const auto& c : t.classes) out.insert(c.description);
  return out;
}

bool has_flag(const RegularClass& c, const std::string& f) {
  return std::find(c.flags.begin(), c.flags.end(), f) != c.flags.end();
}

}  // namespace

TEST(Regular, Q2FourClasses) {
  const auto t = enumerate_derived(galois_field(2));
  EXPECT_TRUE(t.complete);
  ASSERT_EQ(t.num_classes(), 4u);
  EXPECT_EQ(descriptions(t), (std::multiset<std::string>{"2^3", "C4xC2", "D8", "D8"}));
  EXPECT_EQ(t.comment(), "2^3, C4xC2, 2 D8");
  for (const auto& c : t.classes) {
    if (c.description == "2^3") EXPECT_TRUE(has_flag(c, "E"));
    if (c.description == "C4xC2") EXPECT_TRUE(has_flag(c, "P"));
  }
}

TEST(Regular, Q2MatchesBruteForce) {
  // every regular subgroup of order 8 is generated by at most 3 elements
  const auto s = derived_setup(galois_field(2));
  const auto elems = s.ambient.elements();
  std::set<ElementSet> regular;
  const int n = s.gq.npoints();
  for (std::size_t i = 0; i < elems.size(); ++i)
    for (std::size_t j = i; j < elems.size(); ++j)
      for (std::size_t k = j; k < elems.size(); ++k) {
        const PermGroup H(n, {elems[i], elems[j], elems[k]});
        if (H.order() == static_cast<std::uint64_t>(n) && is_regular(H)) regular.insert(element_set(H));
      }
  std::vector<ElementSet> classes;
  for (const auto& r : regular) {
    bool seen = false;
    for (const auto& c : classes) seen = seen || conjugate_in(s.ambient, r, c);
    if (!seen) classes.push_back(r);
  }
  EXPECT_EQ(classes.size(), 4u);
}

TEST(Regular, Q3ExtraspecialPair) {
  const auto t = enumerate_derived(galois_field(3));
  ASSERT_EQ(t.num_classes(), 2u);
  EXPECT_EQ(t.num_isomorphism_types, 2);
  EXPECT_EQ(descriptions(t), (std::multiset<std::string>{"3^{1+2} exponent 3", "3^{1+2} exponent 9"}));
  for (const auto& c : t.classes) {
    EXPECT_TRUE(c.invariants.is_extraspecial);
    EXPECT_EQ(has_flag(c, "E"), c.invariants.exponent == 3);
    EXPECT_EQ(has_flag(c, "P"), c.invariants.exponent == 9);
  }
}

TEST(Regular, PrimeQGivesEAndP) {
  for (std::uint64_t q : {5, 7}) {
    const auto t = enumerate_derived(galois_field(q));
    ASSERT_EQ(t.num_classes(), 2u) << q;
    EXPECT_EQ(t.num_isomorphism_types, 1) << q;
    EXPECT_EQ(t.comment(), "E and P") << q;
    int e = 0, p = 0;
    for (const auto& c : t.classes) {
      e += has_flag(c, "E");
      p += has_flag(c, "P");
      EXPECT_EQ(c.flags.size(), 1u);
    }
    EXPECT_EQ(e, 1);
    EXPECT_EQ(p, 1);
  }
}

TEST(Regular, RepresentativesRegularAndPairwiseNonConjugate) {
  for (std::uint64_t q : {2, 3, 5}) {
    const auto s = derived_setup(galois_field(q));
    const auto t = enumerate_regular(s.gq, s.ambient, s.sylow_start, {}, s.known);
    const auto reps = representatives(t);
    for (const auto& c : t.classes) {
      const PermGroup H(t.degree, c.generators);
      EXPECT_TRUE(is_regular(H)) << q;
      for (const auto& g : c.generators) EXPECT_TRUE(s.ambient.contains(g));
      for (const auto& g : c.generators) EXPECT_TRUE(preserves_lines(g, s.gq));
    }
    for (std::size_t i = 0; i < reps.size(); ++i)
      for (std::size_t j = i + 1; j < reps.size(); ++j) EXPECT_FALSE(conjugate_in(s.ambient, reps[i], reps[j])) << q;
  }
}

TEST(Regular, DeterministicAcrossRunsAndSeeds) {
  const auto F = galois_field(3);
  const auto a = enumerate_derived(F).to_json();
  const auto b = enumerate_derived(F).to_json();
  const auto c = enumerate_derived(F, {0, 0, 17}).to_json();
  EXPECT_EQ(a.dump(), b.dump());
  EXPECT_EQ(a["classes"].dump(), c["classes"].dump());
  EXPECT_EQ(c["seed"], 17);
}

TEST(Regular, Q4FiftyEightClasses) {
  const auto t = enumerate_derived(galois_field(4));
  EXPECT_TRUE(t.complete);
  EXPECT_FALSE(t.classification_partial);
  EXPECT_EQ(t.num_classes(), 58u);
  EXPECT_EQ(t.num_isomorphism_types, 30);
  int e = 0, p = 0, s = 0;
  for (const auto& c : t.classes) {
    e += has_flag(c, "E");
    p += has_flag(c, "P");
    s += has_flag(c, "S_{U,W} dim U = 1");
  }
  EXPECT_EQ(e, 1);
  EXPECT_EQ(p, 1);
  EXPECT_GE(s, 1);
}

TEST(Regular, BudgetMarksIncomplete) {
  const auto t = enumerate_derived(galois_field(4), {1, 0, 0});
  EXPECT_FALSE(t.complete);
  EXPECT_FALSE(t.frontier.empty());
  EXPECT_NE(t.comment().find("incomplete"), std::string::npos);
  const auto j = t.to_json();
  EXPECT_EQ(j["complete"], false);
  EXPECT_TRUE(j.contains("frontier"));
}

TEST(Regular, JsonShape) {
  const auto j = enumerate_derived(galois_field(5)).to_json();
  EXPECT_EQ(j["num_classes"], 2);
  EXPECT_EQ(j["gq"]["points"], 125);
  ASSERT_EQ(j["classes"].size(), 2u);
  const auto rep = read_grp(j["classes"][0]["representative"].get<std::string>());
  EXPECT_EQ(rep.order(), 125u);
}

TEST(Regular, PointCountNotPrimePower) {
  // Aut W(3,2) = S6 has no element of order 15, so no regular subgroup
  const auto w = build_w3(galois_field(2));
  const auto t = enumerate_regular(w, aut_incidence(w), {});
  EXPECT_TRUE(t.complete);
  EXPECT_EQ(t.num_classes(), 0u);
}

TEST(Regular, OrderMismatchIsNotCompatible) {
  const auto g = grid_gq(3);
  EXPECT_THROW(enumerate_regular(g, PermGroup::trivial(9), {}), NotCompatible);
  EXPECT_THROW(enumerate_regular_transversal(g, PermGroup::trivial(9)), NotCompatible);
}

TEST(Regular, TransversalSearchAgreesWithSylowDescent) {
  for (std::uint64_t q : {2, 3, 4, 5}) {
    const auto s = derived_setup(galois_field(q));
    const auto a = enumerate_regular(s.gq, s.ambient, s.sylow_start, {}, s.known);
    const auto b = enumerate_regular_transversal(s.gq, s.ambient, {}, s.known);
    auto summary = [](const RegularClassTable& t) {
      std::multiset<std::string> out;
      for (const auto& c : t.classes) {
        std::string k = c.invariants.fingerprint + " " + c.description;
        for (const auto& f : c.flags) k += " [" + f + "]";
        out.insert(k);
      }
      return out;
    };
    EXPECT_EQ(a.num_classes(), b.num_classes()) << q;
    EXPECT_EQ(a.num_isomorphism_types, b.num_isomorphism_types) << q;
    EXPECT_EQ(summary(a), summary(b)) << q;
  }
}

TEST(Regular, DualOfDerivedQ4HasSixClasses) {
  const auto d = dual(derived_w3(galois_field(4)));
  ASSERT_EQ(d.npoints(), 96);
  const auto A = aut_incidence(d);
  EXPECT_EQ(A.order(), 138240u);
  const auto t = enumerate_regular(d, A, {});
  EXPECT_TRUE(t.complete);
  ASSERT_EQ(t.num_classes(), 6u);
  std::multiset<std::pair<std::uint64_t, std::uint64_t>> zd;
  for (const auto& c : t.classes) {
    EXPECT_TRUE(is_regular(PermGroup(96, c.generators)));
    zd.insert({c.invariants.centre_order, c.invariants.derived_order});
  }
  EXPECT_EQ(zd, (std::multiset<std::pair<std::uint64_t, std::uint64_t>>{{1, 16}, {1, 16}, {1, 48}, {1, 48}, {2, 24}, {2, 24}}));
}

TEST(Regular, SylowStartMustLieInAmbient) {
  const auto s = derived_setup(galois_field(3));
  const PermGroup trivial = PermGroup::trivial(s.gq.npoints());
  EXPECT_THROW(enumerate_regular(s.gq, trivial, s.sylow_start), NotCompatible);
}
