#include <gtest/gtest.h>

#include "gq/constructions.hpp"
#include "gq/isomorphism.hpp"

using namespace gq;

namespace {

Permutation cyc(int degree, std::vector<std::vector<int>> cycles) {
  std::vector<int> img(degree);
  for (int i = 0; i < degree; ++i) img[i] = i;
  for (const auto& c : cycles)
    for (std::size_t i = 0; i < c.size(); ++i) img[c[i]] = c[(i + 1) % c.size()];
  return Permutation(img);
}

IndexedGroup perm_group(int degree, std::vector<Permutation> gens) {
  return close_group(Permutation(degree), std::move(gens)).group;
}

IndexedGroup matrix_group(const ConstructedGroup& g) { return enumerate_group(g).group; }

}  // namespace

TEST(Isomorphism, SameGroupDifferentGenerators) {
  // D8 from a rotation and reflection, and from two reflections
  const auto a = perm_group(4, {cyc(4, {{0, 1, 2, 3}}), cyc(4, {{1, 3}})});
  const auto b = perm_group(4, {cyc(4, {{0, 1}, {2, 3}}), cyc(4, {{0, 2}})});
  const auto r = is_isomorphic_small(a, b);
  ASSERT_EQ(r.verdict, IsoVerdict::Found);
  // the map is a bijective homomorphism
  for (Index x = 0; x < a.size(); ++x)
    for (Index y = 0; y < a.size(); ++y) ASSERT_EQ(r.map[a.mul(x, y)], b.mul(r.map[x], r.map[y]));
}

TEST(Isomorphism, D8VersusQ8) {
  const auto d8 = perm_group(4, {cyc(4, {{0, 1, 2, 3}}), cyc(4, {{1, 3}})});
  const auto q8 = perm_group(8, {cyc(8, {{0, 1, 2, 3}, {4, 5, 6, 7}}), cyc(8, {{0, 4, 2, 6}, {1, 7, 3, 5}})});
  EXPECT_EQ(is_isomorphic_small(d8, q8).verdict, IsoVerdict::None);
}

TEST(Isomorphism, AbelianOfOrderSixteen) {
  const auto c44 = perm_group(8, {cyc(8, {{0, 1, 2, 3}}), cyc(8, {{4, 5, 6, 7}})});
  const auto c422 = perm_group(8, {cyc(8, {{0, 1, 2, 3}}), cyc(8, {{4, 5}}), cyc(8, {{6, 7}})});
  EXPECT_EQ(is_isomorphic_small(c44, c422).verdict, IsoVerdict::None);
}

TEST(Isomorphism, EVersusPDichotomy) {
  for (std::uint64_t q : {2, 3, 4, 8, 9}) {
    const auto& F = galois_field(q);
    const auto r = is_isomorphic_small(matrix_group(build_E(F)), matrix_group(build_P(F)));
    EXPECT_EQ(r.verdict, IsoVerdict::None) << q;
    EXPECT_NE(r.reason.find("exponent"), std::string::npos) << r.reason;
  }
  const auto& F5 = galois_field(5);
  EXPECT_EQ(is_isomorphic_small(matrix_group(build_E(F5)), matrix_group(build_P(F5))).verdict, IsoVerdict::Found);
}

TEST(Isomorphism, Extraspecial27Pair) {
  const auto a = matrix_group(build_extraspecial27(Extraspecial27::Exp3));
  const auto b = matrix_group(build_extraspecial27(Extraspecial27::Exp9));
  EXPECT_EQ(is_isomorphic_small(a, b).verdict, IsoVerdict::None);
  EXPECT_EQ(is_isomorphic_small(a, matrix_group(build_E(galois_field(3)))).verdict, IsoVerdict::Found);
  EXPECT_EQ(is_isomorphic_small(b, matrix_group(build_P(galois_field(3)))).verdict, IsoVerdict::Found);
}

TEST(Isomorphism, BudgetGivesUnknown) {
  const auto& F = galois_field(5);
  const auto r = is_isomorphic_small(matrix_group(build_E(F)), matrix_group(build_P(F)), 1);
  EXPECT_EQ(r.verdict, IsoVerdict::Unknown);
}
