#include <gtest/gtest.h>

#include <set>

#include "gq/lemmas.hpp"

using namespace gq;

namespace {

// Entrywise product, independent of Matrix::operator*.
Matrix naive_mul(const Matrix& a, const Matrix& b) {
  const FieldSpec& F = a.field();
  Matrix c(F, a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j) {
      Elt s = 0;
      for (int k = 0; k < a.cols(); ++k) s = F.add(s, F.mul(a.at(i, k), b.at(k, j)));
      c.set(i, j, s);
    }
  return c;
}

// t elements as parameter triples; closure under the parameter product
// a'' = a + x - bz + cy.
using Triple = std::array<Elt, 3>;

Triple tmul(const FieldSpec& F, const Triple& s, const Triple& t) {
  return {F.add(F.sub(F.add(s[0], t[0]), F.mul(s[1], t[2])), F.mul(s[2], t[1])), F.add(s[1], t[1]),
          F.add(s[2], t[2])};
}

std::set<Triple> triple_closure(const FieldSpec& F, const std::vector<Triple>& gens) {
  std::set<Triple> seen{{0, 0, 0}};
  std::vector<Triple> queue{{0, 0, 0}};
  for (std::size_t i = 0; i < queue.size(); ++i)
    for (const auto& g : gens) {
      const auto y = tmul(F, queue[i], g);
      if (seen.insert(y).second) queue.push_back(y);
    }
  return seen;
}

std::set<Matrix> to_mats(const FieldSpec& F, const std::set<Triple>& ts) {
  std::set<Matrix> out;
  for (const auto& t : ts) out.insert(elem_t(F, t[0], t[1], t[2]));
  return out;
}

// Elements of the GF(p)-span of the given field elements.
std::set<Elt> additive_span(const FieldSpec& F, const std::vector<Elt>& xs) {
  std::set<Elt> s{0};
  for (Elt x : xs) {
    std::set<Elt> next = s;
    for (Elt y : s)
      for (Elt k = 0; k < static_cast<Elt>(F.p()); ++k) next.insert(F.add(y, F.mul(F.from_int(k), x)));
    s.swap(next);
  }
  return s;
}

std::vector<SemilinearMap> elements_of(const ConstructedGroup& g) { return enumerate_group(g).elements; }

}  // namespace

TEST(Constructions, MatrixProductMatchesNaive) {
  const auto& F = galois_field(9);
  for (Elt a = 0; a < 9; a += 2)
    for (Elt al = 0; al < 9; al += 3) {
      const Matrix t = elem_t(F, a, al, F.add(a, al)), th = elem_theta(F, al);
      EXPECT_EQ(t * th, naive_mul(t, th));
      EXPECT_EQ(th * t, naive_mul(th, t));
    }
}

TEST(Constructions, TParameterProductOracle) {
  for (std::uint64_t q : {3, 4, 5}) {
    const auto& F = galois_field(q);
    for (Elt a = 0; a < q; ++a)
      for (Elt b = 0; b < q; ++b)
        for (Elt z = 0; z < q; ++z) {
          const Triple s{a, b, z}, t{z, a, b};
          const auto u = tmul(F, s, t);
          ASSERT_EQ(naive_mul(elem_t(F, a, b, z), elem_t(F, z, a, b)), elem_t(F, u[0], u[1], u[2]));
        }
  }
}

TEST(Constructions, RelationsExhaustive) {
  for (std::uint64_t q : {2, 3, 4, 5, 7, 8, 9}) {
    const auto& F = galois_field(q);
    const auto rel = relation_check(F);
    EXPECT_TRUE(rel.ok) << q << ": " << rel.first_failure;
    EXPECT_EQ(rel.checked, 2 * q * q * q * q + 2 * q * q);
    const auto pw = theta_power_check(F);
    EXPECT_TRUE(pw.ok) << q << ": " << pw.first_failure;
  }
  for (std::uint64_t q : {2, 3, 4, 5}) {
    const auto tr = t_rule_check(galois_field(q));
    EXPECT_TRUE(tr.ok) << q << ": " << tr.first_failure;
  }
  EXPECT_TRUE(t_rule_check(galois_field(25), 2000).ok);
}

TEST(Constructions, ThetaCubeInCharacteristicThree) {
  // the closed form gives theta^3 = t_{-alpha^3,0,0}; t_{-alpha^2,0,0} differs at alpha = -1
  const auto& F = galois_field(3);
  for (Elt al = 0; al < 3; ++al) {
    Matrix cube = elem_theta(F, al);
    cube = naive_mul(naive_mul(cube, cube), cube);
    EXPECT_EQ(cube, elem_t(F, F.neg(F.pow(al, 3)), 0, 0));
  }
  const Elt m1 = F.neg(F.one());
  EXPECT_NE(theta_power(F, m1, 3), elem_t(F, F.neg(F.mul(m1, m1)), 0, 0));
}

TEST(Constructions, SylowExponentSmall) {
  for (std::uint64_t q : {2, 3, 4, 5}) {
    const auto r = sylow_exponent_check(galois_field(q));
    EXPECT_TRUE(r.ok) << q;
    EXPECT_EQ(r.checked, q * q * q * q * q * q);
  }
  EXPECT_EQ(sylow_exponent_check(galois_field(2)).max_order, 4u);
  EXPECT_EQ(sylow_exponent_check(galois_field(3)).max_order, 9u);
  EXPECT_EQ(sylow_exponent_check(galois_field(5)).max_order, 5u);
}

TEST(Constructions, GroupOrdersAndMembership) {
  for (std::uint64_t q : {2, 3, 4, 5}) {
    const auto& F = galois_field(q);
    const auto E = elements_of(build_E(F));
    ASSERT_EQ(E.size(), q * q * q);
    for (const auto& g : E) ASSERT_TRUE(t_params(g.matrix()).has_value());
    EXPECT_EQ(elements_of(build_R(F)).size(), q * q);
    EXPECT_EQ(elements_of(build_Z(F)).size(), q);
    EXPECT_EQ(elements_of(build_P(F)).size(), q * q * q);
  }
  EXPECT_THROW(build_SUW(galois_field(5), {{1}, {}}), BadDecomposition);
  EXPECT_THROW(build_SUW(galois_field(9), {{1}, {1}}), BadDecomposition);
  EXPECT_THROW(build_SUW(galois_field(9), {{}, {1}}), BadDecomposition);
  EXPECT_THROW(build_P(galois_field(4), {1, 1}), BadDecomposition);
}

TEST(Constructions, DecompositionCounts) {
  // ordered pairs (U, W) of complementary subspaces: Gaussian binomial times p^{k(f-k)}
  EXPECT_EQ(all_decompositions(galois_field(4), 1).size(), 3u * 2u);
  EXPECT_EQ(all_decompositions(galois_field(9), 1).size(), 4u * 3u);
  EXPECT_EQ(all_decompositions(galois_field(8), 1).size(), 7u * 4u);
  EXPECT_EQ(all_decompositions(galois_field(8), 2).size(), 7u * 4u);
}

TEST(Lemmas, EAndPClaims) {
  for (std::uint64_t q : {2, 3, 4, 5, 7, 8, 9}) {
    const auto& F = galois_field(q);
    for (const auto& r : {check_E(F), check_P(F)})
      for (const auto& c : r.claims) EXPECT_TRUE(c.ok) << r.group << " q=" << q << ": " << c.name << " " << c.detail;
  }
}

TEST(Lemmas, CentreOracle) {
  // brute-force centres from commuting pairs
  for (std::uint64_t q : {3, 4}) {
    const auto& F = galois_field(q);
    const auto P = elements_of(build_P(F));
    std::set<Matrix> z;
    for (const auto& a : P) {
      bool central = true;
      for (const auto& b : P) central = central && naive_mul(a.matrix(), b.matrix()) == naive_mul(b.matrix(), a.matrix());
      if (central) z.insert(a.matrix());
    }
    std::set<Triple> want;
    for (Elt a = 0; a < q; ++a)
      for (Elt b = 0; b < (q % 2 == 0 ? q : 1); ++b) want.insert({a, b, 0});
    EXPECT_EQ(z, to_mats(F, want)) << q;
  }
}

TEST(Lemmas, SClaimsAllDecompositions) {
  for (std::uint64_t q : {4, 8, 9, 27}) {
    const auto& F = galois_field(q);
    for (int k = 1; k < F.f(); ++k) {
      auto ds = all_decompositions(F, k);
      if (q == 27) ds.resize(std::min<std::size_t>(ds.size(), 3));
      for (const auto& d : ds) {
        const auto r = check_S(F, d);
        for (const auto& c : r.claims) EXPECT_TRUE(c.ok) << "q=" << q << " k=" << k << ": " << c.name << " " << c.detail;
      }
    }
  }
}

TEST(Lemmas, SDerivedOrderOracle) {
  // |S'| = q * |alpha_1 W + ... + alpha_k W| for odd q, from an explicit span
  for (std::uint64_t q : {9, 27}) {
    const auto& F = galois_field(q);
    for (int k = 1; k < F.f(); ++k) {
      const auto d = standard_decomposition(F, k);
      std::vector<Elt> products;
      for (Elt al : d.U)
        for (Elt w : d.W) products.push_back(F.mul(al, w));
      const auto span = additive_span(F, products);
      EXPECT_EQ(span.size(), static_cast<std::size_t>(std::pow(F.p(), span_dimension(F, d))));
      const auto r = check_S(F, d);
      EXPECT_EQ(r.invariants.derived_order, q * span.size()) << q << " k=" << k;
    }
  }
}

TEST(Lemmas, SDerivedEvenOracle) {
  // even q: S' computed in parameter space from the listed generators
  const auto& F = galois_field(8);
  for (int k = 1; k <= 2; ++k) {
    const auto d = standard_decomposition(F, k);
    const auto W = additive_span(F, d.W);
    std::vector<Triple> gens;
    if (k == 2) gens.push_back({F.mul(F.mul(d.U[0], d.U[1]), F.add(d.U[0], d.U[1])), 0, 0});
    for (Elt w1 : W)
      for (Elt w2 : (k == 2 ? W : std::set<Elt>{0})) {
        Elt a = F.mul(d.U[0], F.mul(w1, w1)), b = F.mul(d.U[0], w1);
        if (k == 2) {
          a = F.add(a, F.mul(d.U[1], F.mul(w2, w2)));
          b = F.add(b, F.mul(d.U[1], w2));
        }
        gens.push_back({a, b, 0});
      }
    EXPECT_EQ(expected_S_derived(F, d), to_mats(F, triple_closure(F, gens)));
    EXPECT_TRUE(check_S(F, d).ok());
  }
  // with U = <1, x> the central generator is t_{x(1+x),0,0}, not t_{1,0,0}
  const auto d = standard_decomposition(F, 2);
  const auto S = check_S(F, d);
  EXPECT_EQ(S.invariants.derived_order, 8u);
  EXPECT_FALSE(expected_S_derived(F, d).count(elem_t(F, F.one(), 0, 0)));
}

TEST(Lemmas, TheoremTwoContrasts) {
  // exponents for q = 3^f, and Z(S) < S' for odd q
  for (std::uint64_t q : {3, 9}) {
    const auto& F = galois_field(q);
    EXPECT_EQ(check_E(F).invariants.exponent, 3u);
    EXPECT_EQ(check_P(F).invariants.exponent, 9u);
  }
  const auto s = check_S(galois_field(9), standard_decomposition(galois_field(9), 1));
  EXPECT_EQ(s.invariants.exponent, 9u);
  EXPECT_LT(s.invariants.centre_order, s.invariants.derived_order);
  EXPECT_FALSE(s.invariants.is_special);
}

TEST(Regularity, DerivedPointsAndLineOrbits) {
  for (std::uint64_t q : {2, 3, 4, 5, 7, 8, 9}) {
    const auto& F = galois_field(q);
    const auto d = derived_w3(F);
    std::vector<ConstructedGroup> groups{build_E(F), build_P(F)};
    if (F.f() > 1) groups.push_back(build_SUW(F, standard_decomposition(F, 1)));
    for (const auto& g : groups) {
      const auto G = action_from_linear(g.gens, d);
      EXPECT_TRUE(is_regular(G)) << g.name << " q=" << q;
      EXPECT_EQ(G.order(), q * q * q);
    }
    const auto P = elements_of(build_P(F));
    std::vector<std::vector<int>> orbits;
    EXPECT_EQ(line_orbits_through_x(F, P, &orbits), (std::vector<std::size_t>{1, q}));
    // the fixed line is <e1, e2>, id 1
    for (const auto& o : orbits)
      if (o.size() == 1) EXPECT_EQ(o[0], 1);
    const auto E = elements_of(build_E(F));
    EXPECT_EQ(line_orbits_through_x(F, E, nullptr), std::vector<std::size_t>(q + 1, 1));
    if (F.f() > 1)
      for (int k = 1; k < F.f(); ++k) {
        const auto S = elements_of(build_SUW(F, standard_decomposition(F, k)));
        std::size_t pk = 1;
        for (int i = 0; i < k; ++i) pk *= F.p();
        std::vector<std::size_t> want(q / pk, pk);
        want.insert(want.begin(), 1);
        EXPECT_EQ(line_orbits_through_x(F, S, nullptr), want) << q << " k=" << k;
      }
  }
}

TEST(Regularity, IsoEtoP) {
  for (std::uint64_t q : {5, 7}) {
    const auto r = iso_E_to_P(galois_field(q));
    EXPECT_TRUE(r.ok) << r.detail;
    EXPECT_EQ(r.order, q * q * q);
  }
  EXPECT_THROW(iso_E_to_P(galois_field(3)), CharTooSmall);
  EXPECT_THROW(iso_E_to_P(galois_field(4)), CharTooSmall);
}

TEST(Ambient, OrdersOnDerivedPoints) {
  // q^4 (q-1)^2 (q+1) f, frozen
  const std::vector<std::pair<std::uint64_t, std::uint64_t>> want{{2, 48}, {3, 1296}, {4, 23040}, {5, 60000}};
  for (const auto& [q, order] : want) {
    const auto& F = galois_field(q);
    EXPECT_EQ(ambient_order(F), order);
    const auto d = derived_w3(F);
    const auto A = action_from_linear(build_ambient(F).gens, d);
    EXPECT_EQ(A.order(), order) << q;
    const auto S = action_from_linear(build_ambient_sylow(F).gens, d);
    EXPECT_EQ(S.order(), q * q * q * q * (q == 4 ? 2 : 1)) << q;
    for (const auto& g : A.generators()) EXPECT_TRUE(preserves_lines(g, d));
  }
}

TEST(Quadric, Extraspecial27) {
  const auto form = block_form27();
  const auto gq = build_quadric_gq(form, "block form");
  EXPECT_EQ(gq.npoints(), 27);
  EXPECT_EQ(gq.nlines(), 45);
  for (auto v : {Extraspecial27::Exp3, Extraspecial27::Exp9}) {
    const auto g = build_extraspecial27(v);
    for (const auto& m : g.gens) {
      for (const auto& pt : gq.labels()) EXPECT_EQ(form.eval(m.apply(pt)), 0);
    }
    const auto C = enumerate_group(g);
    EXPECT_EQ(C.size(), 27u);
    EXPECT_TRUE(regular_on_points(C.elements, gq));
    const auto r = invariant_report(C.group);
    EXPECT_TRUE(r.is_extraspecial);
    EXPECT_EQ(r.exponent, v == Extraspecial27::Exp3 ? 3u : 9u);
  }
}

TEST(Quadric, Gu513Form) {
  const Gu513Model model;
  const auto form = model.form();
  // the polarised form agrees with the trace map on random vectors
  std::mt19937 rng(1);
  for (int i = 0; i < 200; ++i) {
    Vec v(6);
    for (auto& x : v) x = rng() % 8;
    ASSERT_EQ(form.eval(v), model.q_value(v));
  }
  // round trip through GF(2^18)
  for (int i = 0; i < 50; ++i) {
    Vec v(6);
    for (auto& x : v) x = rng() % 8;
    ASSERT_EQ(model.to_vec(model.from_vec(v)), v);
  }
}
