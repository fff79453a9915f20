// Acceptance run: one PASS/FAIL line per criterion. Exit status is nonzero
// when any of criteria 1-10 fails; criterion 11 is reported only.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gq/action.hpp"
#include "gq/constructions.hpp"
#include "gq/gq_search.hpp"
#include "gq/incidence.hpp"
#include "gq/isomorphism.hpp"
#include "gq/lemmas.hpp"
#include "gq/regular_search.hpp"

using namespace gq;

namespace {

// Collects failures; a criterion passes when none were recorded.
struct Check {
  std::vector<std::string> failures;
  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

std::string q_str(std::uint64_t q) { return "q=" + std::to_string(q); }

bool maps_lines(const Permutation& m, const IncidenceGQ& from, const IncidenceGQ& to) {
  const std::set<std::vector<int>> target(to.lines().begin(), to.lines().end());
  for (const auto& l : from.lines()) {
    std::vector<int> img;
    for (int p : l) img.push_back(m[p]);
    std::sort(img.begin(), img.end());
    if (!target.count(img)) return false;
  }
  return true;
}

void gq_construction(Check& c) {
  for (std::uint64_t q : {2, 3, 4, 5}) {
    const auto g = build_w3(galois_field(q), false);
    const auto r = verify_gq(g);
    const int n = static_cast<int>((q + 1) * (q * q + 1));
    c.expect(r.ok && r.s == static_cast<int>(q) && r.t == static_cast<int>(q), q_str(q) + " order");
    c.expect(g.npoints() == n && g.nlines() == n, q_str(q) + " counts");
  }
}

void qminus_and_derivation(Check& c) {
  const auto Q = build_qminus5(galois_field(2));
  const auto r = verify_gq(Q);
  c.expect(Q.npoints() == 27 && Q.nlines() == 45, "Q-(5,2) counts");
  c.expect(r.ok && r.s == 2 && r.t == 4, "Q-(5,2) order");
  const auto& F3 = galois_field(3);
  const auto d = payne_derive(build_w3(F3), w3_base_point(F3));
  const auto m = gq_isomorphic(d, Q);
  c.expect(m.has_value(), "no isomorphism found");
  if (m) c.expect(maps_lines(*m, d, Q), "returned map does not preserve lines");
}

void theorem1_examples(Check& c) {
  const auto blk = build_quadric_gq(block_form27(), "block form");
  c.expect(blk.npoints() == 27 && verify_gq(blk).t == 4, "block-form quadric is not Q-(5,2)");
  for (auto v : {Extraspecial27::Exp3, Extraspecial27::Exp9}) {
    const auto C = enumerate_group(build_extraspecial27(v));
    const auto inv = invariant_report(C.group);
    const std::uint64_t e = v == Extraspecial27::Exp3 ? 3 : 9;
    c.expect(regular_on_points(C.elements, blk), "order-27 group not regular");
    c.expect(inv.order == 27 && inv.is_extraspecial && inv.exponent == e, "order-27 group invariants");
  }
  const Gu513Model model;
  const auto& F8 = model.small();
  const auto geo = singular_geometry(model.form(), false);
  c.expect(geo.points.size() == 4617, "quadric has " + std::to_string(geo.points.size()) + " points");
  c.expect(singular_geometry(QuadraticForm::elliptic(F8), false).points.size() == geo.points.size(),
           "point count differs from the standard elliptic quadric");
  const IncidenceGQ pts(static_cast<int>(geo.points.size()), {}, "Q-(5,8) points", geo.points, &F8);
  const auto g = model.group();
  const auto C = enumerate_group(g);
  c.expect(C.size() == 4617, "group order " + std::to_string(C.size()));
  c.expect(regular_on_points(C.elements, pts), "gu513 group not regular");
  const Index m = C.index.at(g.gens[0]), f = C.index.at(g.gens[1]);
  const Subgroup N = normal_closure(C.group, {m});
  const Subgroup M = subgroup_closure(C.group, {m});
  c.expect(M.size() == 513 && N.size() == 513, "<m> is not a normal subgroup of order 513");
  int k = 1;
  for (Index x = f; !N.contains(x); x = C.group.mul(x, f)) ++k;
  c.expect(C.size() / N.size() == 9 && k == 9, "quotient is not cyclic of order 9");
}

void lemma_suite(Check& c) {
  for (std::uint64_t q : {2, 3, 4, 5, 7, 8, 9, 25}) {
    const auto& F = galois_field(q);
    for (const auto& r : {check_E(F), check_P(F)})
      for (const auto& cl : r.claims) c.expect(cl.ok, r.group + " " + q_str(q) + ": " + cl.name + " " + cl.detail);
    if (F.f() == 1) continue;
    for (int k = 1; k < F.f(); ++k)
      for (const auto& d : all_decompositions(F, k)) {
        const auto r = check_S(F, d);
        for (const auto& cl : r.claims) c.expect(cl.ok, "S " + q_str(q) + ": " + cl.name + " " + cl.detail);
        if (F.p() != 2) {
          std::uint64_t want = q;
          for (int i = 1; i < F.f(); ++i) want *= F.p();
          c.expect(r.invariants.derived_order == want, "S " + q_str(q) + ": |S'| != q p^(f-1)");
        }
      }
  }
}

void regularity_and_orbits(Check& c) {
  for (std::uint64_t q : {2, 3, 4, 5, 7, 8, 9}) {
    const auto& F = galois_field(q);
    const auto d = derived_w3(F);
    std::vector<ConstructedGroup> groups{build_E(F), build_P(F)};
    for (int k = 1; k < F.f(); ++k)
      for (const auto& dec : all_decompositions(F, k)) groups.push_back(build_SUW(F, dec));
    for (const auto& g : groups) {
      const auto elems = enumerate_group(g).elements;
      c.expect(regular_on_points(elems, d), g.name + " " + q_str(q) + " not regular");
      std::vector<std::size_t> want;
      if (g.name == "E") want.assign(q + 1, 1);
      else if (g.name == "P") want = {1, q};
      else {
        const std::size_t k = g.provenance["U"].size();
        std::size_t pk = 1;
        for (std::size_t i = 0; i < k; ++i) pk *= F.p();
        want.assign(q / pk, pk);
        want.insert(want.begin(), 1);
      }
      c.expect(line_orbits_through_x(F, elems) == want, g.name + " " + q_str(q) + " line orbits");
    }
  }
}

void iso_dichotomy(Check& c) {
  for (std::uint64_t q : {5, 7, 25}) {
    const auto r = iso_E_to_P(galois_field(q));
    c.expect(r.ok, q_str(q) + ": " + r.detail);
  }
  for (std::uint64_t q : {2, 3, 4, 8, 9}) {
    const auto& F = galois_field(q);
    const auto r = is_isomorphic_small(enumerate_group(build_E(F)).group, enumerate_group(build_P(F)).group);
    c.expect(r.verdict == IsoVerdict::None && r.reason.find("exponent") != std::string::npos,
             q_str(q) + ": " + to_string(r.verdict) + " " + r.reason);
  }
}

void enumeration(Check& c) {
  const std::vector<std::pair<std::uint64_t, std::multiset<std::string>>> want{
      {2, {"2^3", "C4xC2", "D8", "D8"}},
      {3, {"3^{1+2} exponent 3", "3^{1+2} exponent 9"}},
      {5, {"", ""}},
      {7, {"", ""}}};
  for (const auto& [q, descs] : want) {
    const auto t = enumerate_derived(galois_field(q));
    std::multiset<std::string> got;
    std::multiset<std::string> flags;
    for (const auto& cl : t.classes) {
      got.insert(cl.description);
      for (const auto& f : cl.flags) flags.insert(f);
    }
    c.expect(t.complete && t.num_classes() == descs.size(), q_str(q) + ": " + std::to_string(t.num_classes()) + " classes");
    c.expect(got == descs, q_str(q) + ": descriptions " + t.comment());
    if (q >= 5) c.expect(flags == std::multiset<std::string>{"E", "P"} && t.num_isomorphism_types == 1, q_str(q) + ": not E and P");
  }
}

void identities(Check& c) {
  for (std::uint64_t q : {2, 3, 4, 5, 7, 8, 9}) {
    const auto& F = galois_field(q);
    for (const auto& r : {relation_check(F), t_rule_check(F), theta_power_check(F)})
      c.expect(r.ok, q_str(q) + ": " + r.first_failure);
  }
  for (std::uint64_t q : {2, 3, 4, 5, 7, 9}) {
    const auto r = sylow_exponent_check(galois_field(q));
    c.expect(r.ok && r.checked == q * q * q * q * q * q, q_str(q) + " Sylow exponent");
  }
}

void field_lemma(Check& c) {
  for (std::uint64_t q : {8, 16, 32}) c.expect(triple_image(galois_field(q)).size() == q, q_str(q));
  const auto& F4 = galois_field(4);
  std::set<Elt> img;
  for (const auto& e : triple_image(F4)) img.insert(e.value());
  c.expect(img == std::set<Elt>{0, F4.one()}, "q=4 image is not {0,1}");
}

void normality(Check& c) {
  for (std::uint64_t q : {4, 5, 7}) {
    const auto& F = galois_field(q);
    const auto s = derived_setup(F);
    auto normal = [&](const ConstructedGroup& g) {
      const auto H = action_from_linear(g.gens, s.gq);
      for (const auto& a : s.ambient.generators())
        for (const auto& h : H.generators())
          if (!H.contains(a.inverse() * h * a)) return false;
      return true;
    };
    c.expect(normal(build_E(F)), q_str(q) + ": E not normal");
    c.expect(!normal(build_P(F)), q_str(q) + ": P normal");
  }
}

void stretch(Check& c) {
  // q = 8
  {
    const auto t = enumerate_derived(galois_field(8));
    c.expect(t.complete && !t.classification_partial, "q=8 incomplete");
    c.expect(t.num_classes() == 14, "q=8: " + std::to_string(t.num_classes()) + " classes");
    c.expect(t.num_isomorphism_types == 8, "q=8: " + std::to_string(t.num_isomorphism_types) + " types");
    int s1 = 0, s2 = 0, p_iso = 0, s2_iso = 0;
    int p_type = -1, s2_type = -1;
    for (const auto& cl : t.classes) {
      for (const auto& f : cl.flags) {
        if (f == "P") p_type = cl.isomorphism_id;
        if (f == "S_{U,W} dim U = 2") s2_type = cl.isomorphism_id;
      }
      s1 += std::count(cl.flags.begin(), cl.flags.end(), "S_{U,W} dim U = 1");
      s2 += std::count(cl.flags.begin(), cl.flags.end(), "S_{U,W} dim U = 2");
      c.expect(cl.invariants.nilpotency_class && *cl.invariants.nilpotency_class <= 2, "q=8 nilpotency class above 2");
    }
    for (const auto& cl : t.classes) {
      p_iso += cl.isomorphism_id == p_type;
      s2_iso += cl.isomorphism_id == s2_type;
    }
    c.expect(s1 == 1, "q=8: " + std::to_string(s1) + " classes of S_{U,W} with dim U = 1");
    c.expect(s2 == 2, "q=8: " + std::to_string(s2) + " classes of S_{U,W} with dim U = 2");
    c.expect(p_iso == 2, "q=8: " + std::to_string(p_iso) + " classes isomorphic to P");
    c.expect(s2_iso == 4, "q=8: " + std::to_string(s2_iso) + " classes isomorphic to S_{U,W}, dim U = 2");
  }
  // q = 4
  {
    const auto t = enumerate_derived(galois_field(4));
    c.expect(t.num_classes() == 58 && t.num_isomorphism_types == 30,
             "q=4: " + std::to_string(t.num_classes()) + " classes, " + std::to_string(t.num_isomorphism_types) + " types");
    int abelian = 0;
    for (const auto& cl : t.classes) abelian += cl.invariants.is_abelian;
    c.expect(abelian == 1, "q=4: " + std::to_string(abelian) + " abelian classes");
  }
  // order (5,3): the dual of the derived GQ of W(3,4)
  {
    const auto d = dual(derived_w3(galois_field(4)));
    const auto A = aut_incidence(d);
    const auto t = enumerate_regular(d, A, {});
    std::multiset<std::tuple<std::uint64_t, std::uint64_t, std::uint64_t>> got;
    for (const auto& cl : t.classes) {
      const auto C = close_group(Permutation(d.npoints()), cl.generators);
      const auto D = induced_group(C.group, derived_subgroup(C.group));
      got.insert({cl.invariants.centre_order, cl.invariants.derived_order, invariant_report(D.group).exponent});
    }
    // C2^4, C4^2, C2^4:C3, C4^2:C3, C2^3:C3, Q8:C3
    const std::multiset<std::tuple<std::uint64_t, std::uint64_t, std::uint64_t>> want{
        {1, 16, 2}, {1, 16, 4}, {1, 48, 6}, {1, 48, 12}, {2, 24, 6}, {2, 24, 12}};
    c.expect(t.complete && t.num_classes() == 6, "order (5,3): " + std::to_string(t.num_classes()) + " classes");
    c.expect(got == want, "order (5,3): centre / derived subgroup data differ");
  }
  // q = 16, dim U = 3
  {
    const auto& F = galois_field(16);
    std::set<std::uint64_t> orders;
    for (const auto& d : all_decompositions(F, 3)) {
      const auto inv = invariant_report(enumerate_group(build_SUW(F, d)).group);
      if (inv.frattini_order) orders.insert(*inv.frattini_order);
    }
    c.expect(orders == std::set<std::uint64_t>{128, 256}, "q=16: Frattini orders differ");
  }
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_seconds;
    std::function<void(Check&)> run;
  };
  const std::vector<Criterion> criteria{
      {1, "W(3,q) construction", 10, gq_construction},
      {2, "Q-(5,2) and derivation", 30, qminus_and_derivation},
      {3, "order-27 and order-4617 regular groups", 300, theorem1_examples},
      {4, "lemma suite for E, P, S_{U,W}", 600, lemma_suite},
      {5, "regularity and line orbits", 300, regularity_and_orbits},
      {6, "isomorphism dichotomy", 300, iso_dichotomy},
      {7, "regular subgroup enumeration", 1800, enumeration},
      {8, "identity exhaustion", 600, identities},
      {9, "field lemma", 1, field_lemma},
      {10, "normality contrast", 300, normality},
      {11, "stretch: q=8, q=4, order (5,3), q=16", 0, stretch},
  };
  int failed = 0;
  for (const auto& cr : criteria) {
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      cr.run(c);
    } catch (const std::exception& e) {
      c.failures.push_back(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (cr.limit_seconds > 0 && secs > cr.limit_seconds)
      c.failures.push_back("took " + std::to_string(secs) + " s, limit " + std::to_string(cr.limit_seconds));
    const bool ok = c.failures.empty();
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", secs);
    std::cout << (ok ? "PASS" : "FAIL") << ' ' << cr.id << ' ' << cr.name << " (" << buf << " s)"
              << (cr.id == 11 ? " [informational]" : "") << '\n';
    for (const auto& f : c.failures) std::cout << "  " << f << '\n';
    if (!ok && cr.id != 11) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
