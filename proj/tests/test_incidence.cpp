#include <gtest/gtest.h>

#include "gq/incidence.hpp"

using namespace gq;

TEST(Incidence, W3Counts) {
  for (std::uint64_t q : {2, 3, 4, 5}) {
    const auto gq = build_w3(galois_field(q));
    const auto r = verify_gq(gq);
    ASSERT_TRUE(r.ok) << r.violation;
    EXPECT_EQ(r.s, static_cast<int>(q));
    EXPECT_EQ(r.t, static_cast<int>(q));
    EXPECT_EQ(gq.npoints(), static_cast<int>((q + 1) * (q * q + 1)));
    EXPECT_EQ(gq.nlines(), static_cast<int>((q + 1) * (q * q + 1)));
  }
}

TEST(Incidence, QMinus5) {
  const auto g2 = build_qminus5(galois_field(2));
  EXPECT_EQ(g2.npoints(), 27);
  EXPECT_EQ(g2.nlines(), 45);
  EXPECT_EQ(verify_gq(g2).t, 4);
  const auto g3 = build_qminus5(galois_field(3));
  const auto r = verify_gq(g3);
  EXPECT_EQ(g3.npoints(), 112);
  EXPECT_EQ(r.s, 3);
  EXPECT_EQ(r.t, 9);
}

TEST(Incidence, GridAndViolations) {
  const auto grid = grid_gq(3);
  const auto r = verify_gq(grid);
  ASSERT_TRUE(r.ok);
  EXPECT_EQ(r.s, 2);
  EXPECT_EQ(r.t, 1);

  const auto w = build_w3(galois_field(3));
  auto lines = w.lines();
  lines.erase(lines.begin());
  const auto broken = verify_gq(IncidenceGQ(w.npoints(), lines));
  EXPECT_FALSE(broken.ok);
  EXPECT_EQ(broken.violation, "point degree not constant");
  // degree is read from point 0, which lies on the deleted line; the witness is the first point off it
  const auto& gone = w.line(0);
  ASSERT_EQ(gone[0], 0);
  int first_off = 0;
  while (std::find(gone.begin(), gone.end(), first_off) != gone.end()) ++first_off;
  EXPECT_EQ(broken.witness_point, first_off);
}

TEST(Incidence, TwoCommonLinesDetected) {
  // a doubled line: points 0,1 on two lines
  const IncidenceGQ bad(4, {{0, 1}, {0, 1}, {2, 3}, {2, 3}});
  const auto r = verify_gq(bad);
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.violation, "two points on more than one common line");
}

TEST(Incidence, DualAndPerp) {
  const auto w2 = build_w3(galois_field(2));
  const auto d = dual(w2);
  EXPECT_EQ(d.npoints(), 15);
  EXPECT_EQ(verify_gq(d).s, 2);
  const auto dd = dual(d);
  EXPECT_EQ(dd.npoints(), w2.npoints());
  EXPECT_TRUE(verify_gq(dd).ok);

  const auto w3 = build_w3(galois_field(3));
  const int x = w3_base_point(galois_field(3));
  for (int y = 0; y < w3.npoints(); ++y) {
    if (w3.collinear(x, y)) continue;
    EXPECT_EQ(double_perp(w3, x, y).count(), 4);
  }
  for (int p = 0; p < w3.npoints(); ++p) EXPECT_EQ(perp_set(w3, {p}).count(), 1 + 3 * 4);
  const int y2 = 0;
  const int x2 = w3_base_point(galois_field(2));
  ASSERT_FALSE(w2.collinear(x2, y2));
  EXPECT_EQ(double_perp(w2, x2, y2).count(), 3);
}

TEST(Incidence, BasePointLabel) {
  for (std::uint64_t q : {2, 3, 4, 5}) {
    const auto& F = galois_field(q);
    const auto w = build_w3(F);
    const Vec e1{F.one(), 0, 0, 0};
    EXPECT_EQ(w.point_of(e1), w3_base_point(F));
  }
}

TEST(Incidence, EveryW3PointRegular) {
  for (std::uint64_t q : {2, 3, 4, 5, 7, 8, 9}) {
    const auto w = build_w3(galois_field(q));
    const int step = q >= 7 ? 37 : 1;  // sampled points for the larger fields
    for (int x = 0; x < w.npoints(); x += step) {
      const auto h = payne_derive(w, x);
      ASSERT_EQ(h.npoints(), static_cast<int>(q * q * q));
    }
  }
}

TEST(Incidence, PayneDerivation) {
  const auto d3 = derived_w3(galois_field(3));
  auto r = verify_gq(d3);
  ASSERT_TRUE(r.ok) << r.violation;
  EXPECT_EQ(r.s, 2);
  EXPECT_EQ(r.t, 4);
  EXPECT_EQ(d3.npoints(), 27);
  EXPECT_EQ(d3.nlines(), 45);

  const auto d4 = derived_w3(galois_field(4));
  r = verify_gq(d4);
  EXPECT_EQ(r.s, 3);
  EXPECT_EQ(r.t, 5);
  EXPECT_EQ(d4.npoints(), 64);
  const auto dd = dual(d4);
  EXPECT_EQ(dd.npoints(), 96);
  EXPECT_EQ(verify_gq(dd).s, 5);

  const auto d2 = derived_w3(galois_field(2));
  r = verify_gq(d2);
  EXPECT_EQ(r.s, 1);
  EXPECT_EQ(r.t, 3);
  EXPECT_EQ(d2.npoints(), 8);
}

TEST(Incidence, PayneRejectsIrregularPoint) {
  // Q(4,3) = dual W(3,3) has no regular points
  const auto d = dual(build_w3(galois_field(3)));
  EXPECT_THROW(payne_derive(d, 0), NotRegularPoint);
  EXPECT_THROW(payne_derive(build_qminus5(galois_field(2)), 0), NotCompatible);
}

TEST(Incidence, FileRoundTrip) {
  const auto w = build_w3(galois_field(3));
  const std::string text = write_gq(w);
  EXPECT_EQ(text.rfind("GQ 40 40 3 3\n", 0), 0u);
  EXPECT_EQ(text.back(), '\n');
  const auto back = read_gq(text);
  EXPECT_EQ(back, w);
  EXPECT_EQ(write_gq(back), text);
  EXPECT_THROW(read_gq("GQ 2 2 1 1\n0 1\n"), ParseError);
  EXPECT_THROW(read_gq("XX"), ParseError);
}
