#include <gtest/gtest.h>

#include <random>

#include "padt/timeseries.hpp"

using namespace padt;

namespace {

FieldDescriptor q2() { return FieldDescriptor::make(2, 1); }

PAdicNumber num(const std::string& s) { return parse_padic(s, q2(), kExactPrecision); }

std::vector<LabeledPoint> frame(std::initializer_list<std::pair<const char*, const char*>> entries) {
  std::vector<LabeledPoint> out;
  for (const auto& [label, value] : entries) out.emplace_back(label, num(value));
  return out;
}

DendrogramSeries tate_series() {
  return DendrogramSeries::from_codings({frame({{"zero", "0"}, {"one", "1"}, {"a", "2^2"}}),
                                         frame({{"zero", "0"}, {"one", "1"}, {"a", "2"}}),
                                         frame({{"zero", "0"}, {"one", "1"}, {"a", "1 + 2"}}),
                                         frame({{"zero", "0"}, {"one", "1"}, {"a", "1 + 2^2"}})});
}

DendrogramSeries genus2_series() {
  std::vector<std::vector<LabeledPoint>> codings;
  for (const char* m : {"2^3", "2^4", "2^5", "2^6"}) {
    codings.push_back(frame({{"zero", "0"}, {"one", "1"}, {"m", m}, {"A", "2^2 + 2^3"}, {"B", "2^2 + 2^3 + 2^4"}}));
  }
  return DendrogramSeries::from_codings(codings);
}

}  // namespace

TEST(TimeSeries, TateBalancesAndVelocity) {
  const DendrogramSeries s = tate_series();
  EXPECT_EQ(balance_series(s), (std::vector<long>{2, 1, -1, -2}));
  const VelocityEstimate v = estimate_velocity(balance_series(s));
  EXPECT_EQ(v.c, Rational(-3, 2));
  EXPECT_EQ(v.method, "periodic");
  EXPECT_EQ(v.period, std::optional<std::size_t>(2));
  EXPECT_TRUE(v.exact);
}

TEST(TimeSeries, TateFlowAndCurve) {
  const DendrogramSeries s = tate_series();
  const FlowReport flow = classify_flow(s, Rational(-3, 2));
  EXPECT_EQ(flow.kind, FlowKind::translation_at_root);
  EXPECT_EQ(flow.t0, std::optional<std::size_t>(2));
  const CurveData c = tate_curve(Rational(-3, 2), s.field(), balance_series(s));
  EXPECT_EQ(c.base_field.ramification(), 2);
  ASSERT_TRUE(c.quotient.has_value());
  EXPECT_EQ(c.quotient->graph.vertex_count(), 3u);
  EXPECT_EQ(c.quotient->lengths, (std::vector<Rational>(3, Rational(1, 2))));
  EXPECT_EQ(c.betti1, 1u);
  EXPECT_EQ(c.quotient->graph.betti_by_traversal().h1, 1u);
  EXPECT_EQ(c.orbits, (std::vector<long>{1, 2, 1, 2}));
  const SymbolicMatrix& theta = c.generators.front();
  EXPECT_TRUE(theta.fixes(Expr(0)));
  EXPECT_TRUE(theta.fixes(Expr(1)));
  EXPECT_FALSE(theta.fixes(Expr(2)));
}

TEST(TimeSeries, VelocityEstimates) {
  EXPECT_EQ(estimate_velocity({0, 3}).c, Rational(3));
  EXPECT_EQ(estimate_velocity({5, 6, 7, 8}).period, std::optional<std::size_t>(1));
  const VelocityEstimate noisy = estimate_velocity({0, 2, 1, 4, 4});
  EXPECT_EQ(noisy.method, "ols-fallback");
  EXPECT_FALSE(noisy.exact);
  EXPECT_EQ(noisy.c, Rational(1));  // least-squares slope 10/10
  EXPECT_EQ(estimate_velocity({4, 4, 4}).c, Rational(0));
  EXPECT_THROW(estimate_velocity({1}), Error);
}

TEST(TimeSeries, PeriodicSeriesRecoverTheirVelocity) {
  std::mt19937 rng(6);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t q = 1 + rng() % 4;
    std::vector<long> pattern(q);
    for (long& d : pattern) d = static_cast<long>(rng() % 11) - 5;
    std::vector<long> b{static_cast<long>(rng() % 20)};
    for (std::size_t t = 0; t < 2 * q + rng() % 4; ++t) b.push_back(b.back() + pattern[t % q]);
    long sum = 0;
    for (long d : pattern) sum += d;
    const VelocityEstimate v = estimate_velocity(b);
    EXPECT_TRUE(v.exact);
    EXPECT_EQ(v.c, Rational(sum, static_cast<std::int64_t>(q)));
  }
}

TEST(TimeSeries, StationaryAndNoTranslation) {
  EXPECT_EQ(classify_flow(tate_series(), Rational(0)).kind, FlowKind::stationary);
  try {
    tate_curve(Rational(0), q2(), {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::no_translation);
  }
}

TEST(TimeSeries, FlowFromInfinity) {
  // the datum next to 1 never leaves, v1 stays below O_K
  const DendrogramSeries s = DendrogramSeries::from_codings(
      {frame({{"zero", "0"}, {"one", "1"}, {"a", "1 + 2"}}), frame({{"zero", "0"}, {"one", "1"}, {"a", "1 + 2^2"}})});
  EXPECT_EQ(classify_flow(s, Rational(1)).kind, FlowKind::flow_from_infinity);
}

TEST(TimeSeries, SeriesValidation) {
  EXPECT_THROW(DendrogramSeries::from_codings({}), Error);
  EXPECT_THROW(DendrogramSeries::from_codings({frame({{"a", "2"}, {"one", "1"}})}), Error);  // no 0
  try {
    DendrogramSeries::from_codings({frame({{"zero", "0"}, {"one", "1"}}), frame({{"zero", "0"}, {"uno", "1"}})});
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("frame t=1"), std::string::npos);
  }
}

TEST(TimeSeries, TreeDistance) {
  EXPECT_EQ(tree_distance(Disc{num("0"), 2}, Disc{num("2^2 + 2^3"), 4}), 2);
  EXPECT_EQ(tree_distance(Disc{num("0"), 3}, Disc{num("2^2"), 3}), 2);
  EXPECT_EQ(tree_distance(Disc{num("1"), 0}, Disc{num("0"), 5}), 5);
  EXPECT_EQ(tree_distance(Disc{num("1"), 2}, Disc{num("1"), 2}), 0);
}

TEST(TimeSeries, Genus2Branch) {
  const DendrogramSeries s = genus2_series();
  EXPECT_EQ(balance_series(s), (std::vector<long>{5, 6, 7, 8}));
  const VelocityEstimate v = estimate_velocity(balance_series(s));
  EXPECT_EQ(v.c, Rational(1));
  EXPECT_EQ(classify_flow(s, v.c).kind, FlowKind::translation_at_root);

  const auto branches = invariant_branches(s);
  const InvariantBranch* off = nullptr;
  for (const auto& b : branches) {
    if (b.off_axis && b.labels.size() >= 2) off = &b;
  }
  ASSERT_NE(off, nullptr);
  EXPECT_EQ(off->labels, (std::vector<std::string>{"A", "B"}));
  EXPECT_EQ(off->root.radius_exp, 4);
  EXPECT_EQ(invariant_branch(s)->labels.size(), 4u);  // B(0, 2^-2) holds zero, m, A, B

  const auto [a, b] = geodesic_endpoints(off->root);
  EXPECT_TRUE(a.same_expansion(num("2^2 + 2^3")));
  EXPECT_TRUE(b.same_expansion(num("2^2 + 2^3 + 2^4")));
}

TEST(TimeSeries, Genus2Curve) {
  const DendrogramSeries s = genus2_series();
  const CurveData tate = tate_curve(Rational(1), s.field(), balance_series(s));
  const PAdicNumber a = num("2^2 + 2^3");
  const PAdicNumber b = num("2^2 + 2^3 + 2^4");
  const CurveData g = mumford_curve(tate, a, b, Rational(1));
  EXPECT_EQ(g.status, "disjoint");
  EXPECT_EQ(g.genus, 2u);
  EXPECT_EQ(g.betti1, 2u);
  ASSERT_TRUE(g.quotient.has_value());
  EXPECT_EQ(g.quotient->graph.betti_by_traversal().h1, 2u);
  EXPECT_EQ(g.bridge_length, std::optional<Rational>(Rational(2)));
  const SymbolicMatrix& sigma = g.generators[1];
  EXPECT_TRUE(sigma.fixes(Expr::symbol_a()));
  EXPECT_TRUE(sigma.fixes(Expr::symbol_b()));
  EXPECT_EQ(moebius(sigma, Rational(12), Rational(12), Rational(28), 2), std::optional<Rational>(Rational(12)));
  EXPECT_EQ(moebius(sigma, Rational(28), Rational(12), Rational(28), 2), std::optional<Rational>(Rational(28)));
  EXPECT_NE(moebius(sigma, Rational(5), Rational(12), Rational(28), 2), std::optional<Rational>(Rational(5)));
}

TEST(TimeSeries, Genus2WithNegativeVelocity) {
  const CurveData tate = tate_curve(Rational(-1), q2(), {0, -1});
  const CurveData g = mumford_curve(tate, num("2^2 + 2^3"), num("2^2 + 2^3 + 2^4"), Rational(1));
  EXPECT_EQ(g.status, "disjoint");
  EXPECT_EQ(g.genus, 2u);
  EXPECT_EQ(g.quotient->lengths, (std::vector<Rational>{Rational(1), Rational(1), Rational(2)}));
}

TEST(TimeSeries, IntersectingAxes) {
  const CurveData tate = tate_curve(Rational(-3, 2), q2(), {2, 1, -1, -2});
  const CurveData partial = mumford_curve(tate, num("2"), num("2^2"), Rational(1));
  EXPECT_EQ(partial.status, "discrete-intersecting, analysis-partial");
  EXPECT_FALSE(partial.quotient.has_value());
  try {
    mumford_curve(tate, num("2"), num("2^4"), Rational(1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::non_discrete);
  }
  EXPECT_THROW(mumford_curve(tate, num("1"), num("2^4"), Rational(1)), Error);
  EXPECT_THROW(mumford_curve(tate, num("2"), num("2^4"), Rational(0)), Error);
}

TEST(TimeSeries, GeodesicEndpointsNeedOffAxisDisc) {
  try {
    geodesic_endpoints(Disc{num("0"), 3});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::degenerate);
  }
}

TEST(TimeSeries, SymbolicMatrices) {
  const SymbolicMatrix theta = theta_matrix(Rational(-3, 2));
  EXPECT_EQ(theta.alpha.to_string(), "-p^(-3/2)");
  EXPECT_EQ(theta.gamma.to_string(), "-p^(-3/2) + 1");
  const SymbolicMatrix sigma = varsigma_matrix(Rational(1));
  EXPECT_EQ(sigma.alpha.to_string(), "-b*p^(1) + a");
  EXPECT_FALSE(sigma.determinant().is_zero());
  EXPECT_THROW(theta.alpha.evaluate(Rational(0), Rational(0), 2), Error);
}

TEST(TimeSeries, RecenterKeepsTrees) {
  const DendrogramSeries s = tate_series();
  const DendrogramSeries r = recenter(s, num("2^7"));
  for (std::size_t t = 0; t < s.size(); ++t) {
    EXPECT_TRUE(isometric(s.frame(t).dendrogram, r.frame(t).dendrogram));
  }
}
