#pragma once

// Time series of binary p-adic dendrograms: balance trend and velocity, the
// flow type of the marked vertex, Tate-curve data (genus 1) and, with a
// time-invariant branch off the axis ]0,1[, genus-2 Mumford-curve data.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "padt/classifier.hpp"
#include "padt/error.hpp"
#include "padt/flag_graph.hpp"
#include "padt/rational.hpp"
#include "padt/symbolic.hpp"
#include "padt/tree_invariants.hpp"

namespace padt {

/// Frames X_0..X_N over one field and one particle set.
class DendrogramSeries {
 public:
  /// Classifies each frame's coding. With require_normal every frame must
  /// contain 0 and 1 and lie in O_K.
  static DendrogramSeries from_codings(const std::vector<std::vector<LabeledPoint>>& codings, bool require_normal = true) {
    if (codings.empty()) fail(ErrorKind::invalid_input, "empty time series");
    DendrogramSeries s;
    std::set<std::string> labels;
    for (std::size_t t = 0; t < codings.size(); ++t) {
      const std::string at = "frame t=" + std::to_string(t) + ": ";
      std::set<std::string> here;
      for (const auto& entry : codings[t]) here.insert(entry.first);
      if (t == 0) {
        labels = here;
      } else if (here != labels) {
        fail(ErrorKind::invalid_input, at + "particle labels differ from frame 0");
      }
      if (!(codings[t].front().second.field() == codings[0].front().second.field())) {
        fail(ErrorKind::descriptor_mismatch, at + "field differs from frame 0");
      }
      try {
        s.frames_.push_back(classify(codings[t]));
      } catch (const Error& e) {
        fail(e.kind(), at + e.message());
      }
      if (require_normal) {
        const Normality n = normality(codings[t]);
        if (!n.normal()) fail(ErrorKind::invalid_input, at + "coding is not normal (needs 0 and 1, inside O_K)");
      }
    }
    s.normal_ = require_normal;
    return s;
  }

  std::size_t size() const { return frames_.size(); }
  const ClusterHierarchy& frame(std::size_t t) const { return frames_.at(t); }
  const std::vector<ClusterHierarchy>& frames() const { return frames_; }
  const FieldDescriptor& field() const { return frames_.front().field(); }
  bool normal() const { return normal_; }

 private:
  std::vector<ClusterHierarchy> frames_;
  bool normal_ = false;
};

namespace detail {

inline std::optional<std::string> label_coded(const ClusterHierarchy& h, bool one) {
  for (const auto& [label, x] : h.coding) {
    if (!one && x.is_zero()) return label;
    if (one && !x.is_zero() && x.v0() == 0 && x.digits().size() == 1 && x.digits()[0] == x.field().one_label()) {
      return label;
    }
  }
  return std::nullopt;
}

inline bool branch_holds(const ProjectiveDendrogram& d, const DendrogramChild& c, const std::string& label) {
  if (c.is_leaf()) return d.leaves()[c.index].label == label;
  const auto below = d.labels_below(c.index);
  return std::find(below.begin(), below.end(), label) != below.end();
}

}  // namespace detail

/// b(X) = w0 - w1 with Gamma_0 the root branch holding the datum coded 0 and
/// Gamma_1 the one holding the datum coded 1.
inline long binary_balance(const ClusterHierarchy& h) {
  const ProjectiveDendrogram& d = h.dendrogram;
  const auto ch = d.children(d.root());
  if (ch.size() != 2) fail(ErrorKind::invalid_input, "root is not binary");
  const auto zero = detail::label_coded(h, false);
  const auto one = detail::label_coded(h, true);
  if (!zero || !one) fail(ErrorKind::invalid_input, "coding lacks 0 or 1");
  std::size_t g0 = detail::branch_holds(d, ch[0], *zero) ? 0 : 1;
  if (detail::branch_holds(d, ch[g0], *one)) fail(ErrorKind::invalid_input, "0 and 1 lie in the same root branch");
  return branch_weight(d, ch[g0]) - branch_weight(d, ch[1 - g0]);
}

inline std::vector<long> balance_series(const DendrogramSeries& s) {
  std::vector<long> out;
  for (std::size_t t = 0; t < s.size(); ++t) {
    if (!s.frame(t).dendrogram.is_binary()) fail(ErrorKind::invalid_input, "frame t=" + std::to_string(t) + " is not binary");
    try {
      out.push_back(binary_balance(s.frame(t)));
    } catch (const Error& e) {
      fail(e.kind(), "frame t=" + std::to_string(t) + ": " + e.message());
    }
  }
  return out;
}

struct VelocityEstimate {
  Rational c;
  std::string method;  // "periodic" or "ols-fallback"
  std::optional<std::size_t> period;
  std::vector<long> differences;
  bool exact = true;
};

/// c = (sum of one period of first differences)/q for the smallest period q
/// confirmed by at least one repetition (q = 1 for a single difference);
/// otherwise the least-squares slope rounded to the nearest rational with
/// denominator <= the series length, flagged non-exact.
inline VelocityEstimate estimate_velocity(const std::vector<long>& balances) {
  if (balances.size() < 2) fail(ErrorKind::invalid_input, "velocity needs at least two frames");
  VelocityEstimate v;
  for (std::size_t t = 1; t < balances.size(); ++t) v.differences.push_back(balances[t] - balances[t - 1]);
  const auto& d = v.differences;
  const std::size_t len = d.size();
  const std::size_t max_q = len == 1 ? 1 : len - 1;
  for (std::size_t q = 1; q <= max_q; ++q) {
    bool periodic = true;
    for (std::size_t i = q; i < len && periodic; ++i) periodic = d[i] == d[i % q];
    if (!periodic) continue;
    long sum = 0;
    for (std::size_t i = 0; i < q; ++i) sum += d[i];
    v.c = Rational(sum, static_cast<std::int64_t>(q));
    v.method = "periodic";
    v.period = q;
    return v;
  }
  // exact least-squares slope, then the nearest small-denominator rational
  const auto n = static_cast<std::int64_t>(balances.size());
  Rational tbar(n - 1, 2);
  Rational bbar(0);
  for (long b : balances) bbar = bbar + Rational(b);
  bbar = bbar / Rational(n);
  Rational sxy(0);
  Rational sxx(0);
  for (std::int64_t t = 0; t < n; ++t) {
    const Rational dt = Rational(t) - tbar;
    sxy = sxy + dt * (Rational(balances[static_cast<std::size_t>(t)]) - bbar);
    sxx = sxx + dt * dt;
  }
  const Rational slope = sxy / sxx;
  Rational best(0);
  double best_err = -1;
  for (std::int64_t den = 1; den <= n; ++den) {
    const auto num = static_cast<std::int64_t>(std::llround(slope.to_double() * static_cast<double>(den)));
    const Rational cand(num, den);
    const double err = std::fabs((cand - slope).to_double());
    if (best_err < 0 || err < best_err) {
      best = cand;
      best_err = err;
    }
  }
  v.c = best;
  v.method = "ols-fallback";
  v.exact = false;
  return v;
}

/// Endpoints of I_t = T_t^dagger within ]0,1[: v0 toward 0, v1 toward 1.
struct AxisSegment {
  Disc v0;
  Disc v1;
};

inline AxisSegment axis_segment(const ClusterHierarchy& h) {
  const auto zero = detail::label_coded(h, false);
  const auto one = detail::label_coded(h, true);
  if (!zero || !one) fail(ErrorKind::invalid_input, "coding lacks 0 or 1");
  auto nearest = [&](const std::string& label) {
    const PAdicNumber& x = h.code(label);
    int best = 0;
    bool any = false;
    for (const auto& [other, y] : h.coding) {
      if (other == label) continue;
      const int v = difference_valuation(x, y).valuation();
      best = any ? std::max(best, v) : v;
      any = true;
    }
    return Disc{x, best};
  };
  return AxisSegment{nearest(*zero), nearest(*one)};
}

enum class FlowKind { stationary, translation_at_root, flow_from_infinity };

inline std::string to_string(FlowKind k) {
  switch (k) {
    case FlowKind::stationary: return "stationary";
    case FlowKind::translation_at_root: return "translation_at_root";
    case FlowKind::flow_from_infinity: return "flow_from_infinity";
  }
  return "";
}

struct FlowReport {
  FlowKind kind = FlowKind::stationary;
  std::optional<std::size_t> t0;
  std::string note;
};

/// v = O_K is the common root. For c < 0 the flow is a translation at the
/// root when v = v0(t) for all t >= t0, for c > 0 when v = v1(t).
inline FlowReport classify_flow(const DendrogramSeries& s, const Rational& c) {
  if (c == Rational(0)) return FlowReport{FlowKind::stationary, std::nullopt, ""};
  const bool toward_zero = c < Rational(0);
  std::optional<std::size_t> t0;
  for (std::size_t t = s.size(); t-- > 0;) {
    const AxisSegment seg = axis_segment(s.frame(t));
    const Disc& end = toward_zero ? seg.v0 : seg.v1;
    if (end.radius_exp != 0) break;
    t0 = t;
  }
  if (t0) return FlowReport{FlowKind::translation_at_root, t0, ""};
  return FlowReport{FlowKind::flow_from_infinity, std::nullopt, "analysis unsupported"};
}

/// Finite graph with a rational length per internal edge (in edges() order).
struct QuotientGraph {
  FlagGraph graph;
  std::vector<Rational> lengths;
};

struct CurveData {
  std::string kind;  // "tate" or "mumford2"
  FieldDescriptor base_field;
  std::vector<SymbolicMatrix> generators;
  std::optional<QuotientGraph> quotient;
  std::size_t betti1 = 0;
  std::size_t genus = 0;
  std::vector<long> orbits;
  std::string status;
  std::optional<Rational> bridge_length;
};

/// Genus-1 data for velocity c = d/e: L ramified of index e over K, the
/// generator Theta, the quotient loop (|d| vertices, edges of length 1/e) and
/// orbit(t) = e b(t) mod |d|.
inline CurveData tate_curve(const Rational& c, const FieldDescriptor& k, const std::vector<long>& balances) {
  if (c == Rational(0)) fail(ErrorKind::no_translation, "velocity 0: no hyperbolic translation");
  const std::int64_t d = c.num() < 0 ? -c.num() : c.num();
  const std::int64_t e = c.den();
  CurveData out{"tate", FieldDescriptor::make(k.prime(), k.degree(), k.reps(), static_cast<int>(e), k.modulus()),
                {theta_matrix(c)}, std::nullopt, 0, 1, {}, "", std::nullopt};
  QuotientGraph q;
  for (std::int64_t i = 0; i < d; ++i) q.graph.add_vertex();
  for (std::int64_t i = 0; i < d; ++i) {
    q.graph.add_edge(static_cast<std::size_t>(i), static_cast<std::size_t>((i + 1) % d));
    q.lengths.push_back(Rational(1, e));
  }
  out.betti1 = q.graph.betti().h1;
  out.quotient = std::move(q);
  for (long b : balances) {
    const std::int64_t pos = e * b;
    out.orbits.push_back(static_cast<long>(((pos % d) + d) % d));
  }
  return out;
}

/// d(B(x, p^-m), B(y, p^-n)) in the Bruhat-Tits tree.
inline int tree_distance(const Disc& x, const Disc& y) {
  const Separation s = difference_valuation(x.center, y.center);
  int j = std::min(x.radius_exp, y.radius_exp);
  if (s.distinguished) {
    j = std::min(j, s.exponent);
  } else if (s.exponent < j) {
    fail(ErrorKind::precision, "disc centers indistinguishable at precision " + std::to_string(s.exponent));
  }
  return (x.radius_exp - j) + (y.radius_exp - j);
}

struct InvariantBranch {
  Disc root;
  std::vector<std::string> labels;  // sorted
  bool off_axis = false;            // holds neither the datum coded 0 nor 1
};

namespace detail {

inline std::vector<Disc> path_to_root(const ClusterHierarchy& h, std::size_t v) {
  std::vector<Disc> out{h.vertex_disc[v]};
  while (auto e = h.dendrogram.parent_edge(v)) {
    v = h.dendrogram.internal_edges()[*e].parent;
    out.push_back(h.vertex_disc[v]);
  }
  return out;
}

}  // namespace detail

/// Branches below a non-root vertex whose particle set and root-ward disc
/// path agree in every frame.
inline std::vector<InvariantBranch> invariant_branches(const DendrogramSeries& s) {
  std::vector<InvariantBranch> out;
  const ClusterHierarchy& first = s.frame(0);
  const auto zero = detail::label_coded(first, false);
  const auto one = detail::label_coded(first, true);
  for (std::size_t v = 0; v < first.dendrogram.vertex_count(); ++v) {
    if (v == first.dendrogram.root()) continue;
    auto labels = first.dendrogram.labels_below(v);
    std::sort(labels.begin(), labels.end());
    const auto path = detail::path_to_root(first, v);
    bool invariant = true;
    for (std::size_t t = 1; t < s.size() && invariant; ++t) {
      const ClusterHierarchy& h = s.frame(t);
      bool found = false;
      for (std::size_t w = 0; w < h.dendrogram.vertex_count() && !found; ++w) {
        auto other = h.dendrogram.labels_below(w);
        std::sort(other.begin(), other.end());
        if (other != labels) continue;
        found = detail::path_to_root(h, w) == path;
      }
      invariant = found;
    }
    if (!invariant) continue;
    auto holds = [&](const std::optional<std::string>& l) {
      return l && std::binary_search(labels.begin(), labels.end(), *l);
    };
    out.push_back(InvariantBranch{first.vertex_disc[v], labels, !holds(zero) && !holds(one)});
  }
  return out;
}

/// The largest invariant branch; ties go to the branch with the smaller
/// minimal label.
inline std::optional<InvariantBranch> invariant_branch(const DendrogramSeries& s) {
  auto all = invariant_branches(s);
  if (all.empty()) return std::nullopt;
  return *std::min_element(all.begin(), all.end(), [](const InvariantBranch& a, const InvariantBranch& b) {
    if (a.labels.size() != b.labels.size()) return a.labels.size() > b.labels.size();
    return a.labels.front() < b.labels.front();
  });
}

/// Translation length along the branch's own axis: |velocity| of the
/// balance series at the branch root when it is binary in every frame.
inline std::optional<Rational> branch_translation_length(const DendrogramSeries& s, const InvariantBranch& branch) {
  std::vector<long> balances;
  for (const ClusterHierarchy& h : s.frames()) {
    const ProjectiveDendrogram& d = h.dendrogram;
    std::optional<std::size_t> root;
    for (std::size_t w = 0; w < d.vertex_count() && !root; ++w) {
      auto labels = d.labels_below(w);
      std::sort(labels.begin(), labels.end());
      if (labels == branch.labels) root = w;
    }
    if (!root || d.children(*root).size() != 2) return std::nullopt;
    const auto ch = d.children(*root);
    // the child holding the smallest label comes first
    const std::size_t first = detail::branch_holds(d, ch[0], branch.labels.front()) ? 0 : 1;
    balances.push_back(branch_weight(d, ch[first]) - branch_weight(d, ch[1 - first]));
  }
  if (balances.size() < 2) return std::nullopt;
  const Rational c = estimate_velocity(balances).c;
  if (c == Rational(0)) return std::nullopt;
  return c.abs();
}

/// a = center truncated below m, continued by zeros; b = a + p^m.
inline std::pair<PAdicNumber, PAdicNumber> geodesic_endpoints(const Disc& w0) {
  const FieldDescriptor& field = w0.center.field();
  if (w0.contains(PAdicNumber::zero(field, kExactPrecision)) ||
      w0.contains(PAdicNumber::one(field, kExactPrecision))) {
    fail(ErrorKind::degenerate, "w0 = " + to_string(w0) + " lies on the geodesic ]0,1[ or above it");
  }
  const int m = w0.radius_exp;
  PAdicNumber a = w0.center.truncated_below(m);
  std::vector<RepLabel> digits;
  const int v0 = a.is_zero() ? m : a.v0();
  for (int n = v0; n < m; ++n) digits.push_back(a.digit(n));
  digits.push_back(field.one_label());
  PAdicNumber b = PAdicNumber::from_digits(field, v0, std::move(digits), kExactPrecision);
  return {std::move(a), std::move(b)};
}

/// Genus-2 data from the Tate data and the second axis ]a,b[ with
/// translation length u. The axes are compared through the median vertices
/// P_a = v(0,1,a), P_b = v(0,1,b), Q_0 = v(a,b,0), Q_1 = v(a,b,1).
inline CurveData mumford_curve(const CurveData& tate, const PAdicNumber& a, const PAdicNumber& b, const Rational& u) {
  if (tate.kind != "tate") fail(ErrorKind::invalid_input, "mumford_curve needs Tate data");
  if (u <= Rational(0)) fail(ErrorKind::invalid_input, "translation length u must be positive");
  const FieldDescriptor& field = a.field();
  const PAdicNumber zero = PAdicNumber::zero(field, kExactPrecision);
  const PAdicNumber one = PAdicNumber::one(field, kExactPrecision);
  for (const PAdicNumber* x : {&a, &b}) {
    if (!difference_valuation(*x, zero).distinguished || !difference_valuation(*x, one).distinguished) {
      fail(ErrorKind::degenerate, "axis endpoint " + to_string(*x) + " meets the axis ]0,1[");
    }
  }
  if (!difference_valuation(a, b).distinguished) fail(ErrorKind::degenerate, "a = b");

  const Disc pa = median_vertex(zero, one, a);
  const Disc pb = median_vertex(zero, one, b);
  const Disc q0 = median_vertex(a, b, zero);
  const Disc q1 = median_vertex(a, b, one);
  // translation length of Theta along ]0,1[
  Rational theta_length(0);
  if (tate.quotient) {
    for (const Rational& l : tate.quotient->lengths) theta_length = theta_length + l;
  }

  CurveData out{"mumford2", tate.base_field, {tate.generators.front(), varsigma_matrix(u)}, std::nullopt, 0, 2,
                tate.orbits, "", std::nullopt};
  std::optional<Rational> shared;
  if (pa == pb) {
    if (!(q0 == q1)) fail(ErrorKind::degenerate, "inconsistent median vertices for ]a,b[");
    const int bridge = tree_distance(pa, q0);
    if (bridge > 0) {
      QuotientGraph q;
      q.graph.add_vertex();
      q.graph.add_vertex();
      q.graph.add_edge(0, 0);
      q.lengths.push_back(theta_length);
      q.graph.add_edge(1, 1);
      q.lengths.push_back(u);
      q.graph.add_edge(0, 1);
      q.lengths.push_back(Rational(bridge));
      out.betti1 = q.graph.betti().h1;
      out.quotient = std::move(q);
      out.bridge_length = Rational(bridge);
      out.status = "disjoint";
      return out;
    }
    shared = Rational(0);
  } else {
    shared = Rational(tree_distance(pa, pb));
  }
  if (*shared > std::min(theta_length, u)) {
    fail(ErrorKind::non_discrete, "axes share a segment of length " + shared->to_string() +
                                      " longer than a translation length: there is no Mumford curve");
  }
  // generators only: the quotient graph is not computed here
  out.status = "discrete-intersecting, analysis-partial";
  return out;
}

/// Every coding value shifted by delta and the frames reclassified.
inline DendrogramSeries recenter(const DendrogramSeries& s, const PAdicNumber& delta) {
  if (delta.field().reps() != RepSystem::polynomial) {
    fail(ErrorKind::unsupported, "recentering needs polynomial reps");
  }
  std::vector<std::vector<LabeledPoint>> codings;
  for (const ClusterHierarchy& h : s.frames()) {
    std::vector<LabeledPoint> shifted;
    for (const auto& [label, x] : h.coding) shifted.emplace_back(label, add(x, delta));
    codings.push_back(std::move(shifted));
  }
  return DendrogramSeries::from_codings(codings, false);
}

}  // namespace padt
