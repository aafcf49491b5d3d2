#pragma once

// Both directions between finite p-adic data sets and projective dendrograms:
// classification recovers the *-tree of the data (vertices are discs),
// encoding assigns numbers sum chi(e) p^{l(o(e))} to the data of a tree.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "padt/dendrogram.hpp"
#include "padt/error.hpp"
#include "padt/padic.hpp"
#include "padt/residue_field.hpp"

namespace padt {

/// The disc B(center, p^{-radius_exp}) = center + p^{radius_exp} O_K.
struct Disc {
  PAdicNumber center;
  int radius_exp = 0;

  bool contains(const PAdicNumber& x) const {
    const Separation s = difference_valuation(center, x);
    if (s.distinguished) return s.exponent >= radius_exp;
    if (s.exponent >= radius_exp) return true;
    fail(ErrorKind::precision, "disc membership undecidable at precision " + std::to_string(s.exponent));
  }

  friend bool operator==(const Disc& a, const Disc& b) { return a.radius_exp == b.radius_exp && a.contains(b.center); }
};

inline std::string to_string(const Disc& d) {
  return "B(" + to_string(d.center) + ", " + std::to_string(d.center.field().prime()) + "^-" + std::to_string(d.radius_exp) +
         ")";
}

/// A point of P^1(K): a number or infinity.
class ProjectivePoint {
 public:
  static ProjectivePoint infinity() { return ProjectivePoint(); }
  ProjectivePoint(PAdicNumber x) : value_(std::move(x)) {}  // NOLINT(google-explicit-constructor)

  bool is_infinity() const { return !value_.has_value(); }
  const PAdicNumber& value() const {
    if (!value_) fail(ErrorKind::invalid_input, "point at infinity has no expansion");
    return *value_;
  }

 private:
  ProjectivePoint() = default;
  std::optional<PAdicNumber> value_;
};

/// The common vertex of the three geodesics between x, y, z. For finite
/// points this is the disc around the closest pair; with z = infinity it is
/// the smallest disc containing x and y.
inline Disc median_vertex(const ProjectivePoint& x, const ProjectivePoint& y, const ProjectivePoint& z) {
  std::vector<const ProjectivePoint*> pts{&x, &y, &z};
  const auto infinite = std::count_if(pts.begin(), pts.end(), [](const ProjectivePoint* q) { return q->is_infinity(); });
  if (infinite > 1) fail(ErrorKind::invalid_input, "coincident points: infinity given twice");
  std::vector<PAdicNumber> finite;
  for (const ProjectivePoint* q : pts) {
    if (!q->is_infinity()) finite.push_back(q->value());
  }
  auto dv = [](const PAdicNumber& a, const PAdicNumber& b) {
    const Separation s = difference_valuation(a, b);
    if (!s.distinguished) fail(ErrorKind::invalid_input, "coincident points " + to_string(a) + " and " + to_string(b));
    return s.exponent;
  };
  if (finite.size() == 2) return Disc{finite[0], dv(finite[0], finite[1])};
  const int xy = dv(finite[0], finite[1]);
  const int xz = dv(finite[0], finite[2]);
  const int yz = dv(finite[1], finite[2]);
  if (yz > xy && yz > xz) return Disc{finite[1], yz};
  return Disc{finite[0], std::max(xy, xz)};
}

using LabeledPoint = std::pair<std::string, PAdicNumber>;

/// The *-tree of a finite data set: a stable projective dendrogram whose
/// vertices carry discs (indexed like the dendrogram's vertices).
struct ClusterHierarchy {
  ProjectiveDendrogram dendrogram;
  std::vector<Disc> vertex_disc;
  std::vector<LabeledPoint> coding;  // input order
  std::vector<std::string> warnings;

  const PAdicNumber& code(const std::string& label) const {
    for (const auto& [l, x] : coding) {
      if (l == label) return x;
    }
    fail(ErrorKind::invalid_input, "unknown datum '" + label + "'");
  }
  const Disc& disc(std::size_t vertex) const { return vertex_disc.at(vertex); }
  const FieldDescriptor& field() const { return coding.front().second.field(); }
};

namespace detail {

struct ClusterNode {
  std::optional<std::size_t> datum;  // leaves only
  int radius = 0;
  std::vector<std::size_t> children;
  std::size_t rep = 0;  // datum with the minimal label
};

inline std::vector<std::vector<int>> valuation_matrix(const std::vector<LabeledPoint>& data) {
  const std::size_t n = data.size();
  std::vector<std::vector<int>> v(n, std::vector<int>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const Separation s = difference_valuation(data[i].second, data[j].second);
      if (!s.distinguished) {
        fail(ErrorKind::precision, "data '" + data[i].first + "' and '" + data[j].first +
                                       "' are indistinguishable at precision " + std::to_string(s.exponent));
      }
      v[i][j] = v[j][i] = s.exponent;
    }
  }
  return v;
}

inline void validate_data(const std::vector<LabeledPoint>& data) {
  if (data.empty()) fail(ErrorKind::invalid_input, "no data to classify");
  std::set<std::string> seen;
  for (const auto& [label, x] : data) {
    if (label.empty()) fail(ErrorKind::invalid_input, "empty datum label");
    if (!seen.insert(label).second) fail(ErrorKind::invalid_input, "duplicate datum label '" + label + "'");
    if (!(x.field() == data.front().second.field())) {
      fail(ErrorKind::descriptor_mismatch, "datum '" + label + "' uses a different field descriptor");
    }
  }
}

// Vertex ids n0, n1, ... in preorder with children sorted by minimal label,
// the same order the dendrogram builder applies by default.
inline ClusterHierarchy assemble(const std::vector<LabeledPoint>& data, const std::vector<ClusterNode>& nodes,
                                 std::size_t root, bool require_stable) {
  std::vector<std::string> min_label(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {  // children precede parents
    if (nodes[i].datum) {
      min_label[i] = data[*nodes[i].datum].first;
      continue;
    }
    min_label[i] = min_label[nodes[i].children.front()];
    for (std::size_t c : nodes[i].children) min_label[i] = std::min(min_label[i], min_label[c]);
  }

  ProjectiveDendrogram::Builder builder;
  std::vector<std::string> id(nodes.size());
  std::vector<Disc> discs;
  std::vector<std::size_t> stack{root};
  std::size_t counter = 0;
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    id[v] = "n" + std::to_string(counter++);
    builder.add_vertex(id[v]);
    discs.push_back(Disc{data[nodes[v].rep].second, nodes[v].radius});
    std::vector<std::size_t> kids = nodes[v].children;
    std::sort(kids.begin(), kids.end(), [&](std::size_t a, std::size_t b) { return min_label[a] < min_label[b]; });
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) {
      if (!nodes[*it].datum) stack.push_back(*it);
    }
  }
  for (std::size_t v = 0; v < nodes.size(); ++v) {
    if (nodes[v].datum) continue;
    for (std::size_t c : nodes[v].children) {
      if (nodes[c].datum) {
        builder.add_leaf(id[v], data[*nodes[c].datum].first);
      } else {
        builder.add_edge(id[v], id[c], nodes[c].radius - nodes[v].radius);
      }
    }
  }
  builder.set_root(id[root]).set_infinity_at(id[root]);
  ProjectiveDendrogram d = builder.build(require_stable);
  std::vector<Disc> by_index;
  by_index.reserve(discs.size());
  for (std::size_t v = 0; v < d.vertex_count(); ++v) by_index.push_back(discs[v]);  // ids n<k> were added in order
  return ClusterHierarchy{std::move(d), std::move(by_index), data, {}};
}

}  // namespace detail

/// Agglomerative classification. Each round, every current cluster x forms
/// C(x) from the clusters at minimal distance to it (distance measured between
/// representatives, the member with the smallest label); the distinct C(x)
/// are nested or disjoint, and the maximal ones become the clusters of the
/// next round.
inline ClusterHierarchy classify(const std::vector<LabeledPoint>& data) {
  detail::validate_data(data);
  const std::size_t n = data.size();
  if (n == 1) {
    ProjectiveDendrogram d =
        ProjectiveDendrogram::Builder().add_vertex("n0").add_leaf("n0", data[0].first).set_root("n0").build(false);
    const int radius = data[0].second.is_zero() ? 0 : data[0].second.v0();
    return ClusterHierarchy{std::move(d), {Disc{data[0].second, radius}}, data,
                            {"a single point yields a degenerate dendrogram"}};
  }
  const auto v = detail::valuation_matrix(data);

  std::vector<detail::ClusterNode> nodes;
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < n; ++i) {
    nodes.push_back({i, 0, {}, i});
    active.push_back(i);
  }
  auto smaller_label = [&](std::size_t a, std::size_t b) { return data[a].first < data[b].first ? a : b; };

  while (active.size() > 1) {
    const std::size_t k = active.size();
    // C(x_i) as the set of positions in `active`, with its radius
    std::map<std::vector<std::size_t>, int> balls;
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t ri = nodes[active[i]].rep;
      int best = v[ri][nodes[active[i == 0 ? 1 : 0]].rep];
      for (std::size_t j = 0; j < k; ++j) {
        if (j != i) best = std::max(best, v[ri][nodes[active[j]].rep]);
      }
      std::vector<std::size_t> members;
      for (std::size_t j = 0; j < k; ++j) {
        if (j == i || v[ri][nodes[active[j]].rep] == best) members.push_back(j);
      }
      balls.emplace(std::move(members), best);
    }
    // Smaller balls first: a ball becomes a vertex once the current clusters
    // it holds are pairwise at exactly its radius; otherwise some level in
    // between is still unresolved and the ball waits for a later round. The
    // ball of largest radius always qualifies, so every round merges.
    std::vector<std::pair<std::vector<std::size_t>, int>> order(balls.begin(), balls.end());
    std::stable_sort(order.begin(), order.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    std::vector<std::size_t> owner = active;
    for (const auto& [members, radius] : order) {
      std::vector<std::size_t> parts;
      for (std::size_t j : members) {
        if (std::find(parts.begin(), parts.end(), owner[j]) == parts.end()) parts.push_back(owner[j]);
      }
      bool resolved = parts.size() > 1;
      for (std::size_t x = 0; x < parts.size() && resolved; ++x) {
        for (std::size_t y = x + 1; y < parts.size() && resolved; ++y) {
          resolved = v[nodes[parts[x]].rep][nodes[parts[y]].rep] == radius;
        }
      }
      if (!resolved) continue;
      detail::ClusterNode node{std::nullopt, radius, parts, nodes[parts.front()].rep};
      for (std::size_t part : parts) node.rep = smaller_label(node.rep, nodes[part].rep);
      const std::size_t id = nodes.size();
      nodes.push_back(std::move(node));
      for (std::size_t j : members) owner[j] = id;
    }
    std::vector<std::size_t> next;
    for (std::size_t o : owner) {
      if (std::find(next.begin(), next.end(), o) == next.end()) next.push_back(o);
    }
    active = std::move(next);
  }
  return detail::assemble(data, nodes, active.front(), true);
}

/// Materializes the degree-2 vertices of the *-tree at every integer level
/// strictly between the ends of each internal edge. Chain vertex ids are
/// `<child id>.<radius>`.
inline ClusterHierarchy expand_chains(const ClusterHierarchy& h) {
  const ProjectiveDendrogram& d = h.dendrogram;
  ProjectiveDendrogram::Builder b;
  std::vector<std::pair<std::string, Disc>> discs;
  for (std::size_t v = 0; v < d.vertex_count(); ++v) {
    b.add_vertex(d.vertex_id(v));
    discs.emplace_back(d.vertex_id(v), h.vertex_disc[v]);
  }
  for (const InternalEdge& e : d.internal_edges()) {
    const Disc& child = h.vertex_disc[e.child];
    std::string above = d.vertex_id(e.parent);
    int above_radius = h.vertex_disc[e.parent].radius_exp;
    for (int r = above_radius + 1; r < child.radius_exp; ++r) {
      const std::string id = d.vertex_id(e.child) + "." + std::to_string(r);
      b.add_vertex(id).add_edge(above, id, 1);
      discs.emplace_back(id, Disc{child.center, r});
      above = id;
      above_radius = r;
    }
    b.add_edge(above, d.vertex_id(e.child), child.radius_exp - above_radius);
  }
  for (const DataLeaf& l : d.leaves()) b.add_leaf(d.vertex_id(l.vertex), l.label);
  b.set_root(d.vertex_id(d.root())).set_infinity_at(d.vertex_id(d.root()));
  ProjectiveDendrogram out = b.build(false);
  std::vector<Disc> by_index;
  for (std::size_t v = 0; v < out.vertex_count(); ++v) {
    for (const auto& [id, disc] : discs) {
      if (id == out.vertex_id(v)) {
        by_index.push_back(disc);
        break;
      }
    }
  }
  return ClusterHierarchy{std::move(out), std::move(by_index), h.coding, h.warnings};
}

/// Suppresses single-child vertices; discs of kept vertices are unchanged.
inline ClusterHierarchy stabilize(const ClusterHierarchy& h) {
  ProjectiveDendrogram out = stabilize(h.dendrogram);
  std::vector<Disc> by_index;
  for (std::size_t v = 0; v < out.vertex_count(); ++v) {
    by_index.push_back(h.vertex_disc[*h.dendrogram.find_vertex(out.vertex_id(v))]);
  }
  return ClusterHierarchy{std::move(out), std::move(by_index), h.coding, h.warnings};
}

/// T*<S> for a point set containing infinity. Data outside O_K are rescaled
/// by a power of p first (an isometry up to a level shift), with a warning.
inline ClusterHierarchy star_tree(const std::vector<std::pair<std::string, ProjectivePoint>>& points) {
  const auto infinite =
      std::count_if(points.begin(), points.end(), [](const auto& q) { return q.second.is_infinity(); });
  if (infinite != 1) fail(ErrorKind::invalid_input, "the point set must contain infinity exactly once");
  if (points.size() < 3) fail(ErrorKind::degenerate, "a *-tree needs infinity and at least two finite points");
  std::vector<LabeledPoint> data;
  int lowest = 0;
  for (const auto& [label, q] : points) {
    if (q.is_infinity()) continue;
    data.emplace_back(label, q.value());
    if (!q.value().is_zero()) lowest = std::min(lowest, q.value().v0());
  }
  if (lowest < 0) {
    for (auto& [label, x] : data) x = shift(x, -lowest);
  }
  ClusterHierarchy h = classify(data);
  if (lowest < 0) h.warnings.push_back("data rescaled by p^" + std::to_string(-lowest) + " into the unit disc");
  return h;
}

/// Membership of 0 and 1 in the coding and containment in O_K.
struct Normality {
  bool has_zero = false;
  bool has_one = false;
  bool in_unit_disc = true;

  bool normal() const { return has_zero && has_one && in_unit_disc; }
};

inline Normality normality(const std::vector<LabeledPoint>& coding) {
  Normality n;
  for (const auto& [label, x] : coding) {
    if (x.is_zero()) {
      n.has_zero = true;
      continue;
    }
    if (x.v0() < 0) n.in_unit_disc = false;
    if (x.v0() == 0 && x.digits().size() == 1 && x.digits()[0] == x.field().one_label()) n.has_one = true;
  }
  return n;
}

/// Translates every datum by minus the first one, so the first datum is 0.
/// Needs polynomial reps.
inline std::vector<LabeledPoint> normalize_shift(const std::vector<LabeledPoint>& coding) {
  if (coding.empty()) return coding;
  const PAdicNumber origin = coding.front().second;
  std::vector<LabeledPoint> out;
  for (const auto& [label, x] : coding) out.emplace_back(label, sub(x, origin));
  return out;
}

enum class Convention { canonical, paper_binary };

inline Convention parse_convention(const std::string& s) {
  if (s == "canonical") return Convention::canonical;
  if (s == "paper-binary") return Convention::paper_binary;
  fail(ErrorKind::configuration, "unknown convention '" + s + "' (canonical|paper-binary)");
}

struct EncodedDendrogram {
  FieldDescriptor field;
  std::vector<LabeledPoint> coding;  // in the order of the data
};

/// chi(datum) = sum over the root path of chi(e) p^{l(o(e))}, f minimal with
/// m <= p^f for m the largest number of children. `canonical` labels the
/// children of every vertex 0, 1, ... in their order; `paper-binary` uses
/// 0, 1 at the root and inside the second root branch swaps them, so the
/// first datum gets 0 and the last gets 1.
inline EncodedDendrogram encode_dendrogram(const ProjectiveDendrogram& x, Convention convention, int p,
                                           RepSystem reps = RepSystem::polynomial) {
  if (!is_prime(p)) fail(ErrorKind::invalid_input, std::to_string(p) + " is not prime");
  if (convention == Convention::paper_binary && !x.is_binary()) {
    fail(ErrorKind::invalid_input, "paper-binary encoding needs a binary dendrogram");
  }
  std::size_t m = std::max<std::size_t>(x.max_children(), 2);
  int f = 1;
  for (std::uint64_t q = static_cast<std::uint64_t>(p); q < m; q *= static_cast<std::uint64_t>(p)) ++f;
  const FieldDescriptor field = FieldDescriptor::make(p, f, reps);
  const std::vector<int> level = x.levels();

  EncodedDendrogram out{field, {}};
  struct Frame {
    std::size_t vertex;
    std::map<int, RepLabel> digits;
    int branch;  // root branch index, -1 at the root
  };
  std::vector<Frame> stack{{x.root(), {}, -1}};
  while (!stack.empty()) {
    Frame fr = std::move(stack.back());
    stack.pop_back();
    const auto ch = x.children(fr.vertex);
    std::vector<Frame> pending;
    for (std::size_t k = 0; k < ch.size(); ++k) {
      std::uint32_t code = static_cast<std::uint32_t>(k);
      if (convention == Convention::paper_binary && fr.branch == 1) code = 1 - code;
      std::map<int, RepLabel> digits = fr.digits;
      const RepLabel label = field.label_at(code);
      if (!label.is_zero()) digits[level[fr.vertex]] = label;
      const int branch = fr.branch < 0 ? static_cast<int>(k) : fr.branch;
      if (ch[k].is_leaf()) {
        std::vector<RepLabel> ds;
        int v0 = 0;
        if (!digits.empty()) {
          v0 = digits.begin()->first;
          ds.assign(static_cast<std::size_t>(digits.rbegin()->first - v0 + 1), field.zero_label());
          for (const auto& [e, l] : digits) ds[static_cast<std::size_t>(e - v0)] = l;
        }
        out.coding.emplace_back(x.leaves()[ch[k].index].label,
                                PAdicNumber::from_digits(field, v0, std::move(ds), kExactPrecision));
      } else {
        pending.push_back({ch[k].index, std::move(digits), branch});
      }
    }
    // leaves of this vertex were emitted; subtrees follow in order
    for (auto it = pending.rbegin(); it != pending.rend(); ++it) stack.push_back(std::move(*it));
  }
  // report in the order of the data
  const std::vector<std::string> ordered = x.order_data();
  std::vector<LabeledPoint> sorted;
  for (const std::string& label : ordered) {
    for (auto& entry : out.coding) {
      if (entry.first == label) sorted.push_back(entry);
    }
  }
  out.coding = std::move(sorted);
  return out;
}

}  // namespace padt
