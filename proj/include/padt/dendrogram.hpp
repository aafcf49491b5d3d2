#pragma once

// Projective dendrograms: finite rooted labelled trees with an unbounded edge
// labelled infinity at the root, data on the other unbounded edges, a metric
// on internal edges and a total order on the children of every vertex.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "padt/error.hpp"
#include "padt/flag_graph.hpp"

namespace padt {

struct DendrogramChild {
  enum class Kind { vertex, leaf };
  Kind kind;
  std::size_t index;  // vertex index or leaf index

  bool is_leaf() const { return kind == Kind::leaf; }
  friend bool operator==(const DendrogramChild&, const DendrogramChild&) = default;
};

/// Internal edge oriented away from the root.
struct InternalEdge {
  std::size_t parent;
  std::size_t child;
  int length;
};

struct DataLeaf {
  std::size_t vertex;
  std::string label;
};

class ProjectiveDendrogram {
 public:
  class Builder;

  std::size_t vertex_count() const { return ids_.size(); }
  const std::string& vertex_id(std::size_t v) const { return ids_.at(v); }
  std::optional<std::size_t> find_vertex(const std::string& id) const {
    auto it = index_.find(id);
    return it == index_.end() ? std::nullopt : std::optional<std::size_t>(it->second);
  }
  std::size_t root() const { return root_; }

  std::span<const InternalEdge> internal_edges() const { return edges_; }
  std::span<const DataLeaf> leaves() const { return leaves_; }
  std::optional<std::size_t> find_leaf(const std::string& label) const {
    for (std::size_t i = 0; i < leaves_.size(); ++i) {
      if (leaves_[i].label == label) return i;
    }
    return std::nullopt;
  }

  /// Children of v in the order <_v.
  std::span<const DendrogramChild> children(std::size_t v) const { return children_.at(v); }
  /// Index into internal_edges() of the edge ending at v; none for the root.
  std::optional<std::size_t> parent_edge(std::size_t v) const { return parent_edge_.at(v); }

  /// l(w) = sum of edge lengths on the root-to-w path.
  std::vector<int> levels() const {
    std::vector<int> level(vertex_count(), 0);
    for (std::size_t v : preorder()) {
      for (const DendrogramChild& c : children(v)) {
        if (!c.is_leaf()) level[c.index] = level[v] + edges_[*parent_edge_[c.index]].length;
      }
    }
    return level;
  }

  /// Vertices in depth-first preorder following the child orders.
  std::vector<std::size_t> preorder() const {
    std::vector<std::size_t> out;
    std::vector<std::size_t> stack{root_};
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      out.push_back(v);
      const auto& ch = children_[v];
      for (auto it = ch.rbegin(); it != ch.rend(); ++it) {
        if (!it->is_leaf()) stack.push_back(it->index);
      }
    }
    return out;
  }

  /// Data labels in the lexicographic order of root-to-leaf edge words.
  std::vector<std::string> order_data() const { return labels_below(root_); }

  std::vector<std::string> labels_below(std::size_t v) const {
    std::vector<std::string> out;
    collect_labels(v, out);
    return out;
  }

  std::size_t max_children() const {
    std::size_t m = 0;
    for (const auto& ch : children_) m = std::max(m, ch.size());
    return m;
  }

  bool is_binary() const {
    return std::all_of(children_.begin(), children_.end(), [](const auto& ch) { return ch.size() == 2; });
  }

  /// Every vertex has at least three incident edge-ends (the root counts the
  /// infinity edge).
  bool is_stable() const {
    return std::all_of(children_.begin(), children_.end(), [](const auto& ch) { return ch.size() >= 2; });
  }

  /// Underlying graph: two flags per internal edge, one per unbounded edge
  /// (the infinity edge is the last flag).
  FlagGraph to_flag_graph() const {
    FlagGraph g;
    for (std::size_t v = 0; v < vertex_count(); ++v) g.add_vertex();
    for (const InternalEdge& e : edges_) g.add_edge(e.parent, e.child);
    for (const DataLeaf& l : leaves_) g.add_unbounded(l.vertex);
    g.add_unbounded(root_);
    return g;
  }

 private:
  friend class Builder;

  void collect_labels(std::size_t v, std::vector<std::string>& out) const {
    for (const DendrogramChild& c : children_[v]) {
      if (c.is_leaf()) {
        out.push_back(leaves_[c.index].label);
      } else {
        collect_labels(c.index, out);
      }
    }
  }

  std::vector<std::string> ids_;
  std::map<std::string, std::size_t> index_;
  std::size_t root_ = 0;
  std::vector<InternalEdge> edges_;
  std::vector<DataLeaf> leaves_;
  std::vector<std::vector<DendrogramChild>> children_;
  std::vector<std::optional<std::size_t>> parent_edge_;
};

/// Collects vertices, undirected internal edges and leaves, then orients the
/// tree from the root and validates it.
class ProjectiveDendrogram::Builder {
 public:
  Builder& add_vertex(const std::string& id) {
    if (index_.count(id)) fail(ErrorKind::invalid_input, "duplicate vertex id '" + id + "'");
    index_[id] = ids_.size();
    ids_.push_back(id);
    return *this;
  }

  Builder& add_edge(const std::string& a, const std::string& b, int length) {
    edges_.push_back({a, b, length});
    return *this;
  }

  Builder& add_leaf(const std::string& vertex, const std::string& label) {
    leaves_.push_back({vertex, label});
    return *this;
  }

  Builder& set_root(const std::string& id) {
    root_ = id;
    return *this;
  }

  Builder& set_infinity_at(const std::string& id) {
    infinity_at_ = id;
    return *this;
  }

  /// Explicit <_v; entries name leaf labels or child vertex ids.
  Builder& set_child_order(const std::string& vertex, std::vector<std::string> order) {
    orders_[vertex] = std::move(order);
    return *this;
  }

  /// With require_stable = false vertices with a single child are accepted
  /// (non-stabilized subtrees of the Bruhat-Tits tree).
  ProjectiveDendrogram build(bool require_stable = true) const {
    ProjectiveDendrogram d;
    d.ids_ = ids_;
    d.index_ = index_;
    if (ids_.empty()) fail(ErrorKind::invalid_input, "dendrogram has no vertices");
    if (!root_) fail(ErrorKind::invalid_input, "dendrogram has no root");
    d.root_ = lookup(*root_);
    if (infinity_at_ && lookup(*infinity_at_) != d.root_) {
      fail(ErrorKind::invalid_input, "the infinity edge must sit at the root");
    }

    const std::size_t n = ids_.size();
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adjacency(n);  // (neighbor, edge)
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      const auto& e = edges_[i];
      if (e.length < 1) fail(ErrorKind::invalid_input, "edge " + e.a + "-" + e.b + " has length < 1");
      const std::size_t a = lookup(e.a);
      const std::size_t b = lookup(e.b);
      adjacency[a].emplace_back(b, i);
      adjacency[b].emplace_back(a, i);
    }
    std::set<std::string> labels;
    for (const auto& l : leaves_) {
      if (l.label.empty()) fail(ErrorKind::invalid_input, "empty leaf label");
      if (!labels.insert(l.label).second) fail(ErrorKind::invalid_input, "duplicate leaf label '" + l.label + "'");
      d.leaves_.push_back({lookup(l.vertex), l.label});
    }

    // tree test on the flag graph before orienting
    FlagGraph g;
    for (std::size_t v = 0; v < n; ++v) g.add_vertex();
    for (const auto& e : edges_) g.add_edge(lookup(e.a), lookup(e.b));
    if (!g.is_tree()) fail(ErrorKind::invalid_input, "underlying graph is not a tree");

    d.parent_edge_.assign(n, std::nullopt);
    d.children_.assign(n, {});
    std::vector<bool> seen(n, false);
    std::queue<std::size_t> queue;
    queue.push(d.root_);
    seen[d.root_] = true;
    while (!queue.empty()) {
      const std::size_t v = queue.front();
      queue.pop();
      for (const auto& [w, i] : adjacency[v]) {
        if (seen[w]) continue;
        seen[w] = true;
        d.parent_edge_[w] = d.edges_.size();
        d.edges_.push_back({v, w, edges_[i].length});
        d.children_[v].push_back({DendrogramChild::Kind::vertex, w});
        queue.push(w);
      }
    }
    for (std::size_t i = 0; i < d.leaves_.size(); ++i) {
      d.children_[d.leaves_[i].vertex].push_back({DendrogramChild::Kind::leaf, i});
    }

    for (std::size_t v = 0; v < n; ++v) {
      const std::size_t need = require_stable ? 2 : 1;
      if (d.children_[v].size() < need) {
        fail(ErrorKind::invalid_input, "vertex '" + ids_[v] + "' originates in " + std::to_string(d.children_[v].size()) +
                                           " edges besides its parent; at least " + std::to_string(need) + " required");
      }
    }
    apply_default_order(d);
    for (const auto& [vertex, order] : orders_) apply_explicit_order(d, lookup(vertex), order);
    return d;
  }

 private:
  struct RawEdge {
    std::string a;
    std::string b;
    int length;
  };
  struct RawLeaf {
    std::string vertex;
    std::string label;
  };

  std::size_t lookup(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) fail(ErrorKind::invalid_input, "unknown vertex '" + id + "'");
    return it->second;
  }

  // ascending by the minimal data label in each child's subtree
  static void apply_default_order(ProjectiveDendrogram& d) {
    std::vector<std::optional<std::string>> min_label(d.vertex_count());
    auto order = d.preorder();
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const std::size_t v = *it;
      for (const auto& c : d.children_[v]) {
        const std::optional<std::string>& cand = c.is_leaf() ? std::optional<std::string>(d.leaves_[c.index].label) : min_label[c.index];
        if (cand && (!min_label[v] || *cand < *min_label[v])) min_label[v] = cand;
      }
    }
    for (std::size_t v = 0; v < d.vertex_count(); ++v) {
      auto key = [&](const DendrogramChild& c) {
        if (c.is_leaf()) return d.leaves_[c.index].label;
        return min_label[c.index].value_or(d.ids_[c.index]);
      };
      std::stable_sort(d.children_[v].begin(), d.children_[v].end(),
                       [&](const DendrogramChild& a, const DendrogramChild& b) { return key(a) < key(b); });
    }
  }

  static void apply_explicit_order(ProjectiveDendrogram& d, std::size_t v, const std::vector<std::string>& names) {
    const auto& current = d.children_[v];
    if (names.size() != current.size()) {
      fail(ErrorKind::configuration, "child order at '" + d.ids_[v] + "' must list all " + std::to_string(current.size()) + " children");
    }
    std::vector<DendrogramChild> ordered;
    for (const std::string& name : names) {
      std::optional<DendrogramChild> match;
      for (const auto& c : current) {
        const bool hit = c.is_leaf() ? d.leaves_[c.index].label == name : d.ids_[c.index] == name;
        if (!hit) continue;
        if (match) fail(ErrorKind::configuration, "ambiguous child name '" + name + "' at '" + d.ids_[v] + "'");
        match = c;
      }
      if (!match) fail(ErrorKind::configuration, "'" + name + "' is not a child of '" + d.ids_[v] + "'");
      if (std::find(ordered.begin(), ordered.end(), *match) != ordered.end()) {
        fail(ErrorKind::configuration, "child '" + name + "' listed twice at '" + d.ids_[v] + "'");
      }
      ordered.push_back(*match);
    }
    d.children_[v] = std::move(ordered);
  }

  std::vector<std::string> ids_;
  std::map<std::string, std::size_t> index_;
  std::vector<RawEdge> edges_;
  std::vector<RawLeaf> leaves_;
  std::optional<std::string> root_;
  std::optional<std::string> infinity_at_;
  std::map<std::string, std::vector<std::string>> orders_;
};

namespace detail {

inline std::string canonical_subtree(const ProjectiveDendrogram& d, std::size_t v) {
  std::vector<std::string> parts;
  for (const DendrogramChild& c : d.children(v)) {
    if (c.is_leaf()) {
      parts.push_back("'" + d.leaves()[c.index].label + "'");
    } else {
      const int len = d.internal_edges()[*d.parent_edge(c.index)].length;
      parts.push_back(std::to_string(len) + ":" + canonical_subtree(d, c.index));
    }
  }
  std::sort(parts.begin(), parts.end());
  std::string out = "(";
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ",";
    out += parts[i];
  }
  return out + ")";
}

}  // namespace detail

/// String that is equal for two dendrograms iff they are isomorphic as rooted
/// leaf-labelled trees with equal edge lengths (child orders and vertex ids
/// ignored).
inline std::string canonical_form(const ProjectiveDendrogram& d) { return detail::canonical_subtree(d, d.root()); }

inline bool isometric(const ProjectiveDendrogram& a, const ProjectiveDendrogram& b) {
  return canonical_form(a) == canonical_form(b);
}

/// Suppresses vertices with a single child, summing edge lengths. A root
/// with one child hands the infinity edge down to it.
inline ProjectiveDendrogram stabilize(const ProjectiveDendrogram& d) {
  auto single_vertex_child = [&](std::size_t v) -> std::optional<std::size_t> {
    const auto ch = d.children(v);
    if (ch.size() == 1 && !ch[0].is_leaf()) return ch[0].index;
    return std::nullopt;
  };
  std::size_t root = d.root();
  while (auto next = single_vertex_child(root)) root = *next;

  ProjectiveDendrogram::Builder b;
  b.add_vertex(d.vertex_id(root)).set_root(d.vertex_id(root));
  std::vector<std::pair<std::size_t, std::size_t>> stack{{root, root}};  // (vertex, kept ancestor)
  while (!stack.empty()) {
    const auto [v, kept] = stack.back();
    stack.pop_back();
    std::vector<std::string> order;
    for (const DendrogramChild& c : d.children(v)) {
      if (c.is_leaf()) {
        b.add_leaf(d.vertex_id(kept), d.leaves()[c.index].label);
        order.push_back(d.leaves()[c.index].label);
        continue;
      }
      int length = d.internal_edges()[*d.parent_edge(c.index)].length;
      std::size_t w = c.index;
      while (auto next = single_vertex_child(w)) {
        length += d.internal_edges()[*d.parent_edge(*next)].length;
        w = *next;
      }
      if (d.children(w).size() == 1) {
        // chain ending in a single leaf: the leaf attaches to the kept vertex
        b.add_leaf(d.vertex_id(kept), d.leaves()[d.children(w)[0].index].label);
        order.push_back(d.leaves()[d.children(w)[0].index].label);
        continue;
      }
      b.add_vertex(d.vertex_id(w)).add_edge(d.vertex_id(kept), d.vertex_id(w), length);
      order.push_back(d.vertex_id(w));
      stack.emplace_back(w, w);
    }
    b.set_child_order(d.vertex_id(kept), order);
  }
  return b.build();
}

}  // namespace padt
