#pragma once

// Graphs given by flags (half-edges): a boundary map flag -> vertex and an
// involution on flags. Edges are the orbits of the involution: fixed flags
// are unbounded edges, swapped pairs are internal edges.

#include <cstddef>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "padt/error.hpp"

namespace padt {

struct GraphEdges {
  /// Internal edges as flag pairs (f, iota(f)) with f < iota(f), ordered by f.
  std::vector<std::pair<std::size_t, std::size_t>> internal;
  /// Unbounded edges as their single flag, ascending.
  std::vector<std::size_t> unbounded;
};

struct BettiNumbers {
  std::size_t h0 = 0;
  std::size_t h1 = 0;
  friend bool operator==(const BettiNumbers&, const BettiNumbers&) = default;
};

class FlagGraph {
 public:
  FlagGraph() = default;
  FlagGraph(std::size_t vertex_count, std::vector<std::size_t> boundary, std::vector<std::size_t> inversion)
      : vertex_count_(vertex_count), boundary_(std::move(boundary)), inversion_(std::move(inversion)) {
    if (boundary_.size() != inversion_.size()) fail(ErrorKind::invalid_input, "boundary and inversion sizes differ");
    for (std::size_t f = 0; f < boundary_.size(); ++f) {
      if (boundary_[f] >= vertex_count_) fail(ErrorKind::invalid_input, "flag " + std::to_string(f) + " has no vertex");
      if (inversion_[f] >= boundary_.size() || inversion_[inversion_[f]] != f) {
        fail(ErrorKind::invalid_input, "inversion is not an involution at flag " + std::to_string(f));
      }
    }
  }

  std::size_t vertex_count() const { return vertex_count_; }
  std::size_t flag_count() const { return boundary_.size(); }
  std::size_t boundary(std::size_t flag) const { return boundary_.at(flag); }
  std::size_t inversion(std::size_t flag) const { return inversion_.at(flag); }

  /// Adds a vertex and returns its id.
  std::size_t add_vertex() { return vertex_count_++; }

  /// Adds an internal edge a - b (a loop when a == b); returns its first flag.
  std::size_t add_edge(std::size_t a, std::size_t b) {
    check_vertex(a);
    check_vertex(b);
    const std::size_t f = boundary_.size();
    boundary_.push_back(a);
    boundary_.push_back(b);
    inversion_.push_back(f + 1);
    inversion_.push_back(f);
    return f;
  }

  /// Adds an unbounded edge at v; returns its flag.
  std::size_t add_unbounded(std::size_t v) {
    check_vertex(v);
    const std::size_t f = boundary_.size();
    boundary_.push_back(v);
    inversion_.push_back(f);
    return f;
  }

  GraphEdges edges() const {
    GraphEdges out;
    for (std::size_t f = 0; f < boundary_.size(); ++f) {
      const std::size_t g = inversion_[f];
      if (g == f) {
        out.unbounded.push_back(f);
      } else if (f < g) {
        out.internal.emplace_back(f, g);
      }
    }
    return out;
  }

  std::size_t internal_edge_count() const { return edges().internal.size(); }

  /// h0 by union-find over internal edges, h1 from the Euler formula
  /// h0 - h1 = #vertices - #internal edges.
  BettiNumbers betti() const {
    std::vector<std::size_t> parent(vertex_count_);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t v) {
      while (parent[v] != v) {
        parent[v] = parent[parent[v]];
        v = parent[v];
      }
      return v;
    };
    const GraphEdges e = edges();
    std::size_t components = vertex_count_;
    for (const auto& [f, g] : e.internal) {
      const std::size_t a = find(boundary_[f]);
      const std::size_t b = find(boundary_[g]);
      if (a != b) {
        parent[a] = b;
        --components;
      }
    }
    // h1 = h0 - V + E >= 0 for every finite graph
    return BettiNumbers{components, components + e.internal.size() - vertex_count_};
  }

  /// Independent route: depth-first traversal; h0 = number of traversal
  /// roots, h1 = number of internal edges not used by the spanning forest.
  BettiNumbers betti_by_traversal() const {
    std::vector<std::vector<std::size_t>> incident(vertex_count_);
    for (std::size_t f = 0; f < boundary_.size(); ++f) {
      if (inversion_[f] != f) incident[boundary_[f]].push_back(f);
    }
    std::vector<bool> seen(vertex_count_, false);
    std::vector<bool> edge_used(boundary_.size(), false);
    BettiNumbers out;
    for (std::size_t start = 0; start < vertex_count_; ++start) {
      if (seen[start]) continue;
      ++out.h0;
      std::vector<std::size_t> stack{start};
      seen[start] = true;
      while (!stack.empty()) {
        const std::size_t v = stack.back();
        stack.pop_back();
        for (std::size_t f : incident[v]) {
          const std::size_t g = inversion_[f];
          if (edge_used[f]) continue;
          edge_used[f] = edge_used[g] = true;
          const std::size_t w = boundary_[g];
          if (!seen[w]) {
            seen[w] = true;
            stack.push_back(w);
          } else {
            ++out.h1;
          }
        }
      }
    }
    return out;
  }

  bool is_tree() const {
    const BettiNumbers b = betti();
    return b.h0 == 1 && b.h1 == 0;
  }

 private:
  void check_vertex(std::size_t v) const {
    if (v >= vertex_count_) fail(ErrorKind::invalid_input, "unknown vertex " + std::to_string(v));
  }

  std::size_t vertex_count_ = 0;
  std::vector<std::size_t> boundary_;
  std::vector<std::size_t> inversion_;
};

}  // namespace padt
