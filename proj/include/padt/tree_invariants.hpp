#pragma once

// Dagger tree, volume, branch weights and the complex balance of a
// projective dendrogram.

#include <algorithm>
#include <complex>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "padt/dendrogram.hpp"
#include "padt/error.hpp"

namespace padt {

/// The subtree spanned by the internal vertices; unbounded edges dropped.
struct DaggerTree {
  std::vector<std::string> vertices;
  std::vector<InternalEdge> edges;  // indices into `vertices`

  long volume() const {
    long total = 0;
    for (const InternalEdge& e : edges) total += e.length;
    return total;
  }
};

inline DaggerTree dagger_tree(const ProjectiveDendrogram& x) {
  DaggerTree t;
  for (std::size_t v = 0; v < x.vertex_count(); ++v) t.vertices.push_back(x.vertex_id(v));
  t.edges.assign(x.internal_edges().begin(), x.internal_edges().end());
  return t;
}

/// Sum of the internal edge lengths below v.
inline long subtree_volume(const ProjectiveDendrogram& x, std::size_t v) {
  long total = 0;
  for (const DendrogramChild& c : x.children(v)) {
    if (c.is_leaf()) continue;
    total += x.internal_edges()[*x.parent_edge(c.index)].length + subtree_volume(x, c.index);
  }
  return total;
}

/// w(Gamma) = Vol(Gamma) + mu(e) for the branch behind a child edge of v;
/// a datum edge weighs 0.
inline long branch_weight(const ProjectiveDendrogram& x, const DendrogramChild& c) {
  if (c.is_leaf()) return 0;
  return x.internal_edges()[*x.parent_edge(c.index)].length + subtree_volume(x, c.index);
}

namespace detail {

using IntPoly = std::vector<std::int64_t>;  // coefficient of x^i at i

// exact quotient a / b for monic b dividing a
inline IntPoly poly_div_exact(IntPoly a, const IntPoly& b) {
  const std::size_t n = b.size() - 1;
  IntPoly q(a.size() - n, 0);
  for (std::size_t k = q.size(); k-- > 0;) {
    const std::int64_t c = a[k + n];
    q[k] = c;
    for (std::size_t j = 0; j <= n; ++j) a[k + j] -= c * b[j];
  }
  return q;
}

inline IntPoly cyclotomic(int m) {
  IntPoly num(static_cast<std::size_t>(m) + 1, 0);  // x^m - 1
  num[0] = -1;
  num[static_cast<std::size_t>(m)] = 1;
  for (int d = 1; d < m; ++d) {
    if (m % d == 0) num = poly_div_exact(num, cyclotomic(d));
  }
  return num;
}

// remainder of a modulo the monic polynomial b
inline IntPoly poly_rem_monic(IntPoly a, const IntPoly& b) {
  const std::size_t n = b.size() - 1;
  for (std::size_t i = a.size(); i-- > n;) {
    const std::int64_t c = a[i];
    if (c == 0) continue;
    for (std::size_t j = 0; j <= n; ++j) a[i - n + j] -= c * b[j];
  }
  a.resize(std::min(a.size(), n));
  return a;
}

}  // namespace detail

struct BalanceReport {
  long volume = 0;
  std::vector<long> weights;        // in the order of the root's children
  std::complex<double> balance;     // advisory floating value
  bool exact_zero = false;          // sum w_nu zeta_m^nu = 0 exactly
  bool balanced = false;            // all weights equal

  std::size_t arity() const { return weights.size(); }
};

/// b(X) = sum_nu w_nu exp(2 pi i nu / m) over the m branches at the root.
/// Exact vanishing is decided by divisibility of sum w_nu x^nu by the m-th
/// cyclotomic polynomial.
inline BalanceReport balance_report(const ProjectiveDendrogram& x) {
  const auto ch = x.children(x.root());
  if (ch.size() < 2) fail(ErrorKind::invalid_input, "balance needs at least two branches at the root");
  BalanceReport r;
  r.volume = subtree_volume(x, x.root());
  const int m = static_cast<int>(ch.size());
  detail::IntPoly w;
  for (int nu = 0; nu < m; ++nu) {
    const long weight = branch_weight(x, ch[static_cast<std::size_t>(nu)]);
    r.weights.push_back(weight);
    w.push_back(weight);
    r.balance += static_cast<double>(weight) * std::polar(1.0, 2.0 * std::numbers::pi * nu / m);
  }
  if (m == 2) r.balance = {static_cast<double>(r.weights[0] - r.weights[1]), 0.0};
  const detail::IntPoly rem = detail::poly_rem_monic(w, detail::cyclotomic(m));
  r.exact_zero = std::all_of(rem.begin(), rem.end(), [](std::int64_t c) { return c == 0; });
  r.balanced = std::all_of(r.weights.begin(), r.weights.end(), [&](long v) { return v == r.weights.front(); });
  return r;
}

}  // namespace padt
