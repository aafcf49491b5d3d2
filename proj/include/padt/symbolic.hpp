#pragma once

// Integer polynomials in the symbols a, b and rational powers of p, enough to
// write the hyperbolic matrices of the time-series geometry exactly and to
// verify their fixed points.

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>

#include "padt/error.hpp"
#include "padt/rational.hpp"

namespace padt {

/// a^i b^j p^r.
struct Monomial {
  int a = 0;
  int b = 0;
  Rational p;

  friend bool operator==(const Monomial&, const Monomial&) = default;
  friend bool operator<(const Monomial& x, const Monomial& y) {
    return std::tie(x.a, x.b) != std::tie(y.a, y.b) ? std::tie(x.a, x.b) < std::tie(y.a, y.b) : x.p < y.p;
  }
};

class Expr {
 public:
  Expr() = default;
  Expr(long long n) {  // NOLINT(google-explicit-constructor)
    if (n != 0) terms_[Monomial{}] = n;
  }

  static Expr symbol_a() { return Expr(Monomial{1, 0, Rational(0)}); }
  static Expr symbol_b() { return Expr(Monomial{0, 1, Rational(0)}); }
  /// p^r with r rational; written p^(r).
  static Expr p_power(Rational r) { return Expr(Monomial{0, 0, r}); }

  bool is_zero() const { return terms_.empty(); }
  const std::map<Monomial, long long>& terms() const { return terms_; }

  friend Expr operator+(Expr x, const Expr& y) {
    for (const auto& [m, c] : y.terms_) x.add_term(m, c);
    return x;
  }
  friend Expr operator-(Expr x, const Expr& y) {
    for (const auto& [m, c] : y.terms_) x.add_term(m, -c);
    return x;
  }
  friend Expr operator-(const Expr& x) { return Expr() - x; }
  friend Expr operator*(const Expr& x, const Expr& y) {
    Expr out;
    for (const auto& [m, c] : x.terms_) {
      for (const auto& [n, d] : y.terms_) out.add_term(Monomial{m.a + n.a, m.b + n.b, m.p + n.p}, c * d);
    }
    return out;
  }
  friend bool operator==(const Expr& x, const Expr& y) { return x.terms_ == y.terms_; }

  /// Value at numeric a, b, p; needs integer powers of p.
  Rational evaluate(Rational a, Rational b, long long p) const {
    Rational total(0);
    for (const auto& [m, c] : terms_) {
      if (!m.p.is_integer()) fail(ErrorKind::unsupported, "p^(" + m.p.to_string() + ") has no value in K");
      Rational v(c);
      for (int i = 0; i < m.a; ++i) v = v * a;
      for (int i = 0; i < m.b; ++i) v = v * b;
      const long long k = m.p.num();
      for (long long i = 0; i < (k < 0 ? -k : k); ++i) v = k < 0 ? v / Rational(p) : v * Rational(p);
      total = total + v;
    }
    return total;
  }

  /// Grammar: integers, a, b, p^(d/e), +, -, *. Terms in monomial order.
  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [m, c] : terms_) {
      std::string factors;
      auto append = [&](const std::string& f) { factors += (factors.empty() ? "" : "*") + f; };
      for (int i = 0; i < m.a; ++i) append("a");
      for (int i = 0; i < m.b; ++i) append("b");
      if (m.p != Rational(0)) append("p^(" + m.p.to_string() + ")");
      const long long mag = c < 0 ? -c : c;
      std::string term = factors.empty() ? std::to_string(mag) : (mag == 1 ? factors : std::to_string(mag) + "*" + factors);
      if (out.empty()) {
        out = c < 0 ? "-" + term : term;
      } else {
        out += c < 0 ? " - " + term : " + " + term;
      }
    }
    return out;
  }

 private:
  explicit Expr(Monomial m) { terms_[m] = 1; }

  void add_term(const Monomial& m, long long c) {
    auto& slot = terms_[m];
    slot += c;
    if (slot == 0) terms_.erase(m);
  }

  std::map<Monomial, long long> terms_;
};

/// [[alpha, beta], [gamma, delta]] acting by z -> (alpha z + beta)/(gamma z + delta).
struct SymbolicMatrix {
  Expr alpha;
  Expr beta;
  Expr gamma;
  Expr delta;

  /// z is fixed iff gamma z^2 + (delta - alpha) z - beta = 0 (given gamma z + delta != 0).
  bool fixes(const Expr& z) const { return (gamma * z * z + (delta - alpha) * z - beta).is_zero(); }

  Expr determinant() const { return alpha * delta - beta * gamma; }
};

/// Theta = [[-c_p, 0], [1 - c_p, -1]] with c_p = p^c; fixes 0 and 1.
inline SymbolicMatrix theta_matrix(Rational c) {
  const Expr cp = Expr::p_power(c);
  return SymbolicMatrix{-cp, Expr(0), Expr(1) - cp, Expr(-1)};
}

/// varsigma = [[a - q b, (q - 1) a b], [1 - q, q a - b]] with q = p^u; fixes a and b.
inline SymbolicMatrix varsigma_matrix(Rational u) {
  const Expr q = Expr::p_power(u);
  const Expr a = Expr::symbol_a();
  const Expr b = Expr::symbol_b();
  return SymbolicMatrix{a - q * b, (q - Expr(1)) * a * b, Expr(1) - q, q * a - b};
}

/// Exact Moebius action at a rational point; nullopt for the point at infinity.
inline std::optional<Rational> moebius(const SymbolicMatrix& g, Rational z, Rational a, Rational b, long long p) {
  const Rational num = g.alpha.evaluate(a, b, p) * z + g.beta.evaluate(a, b, p);
  const Rational den = g.gamma.evaluate(a, b, p) * z + g.delta.evaluate(a, b, p);
  if (den == Rational(0)) return std::nullopt;
  return num / den;
}

}  // namespace padt
