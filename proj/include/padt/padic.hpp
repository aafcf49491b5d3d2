#pragma once

// Truncated p-adic expansions x = sum_{v >= v0} a_v p^v with coefficients in
// a representative system of an unramified extension K of Q_p.

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "padt/error.hpp"
#include "padt/residue_field.hpp"

namespace padt {

inline constexpr int kDefaultPrecision = 64;
/// Precision of finite expansions that are known exactly (all higher
/// coefficients are zero), e.g. encoded strings and dendrograms.
inline constexpr int kExactPrecision = std::numeric_limits<int>::max() / 4;

/// Valuation in Z or +infinity.
class Valuation {
 public:
  static Valuation infinity() { return Valuation(); }
  static Valuation finite(int v) { return Valuation(v); }

  bool is_infinite() const { return !value_.has_value(); }
  int value() const {
    if (!value_) fail(ErrorKind::invalid_input, "valuation is infinite");
    return *value_;
  }

  friend bool operator==(const Valuation&, const Valuation&) = default;
  friend std::strong_ordering operator<=>(const Valuation& a, const Valuation& b) {
    if (a.is_infinite() || b.is_infinite()) {
      return static_cast<int>(a.is_infinite()) <=> static_cast<int>(b.is_infinite());
    }
    return *a.value_ <=> *b.value_;
  }

  std::string to_string() const { return value_ ? std::to_string(*value_) : "inf"; }

 private:
  Valuation() = default;
  explicit Valuation(int v) : value_(v) {}
  std::optional<int> value_;
};

class PAdicNumber {
 public:
  static PAdicNumber zero(const FieldDescriptor& field, int precision = kDefaultPrecision) {
    return PAdicNumber(field, 0, {}, precision);
  }

  static PAdicNumber one(const FieldDescriptor& field, int precision = kDefaultPrecision) {
    return from_digits(field, 0, {field.one_label()}, precision);
  }

  /// Digits for exponents v0, v0+1, ...; leading and trailing zero labels are
  /// normalized away. Requires v0 + #digits <= precision.
  static PAdicNumber from_digits(const FieldDescriptor& field, int v0, std::vector<RepLabel> digits,
                                 int precision = kDefaultPrecision) {
    for (RepLabel l : digits) {
      if (!field.valid(l)) fail(ErrorKind::invalid_input, "coefficient label outside the representative system");
    }
    if (v0 + static_cast<std::int64_t>(digits.size()) > precision) {
      fail(ErrorKind::precision, "digits extend beyond precision " + std::to_string(precision));
    }
    while (!digits.empty() && digits.back().is_zero()) digits.pop_back();
    auto first = std::find_if(digits.begin(), digits.end(), [](RepLabel l) { return !l.is_zero(); });
    const int skipped = static_cast<int>(first - digits.begin());
    digits.erase(digits.begin(), first);
    const int lowest = digits.empty() ? 0 : v0 + skipped;
    return PAdicNumber(field, lowest, std::move(digits), precision);
  }

  /// Non-negative integer n written in base p on the constant coordinate
  /// (polynomial reps only).
  static PAdicNumber from_integer(const FieldDescriptor& field, std::uint64_t n, int precision = kExactPrecision) {
    if (field.reps() != RepSystem::polynomial) fail(ErrorKind::unsupported, "integers need polynomial reps");
    std::vector<RepLabel> digits;
    const auto p = static_cast<std::uint64_t>(field.prime());
    while (n > 0) {
      ResidueElement r = field.residue_field().zero();
      r.coeffs[0] = static_cast<int>(n % p);
      digits.push_back(field.poly_label(r));
      n /= p;
    }
    return from_digits(field, 0, std::move(digits), precision);
  }

  const FieldDescriptor& field() const { return field_; }
  bool is_zero() const { return digits_.empty(); }
  int precision() const { return precision_; }
  bool is_exact() const { return precision_ >= kExactPrecision / 2; }
  /// Lowest exponent carried (0 for zero).
  int v0() const { return v0_; }
  std::span<const RepLabel> digits() const { return digits_; }
  /// One past the highest nonzero exponent (v0 for zero).
  int top() const { return v0_ + static_cast<int>(digits_.size()); }

  Valuation valuation() const { return is_zero() ? Valuation::infinity() : Valuation::finite(v0_); }

  /// Coefficient label at exponent n.
  RepLabel digit(int n) const {
    if (n >= precision_) fail(ErrorKind::precision, "coefficient at exponent " + std::to_string(n) + " is beyond precision");
    if (n < v0_ || n >= top()) return RepLabel{0};
    return digits_[static_cast<std::size_t>(n - v0_)];
  }

  /// Keeps the coefficients of exponents < n; the result is exact.
  PAdicNumber truncated_below(int n) const {
    std::vector<RepLabel> kept;
    for (int k = v0_; k < std::min(n, top()); ++k) kept.push_back(digit(k));
    return from_digits(field_, v0_, std::move(kept), kExactPrecision);
  }

  PAdicNumber with_precision(int precision) const {
    if (top() > precision) fail(ErrorKind::precision, "digits extend beyond precision");
    PAdicNumber copy = *this;
    copy.precision_ = precision;
    return copy;
  }

  /// Same field, same digits (precision ignored).
  bool same_expansion(const PAdicNumber& other) const {
    return field_ == other.field_ && v0_ == other.v0_ && digits_ == other.digits_;
  }

 private:
  PAdicNumber(FieldDescriptor field, int v0, std::vector<RepLabel> digits, int precision)
      : field_(std::move(field)), v0_(v0), digits_(std::move(digits)), precision_(precision) {}

  FieldDescriptor field_;
  int v0_ = 0;
  std::vector<RepLabel> digits_;
  int precision_ = kDefaultPrecision;
};

/// Smallest exponent at which two expansions differ, or the common precision
/// when they agree on every known coefficient.
struct Separation {
  bool distinguished = false;
  int exponent = 0;

  /// The difference valuation; throws a precision error when indistinguishable.
  int valuation() const {
    if (!distinguished) {
      fail(ErrorKind::precision, "points are indistinguishable at precision " + std::to_string(exponent));
    }
    return exponent;
  }
};

inline void require_same_field(const PAdicNumber& x, const PAdicNumber& y) {
  if (!(x.field() == y.field())) fail(ErrorKind::descriptor_mismatch, "numbers belong to different field descriptors");
}

/// v(x - y) computed from coefficient labels: distinct labels are distinct
/// modulo the maximal ideal, so the first differing label fixes it.
inline Separation difference_valuation(const PAdicNumber& x, const PAdicNumber& y) {
  require_same_field(x, y);
  const int limit = std::min(x.precision(), y.precision());
  if (x.is_zero() && y.is_zero()) return {false, limit};
  int start = x.is_zero() ? y.v0() : (y.is_zero() ? x.v0() : std::min(x.v0(), y.v0()));
  const int end = std::min(limit, std::max(x.top(), y.top()));
  for (int n = start; n < end; ++n) {
    if (x.digit(n) != y.digit(n)) return {true, n};
  }
  return {false, limit};
}

inline PAdicNumber shift(const PAdicNumber& x, int k) {
  const int precision = x.is_exact() ? x.precision() : x.precision() + k;
  std::vector<RepLabel> digits(x.digits().begin(), x.digits().end());
  return PAdicNumber::from_digits(x.field(), x.v0() + k, std::move(digits), precision);
}

namespace detail {

// Coordinate-wise base-p addition/subtraction. Each of the f coordinates of
// the z-basis is an independent element of Z_p and carries separately.
inline PAdicNumber add_sub(const PAdicNumber& x, const PAdicNumber& y, bool subtract) {
  require_same_field(x, y);
  const FieldDescriptor& field = x.field();
  if (field.reps() != RepSystem::polynomial) {
    fail(ErrorKind::unsupported, "ring operations need polynomial reps (Teichmuller sums require Hensel lifting)");
  }
  if (field.ramification() != 1) fail(ErrorKind::unsupported, "no arithmetic in ramified extensions");
  const int p = field.prime();
  const int f = field.degree();
  const ResidueField& kappa = field.residue_field();

  int precision = std::min(x.precision(), y.precision());
  const bool exact = precision >= kExactPrecision / 2;
  int lo = precision;
  if (!x.is_zero()) lo = std::min(lo, x.v0());
  if (!y.is_zero()) lo = std::min(lo, y.v0());
  if (lo >= precision) return PAdicNumber::zero(field, precision);
  const int hi = std::max(x.top(), y.top());
  int end = exact ? hi + 1 : precision;

  std::vector<int> carry(f, 0);
  std::vector<RepLabel> out;
  auto emit = [&](int n) {
    ResidueElement a = n < x.precision() ? field.residue_of(x.digit(n)) : kappa.zero();
    ResidueElement b = n < y.precision() ? field.residue_of(y.digit(n)) : kappa.zero();
    ResidueElement r = kappa.zero();
    for (int i = 0; i < f; ++i) {
      int s = subtract ? a.coeffs[i] - b.coeffs[i] + carry[i] : a.coeffs[i] + b.coeffs[i] + carry[i];
      carry[i] = s >= p ? 1 : (s < 0 ? -1 : 0);
      r.coeffs[i] = mod(s, p);
    }
    out.push_back(field.poly_label(r));
  };
  for (int n = lo; n < end; ++n) emit(n);
  if (exact && std::any_of(carry.begin(), carry.end(), [](int c) { return c < 0; })) {
    // A negative coordinate has an infinite tail of (p-1)'s: keep a finite
    // window and report it as the precision.
    precision = hi + kDefaultPrecision;
    for (int n = end; n < precision; ++n) emit(n);
  } else if (exact) {
    precision = kExactPrecision;
  }
  return PAdicNumber::from_digits(field, lo, std::move(out), precision);
}

}  // namespace detail

inline PAdicNumber add(const PAdicNumber& x, const PAdicNumber& y) { return detail::add_sub(x, y, false); }
inline PAdicNumber sub(const PAdicNumber& x, const PAdicNumber& y) { return detail::add_sub(x, y, true); }

/// Norm |x| = p^{-v(x)} as the symbolic pair (p, -v); zero has no exponent.
struct Norm {
  int prime;
  std::optional<int> exponent;
};

inline Norm norm(const PAdicNumber& x) {
  const Valuation v = x.valuation();
  return Norm{x.field().prime(), v.is_infinite() ? std::nullopt : std::optional<int>(-v.value())};
}

// ---------------------------------------------------------------------------
// Text form: `0`, or `P^V*(c0 + c1*P + c2*P^2 + ...)` with zero terms omitted;
// the `P^V*( )` wrapper is dropped when V = 0. Coefficients are labels as
// printed by FieldDescriptor::format_label, parenthesized when they contain
// '+'. The parser also accepts hand-written forms such as `2^2 + 2^4`.

inline std::string to_string(const PAdicNumber& x) {
  if (x.is_zero()) return "0";
  const FieldDescriptor& field = x.field();
  const std::string p = std::to_string(field.prime());
  std::string body;
  for (int k = 0; k < static_cast<int>(x.digits().size()); ++k) {
    const RepLabel l = x.digits()[static_cast<std::size_t>(k)];
    if (l.is_zero()) continue;
    if (!body.empty()) body += " + ";
    std::string c = field.format_label(l);
    if (c.find('+') != std::string::npos) c = "(" + c + ")";
    body += c;
    if (k == 1) body += "*" + p;
    if (k > 1) body += "*" + p + "^" + std::to_string(k);
  }
  if (x.v0() == 0) return body;
  return p + "^" + std::to_string(x.v0()) + "*(" + body + ")";
}

inline std::ostream& operator<<(std::ostream& os, const PAdicNumber& x) { return os << to_string(x); }

namespace detail {

class PAdicParser {
 public:
  PAdicParser(std::string_view text, const FieldDescriptor& field) : text_(text), field_(field) {}

  PAdicNumber parse(int precision) {
    skip_ws();
    if (peek() == '0' && rest_is_blank(pos_ + 1)) return PAdicNumber::zero(field_, precision);
    int offset = 0;
    // Prefix P^V*( ... )
    const std::size_t save = pos_;
    if (try_prefix(offset)) {
      parse_sum(offset);
      expect(')');
    } else {
      pos_ = save;
      parse_sum(0);
    }
    skip_ws();
    if (pos_ != text_.size()) error("unexpected trailing input");
    if (terms_.empty()) return PAdicNumber::zero(field_, precision);
    const int lo = terms_.begin()->first;
    const int hi = terms_.rbegin()->first;
    std::vector<RepLabel> digits(static_cast<std::size_t>(hi - lo + 1));
    for (const auto& [e, l] : terms_) digits[static_cast<std::size_t>(e - lo)] = l;
    return PAdicNumber::from_digits(field_, lo, std::move(digits), std::max(precision, hi + 1));
  }

 private:
  [[noreturn]] void error(const std::string& msg) const {
    fail(ErrorKind::invalid_input, "cannot parse p-adic number '" + std::string(text_) + "': " + msg);
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool rest_is_blank(std::size_t from) const {
    for (std::size_t i = from; i < text_.size(); ++i) {
      if (!std::isspace(static_cast<unsigned char>(text_[i]))) return false;
    }
    return true;
  }
  bool accept(char c) {
    skip_ws();
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) error(std::string("expected '") + c + "'");
  }

  std::optional<std::int64_t> integer() {
    skip_ws();
    std::size_t start = pos_;
    if (peek() == '-') ++pos_;
    const std::size_t digits_start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ == digits_start) {
      pos_ = start;
      return std::nullopt;
    }
    return std::stoll(std::string(text_.substr(start, pos_ - start)));
  }

  bool try_prefix(int& offset) {
    auto base = integer();
    if (!base || *base != field_.prime()) return false;
    if (!accept('^')) return false;
    auto exponent = integer();
    if (!exponent) return false;
    if (!accept('*')) return false;
    if (!accept('(')) return false;
    offset = static_cast<int>(*exponent);
    return true;
  }

  void parse_sum(int offset) {
    parse_term(offset);
    while (accept('+')) parse_term(offset);
  }

  // term := coeff ['*' P ['^' INT]] | P ['^' INT]
  void parse_term(int offset) {
    skip_ws();
    std::optional<RepLabel> coeff;
    int exponent = 0;
    const std::size_t save = pos_;
    auto n = integer();
    if (n && *n == field_.prime()) {
      // bare P or P^k
      exponent = 1;
      if (accept('^')) exponent = static_cast<int>(require_int());
      coeff = field_.one_label();
    } else {
      pos_ = save;
      coeff = parse_coefficient();
      if (accept('*')) {
        auto base = integer();
        if (!base || *base != field_.prime()) error("expected the prime " + std::to_string(field_.prime()));
        exponent = 1;
        if (accept('^')) exponent = static_cast<int>(require_int());
      }
    }
    const int e = offset + exponent;
    if (terms_.count(e)) error("repeated exponent " + std::to_string(e));
    if (!coeff->is_zero()) terms_[e] = *coeff;
  }

  std::int64_t require_int() {
    auto v = integer();
    if (!v) error("expected integer");
    return *v;
  }

  RepLabel parse_coefficient() {
    skip_ws();
    if (accept('(')) {
      RepLabel l = parse_label_expression();
      expect(')');
      return l;
    }
    return parse_label_expression(/*single_term=*/true);
  }

  // z-polynomial (`1+z`, `2*z^2`) or Teichmuller power (`z^k`, `1`, `0`).
  RepLabel parse_label_expression(bool single_term = false) {
    const int p = field_.prime();
    const int f = field_.degree();
    std::vector<std::int64_t> coords(static_cast<std::size_t>(std::max(f, 1)), 0);
    std::optional<std::uint32_t> teich_power;
    bool zero_literal = false;
    do {
      skip_ws();
      std::int64_t c = 1;
      int power = 0;
      auto n = integer();
      if (n) {
        c = *n;
        if (peek() == '*' && pos_ + 1 < text_.size() && text_[pos_ + 1] == 'z') {
          ++pos_;
        } else {
          if (c == 0) zero_literal = true;
          coords[0] += c;
          if (field_.reps() == RepSystem::teichmuller) {
            if (c == 1) teich_power = 0;
            else if (c != 0) error("Teichmuller coefficient must be 0, 1, z or z^k");
          }
          continue;
        }
      }
      skip_ws();
      if (peek() != 'z') error("expected coefficient");
      ++pos_;
      power = 1;
      if (peek() == '^') {
        ++pos_;
        power = static_cast<int>(require_int());
      }
      if (field_.reps() == RepSystem::teichmuller) {
        if (c != 1) error("Teichmuller coefficient must be a pure power of z");
        teich_power = static_cast<std::uint32_t>(power);
        continue;
      }
      if (power < 0 || power >= f) error("z power beyond the degree");
      coords[static_cast<std::size_t>(power)] += c;
    } while (!single_term && accept('+'));

    if (field_.reps() == RepSystem::teichmuller) {
      if (zero_literal && !teich_power) return field_.zero_label();
      if (!teich_power) error("missing Teichmuller coefficient");
      if (*teich_power + 1 >= field_.residue_count()) error("Teichmuller exponent out of range");
      return field_.teich_label(*teich_power);
    }
    ResidueElement r = field_.residue_field().zero();
    for (int i = 0; i < f; ++i) {
      if (coords[static_cast<std::size_t>(i)] < 0 || coords[static_cast<std::size_t>(i)] >= p) {
        error("coefficient outside [0,p)");
      }
      r.coeffs[static_cast<std::size_t>(i)] = static_cast<int>(coords[static_cast<std::size_t>(i)]);
    }
    return field_.poly_label(r);
  }

  std::string_view text_;
  const FieldDescriptor& field_;
  std::size_t pos_ = 0;
  std::map<int, RepLabel> terms_;
};

}  // namespace detail

/// Parses the text form; the precision is raised to cover every coefficient.
inline PAdicNumber parse_padic(std::string_view text, const FieldDescriptor& field, int precision = kDefaultPrecision) {
  return detail::PAdicParser(text, field).parse(precision);
}

}  // namespace padt
