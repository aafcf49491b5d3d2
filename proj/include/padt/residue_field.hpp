#pragma once

// Residue fields F_{p^f}, representative systems and field descriptors for
// unramified extensions of Q_p.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "padt/error.hpp"

namespace padt {

inline bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

/// Polynomial over F_p, coefficients low degree first.
using FpPolynomial = std::vector<int>;

namespace detail {

inline int mod(std::int64_t a, int p) {
  const auto r = static_cast<int>(a % p);
  return r < 0 ? r + p : r;
}

inline void trim(FpPolynomial& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline int inverse_mod(int a, int p) {
  // p prime: a^(p-2)
  std::int64_t result = 1;
  std::int64_t base = mod(a, p);
  for (int e = p - 2; e > 0; e >>= 1) {
    if (e & 1) result = result * base % p;
    base = base * base % p;
  }
  return static_cast<int>(result);
}

/// Remainder of a modulo b (b nonzero) over F_p.
inline FpPolynomial poly_rem(FpPolynomial a, FpPolynomial b, int p) {
  trim(a);
  trim(b);
  const int lead_inv = inverse_mod(b.back(), p);
  while (a.size() >= b.size()) {
    const int factor = static_cast<int>(static_cast<std::int64_t>(a.back()) * lead_inv % p);
    const std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) {
      a[shift + i] = mod(a[shift + i] - static_cast<std::int64_t>(factor) * b[i], p);
    }
    trim(a);
  }
  return a;
}

inline std::int64_t checked_power(int p, int f) {
  std::int64_t q = 1;
  for (int i = 0; i < f; ++i) {
    q *= p;
    if (q > (std::int64_t{1} << 31)) fail(ErrorKind::invalid_input, "p^f exceeds 2^31");
  }
  return q;
}

inline std::vector<std::int64_t> prime_factors(std::int64_t n) {
  std::vector<std::int64_t> out;
  for (std::int64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace detail

/// Irreducibility of a monic polynomial of degree f over F_p by trial
/// division against every monic polynomial of degree 1..f/2.
inline bool is_irreducible(const FpPolynomial& monic, int p) {
  const int f = static_cast<int>(monic.size()) - 1;
  if (f < 1) return false;
  for (int d = 1; 2 * d <= f; ++d) {
    const std::int64_t count = detail::checked_power(p, d);
    for (std::int64_t idx = 0; idx < count; ++idx) {
      FpPolynomial divisor(d + 1, 0);
      std::int64_t rest = idx;
      for (int i = 0; i < d; ++i) {
        divisor[i] = static_cast<int>(rest % p);
        rest /= p;
      }
      divisor[d] = 1;
      if (detail::poly_rem(monic, divisor, p).empty()) return false;
    }
  }
  return true;
}

/// Lexicographically smallest monic irreducible polynomial of degree f over
/// F_p, comparing coefficients from the constant term upwards.
inline FpPolynomial find_modulus(int p, int f) {
  if (!is_prime(p)) fail(ErrorKind::invalid_input, "find_modulus: " + std::to_string(p) + " is not prime");
  if (f < 1) fail(ErrorKind::invalid_input, "find_modulus: degree must be >= 1");
  const std::int64_t count = detail::checked_power(p, f);
  for (std::int64_t idx = 0; idx < count; ++idx) {
    FpPolynomial candidate(f + 1, 0);
    // constant term is the most significant digit of the enumeration
    std::int64_t rest = idx;
    for (int i = f - 1; i >= 0; --i) {
      candidate[i] = static_cast<int>(rest % p);
      rest /= p;
    }
    candidate[f] = 1;
    if (is_irreducible(candidate, p)) return candidate;
  }
  fail(ErrorKind::invalid_input, "no irreducible polynomial found");  // unreachable for prime p
}

/// Element of F_{p^f} in coordinates w.r.t. {1, z, ..., z^{f-1}}.
struct ResidueElement {
  std::vector<int> coeffs;

  bool is_zero() const {
    for (int c : coeffs) {
      if (c != 0) return false;
    }
    return true;
  }
  friend bool operator==(const ResidueElement&, const ResidueElement&) = default;
};

/// Arithmetic in F_p[x]/(modulus).
class ResidueField {
 public:
  ResidueField(int p, FpPolynomial modulus) : p_(p), modulus_(std::move(modulus)) {
    if (!is_prime(p_)) fail(ErrorKind::invalid_input, std::to_string(p_) + " is not prime");
    detail::trim(modulus_);
    if (modulus_.size() < 2 || modulus_.back() != 1) fail(ErrorKind::invalid_input, "modulus must be monic of degree >= 1");
    for (int c : modulus_) {
      if (c < 0 || c >= p_) fail(ErrorKind::invalid_input, "modulus coefficients must lie in [0,p)");
    }
    if (!is_irreducible(modulus_, p_)) fail(ErrorKind::invalid_input, "modulus is reducible over F_p");
    f_ = static_cast<int>(modulus_.size()) - 1;
    size_ = static_cast<std::uint32_t>(detail::checked_power(p_, f_));
  }

  int prime() const { return p_; }
  int degree() const { return f_; }
  std::uint32_t size() const { return size_; }
  const FpPolynomial& modulus() const { return modulus_; }

  ResidueElement zero() const { return ResidueElement{std::vector<int>(f_, 0)}; }
  ResidueElement one() const {
    auto e = zero();
    e.coeffs[0] = 1;
    return e;
  }

  /// Index sum a_i p^i; bijection onto [0, p^f).
  std::uint32_t index(const ResidueElement& a) const {
    check(a);
    std::uint32_t idx = 0;
    for (int i = f_ - 1; i >= 0; --i) idx = idx * static_cast<std::uint32_t>(p_) + static_cast<std::uint32_t>(a.coeffs[i]);
    return idx;
  }

  ResidueElement element(std::uint32_t idx) const {
    if (idx >= size_) fail(ErrorKind::invalid_input, "residue index out of range");
    ResidueElement e = zero();
    for (int i = 0; i < f_; ++i) {
      e.coeffs[i] = static_cast<int>(idx % static_cast<std::uint32_t>(p_));
      idx /= static_cast<std::uint32_t>(p_);
    }
    return e;
  }

  ResidueElement add(const ResidueElement& a, const ResidueElement& b) const {
    check(a);
    check(b);
    ResidueElement r = zero();
    for (int i = 0; i < f_; ++i) r.coeffs[i] = (a.coeffs[i] + b.coeffs[i]) % p_;
    return r;
  }

  ResidueElement sub(const ResidueElement& a, const ResidueElement& b) const {
    check(a);
    check(b);
    ResidueElement r = zero();
    for (int i = 0; i < f_; ++i) r.coeffs[i] = detail::mod(a.coeffs[i] - b.coeffs[i], p_);
    return r;
  }

  ResidueElement mul(const ResidueElement& a, const ResidueElement& b) const {
    check(a);
    check(b);
    FpPolynomial product(2 * f_, 0);
    for (int i = 0; i < f_; ++i) {
      for (int j = 0; j < f_; ++j) {
        product[i + j] = static_cast<int>((product[i + j] + static_cast<std::int64_t>(a.coeffs[i]) * b.coeffs[j]) % p_);
      }
    }
    return from_polynomial(product);
  }

  /// Inverse by the extended Euclidean algorithm on F_p[x].
  ResidueElement inv(const ResidueElement& a) const {
    check(a);
    if (a.is_zero()) fail(ErrorKind::division_by_zero, "inverse of zero in residue field");
    // invariant: s_i * a == r_i (mod modulus)
    FpPolynomial r0 = modulus_;
    FpPolynomial r1 = a.coeffs;
    detail::trim(r1);
    FpPolynomial s0;
    FpPolynomial s1{1};
    while (!(r1.size() == 1)) {
      auto [q, r] = divmod(r0, r1);
      FpPolynomial s2 = poly_sub(s0, poly_mul(q, s1));
      r0 = std::move(r1);
      r1 = std::move(r);
      s0 = std::move(s1);
      s1 = std::move(s2);
    }
    const int scale = detail::inverse_mod(r1[0], p_);
    for (auto& c : s1) c = static_cast<int>(static_cast<std::int64_t>(c) * scale % p_);
    return from_polynomial(s1);
  }

  ResidueElement pow(ResidueElement base, std::uint64_t e) const {
    ResidueElement result = one();
    while (e > 0) {
      if (e & 1U) result = mul(result, base);
      base = mul(base, base);
      e >>= 1U;
    }
    return result;
  }

  /// Multiplicative order of a nonzero element.
  std::uint64_t order(const ResidueElement& a) const {
    if (a.is_zero()) fail(ErrorKind::invalid_input, "order of zero");
    std::uint64_t n = size_ - 1;
    for (auto r : detail::prime_factors(static_cast<std::int64_t>(size_ - 1))) {
      while (n % static_cast<std::uint64_t>(r) == 0 && pow(a, n / static_cast<std::uint64_t>(r)) == one()) {
        n /= static_cast<std::uint64_t>(r);
      }
    }
    return n;
  }

  /// The class of x modulo the modulus polynomial.
  ResidueElement root_of_modulus() const { return from_polynomial(FpPolynomial{0, 1}); }

  ResidueElement from_polynomial(FpPolynomial poly) const {
    for (auto& c : poly) c = detail::mod(c, p_);
    FpPolynomial rem = detail::poly_rem(std::move(poly), modulus_, p_);
    ResidueElement r = zero();
    for (std::size_t i = 0; i < rem.size(); ++i) r.coeffs[i] = rem[i];
    return r;
  }

  friend bool operator==(const ResidueField& a, const ResidueField& b) {
    return a.p_ == b.p_ && a.modulus_ == b.modulus_;
  }

 private:
  void check(const ResidueElement& a) const {
    if (static_cast<int>(a.coeffs.size()) != f_) fail(ErrorKind::invalid_input, "residue element has wrong length");
    for (int c : a.coeffs) {
      if (c < 0 || c >= p_) fail(ErrorKind::invalid_input, "residue coordinate outside [0,p)");
    }
  }

  std::pair<FpPolynomial, FpPolynomial> divmod(FpPolynomial a, FpPolynomial b) const {
    detail::trim(a);
    detail::trim(b);
    FpPolynomial q(a.size() >= b.size() ? a.size() - b.size() + 1 : 1, 0);
    const int lead_inv = detail::inverse_mod(b.back(), p_);
    while (a.size() >= b.size()) {
      const int factor = static_cast<int>(static_cast<std::int64_t>(a.back()) * lead_inv % p_);
      const std::size_t shift = a.size() - b.size();
      q[shift] = factor;
      for (std::size_t i = 0; i < b.size(); ++i) {
        a[shift + i] = detail::mod(a[shift + i] - static_cast<std::int64_t>(factor) * b[i], p_);
      }
      detail::trim(a);
    }
    return {q, a};
  }

  FpPolynomial poly_mul(const FpPolynomial& a, const FpPolynomial& b) const {
    if (a.empty() || b.empty()) return {};
    FpPolynomial r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
      for (std::size_t j = 0; j < b.size(); ++j) {
        r[i + j] = static_cast<int>((r[i + j] + static_cast<std::int64_t>(a[i]) * b[j]) % p_);
      }
    }
    detail::trim(r);
    return r;
  }

  FpPolynomial poly_sub(const FpPolynomial& a, const FpPolynomial& b) const {
    FpPolynomial r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i) {
      const int x = i < a.size() ? a[i] : 0;
      const int y = i < b.size() ? b[i] : 0;
      r[i] = detail::mod(x - y, p_);
    }
    detail::trim(r);
    return r;
  }

  int p_;
  int f_ = 0;
  std::uint32_t size_ = 0;
  FpPolynomial modulus_;
};

enum class RepSystem { polynomial, teichmuller };

inline std::string to_string(RepSystem r) { return r == RepSystem::polynomial ? "poly" : "teich"; }

/// Coefficient label from a representative system. `code` is interpreted by
/// the field descriptor: for polynomial reps it is the residue index
/// sum a_i p^i of the lift sum a_i zeta^i; for Teichmuller reps 0 means 0 and
/// k+1 means zeta^k. Code 0 is the zero label in both systems and codes
/// enumerate the system canonically (0, 1, ...).
struct RepLabel {
  std::uint32_t code = 0;

  bool is_zero() const { return code == 0; }
  friend auto operator<=>(const RepLabel&, const RepLabel&) = default;
};

/// Describes K = Q_p(zeta) unramified of degree f (or, for reporting only, a
/// field with ramification index e > 1) together with a representative
/// system. zeta is a primitive (p^f - 1)-th root of unity; for polynomial
/// reps the basis element z is the class of x modulo `modulus`, for
/// Teichmuller reps zeta's residue is a generator of F_{p^f}^x.
class FieldDescriptor {
 public:
  static constexpr std::int64_t kMaxTeichmullerTable = std::int64_t{1} << 20;

  static FieldDescriptor make(int p, int f, RepSystem reps = RepSystem::polynomial, int e = 1,
                              std::optional<FpPolynomial> modulus = std::nullopt) {
    if (!is_prime(p)) fail(ErrorKind::invalid_input, std::to_string(p) + " is not prime");
    if (f < 1) fail(ErrorKind::invalid_input, "unramified degree must be >= 1");
    if (e < 1) fail(ErrorKind::invalid_input, "ramification index must be >= 1");
    auto impl = std::make_shared<Impl>(Impl{p, f, e, reps, ResidueField(p, modulus ? *modulus : find_modulus(p, f)), {}, {}, {}});
    if (impl->field.degree() != f) fail(ErrorKind::invalid_input, "modulus degree differs from f");
    if (reps == RepSystem::teichmuller) {
      if (impl->field.size() > kMaxTeichmullerTable) fail(ErrorKind::unsupported, "Teichmuller tables limited to p^f <= 2^20");
      build_teichmuller(*impl);
    }
    return FieldDescriptor(std::move(impl));
  }

  int prime() const { return impl_->p; }
  int degree() const { return impl_->f; }
  int ramification() const { return impl_->e; }
  RepSystem reps() const { return impl_->reps; }
  const FpPolynomial& modulus() const { return impl_->field.modulus(); }
  const ResidueField& residue_field() const { return impl_->field; }
  std::uint32_t residue_count() const { return impl_->field.size(); }
  /// Order of zeta as a root of unity: p^f - 1 (the unramified reading).
  std::uint64_t root_of_unity_order() const { return impl_->field.size() - 1; }

  /// Residue of the Teichmuller generator zeta; only for Teichmuller reps.
  const ResidueElement& generator() const {
    require_teichmuller();
    return impl_->generator;
  }

  RepLabel zero_label() const { return RepLabel{0}; }
  RepLabel one_label() const { return RepLabel{1}; }

  /// Label of the k-th element of the canonical enumeration of the system.
  RepLabel label_at(std::uint32_t k) const {
    if (k >= residue_count()) fail(ErrorKind::invalid_input, "label index out of range");
    return RepLabel{k};
  }

  RepLabel poly_label(const ResidueElement& r) const {
    if (reps() != RepSystem::polynomial) fail(ErrorKind::invalid_input, "polynomial label in Teichmuller system");
    return RepLabel{impl_->field.index(r)};
  }

  /// Label for zeta^k (k in [0, p^f-2]).
  RepLabel teich_label(std::uint32_t k) const {
    require_teichmuller();
    if (k + 1 >= residue_count()) fail(ErrorKind::invalid_input, "Teichmuller exponent out of range");
    return RepLabel{k + 1};
  }

  bool valid(RepLabel l) const { return l.code < residue_count(); }

  ResidueElement residue_of(RepLabel l) const {
    if (!valid(l)) fail(ErrorKind::invalid_input, "label not in representative system");
    if (reps() == RepSystem::polynomial) return impl_->field.element(l.code);
    if (l.code == 0) return impl_->field.zero();
    return impl_->field.element(impl_->power_index[l.code - 1]);
  }

  /// Inverse of residue_of: the unique label with the given residue.
  RepLabel label_of(const ResidueElement& r) const {
    const std::uint32_t idx = impl_->field.index(r);
    if (reps() == RepSystem::polynomial) return RepLabel{idx};
    if (idx == 0) return RepLabel{0};
    return RepLabel{impl_->log_index[idx] + 1};
  }

  /// Text of a label: integers for f = 1 polynomial reps, z-polynomials such
  /// as `1+2*z^2` for f > 1, and `1`, `z`, `z^k` for Teichmuller powers.
  std::string format_label(RepLabel l) const {
    if (!valid(l)) fail(ErrorKind::invalid_input, "label not in representative system");
    if (l.code == 0) return "0";
    if (reps() == RepSystem::teichmuller) {
      const std::uint32_t k = l.code - 1;
      if (k == 0) return "1";
      if (k == 1) return "z";
      return "z^" + std::to_string(k);
    }
    const ResidueElement r = impl_->field.element(l.code);
    if (degree() == 1) return std::to_string(r.coeffs[0]);
    std::string out;
    for (int i = 0; i < degree(); ++i) {
      const int c = r.coeffs[i];
      if (c == 0) continue;
      if (!out.empty()) out += "+";
      if (i == 0) {
        out += std::to_string(c);
        continue;
      }
      if (c != 1) out += std::to_string(c) + "*";
      out += i == 1 ? "z" : "z^" + std::to_string(i);
    }
    return out;
  }

  /// Same descriptor: prime, degree, ramification, modulus and rep system.
  friend bool operator==(const FieldDescriptor& a, const FieldDescriptor& b) {
    if (a.impl_ == b.impl_) return true;
    return a.prime() == b.prime() && a.degree() == b.degree() && a.ramification() == b.ramification() &&
           a.reps() == b.reps() && a.modulus() == b.modulus();
  }

  std::string describe() const {
    std::string out = "K=Q_" + std::to_string(prime()) + "(zeta_" + std::to_string(root_of_unity_order()) + "), f=" +
                      std::to_string(degree());
    if (ramification() > 1) out += ", e=" + std::to_string(ramification());
    return out + ", reps=" + to_string(reps());
  }

 private:
  struct Impl {
    int p;
    int f;
    int e;
    RepSystem reps;
    ResidueField field;
    ResidueElement generator;
    std::vector<std::uint32_t> power_index;  // k -> index of zeta^k
    std::vector<std::uint32_t> log_index;    // index -> k (unused at 0)
  };

  explicit FieldDescriptor(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

  void require_teichmuller() const {
    if (reps() != RepSystem::teichmuller) fail(ErrorKind::invalid_input, "descriptor does not use Teichmuller reps");
  }

  static void build_teichmuller(Impl& impl) {
    const ResidueField& field = impl.field;
    const std::uint64_t group_order = field.size() - 1;
    ResidueElement gen = field.root_of_modulus();
    if (gen.is_zero() || field.order(gen) != group_order) {
      bool found = false;
      for (std::uint32_t idx = 1; idx < field.size(); ++idx) {
        ResidueElement candidate = field.element(idx);
        if (field.order(candidate) == group_order) {
          gen = candidate;
          found = true;
          break;
        }
      }
      if (!found) fail(ErrorKind::invalid_input, "no generator of the multiplicative group");
    }
    impl.generator = gen;
    impl.power_index.resize(group_order);
    impl.log_index.assign(field.size(), 0);
    ResidueElement current = field.one();
    for (std::uint32_t k = 0; k < group_order; ++k) {
      const std::uint32_t idx = field.index(current);
      impl.power_index[k] = idx;
      impl.log_index[idx] = k;
      current = field.mul(current, gen);
    }
  }

  std::shared_ptr<const Impl> impl_;
};

}  // namespace padt
