#pragma once

// Isometric embedding of strings with the Baire distance into the unit disc
// O_K: letter n of a string becomes the coefficient of p^n.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "padt/error.hpp"
#include "padt/padic.hpp"
#include "padt/residue_field.hpp"

namespace padt {

/// Splits UTF-8 text into code points; each code point is one symbol.
inline std::vector<std::string> split_symbols(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const auto lead = static_cast<unsigned char>(text[i]);
    std::size_t len = 1;
    if (lead >= 0xF0) len = 4;
    else if (lead >= 0xE0) len = 3;
    else if (lead >= 0xC0) len = 2;
    if (i + len > text.size()) fail(ErrorKind::encoding, "truncated UTF-8 sequence at byte " + std::to_string(i));
    out.emplace_back(text.substr(i, len));
    i += len;
  }
  return out;
}

/// Alphabet identified with labels of a representative system; the first
/// symbol is the blank and maps to the zero label.
class AlphabetCode {
 public:
  AlphabetCode(std::vector<std::string> symbols, FieldDescriptor field, std::vector<RepLabel> labels)
      : symbols_(std::move(symbols)), field_(std::move(field)), labels_(std::move(labels)) {
    if (symbols_.empty()) fail(ErrorKind::invalid_input, "alphabet is empty");
    if (symbols_.size() != labels_.size()) fail(ErrorKind::invalid_input, "one label per symbol required");
    if (symbols_.size() > field_.residue_count()) {
      fail(ErrorKind::invalid_input, "alphabet larger than the residue field");
    }
    if (!labels_[0].is_zero()) fail(ErrorKind::invalid_input, "the blank must map to the zero label");
    std::set<std::uint32_t> used;
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
      if (!field_.valid(labels_[i])) fail(ErrorKind::invalid_input, "label outside the representative system");
      if (!used.insert(labels_[i].code).second) fail(ErrorKind::invalid_input, "letter map is not injective");
      if (!by_symbol_.emplace(symbols_[i], labels_[i]).second) {
        fail(ErrorKind::invalid_input, "duplicate symbol '" + symbols_[i] + "'");
      }
      by_label_.emplace(labels_[i].code, symbols_[i]);
    }
  }

  const std::vector<std::string>& symbols() const { return symbols_; }
  const std::vector<RepLabel>& labels() const { return labels_; }
  const FieldDescriptor& field() const { return field_; }
  const std::string& blank() const { return symbols_.front(); }

  std::optional<RepLabel> label_of(const std::string& symbol) const {
    auto it = by_symbol_.find(symbol);
    return it == by_symbol_.end() ? std::nullopt : std::optional<RepLabel>(it->second);
  }

  std::optional<std::string> symbol_of(RepLabel label) const {
    auto it = by_label_.find(label.code);
    return it == by_label_.end() ? std::nullopt : std::optional<std::string>(it->second);
  }

 private:
  std::vector<std::string> symbols_;
  FieldDescriptor field_;
  std::vector<RepLabel> labels_;
  std::map<std::string, RepLabel> by_symbol_;
  std::map<std::uint32_t, std::string> by_label_;
};

inline int minimal_degree(std::size_t size, int p) {
  int f = 1;
  std::uint64_t q = static_cast<std::uint64_t>(p);
  while (q < size) {
    q *= static_cast<std::uint64_t>(p);
    ++f;
  }
  return f;
}

/// Minimal f with |alphabet| <= p^f; symbols get the canonical labels
/// 0, 1, ... in alphabet order (blank first).
inline AlphabetCode build_code(const std::vector<std::string>& alphabet, int p, RepSystem reps) {
  if (!is_prime(p)) fail(ErrorKind::invalid_input, std::to_string(p) + " is not prime");
  if (alphabet.empty()) fail(ErrorKind::invalid_input, "alphabet is empty");
  const FieldDescriptor field = FieldDescriptor::make(p, minimal_degree(alphabet.size(), p), reps);
  std::vector<RepLabel> labels;
  for (std::uint32_t i = 0; i < alphabet.size(); ++i) labels.push_back(field.label_at(i));
  return AlphabetCode(alphabet, field, std::move(labels));
}

/// Coefficient of p^n is the label of letter n; trailing blanks vanish.
/// The expansion is exact.
inline PAdicNumber encode_string(const AlphabetCode& code, std::string_view s) {
  std::vector<RepLabel> digits;
  const auto symbols = split_symbols(s);
  for (std::size_t n = 0; n < symbols.size(); ++n) {
    auto label = code.label_of(symbols[n]);
    if (!label) {
      fail(ErrorKind::encoding, "symbol '" + symbols[n] + "' at position " + std::to_string(n) + " is not in the alphabet");
    }
    digits.push_back(*label);
  }
  return PAdicNumber::from_digits(code.field(), 0, std::move(digits), kExactPrecision);
}

/// Inverse of encode_string on its image. Without `length` trailing blanks
/// are dropped; with it the result is padded with blanks to that length.
inline std::string decode_string(const AlphabetCode& code, const PAdicNumber& x,
                                 std::optional<std::size_t> length = std::nullopt) {
  if (!(x.field() == code.field())) fail(ErrorKind::descriptor_mismatch, "number and code use different fields");
  if (!x.is_zero() && x.v0() < 0) fail(ErrorKind::not_in_image, "negative valuation: not in the unit disc");
  std::vector<std::string> out;
  for (int n = 0; n < x.top(); ++n) {
    auto symbol = code.symbol_of(x.digit(n));
    if (!symbol) {
      fail(ErrorKind::not_in_image,
           "coefficient " + x.field().format_label(x.digit(n)) + " at exponent " + std::to_string(n) + " is not a letter");
    }
    out.push_back(*symbol);
  }
  if (length) {
    if (out.size() > *length) fail(ErrorKind::invalid_input, "decoded string longer than requested length");
    out.resize(*length, code.blank());
  }
  std::string joined;
  for (const auto& s : out) joined += s;
  return joined;
}

/// p^{-n} or the distinguished value zero.
struct BaireDistance {
  int prime = 2;
  bool zero = false;
  int exponent = 0;  // n in p^{-n}

  double to_double() const {
    if (zero) return 0.0;
    double v = 1.0;
    for (int i = 0; i < exponent; ++i) v /= prime;
    return v;
  }
  friend bool operator==(const BaireDistance&, const BaireDistance&) = default;
  /// Ordering by size of the distance.
  friend bool operator<(const BaireDistance& a, const BaireDistance& b) {
    if (a.zero || b.zero) return a.zero && !b.zero;
    return a.exponent > b.exponent;
  }
  std::string to_string() const {
    return zero ? "0" : std::to_string(prime) + "^-" + std::to_string(exponent);
  }
};

/// Baire distance p^{-n}, n the length of the longest common prefix, with
/// both strings padded by `blank`. With a cutoff k, n is capped at k and
/// equal strings are at distance p^{-k}.
inline BaireDistance baire_distance(std::string_view s, std::string_view t, int p, std::optional<int> cutoff = std::nullopt,
                                    std::optional<std::string> blank = std::nullopt) {
  const auto a = split_symbols(s);
  const auto b = split_symbols(t);
  const std::size_t len = std::max(a.size(), b.size());
  auto at = [&](const std::vector<std::string>& v, std::size_t i) -> std::optional<std::string> {
    if (i < v.size()) return v[i];
    return blank;  // nullopt pads with a symbol distinct from every letter
  };
  std::optional<int> prefix;
  for (std::size_t i = 0; i < len; ++i) {
    if (at(a, i) != at(b, i)) {
      prefix = static_cast<int>(i);
      break;
    }
  }
  if (cutoff) {
    if (*cutoff < 0) fail(ErrorKind::invalid_input, "cutoff must be non-negative");
    return BaireDistance{p, false, prefix ? std::min(*prefix, *cutoff) : *cutoff};
  }
  if (!prefix) return BaireDistance{p, true, 0};
  return BaireDistance{p, false, *prefix};
}

inline BaireDistance baire_distance(const AlphabetCode& code, std::string_view s, std::string_view t,
                                    std::optional<int> cutoff = std::nullopt) {
  return baire_distance(s, t, code.field().prime(), cutoff, code.blank());
}

inline std::vector<std::string> preset_names() { return {"dna5", "dna2-teich", "dna2-kk", "dna2-blank"}; }

/// Registered DNA codes.
///  dna5       : 5-adic, blank '-' -> 0, A,G,C,T -> 1,2,3,4
///  dna2-teich : (A,G,T,C) = (0,1,zeta,zeta^2) over Q_2(zeta), f = 2
///  dna2-kk    : (A,G,T,C) = (0,zeta,1,1+zeta), polynomial reps, f = 2
///  dna2-blank : blank '-' then A,G,T,C on Teichmuller labels, f = 3
inline AlphabetCode preset(std::string_view name) {
  if (name == "dna5") return build_code({"-", "A", "G", "C", "T"}, 5, RepSystem::polynomial);
  if (name == "dna2-teich") return build_code({"A", "G", "T", "C"}, 2, RepSystem::teichmuller);
  if (name == "dna2-kk") {
    const FieldDescriptor field = FieldDescriptor::make(2, 2, RepSystem::polynomial);
    const ResidueField& kappa = field.residue_field();
    const ResidueElement zeta = kappa.root_of_modulus();
    const ResidueElement one = kappa.one();
    return AlphabetCode({"A", "G", "T", "C"}, field,
                        {field.zero_label(), field.poly_label(zeta), field.poly_label(one),
                         field.poly_label(kappa.add(one, zeta))});
  }
  if (name == "dna2-blank") return build_code({"-", "A", "G", "T", "C"}, 2, RepSystem::teichmuller);
  fail(ErrorKind::invalid_input, "unknown preset '" + std::string(name) + "'");
}

}  // namespace padt
