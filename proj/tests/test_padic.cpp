#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "padt/padic.hpp"

using namespace padt;

namespace {

FieldDescriptor q2() { return FieldDescriptor::make(2, 1); }

PAdicNumber num(const std::string& s, const FieldDescriptor& f = q2()) { return parse_padic(s, f, kExactPrecision); }

}  // namespace

TEST(PAdic, IntegerDigits) {
  const PAdicNumber x = PAdicNumber::from_integer(q2(), 12);
  EXPECT_EQ(x.v0(), 2);
  EXPECT_EQ(x.digits().size(), 2u);
  EXPECT_EQ(x.valuation().value(), 2);
  EXPECT_EQ(to_string(x), "2^2*(1 + 1*2)");
  EXPECT_TRUE(PAdicNumber::from_integer(q2(), 0).is_zero());
  EXPECT_TRUE(PAdicNumber::zero(q2()).valuation().is_infinite());
}

TEST(PAdic, ParsesHandWrittenSums) {
  EXPECT_TRUE(num("2^2 + 2^4").same_expansion(PAdicNumber::from_integer(q2(), 20)));
  EXPECT_TRUE(num("1 + 2").same_expansion(PAdicNumber::from_integer(q2(), 3)));
  const FieldDescriptor q5 = FieldDescriptor::make(5, 1);
  EXPECT_TRUE(num("3 + 4*5^2", q5).same_expansion(PAdicNumber::from_integer(q5, 103)));
}

TEST(PAdic, PrintedFormParsesBack) {
  const FieldDescriptor f = FieldDescriptor::make(3, 2);
  std::mt19937 rng(7);
  for (int i = 0; i < 200; ++i) {
    const auto pts = oracle::random_points(rng, 1, f.residue_count(), -3, 6);
    const PAdicNumber x = oracle::to_padic(f, pts.front());
    EXPECT_TRUE(parse_padic(to_string(x), f, kExactPrecision).same_expansion(x)) << to_string(x);
  }
}

TEST(PAdic, RejectsMalformedText) {
  EXPECT_THROW(num("2^"), Error);
  EXPECT_THROW(num("1 + + 2"), Error);
  EXPECT_THROW(num("3*2"), Error);  // coefficient outside {0, 1}
}

TEST(PAdic, DifferenceValuation) {
  EXPECT_EQ(difference_valuation(num("0"), num("2^6")).valuation(), 6);
  EXPECT_EQ(difference_valuation(num("2^2"), num("2^2 + 2^4")).valuation(), 4);
  EXPECT_EQ(difference_valuation(num("1 + 2"), num("1")).valuation(), 1);
  EXPECT_EQ(difference_valuation(num("2^-2"), num("1")).valuation(), -2);
  const Separation same = difference_valuation(num("1 + 2^2"), num("1 + 2^2"));
  EXPECT_FALSE(same.distinguished);
}

TEST(PAdic, DifferenceValuationMatchesDigitOracle) {
  std::mt19937 rng(11);
  for (int p : {2, 3, 5}) {
    for (int f : {1, 2}) {
      const FieldDescriptor field = FieldDescriptor::make(p, f);
      const auto pts = oracle::random_points(rng, 40, field.residue_count(), -2, 8);
      for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
          const Separation s = difference_valuation(oracle::to_padic(field, pts[i]), oracle::to_padic(field, pts[j]));
          ASSERT_TRUE(s.distinguished);
          EXPECT_EQ(s.exponent, oracle::digit_distance(pts[i], pts[j]));
        }
      }
    }
  }
}

TEST(PAdic, PrecisionLimitsComparison) {
  const FieldDescriptor f = q2();
  const PAdicNumber x = parse_padic("1", f, 4);
  const PAdicNumber y = parse_padic("1 + 2^10", f, 4);
  const Separation s = difference_valuation(x, y);
  EXPECT_FALSE(s.distinguished);
  EXPECT_EQ(s.exponent, 4);
  EXPECT_THROW(x.digit(5), Error);
}

TEST(PAdic, AdditionAgreesWithIntegers) {
  std::mt19937 rng(3);
  for (int p : {2, 3, 7}) {
    const FieldDescriptor f = FieldDescriptor::make(p, 1);
    for (int i = 0; i < 300; ++i) {
      const std::uint64_t a = rng() % 100000;
      const std::uint64_t b = rng() % 100000;
      const PAdicNumber x = PAdicNumber::from_integer(f, a);
      const PAdicNumber y = PAdicNumber::from_integer(f, b);
      EXPECT_TRUE(add(x, y).same_expansion(PAdicNumber::from_integer(f, a + b)));
      if (a >= b) EXPECT_TRUE(sub(x, y).same_expansion(PAdicNumber::from_integer(f, a - b)));
    }
  }
}

TEST(PAdic, SubtractionWrapsToInfiniteExpansion) {
  // 0 - 1 = -1 = sum of (p-1) p^n: exact inputs give a truncated result
  const FieldDescriptor f = FieldDescriptor::make(3, 1);
  const PAdicNumber r = sub(PAdicNumber::zero(f, 8), PAdicNumber::one(f, 8));
  for (int n = 0; n < 8; ++n) EXPECT_EQ(r.digit(n).code, 2u);
}

TEST(PAdic, ExtensionArithmetic) {
  const FieldDescriptor f = FieldDescriptor::make(2, 2);
  const PAdicNumber z = PAdicNumber::from_digits(f, 0, {f.label_at(2)}, kExactPrecision);  // z
  const PAdicNumber one_z = PAdicNumber::from_digits(f, 0, {f.label_at(3)}, kExactPrecision);
  // z + (1+z) = 1 + 2z: digit 0 is 1, carry z into p^1
  const PAdicNumber s = add(z, one_z);
  EXPECT_EQ(s.digit(0).code, 1u);
  EXPECT_EQ(s.digit(1).code, 2u);
}

TEST(PAdic, TeichmullerArithmeticUnsupported) {
  const FieldDescriptor f = FieldDescriptor::make(5, 1, RepSystem::teichmuller);
  EXPECT_THROW(add(PAdicNumber::one(f), PAdicNumber::one(f)), Error);
}

TEST(PAdic, ShiftAndNorm) {
  const PAdicNumber x = shift(num("1 + 2"), 3);
  EXPECT_EQ(x.v0(), 3);
  EXPECT_EQ(*norm(x).exponent, -3);
  EXPECT_FALSE(norm(PAdicNumber::zero(q2())).exponent.has_value());
}

TEST(PAdic, TruncatedBelow) {
  const PAdicNumber x = num("2^2 + 2^3 + 2^5");
  EXPECT_TRUE(x.truncated_below(4).same_expansion(num("2^2 + 2^3")));
  EXPECT_TRUE(x.truncated_below(2).is_zero());
}

TEST(PAdic, DescriptorMismatch) {
  const PAdicNumber x = PAdicNumber::one(q2());
  const PAdicNumber y = PAdicNumber::one(FieldDescriptor::make(3, 1));
  try {
    difference_valuation(x, y);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::descriptor_mismatch);
  }
}
