#include <gtest/gtest.h>

#include <set>

#include "padt/residue_field.hpp"

using namespace padt;

TEST(ResidueField, Primes) {
  EXPECT_TRUE(is_prime(2));
  EXPECT_TRUE(is_prime(97));
  EXPECT_FALSE(is_prime(1));
  EXPECT_FALSE(is_prime(91));
}

TEST(ResidueField, SmallestIrreducibleModulus) {
  EXPECT_EQ(find_modulus(2, 2), (FpPolynomial{1, 1, 1}));     // x^2 + x + 1
  EXPECT_EQ(find_modulus(2, 3), (FpPolynomial{1, 0, 1, 1}));  // x^3 + x^2 + 1, compared from the constant term
  EXPECT_EQ(find_modulus(3, 2), (FpPolynomial{1, 0, 1}));     // x^2 + 1
}

TEST(ResidueField, FieldAxioms) {
  for (auto [p, f] : {std::pair{2, 3}, std::pair{3, 2}, std::pair{5, 2}, std::pair{7, 1}}) {
    const ResidueField k(p, find_modulus(p, f));
    for (std::uint32_t i = 0; i < k.size(); ++i) {
      const ResidueElement a = k.element(i);
      EXPECT_EQ(k.index(a), i);
      EXPECT_EQ(k.add(a, k.zero()), a);
      EXPECT_EQ(k.mul(a, k.one()), a);
      EXPECT_TRUE(k.sub(a, a).is_zero());
      if (!a.is_zero()) {
        EXPECT_EQ(k.mul(a, k.inv(a)), k.one());
        EXPECT_EQ(k.pow(a, k.size() - 1), k.one());
      }
      for (std::uint32_t j = 0; j < k.size(); ++j) {
        const ResidueElement b = k.element(j);
        EXPECT_EQ(k.mul(a, b), k.mul(b, a));
      }
    }
  }
}

TEST(ResidueField, InverseOfZeroFails) {
  const ResidueField k(3, find_modulus(3, 2));
  EXPECT_THROW(k.inv(k.zero()), Error);
}

TEST(ResidueField, TeichmullerLabelsCoverResidues) {
  const FieldDescriptor f = FieldDescriptor::make(2, 3, RepSystem::teichmuller);
  std::set<std::uint32_t> seen;
  for (std::uint32_t c = 0; c < f.residue_count(); ++c) {
    const ResidueElement r = f.residue_of(RepLabel{c});
    EXPECT_EQ(f.label_of(r).code, c);
    seen.insert(f.residue_field().index(r));
  }
  EXPECT_EQ(seen.size(), 8u);
  // zeta generates the multiplicative group
  EXPECT_EQ(f.residue_field().order(f.generator()), 7u);
  EXPECT_EQ(f.format_label(f.teich_label(0)), "1");
  EXPECT_EQ(f.format_label(f.teich_label(3)), "z^3");
}

TEST(ResidueField, PolynomialLabelText) {
  const FieldDescriptor f = FieldDescriptor::make(2, 2);
  EXPECT_EQ(f.format_label(f.label_at(0)), "0");
  EXPECT_EQ(f.format_label(f.label_at(1)), "1");
  EXPECT_EQ(f.format_label(f.label_at(2)), "z");
  EXPECT_EQ(f.format_label(f.label_at(3)), "1+z");
  EXPECT_THROW(f.label_at(4), Error);
}

TEST(ResidueField, DescriptorChecks) {
  EXPECT_THROW(FieldDescriptor::make(4, 1), Error);
  EXPECT_THROW(FieldDescriptor::make(2, 0), Error);
  EXPECT_THROW(FieldDescriptor::make(2, 2, RepSystem::polynomial, 1, FpPolynomial{1, 0, 1}), Error);  // x^2+1 = (x+1)^2
  EXPECT_EQ(FieldDescriptor::make(3, 2), FieldDescriptor::make(3, 2));
  EXPECT_FALSE(FieldDescriptor::make(3, 2) == FieldDescriptor::make(3, 2, RepSystem::teichmuller));
  EXPECT_EQ(FieldDescriptor::make(5, 1).describe(), "K=Q_5(zeta_4), f=1, reps=poly");
}
