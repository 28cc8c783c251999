#include <gtest/gtest.h>

#include "endoscope/errors.hpp"
#include "endoscope/ffield.hpp"
#include "oracle.hpp"

using namespace endoscope;

TEST(Ffield, DefaultGenerators) {
    EXPECT_EQ(Fq(3).generator(), FqElem{2});
    EXPECT_EQ(Fq(5).generator(), FqElem{2});
    EXPECT_EQ(Fq(7).generator(), FqElem{3});
}

TEST(Ffield, NineElementFieldUsesTSquaredPlusOne) {
    const Fq F(3, 2);
    EXPECT_EQ(F.modulus(), (std::vector<int>{1, 0, 1}));
    EXPECT_EQ(F.q(), 9u);
}

TEST(Ffield, RejectsBadInput) {
    EXPECT_THROW(Fq(2), DomainError);
    EXPECT_THROW(Fq(9), DomainError);
    EXPECT_THROW(Fq(5, 2, {1, 0, 1}), DomainError);  // -1 is a square mod 5
    EXPECT_THROW(Fq(3, 2, {1, 0, 2}), DomainError);  // not monic after reduction
}

TEST(Ffield, GeneratorHasFullOrder) {
    for (auto [p, f] : std::vector<std::pair<int, int>>{{3, 1}, {5, 1}, {7, 1}, {3, 2}, {5, 2}, {3, 3}, {11, 1}}) {
        const Fq F(p, f);
        FqElem x = F.one();
        for (std::uint32_t e = 1; e < F.q() - 1; ++e) {
            x = F.mul(x, F.generator());
            EXPECT_NE(x, F.one()) << "p=" << p << " f=" << f << " e=" << e;
        }
        EXPECT_EQ(F.mul(x, F.generator()), F.one());
    }
}

TEST(Ffield, Trace) {
    const Fq F9(3, 2);
    EXPECT_EQ(F9.trace(F9.one()), FqElem{2});
    EXPECT_EQ(F9.trace(F9.from_coeffs({0, 1})), FqElem{0});
    const Fq F5(5);
    EXPECT_EQ(F5.trace(FqElem{4}), FqElem{4});
}

TEST(Ffield, DiscreteLog) {
    const Fq F(5);
    EXPECT_EQ(F.dlog(F.one()), 0);
    EXPECT_EQ(F.dlog(FqElem{4}), 2);
    EXPECT_EQ(F.dlog(FqElem{3}), 3);
    EXPECT_THROW(F.dlog(F.zero()), DomainError);
    for (auto [p, f] : std::vector<std::pair<int, int>>{{7, 1}, {3, 2}, {5, 2}}) {
        const Fq G(p, f);
        for (std::uint32_t c = 1; c < G.q(); ++c) EXPECT_EQ(G.gen_power(G.dlog(FqElem{c})), FqElem{c});
    }
}

TEST(Ffield, Squares) {
    const Fq F(5);
    EXPECT_TRUE(F.is_square(FqElem{4}));
    const auto r = F.sqrt(FqElem{4});
    ASSERT_TRUE(r.has_value());
    EXPECT_TRUE(*r == FqElem{2} || *r == FqElem{3});
    EXPECT_FALSE(F.is_square(FqElem{2}));
    EXPECT_FALSE(F.sqrt(FqElem{2}).has_value());
    EXPECT_EQ(F.sqrt(F.one()), F.one());
}

TEST(Ffield, EulerCriterionAgreesWithDlogParity) {
    for (auto [p, f] : std::vector<std::pair<int, int>>{{3, 1}, {5, 1}, {7, 1}, {3, 2}, {5, 2}, {3, 3}}) {
        const Fq F(p, f);
        for (std::uint32_t c = 1; c < F.q(); ++c) {
            const FqElem x{c};
            const bool euler = F.pow(x, (F.q() - 1) / 2) == F.one();
            EXPECT_EQ(euler, F.is_square(x));
            EXPECT_EQ(euler, F.dlog(x) % 2 == 0);
            if (auto s = F.sqrt(x)) {
                EXPECT_EQ(F.mul(*s, *s), x);
            }
        }
    }
}

TEST(Ffield, CharacterExamples) {
    const Fq F3(3);
    const FqAddChar psi(F3);
    EXPECT_EQ(psi(F3.zero()), CycElem::from_int(1));
    EXPECT_EQ(psi(F3.one()), CycElem::root_of_unity(3, 1));
    const Fq F5(5);
    EXPECT_EQ(FqMulChar(F5, 2)(FqElem{2}), CycElem::from_int(-1));
    EXPECT_THROW(FqMulChar(F5, 1)(F5.zero()), DomainError);
}

TEST(Ffield, NineElementArithmeticMatchesOracle) {
    const Fq F(3, 2);
    for (int a = 0; a < 9; ++a)
        for (int b = 0; b < 9; ++b) {
            const auto x = oracle::F9::from_code(a), y = oracle::F9::from_code(b);
            EXPECT_EQ(static_cast<int>(F.add(FqElem{static_cast<std::uint32_t>(a)}, FqElem{static_cast<std::uint32_t>(b)}).code), (x + y).code());
            EXPECT_EQ(static_cast<int>(F.mul(FqElem{static_cast<std::uint32_t>(a)}, FqElem{static_cast<std::uint32_t>(b)}).code), (x * y).code());
        }
}

TEST(Ffield, FieldAxiomsExhaustive) {
    for (auto [p, f] : std::vector<std::pair<int, int>>{{3, 1}, {5, 1}, {3, 2}}) {
        const Fq F(p, f);
        for (std::uint32_t a = 0; a < F.q(); ++a) {
            const FqElem x{a};
            EXPECT_EQ(F.add(x, F.neg(x)), F.zero());
            if (a) {
                EXPECT_EQ(F.mul(x, F.inv(x)), F.one());
            }
            for (std::uint32_t b = 0; b < F.q(); ++b) {
                const FqElem y{b};
                EXPECT_EQ(F.mul(x, y), F.mul(y, x));
                EXPECT_EQ(F.sub(F.add(x, y), y), x);
                for (std::uint32_t c = 0; c < F.q(); ++c) {
                    const FqElem w{c};
                    EXPECT_EQ(F.mul(x, F.add(y, w)), F.add(F.mul(x, y), F.mul(x, w)));
                }
            }
        }
    }
}

TEST(Ffield, CharactersAreHomomorphismsAndOrthogonal) {
    for (auto [p, f] : std::vector<std::pair<int, int>>{{3, 1}, {5, 1}, {7, 1}, {3, 2}}) {
        const Fq F(p, f);
        for (std::uint32_t s = 1; s < F.q(); ++s) {
            const FqAddChar psi(F, FqElem{s});
            CycElem total(p);
            for (std::uint32_t a = 0; a < F.q(); ++a) {
                total += psi(FqElem{a});
                for (std::uint32_t b = 0; b < F.q(); ++b)
                    EXPECT_EQ(psi(F.add(FqElem{a}, FqElem{b})), psi(FqElem{a}) * psi(FqElem{b}));
            }
            EXPECT_TRUE(total.is_zero());
        }
        for (std::int64_t j = 0; j < F.q() - 1; ++j) {
            const FqMulChar chi(F, j);
            CycElem total(1);
            for (std::uint32_t a = 1; a < F.q(); ++a) {
                total += chi(FqElem{a});
                for (std::uint32_t b = 1; b < F.q(); ++b)
                    EXPECT_EQ(chi(F.mul(FqElem{a}, FqElem{b})), chi(FqElem{a}) * chi(FqElem{b}));
            }
            EXPECT_EQ(total, CycElem::from_int(j == 0 ? F.q() - 1 : 0));
        }
    }
}

TEST(Ffield, ToStringAndCoefficients) {
    const Fq F(3, 2);
    const FqElem t = F.from_coeffs({1, 2});
    EXPECT_EQ(F.coeffs(t), (std::vector<int>{1, 2}));
    EXPECT_THROW(F.to_int(t), DomainError);
    EXPECT_EQ(Fq(7).to_int(FqElem{5}), 5);
}
