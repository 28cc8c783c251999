#include <gtest/gtest.h>

#include <random>

#include "endoscope/padic.hpp"

using namespace endoscope;

namespace {

const PadicParams& P5() { return PadicParams::get(5, 8, 2); }

PadicScalar S(const PadicParams& par, std::int64_t c) { return PadicScalar::from_int(par, c); }

PadicMatrix random_unimodular(const PadicParams& par, std::size_t n, std::mt19937_64& rng) {
    std::uniform_int_distribution<std::int64_t> d(0, 10000);
    for (;;) {
        PadicMatrix m(par, n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) m(i, j) = S(par, d(rng));
        if (m.det().is_unit()) return m;
    }
}

}  // namespace

TEST(Padic, BasicArithmetic) {
    const auto& par = P5();
    const PadicScalar p = PadicScalar::uniformizer_power(par, 1);
    const PadicScalar one = PadicScalar::one(par);
    EXPECT_TRUE(((one + p) * (one - p)).agrees_with(one - p * p));
    EXPECT_EQ(p.inv().valuation(), -1);
    EXPECT_EQ((p * p * S(par, 3)).valuation(), 2);
    EXPECT_TRUE(PadicScalar::zero(par).is_zero_to_precision());
}

TEST(Padic, Teichmueller) {
    const auto& par = P5();
    EXPECT_TRUE(PadicScalar::teichmuller(par, 1).agrees_with(S(par, 1)));
    EXPECT_TRUE(PadicScalar::teichmuller(par, -1).agrees_with(S(par, -1)));
    const auto& small = PadicParams::get(5, 2, 1);
    EXPECT_TRUE(PadicScalar::teichmuller(small, 2).agrees_with(S(small, 7)));
    EXPECT_THROW(PadicScalar::teichmuller(par, 5), DomainError);
}

TEST(Padic, TeichmuellerIsMultiplicativeRootOfUnity) {
    for (int p : {3, 5, 7, 11}) {
        const auto& par = PadicParams::get(p, 8, 2);
        for (int a = 1; a < p; ++a) {
            const PadicScalar ta = PadicScalar::teichmuller(par, a);
            EXPECT_EQ(ta.reduce_mod_p(), a);
            PadicScalar pw = PadicScalar::one(par);
            for (int e = 0; e < p - 1; ++e) pw = pw * ta;
            EXPECT_TRUE(pw.agrees_with(PadicScalar::one(par)));
            for (int b = 1; b < p; ++b)
                EXPECT_TRUE((ta * PadicScalar::teichmuller(par, b)).agrees_with(PadicScalar::teichmuller(par, a * b)));
        }
    }
}

TEST(Padic, ReductionIsRingHomomorphism) {
    for (int p : {3, 5, 7}) {
        const auto& par = PadicParams::get(p, 8, 2);
        std::mt19937_64 rng(static_cast<unsigned>(p));
        std::uniform_int_distribution<std::int64_t> d(-100000, 100000);
        for (int rep = 0; rep < 200; ++rep) {
            const std::int64_t a = d(rng), b = d(rng);
            const auto red = [p](std::int64_t x) { return static_cast<int>(((x % p) + p) % p); };
            EXPECT_EQ((S(par, a) + S(par, b)).reduce_mod_p(), red(a + b));
            EXPECT_EQ((S(par, a) * S(par, b)).reduce_mod_p(), red(red(a) * red(b)));
        }
    }
}

TEST(Padic, ValuationIsAdditive) {
    const auto& par = P5();
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<int> dv(-1, 3);
    std::uniform_int_distribution<std::int64_t> du(1, 4);
    for (int rep = 0; rep < 200; ++rep) {
        const int va = dv(rng), vb = dv(rng);
        if (va + vb < -par.E || va + vb >= par.K) continue;
        const PadicScalar x = PadicScalar::uniformizer_power(par, va) * S(par, du(rng));
        const PadicScalar y = PadicScalar::uniformizer_power(par, vb) * S(par, du(rng));
        EXPECT_EQ((x * y).valuation(), va + vb);
    }
}

TEST(Padic, PrecisionErrorsAreHard) {
    const auto& par = P5();
    EXPECT_THROW(PadicScalar::uniformizer_power(par, 8), PrecisionError);
    EXPECT_THROW(PadicScalar::uniformizer_power(par, -3), PrecisionError);
    EXPECT_THROW(PadicScalar::zero(par).inv(), PrecisionError);
    const PadicScalar pinv = PadicScalar::uniformizer_power(par, -2);
    EXPECT_THROW(pinv * pinv, PrecisionError);
    EXPECT_THROW(PadicScalar::uniformizer_power(par, 3).inv(), PrecisionError);
    EXPECT_THROW(PadicScalar::from_fraction(par, 1, 5), DomainError);
}

TEST(Padic, LostDigitsAreTracked) {
    const auto& par = P5();
    const PadicScalar p3 = PadicScalar::uniformizer_power(par, 3);
    // (1 + p^3) - 1 keeps its digits; dividing by p^3 costs them
    const PadicScalar x = (PadicScalar::one(par) + p3) - PadicScalar::one(par);
    EXPECT_EQ(x.valuation(), 3);
    const PadicScalar y = x * PadicScalar::uniformizer_power(par, -2);
    EXPECT_EQ(y.valuation(), 1);
    EXPECT_LE(y.prec(), par.K);
}

TEST(Padic, DeterminantAndInverse) {
    const auto& par = P5();
    std::mt19937_64 rng(1);
    for (std::size_t n : {2u, 3u, 5u}) {
        for (int rep = 0; rep < 10; ++rep) {
            const PadicMatrix m = random_unimodular(par, n, rng);
            EXPECT_GE(m.agreement_precision(m), 0);
            EXPECT_GE((m * m.inv()).agreement_precision(PadicMatrix::identity(par, n)), par.K - 1);
        }
    }
}

TEST(Padic, UnipotentInverseIsExact) {
    const auto& par = P5();
    PadicMatrix u = PadicMatrix::identity(par, 4);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i + 1; j < 4; ++j) u(i, j) = S(par, static_cast<std::int64_t>(i + 2 * j));
    EXPECT_GE((u * u.inv()).agreement_precision(PadicMatrix::identity(par, 4)), par.K);
    EXPECT_TRUE(u.det().agrees_with(PadicScalar::one(par)));
}

TEST(Padic, CompanionDeterminantHasValuationOne) {
    const auto& par = P5();
    PadicMatrix m(par, 3, 3);
    m(0, 1) = m(1, 2) = PadicScalar::one(par);
    m(2, 0) = PadicScalar::uniformizer_power(par, 1) * S(par, 2);
    EXPECT_EQ(m.det().valuation(), 1);
    EXPECT_EQ(m.val_det(), 1);
}

TEST(Padic, CharacteristicPolynomial) {
    const auto& par = P5();
    const auto id = PadicMatrix::identity(par, 3).char_poly();
    // (t - 1)^3 = t^3 - 3t^2 + 3t - 1
    ASSERT_EQ(id.size(), 4u);
    EXPECT_TRUE(id[0].agrees_with(S(par, 1)));
    EXPECT_TRUE(id[1].agrees_with(S(par, -3)));
    EXPECT_TRUE(id[2].agrees_with(S(par, 3)));
    EXPECT_TRUE(id[3].agrees_with(S(par, -1)));
    EXPECT_FALSE(is_eisenstein(id));
    PadicMatrix c(par, 3, 3);
    c(0, 1) = c(1, 2) = PadicScalar::one(par);
    c(2, 0) = PadicScalar::uniformizer_power(par, 1);
    const auto cp = c.char_poly();
    EXPECT_TRUE(cp[3].agrees_with(-PadicScalar::uniformizer_power(par, 1)));
    EXPECT_TRUE(is_eisenstein(cp));
}

TEST(Padic, Kernel) {
    const auto& par = P5();
    const auto full = PadicMatrix(par, 3, 3).kernel();
    EXPECT_EQ(full.size(), 3u);
    PadicMatrix d(par, 2, 2);
    d(0, 0) = PadicScalar::uniformizer_power(par, 1);
    d(1, 1) = PadicScalar::one(par);
    EXPECT_TRUE(d.kernel().empty());
    PadicMatrix r(par, 2, 3);
    r(0, 0) = S(par, 1);
    r(0, 1) = S(par, 2);
    r(1, 2) = S(par, 3);
    const auto k = r.kernel();
    ASSERT_EQ(k.size(), 1u);
    PadicMatrix v(par, 3, 1);
    for (std::size_t i = 0; i < 3; ++i) v(i, 0) = k[0][i];
    EXPECT_GE((r * v).agreement_precision(PadicMatrix(par, 2, 1)), par.K);
    bool unit = false;
    for (const auto& e : k[0]) unit = unit || e.is_unit();
    EXPECT_TRUE(unit);
}

TEST(Padic, KernelRankAmbiguityRaises) {
    const auto& par = P5();
    // a zero whose trusted digits were all spent by division: neither zero nor a pivot
    const PadicScalar b = PadicScalar::one(par) * PadicScalar::uniformizer_power(par, -2);
    PadicScalar lost = b - b;
    for (int i = 0; i < 3; ++i) lost = lost * PadicScalar::uniformizer_power(par, -2);
    ASSERT_FALSE(lost.valuation_opt().has_value());
    ASSERT_LT(lost.prec(), 1);
    PadicMatrix m(par, 1, 1);
    m(0, 0) = lost;
    EXPECT_THROW(m.kernel(), PrecisionError);
}

TEST(Padic, ParamsRejectOverflow) { EXPECT_THROW(PadicParams::get(101, 12, 2), DomainError); }
