#include <gtest/gtest.h>

#include <random>

#include "spectra_lab/padic.hpp"

using namespace spectra_lab;

namespace {

// Digits of a + b*pi (a, b >= 0) read straight off the base-p expansions.
std::vector<unsigned> oracle_digits(unsigned p, long long a, long long b, int prec2) {
    std::vector<unsigned> d(prec2, 0);
    for (int i = 0; i < prec2; i += 2, a /= p) d[i] = static_cast<unsigned>(a % p);
    for (int i = 1; i < prec2; i += 2, b /= p) d[i] = static_cast<unsigned>(b % p);
    return d;
}

std::vector<unsigned> lib_digits(const PiAdic& x, int prec2) {
    std::vector<unsigned> d;
    for (int i = 0; i < prec2; ++i) d.push_back(*x.digit_at(i));
    return d;
}

PiAdic ab(unsigned p, long long a, long long b, int prec2) {
    return PiAdic::from_integer(p, a, prec2) + PiAdic::from_integer(p, b, prec2 + 1) * PiAdic::pi_power(p, 1, prec2 + 1);
}

long long ipow(long long b, int e) {
    long long r = 1;
    while (e--) r *= b;
    return r;
}

} // namespace

TEST(PiAdic, PiSquaredIsP) {
    auto pi = PiAdic::pi_power(5, 1, 8);
    auto sq = pi * pi;
    EXPECT_EQ(sq.val2(), 2);
    EXPECT_EQ(*sq.digit_at(2), 1u);
    EXPECT_TRUE(sq.agrees_with(PiAdic::from_integer(5, 5, 8)));
}

TEST(PiAdic, InverseOfOnePlusP) {
    const unsigned p = 5;
    auto x = PiAdic::from_integer(p, 1 + p, 8);
    auto y = x.inverse();
    EXPECT_TRUE((x * y).agrees_with(PiAdic::one(p, 8)));
    long long mod = ipow(p, 4), want = -1;
    for (long long c = 0; c < mod; ++c)
        if (c * (1 + p) % mod == 1) want = c;
    ASSERT_GE(want, 0);
    EXPECT_EQ(lib_digits(y, 8), oracle_digits(p, want, 0, 8));
    for (int i = 1; i < 8; i += 2) EXPECT_EQ(*y.digit_at(i), 0u);
}

TEST(PiAdic, NegationCancels) {
    auto x = ab(7, 123, 45, 10);
    EXPECT_TRUE((x + (-x)).is_zero());
    EXPECT_THROW((x - x).inverse(), precision_error);
}

TEST(PiAdic, DigitAt) {
    auto x = PiAdic::pi_power(5, 3, 8);
    EXPECT_EQ(x.digit_at(3), 1u);
    EXPECT_EQ(x.digit_at(1), 0u);
    EXPECT_FALSE(x.digit_at(8).has_value());
}

TEST(PiAdic, RingOpsMatchIntegerOracle) {
    std::mt19937_64 rng(21);
    const int prec2 = 10;
    for (unsigned p : {3u, 5u, 7u}) {
        long long mod = ipow(p, prec2 / 2);
        std::uniform_int_distribution<long long> d(0, mod - 1);
        for (int i = 0; i < 500; ++i) {
            long long a = d(rng), b = d(rng), c = d(rng), e = d(rng);
            auto x = ab(p, a, b, prec2), y = ab(p, c, e, prec2);
            ASSERT_EQ(lib_digits(x, prec2), oracle_digits(p, a, b, prec2));
            // (a + b pi)(c + e pi) = (ac + p be) + (ae + bc) pi
            long long s0 = (a * c % mod + (static_cast<long long>(p) * (b * e % mod)) % mod) % mod;
            long long s1 = (a * e % mod + b * c % mod) % mod;
            ASSERT_EQ(lib_digits(x * y, prec2), oracle_digits(p, s0, s1, prec2));
            ASSERT_EQ(lib_digits(x + y, prec2), oracle_digits(p, (a + c) % mod, (b + e) % mod, prec2));
            auto z = ab(p, d(rng), d(rng), prec2);
            ASSERT_TRUE(((x + y) * z).agrees_with(x * z + y * z));
            ASSERT_TRUE(((x * y) * z).agrees_with(x * (y * z)));
        }
    }
}

TEST(PiAdic, ValuationAddsOnUnits) {
    std::mt19937_64 rng(22);
    std::uniform_int_distribution<long long> d(1, 4), k(0, 5);
    for (int i = 0; i < 200; ++i) {
        auto x = PiAdic::from_integer(5, d(rng), 16) * PiAdic::pi_power(5, static_cast<int>(k(rng)), 16);
        auto y = PiAdic::from_integer(5, d(rng), 16) * PiAdic::pi_power(5, static_cast<int>(k(rng)), 16);
        ASSERT_EQ((x * y).val2(), x.val2() + y.val2());
    }
}

TEST(Hensel, SquareRootOfOnePlusP) {
    const unsigned p = 5;
    PiPolynomial f{{PiAdic::from_integer(p, -6, 40), PiAdic::zero(p, 40), PiAdic::one(p, 40)}};
    auto r = hensel_lift(f, PiAdic::one(p, 40), 16);
    EXPECT_GE((r * r - PiAdic::from_integer(p, 6, 16)).val2(), 16);
    long long mod = ipow(p, 8), want = -1;
    for (long long y = 1; y < mod; y += p)
        if (y * y % mod == 6) want = y;
    ASSERT_GE(want, 0);
    EXPECT_EQ(lib_digits(r, 16), oracle_digits(p, want, 0, 16));
}

TEST(Hensel, LinearPolynomial) {
    auto c = ab(5, 3, 2, 20);
    PiPolynomial f{{-c, PiAdic::one(5, 40)}};
    auto r = hensel_lift(f, PiAdic::from_integer(5, 3, 40), 12);
    EXPECT_TRUE(r.agrees_with(c));
}

TEST(Hensel, NoUnitSquareRootOfP) {
    PiPolynomial f{{PiAdic::from_integer(5, -5, 40), PiAdic::zero(5, 40), PiAdic::one(5, 40)}};
    EXPECT_THROW(hensel_lift(f, PiAdic::one(5, 40), 16), convergence_error);
}

TEST(PiAdic, LiteralRoundTrip) {
    auto x = parse_piadic("pi^3 + 2*pi^4 (p=5, prec=12)");
    EXPECT_EQ(x.prec2(), 12);
    EXPECT_EQ(x.val2(), 3);
    EXPECT_EQ(*x.digit_at(4), 2u);
    EXPECT_TRUE(parse_piadic(x.to_string()).agrees_with(x));
    EXPECT_THROW(parse_piadic("pi (p=4)"), parse_error);
    EXPECT_THROW(parse_piadic("pi"), parse_error);
}
