#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "spectra_lab/hahn.hpp"

using namespace spectra_lab;

namespace {

const ValueGroup Q1 = ValueGroup::rat_lex(1);

FieldElement el(const std::string& s, FieldPtr f = coeff_field(5, 1), ValueGroup g = Q1) { return parse_field_element(g, f, s); }

GroupElement q(const Rational& x) { return GroupElement::scalar(Q1, x); }

// Random small fraction with exponents in {0, 1/2, ..., 2} and coefficients in F_25.
FieldElement draw(std::mt19937_64& rng, bool allow_zero = true) {
    auto f = coeff_field(5, 2);
    std::uniform_int_distribution<int> nterms(1, 3), ex(0, 4), co(0, 24);
    auto series = [&](bool nonzero) {
        while (true) {
            std::vector<Series::Term> t;
            int n = nterms(rng);
            for (int i = 0; i < n; ++i) t.emplace_back(q(Rational(ex(rng), 2)), static_cast<Coeff>(co(rng)));
            Series s = Series::from_terms(Q1, f, t);
            if (!nonzero || !s.is_zero()) return s;
        }
    };
    return FieldElement(series(!allow_zero), series(true));
}

} // namespace

TEST(FieldOps, PolynomialIdentities) {
    EXPECT_EQ(el("1 + t") * el("1 - t"), el("1 - t^2"));
    auto inv = el("1 + t").inverse();
    EXPECT_EQ(inv, el("(1)/(1 + t)"));
    EXPECT_EQ(*inv.valuation(), q(0));
    EXPECT_EQ(el("t^{1/2}") * el("t^{3/2}"), el("t^2"));
    EXPECT_EQ(el("t").pow(-2) * el("t^2"), el("1"));
}

TEST(FieldOps, DivisionByZeroIsArithmeticError) {
    EXPECT_THROW(el("0").inverse(), arithmetic_error);
    EXPECT_THROW(el("t") / el("0"), arithmetic_error);
}

TEST(FieldOps, GeneratorPowersInTheExtension) {
    auto f = coeff_field(5, 2);
    EXPECT_EQ(f->size(), 25u);
    EXPECT_FALSE(f->in_prime_subfield(f->gen_pow(1)));
    EXPECT_EQ(f->gen_pow(24), 1u);
    auto x = el("g*t", f) * el("g^23*t", f);
    EXPECT_EQ(x, el("t^2", f));
}

TEST(Valuation, Examples) {
    EXPECT_EQ(*el("t^{3/2}").valuation(), q(Rational(3, 2)));
    EXPECT_FALSE(el("0").valuation().has_value());
    EXPECT_EQ(*el("(t + t^2)/(t^3)").valuation(), q(-2));
}

TEST(Valuation, MultiplicativeAndUltrametricOnSamples) {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 500; ++i) {
        auto x = draw(rng, false), y = draw(rng, false);
        ASSERT_EQ(*(x * y).valuation(), *x.valuation() + *y.valuation());
        auto s = x + y;
        if (s.is_zero()) continue;
        auto m = std::min(*x.valuation(), *y.valuation());
        ASSERT_GE(*s.valuation(), m);
        if (*x.valuation() != *y.valuation()) ASSERT_EQ(*s.valuation(), m);
    }
}

TEST(FieldOps, AxiomsOnSeededTriples) {
    std::mt19937_64 rng(12);
    auto f = coeff_field(5, 2);
    auto one = FieldElement::one(Q1, f), zero = FieldElement::zero(Q1, f);
    for (int i = 0; i < 500; ++i) {
        auto a = draw(rng), b = draw(rng), c = draw(rng);
        ASSERT_EQ((a + b) + c, a + (b + c));
        ASSERT_EQ((a * b) * c, a * (b * c));
        ASSERT_EQ(a * (b + c), a * b + a * c);
        ASSERT_EQ(a + b, b + a);
        ASSERT_EQ(a - a, zero);
        if (!a.is_zero()) ASSERT_EQ(a * a.inverse(), one);
    }
}

TEST(Peel, Examples) {
    auto p = el("3*t + t^2").peel();
    EXPECT_EQ(p.lead_exp, q(1));
    EXPECT_EQ(p.lead_coeff, 3u);
    EXPECT_EQ(p.rest, el("t^2"));

    auto g = el("(1)/(1 - t)");
    p = g.peel();
    EXPECT_EQ(p.lead_exp, q(0));
    EXPECT_EQ(p.lead_coeff, 1u);
    EXPECT_EQ(p.rest, el("(t)/(1 - t)"));
    EXPECT_EQ(el("1") + p.rest, g);

    p = el("(t^{1/2})/(1 + t)").peel();
    EXPECT_EQ(p.lead_exp, q(Rational(1, 2)));
    EXPECT_EQ(p.lead_coeff, 1u);
    EXPECT_EQ(p.rest, el("(-t^{3/2})/(1 + t)"));

    EXPECT_THROW(el("0").peel(), domain_error);
}

TEST(Peel, ReconstructsOnSamples) {
    std::mt19937_64 rng(13);
    auto f = coeff_field(5, 2);
    for (int i = 0; i < 500; ++i) {
        auto x = draw(rng, false);
        auto p = x.peel();
        ASSERT_EQ(FieldElement::monomial(Q1, f, p.lead_coeff, p.lead_exp) + p.rest, x);
        if (!p.rest.is_zero()) ASSERT_GT(*p.rest.valuation(), p.lead_exp);
    }
}

TEST(CoefficientWindow, GeometricSeries) {
    auto w = coefficient_window(el("(1)/(1 - t)"), q(0), q(3), 10);
    ASSERT_TRUE(std::holds_alternative<WindowTerms>(w));
    auto& terms = std::get<WindowTerms>(w);
    ASSERT_EQ(terms.size(), 4u);
    for (int i = 0; i < 4; ++i) {
        EXPECT_EQ(terms[i].first, q(i));
        EXPECT_EQ(terms[i].second, 1u);
    }
    auto empty = coefficient_window(el("t^5"), q(0), q(3));
    EXPECT_TRUE(std::get<WindowTerms>(empty).empty());
    EXPECT_THROW(coefficient_window(el("t"), q(3), q(0)), domain_error);
}

TEST(CoefficientWindow, GuardFiresWhenInfinitelyManyExponentsSitBelowTheWindowTop) {
    auto g = ValueGroup::int_lex(2);
    auto x = el("(1)/(1 - t^{[0,1]})", coeff_field(5, 1), g);
    auto w = coefficient_window(x, GroupElement::zero(g), GroupElement::from_coords(g, {1, 0}), 8);
    EXPECT_TRUE(std::holds_alternative<NonTerminating>(w));
}

TEST(CoefficientWindow, MatchesTruncatedLongDivision) {
    std::mt19937_64 rng(14);
    std::uniform_int_distribution<int> ex(1, 6), co(1, 4), nt(1, 3), numex(0, 4);
    auto f = coeff_field(5, 1);
    const Rational bound = 5;
    for (int trial = 0; trial < 200; ++trial) {
        oracle::Poly h{5, {}}, num{5, {}};
        std::vector<Series::Term> ht, nt_terms;
        for (int i = nt(rng); i > 0; --i) {
            Rational e(ex(rng), 2);
            int c = co(rng);
            h.add_term(e, c);
            ht.emplace_back(q(e), static_cast<Coeff>(c));
        }
        for (int i = nt(rng); i > 0; --i) {
            Rational e(numex(rng), 2);
            int c = co(rng);
            num.add_term(e, c);
            nt_terms.emplace_back(q(e), static_cast<Coeff>(c));
        }
        Series den = Series::constant(Q1, f, 1) + Series::from_terms(Q1, f, ht);
        Series n = Series::from_terms(Q1, f, nt_terms);
        if (n.is_zero()) continue;
        auto want = oracle::divide_one_plus(num, h, bound);
        auto got = coefficient_window(FieldElement(n, den), q(0), q(bound), 1000);
        ASSERT_TRUE(std::holds_alternative<WindowTerms>(got));
        std::map<oracle::Q, int> lib;
        for (auto& [e, c] : std::get<WindowTerms>(got)) lib[e.coord(0)] = static_cast<int>(c);
        ASSERT_EQ(lib, want.c) << "trial " << trial;
    }
}

TEST(Literals, ParseErrors) {
    auto f = coeff_field(5, 1);
    EXPECT_THROW(parse_field_element(Q1, f, ""), parse_error);
    EXPECT_THROW(parse_field_element(Q1, f, "(t)/(0)"), parse_error);
    EXPECT_THROW(parse_field_element(Q1, f, "3*x^2"), parse_error);
    EXPECT_THROW(parse_field_element(ValueGroup::int_lex(2), f, "t"), parse_error);
}
