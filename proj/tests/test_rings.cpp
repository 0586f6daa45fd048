#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "spectra_lab/instances.hpp"
#include "spectra_lab/sampler.hpp"

using namespace spectra_lab;
namespace inst = spectra_lab::instances;

namespace {

const ValueGroup Q1 = ValueGroup::rat_lex(1);
const ValueGroup Z1 = ValueGroup::int_lex(1);
const ValueGroup Z2 = ValueGroup::int_lex(2);

Element mono(const RingDescriptor& r, const GroupElement& v, Coeff c = 1) { return ambient_of(r).monomial(c, v); }
Element mono(const RingDescriptor& r, const Rational& q, Coeff c = 1) { return mono(r, inst::q(ambient_of(r).group(), q), c); }
Element lexm(const RingDescriptor& r, const oracle::Vec& v) {
    std::vector<Rational> c(v.begin(), v.end());
    return mono(r, GroupElement::from_coords(ambient_of(r).group(), c));
}
Element parse(const RingDescriptor& r, const std::string& s) { return ambient_of(r).parse(s); }

bool yes(TriBool t) { return t == TriBool::True; }
bool no(TriBool t) { return t == TriBool::False; }

// x = sum of (exponent, coefficient) over F_25; membership in F_5 + F_5 t^{e_1} + ... + {v >= cut}
// read directly off the terms.
bool poly_oracle(const std::map<oracle::Q, Coeff>& terms, const std::vector<oracle::Q>& slots, const oracle::Q& cut) {
    auto f = coeff_field(5, 2);
    for (auto& [e, c] : terms) {
        if (c == 0 || e >= cut) continue;
        if (std::find(slots.begin(), slots.end(), e) == slots.end()) return false;
        if (f->pow(c, 5) != c) return false;
    }
    return true;
}

} // namespace

TEST(Membership, EquicharacteristicExamples) {
    auto r = inst::equip();
    EXPECT_TRUE(no(contains(r, mono(r, Rational(1, 2)))));
    EXPECT_TRUE(yes(contains(r, parse(r, "g*t^{3/2} + t"))));
    EXPECT_TRUE(yes(contains(r, parse(r, "g*t + t^{3/2}"))));
    EXPECT_TRUE(no(contains(r, parse(r, "2 + g*t^{1/2}"))));
    EXPECT_TRUE(yes(contains(r, parse(r, "3"))));
    EXPECT_TRUE(no(contains(r, parse(r, "g"))));
}

TEST(Membership, MixedExamples) {
    auto r = inst::mixed(5);
    EXPECT_TRUE(yes(contains(r, PiAdic::pi_power(5, 3, 8))));
    EXPECT_TRUE(no(contains(r, PiAdic::pi_power(5, 1, 8))));
    EXPECT_TRUE(no(contains(r, PiAdic::pi_power(5, -2, 8))));
}

TEST(Membership, AmbientMismatchIsStructuralError) {
    EXPECT_THROW(contains(inst::equip(), PiAdic::one(5, 8)), structural_error);
    auto other = inst::valuation(Z2);
    EXPECT_THROW(contains(inst::equip(), mono(other, GroupElement::zero(Z2))), structural_error);
}

TEST(Membership, MatchesTermOracleOnPolynomials) {
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<int> ex(0, 12), co(0, 24), nt(1, 4);
    auto eq = inst::equip();
    auto fp = inst::fp_fp_t();
    auto f = coeff_field(5, 2);
    for (int i = 0; i < 1000; ++i) {
        std::map<oracle::Q, Coeff> terms;
        std::vector<Series::Term> st;
        for (int k = nt(rng); k > 0; --k) {
            oracle::Q e(ex(rng), 4);
            Coeff c = static_cast<Coeff>(co(rng));
            if (terms.count(e)) continue;
            terms[e] = c;
            st.emplace_back(GroupElement::scalar(Q1, e), c);
        }
        Element x = FieldElement(Series::from_terms(Q1, f, st));
        ASSERT_EQ(yes(contains(eq, x)), poly_oracle(terms, {0}, 1));
        ASSERT_EQ(yes(contains(fp, x)), poly_oracle(terms, {0, 1}, 2));
    }
}

TEST(Membership, MixedMatchesDigitOracleAndRefinesMonotonically) {
    std::mt19937_64 rng(32);
    std::uniform_int_distribution<int> dig(0, 4), zero(0, 3);
    auto r32 = inst::mixed(5, 32);
    for (int i = 0; i < 500; ++i) {
        std::vector<unsigned> d(32);
        std::vector<int> di(32);
        for (int k = 0; k < 32; ++k) di[k] = static_cast<int>(d[k] = static_cast<unsigned>(dig(rng)));
        if (zero(rng) == 0) d[1] = di[1] = 0;
        auto x = PiAdic::from_digits(5, 0, d, 32);
        TriBool t32 = contains(r32, x);
        ASSERT_EQ(yes(t32), oracle::padic_d_member(di));
        for (int prec : {8, 16}) {
            TriBool t = contains(inst::mixed(5, prec), x.with_precision(prec));
            ASSERT_NE(t, TriBool::Unknown);
            ASSERT_EQ(t, t32);
        }
    }
}

TEST(Membership, PrecisionTooLowIsUnknown) {
    auto x = PiAdic::from_integer(5, 1, 1);
    EXPECT_EQ(contains(inst::mixed(5, 1), x), TriBool::Unknown);
}

TEST(Ideals, PrincipalMembership) {
    auto r = inst::equip();
    EXPECT_TRUE(yes(ideal_contains(r, mono(r, 1), mono(r, Rational(5, 2)))));
    EXPECT_TRUE(no(ideal_contains(r, mono(r, 1), mono(r, Rational(3, 2)))));
    auto m = inst::mixed(5);
    EXPECT_TRUE(no(ideal_contains(m, PiAdic::pi_power(5, 2, 8), PiAdic::pi_power(5, 3, 8))));
    auto zero = ambient_of(r).zero();
    EXPECT_TRUE(no(ideal_contains(r, zero, mono(r, 1))));
    EXPECT_TRUE(yes(ideal_contains(r, zero, zero)));
}

TEST(Ideals, PrincipalMembershipIsQuotientMembership) {
    Sampler s;
    for (auto& r : inst::all()) {
        if (unit_subgroup(r).is_whole()) continue;
        for (std::size_t i = 0; i < 100; ++i) {
            auto rng = s.stream("ideal-identity", i);
            Element g = s.in_maximal(rng, r), y = s.in_ring(rng, r);
            ASSERT_EQ(ideal_contains(r, g, y), contains(r, y / g)) << r.label;
        }
    }
}

TEST(Goldman, Examples) {
    auto o2 = inst::valuation(Z2);
    auto p = goldman(o2, lexm(o2, {0, 1}));
    EXPECT_EQ(p.h, ConvexSubgroup::lex_cut(Z2, 1));
    auto oq = inst::valuation(Q1);
    EXPECT_TRUE(goldman(oq, mono(oq, 1)).is_zero());
    auto oh = inst::valuation(ValueGroup::hahn_rat());
    auto a = mono(oh, GroupElement::basis(ValueGroup::hahn_rat(), 2));
    EXPECT_EQ(goldman(oh, a).h, ConvexSubgroup::up_to(ValueGroup::hahn_rat(), 2, true));
    EXPECT_THROW(goldman(o2, lexm(o2, {0, 0})), domain_error);
    EXPECT_THROW(goldman(o2, ambient_of(o2).zero()), domain_error);
}

TEST(Goldman, IntersectionOfPowersOnLexBall) {
    auto o2 = inst::valuation(Z2);
    for (auto& va : oracle::ball(2, 2)) {
        if (oracle::lex_cmp(va, {0, 0}) <= 0) continue;
        auto a = lexm(o2, va);
        auto pa = goldman(o2, a);
        auto rad = radical_principal(o2, a);
        for (auto& vx : oracle::ball(2, 3)) {
            auto x = lexm(o2, vx);
            bool all_powers = true;
            for (int n = 1; n <= 20 && all_powers; ++n)
                all_powers = oracle::lex_cmp(vx, {va[0] * n, va[1] * n}) >= 0;
            ASSERT_EQ(yes(prime_contains(pa, x)), all_powers);
            bool some_power = false;
            for (int n = 1; n <= 20 && !some_power; ++n)
                some_power = oracle::lex_cmp({vx[0] * n, vx[1] * n}, va) >= 0;
            ASSERT_EQ(yes(prime_contains(rad, x)), some_power && oracle::lex_cmp(vx, {0, 0}) > 0);
            // P_a ⊆ <a> ⊆ sqrt<a>
            if (yes(prime_contains(pa, x))) ASSERT_TRUE(yes(ideal_contains(o2, a, x)));
            if (yes(ideal_contains(o2, a, x))) ASSERT_TRUE(yes(prime_contains(rad, x)));
        }
    }
}

TEST(Radical, Examples) {
    auto o2 = inst::valuation(Z2);
    EXPECT_EQ(radical_principal(o2, lexm(o2, {1, 0})).h, ConvexSubgroup::lex_cut(Z2, 1));
    auto oq = inst::valuation(Q1);
    auto m = radical_principal(oq, mono(oq, 1));
    EXPECT_TRUE(m.h.is_trivial());
    EXPECT_EQ(m.cut(), Gap::greater_than(GroupElement::zero(Q1)));
    auto oz = inst::valuation(Z1);
    EXPECT_EQ(radical_principal(oz, mono(oz, 3)).cut(), Gap::at_least(GroupElement::scalar(Z1, 1)));
}

TEST(Divided, Examples) {
    auto r = inst::equip();
    auto d = divided_exponent(r, mono(r, Rational(19, 10)), mono(r, 1), 8);
    EXPECT_EQ(d.kind, DividedResult::Kind::MinExp);
    EXPECT_EQ(d.n, 3);
    // b^2/a = t^{1/10} is outside, b^3/a = t^{11/10} inside
    EXPECT_TRUE(no(contains(r, mono(r, Rational(1, 10)))));
    EXPECT_TRUE(yes(contains(r, mono(r, Rational(11, 10)))));

    auto a = mono(r, Rational(7, 3));
    EXPECT_EQ(divided_exponent(r, a, a, 8).kind, DividedResult::Kind::InPrincipal);

    auto oq = inst::valuation(Q1);
    d = divided_exponent(oq, mono(oq, Rational(1, 3)), mono(oq, 1), 8);
    EXPECT_EQ(d.kind, DividedResult::Kind::MinExp);
    EXPECT_EQ(d.n, 1);
    EXPECT_THROW(divided_exponent(oq, ambient_of(oq).zero(), mono(oq, 1), 8), domain_error);
}

TEST(Divided, MinimalExponentMatchesValueGridOracle) {
    // In F_5 + {v >= 1}, for monomials a = t^x, b = t^y with 0 < x, y: a in <b> iff x - y is 0 or >= 1,
    // and b^n in <a> iff n*y - x is 0 or >= 1.
    auto r = inst::equip();
    auto in_r = [](const oracle::Q& e) { return e == 0 || e >= 1; };
    for (int xi = 1; xi <= 30; ++xi)
        for (int yi = 1; yi <= 30; ++yi) {
            oracle::Q x(xi, 10), y(yi, 10);
            int want = -1;
            if (in_r(x - y)) want = 0;
            else
                for (int n = 1; n <= 8 && want < 0; ++n)
                    if (in_r(y * n - x)) want = n;
            auto d = divided_exponent(r, mono(r, x), mono(r, y), 8);
            if (want == 0) ASSERT_EQ(d.kind, DividedResult::Kind::InPrincipal);
            else if (want > 0) ASSERT_EQ(d.n, want) << xi << " " << yi;
            else ASSERT_EQ(d.kind, DividedResult::Kind::Exceeded);
        }
}

TEST(Colon, Examples) {
    auto amb_z2 = Ambient::hahn(Z2, inst::default_field());
    auto amb_q = Ambient::hahn(Q1, inst::default_field());
    auto o = colon_self(amb_q, Gap::at_least(GroupElement::scalar(Q1, Rational(3, 2))));
    EXPECT_TRUE(unit_subgroup(o).is_trivial());
    auto h = ConvexSubgroup::lex_cut(Z2, 1);
    EXPECT_EQ(unit_subgroup(colon_self(amb_z2, Gap::above_subgroup(h))), h);
    EXPECT_TRUE(unit_subgroup(colon_self(amb_q, Gap::above_subgroup(ConvexSubgroup::trivial(Q1)))).is_trivial());
    EXPECT_THROW(colon_self(amb_q, Gap::nothing(Q1)), domain_error);
    EXPECT_THROW(colon_self(amb_q, Gap::at_least(GroupElement::zero(Q1))), domain_error);
}

TEST(Colon, DoubleInclusionOnLexBall) {
    auto amb = Ambient::hahn(Z2, inst::default_field());
    auto o2 = inst::valuation(Z2);
    for (int k = 0; k <= 2; ++k) {
        auto cut = Gap::above_subgroup(ConvexSubgroup::lex_cut(Z2, k));
        if (cut.is_nothing()) continue;
        auto in_i = [&](const oracle::Vec& v) { return cut.admits(GroupElement::from_coords(Z2, {v[0], v[1]})); };
        auto colon = colon_self(amb, cut);
        auto inv = inverse_ideal(cut);
        for (auto& w : oracle::ball(2, 3)) {
            bool stab = true, into_o = true;
            for (auto& i : oracle::ball(2, 7)) {
                if (!in_i(i)) continue;
                auto s = oracle::add(w, i);
                if (!in_i(s)) stab = false;
                if (oracle::lex_cmp(s, {0, 0}) < 0) into_o = false;
            }
            ASSERT_EQ(yes(contains(colon, lexm(o2, w))), stab) << k << ": " << w[0] << "," << w[1];
            ASSERT_EQ(inv.admits(GroupElement::from_coords(Z2, {w[0], w[1]})), into_o);
        }
    }
}

TEST(Inverse, Examples) {
    auto one = GroupElement::scalar(Z1, 1);
    EXPECT_EQ(inverse_ideal(Gap::at_least(one)), Gap::at_least(-one));
    EXPECT_EQ(inverse_ideal(Gap::greater_than(GroupElement::zero(Q1))), Gap::at_least(GroupElement::zero(Q1)));
    EXPECT_THROW(inverse_ideal(Gap::nothing(Q1)), domain_error);
}

TEST(Index, FiniteOverTheIntegers) {
    auto f5 = coeff_field(5, 1);
    auto oz = make_valuation_ring(Ambient::hahn(Z1, f5));
    auto i = IdealObject::principal(oz, mono(oz, 1)), j = IdealObject::principal(oz, mono(oz, 2));
    EXPECT_EQ(quotient_index_class(i, j), (IndexClass{true, 5}));
    // Classes of a t + b t^2 modulo t^2: two agree iff their t coefficients agree.
    std::set<int> classes;
    for (int a = 0; a < 5; ++a)
        for (int b = 0; b < 5; ++b) {
            oracle::Poly x{5, {}};
            x.add_term(1, a);
            x.add_term(2, b);
            classes.insert(x.truncated(1).c.empty() ? 0 : x.truncated(1).c.begin()->second);
        }
    EXPECT_EQ(classes.size(), 5u);
    EXPECT_THROW(quotient_index_class(j, i), domain_error);
}

TEST(Index, InfiniteOverDenseWindows) {
    auto oq = inst::valuation(Q1);
    EXPECT_FALSE(quotient_index_class(IdealObject::maximal(oq), IdealObject::principal(oq, mono(oq, 1))).finite);
    auto r = inst::equip();
    auto m = IdealObject::maximal(r), tr = IdealObject::principal(r, mono(r, 1));
    EXPECT_FALSE(quotient_index_class(m, tr).finite);
    std::vector<Element> reps;
    for (int k = 1; k <= 10; ++k) reps.push_back(mono(r, 1 + Rational(k, 11)));
    for (std::size_t a = 0; a < reps.size(); ++a)
        for (std::size_t b = a + 1; b < reps.size(); ++b) ASSERT_TRUE(no(tr.contains(reps[a] - reps[b])));
}

TEST(Localization, Examples) {
    auto o2 = inst::valuation(Z2);
    auto h = ConvexSubgroup::lex_cut(Z2, 1);
    auto loc = localization({o2, h});
    EXPECT_EQ(unit_subgroup(loc), h);
    // a/s with s outside the prime: values with first coordinate 0 become units.
    EXPECT_TRUE(yes(contains(loc, lexm(o2, {0, -5}))));
    EXPECT_TRUE(no(contains(loc, lexm(o2, {-1, 0}))));
    EXPECT_EQ(ring_compare(localization(maximal_ideal(o2)), o2).rel, CompareResult::Relation::Equal);
    auto r = inst::equip();
    EXPECT_TRUE(unit_subgroup(localization(zero_prime(r))).is_whole());
}

TEST(CPI, Examples) {
    auto r = inst::equip();
    EXPECT_TRUE(cpi_extension(zero_prime(r)).equals_r);
    auto o2 = inst::valuation(Z2);
    EXPECT_TRUE(cpi_extension({o2, ConvexSubgroup::lex_cut(Z2, 1)}).equals_r);
}

TEST(CPI, PullbackIsNotDivided) {
    HahnAmbient amb{Z2, inst::default_field()};
    auto h = ConvexSubgroup::lex_cut(Z2, 1);
    auto pb = make_pullback(amb, h, Gap::at_least(GroupElement::from_coords(Z2, {1, 1})));
    auto res = cpi_extension({pb, h});
    EXPECT_FALSE(res.equals_r);
    ASSERT_TRUE(res.witness.has_value());
    EXPECT_TRUE(yes(contains(res.extension, *res.witness)));
    EXPECT_TRUE(no(contains(pb, *res.witness)));
    // t^{(1,0)} lies in the prime above h, hence in p R_p, but not in R.
    auto x = ambient_of(pb).monomial(1, GroupElement::from_coords(Z2, {1, 0}));
    EXPECT_TRUE(no(contains(pb, x)));
    EXPECT_TRUE(yes(contains(res.extension, x)));
}

TEST(Compare, Examples) {
    auto r = inst::equip();
    auto o = make_valuation_ring(ambient_of(r));
    EXPECT_EQ(ring_compare(r, o).rel, CompareResult::Relation::Subset);
    auto o2 = inst::valuation(Z2);
    auto coarse = make_coarsening(ambient_of(o2), ConvexSubgroup::lex_cut(Z2, 1));
    EXPECT_EQ(ring_compare(o2, coarse).rel, CompareResult::Relation::Subset);
    EXPECT_EQ(ring_compare(r, inst::fp_fp_t()).rel, CompareResult::Relation::Superset);
    EXPECT_THROW(ring_compare(r, o2), structural_error);
}

TEST(Compare, SupersetAgreesWithMembershipOnSamples) {
    auto big = inst::equip(), small = inst::fp_fp_t();
    Sampler s;
    for (std::size_t i = 0; i < 200; ++i) {
        auto rng = s.stream("compare-probe", i);
        auto x = s.in_ring(rng, small);
        ASSERT_TRUE(yes(contains(small, x)));
        ASSERT_TRUE(yes(contains(big, x)));
    }
    auto w = ring_compare(big, small).only_in_first;
    ASSERT_TRUE(w.has_value());
    EXPECT_TRUE(yes(contains(big, *w)));
    EXPECT_TRUE(no(contains(small, *w)));
}

TEST(Closure, SumsAndProductsStayInTheRing) {
    Sampler s;
    for (auto& r : inst::all()) {
        for (std::size_t i = 0; i < 500; ++i) {
            auto rng = s.stream("closure", i);
            Element x = s.in_ring(rng, r), y = s.in_ring(rng, r);
            ASSERT_FALSE(no(contains(r, x))) << r.label;
            ASSERT_FALSE(no(contains(r, x + y))) << r.label << " " << to_string(x) << " + " << to_string(y);
            ASSERT_FALSE(no(contains(r, x * y))) << r.label << " " << to_string(x) << " * " << to_string(y);
        }
    }
}

TEST(Construction, RejectsMalformedDescriptors) {
    HahnAmbient amb{Q1, inst::default_field()};
    auto q = [](const Rational& x) { return GroupElement::scalar(Q1, x); };
    EXPECT_THROW(make_d_plus(amb, 1, {q(1)}, Gap::at_least(q(2))), domain_error);
    EXPECT_THROW(make_d_plus(amb, 1, {q(0), q(3)}, Gap::at_least(q(2))), domain_error);
    EXPECT_THROW(make_d_plus(amb, 1, {q(0), q(Rational(1, 2))}, Gap::at_least(q(Rational(3, 2)))), domain_error);
    EXPECT_NO_THROW(make_d_plus(amb, 1, {q(0), q(Rational(3, 4))}, Gap::at_least(q(1))));
    EXPECT_THROW(make_d_plus(amb, 3, {q(0)}, Gap::at_least(q(1))), domain_error);
    EXPECT_THROW(make_padic_d(2), domain_error);
}
