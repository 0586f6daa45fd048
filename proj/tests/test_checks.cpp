#include <gtest/gtest.h>

#include "oracles.hpp"
#include "spectra_lab/checks.hpp"
#include "spectra_lab/instances.hpp"
#include "spectra_lab/report.hpp"

using namespace spectra_lab;
namespace inst = spectra_lab::instances;
using V = CheckReport::Verdict;
using oracle::Q;

namespace {

const ValueGroup Q1 = ValueGroup::rat_lex(1);
const ValueGroup Z1 = ValueGroup::int_lex(1);
const ValueGroup Z2 = ValueGroup::int_lex(2);
const ValueGroup HR = ValueGroup::hahn_rat();

// Monomial t^e with coefficient 1 lies in F_5 + F_5 t^{s_1} + ... + {v >= cut}
// exactly when e is a slot or e >= cut.
struct MonoRing {
    std::vector<Q> slots;
    Q cut;
    bool has(const Q& e) const { return e >= cut || std::find(slots.begin(), slots.end(), e) != slots.end(); }
    bool divides(const Q& b, const Q& a) const { return has(a - b); } // t^a ∈ <t^b>
};

const MonoRing equip_m{{0}, 1};
const MonoRing fpfpt_m{{0, 1}, 2};

// 0 for a ∈ <b>, else least n <= n_max with b^n ∈ <a>, else -1.
int divided_oracle(const MonoRing& r, const Q& a, const Q& b, int n_max) {
    if (r.divides(b, a)) return 0;
    for (int n = 1; n <= n_max; ++n)
        if (r.divides(a, b * n)) return n;
    return -1;
}

int symmetric_oracle(const MonoRing& r, const Q& a, const Q& b, int n_max) {
    for (int n = 1; n <= n_max; ++n)
        if (r.divides(b, a * n) || r.divides(a, b * n)) return n;
    return 0;
}

// Values of the maximal ideal on the grid k/10 up to top.
std::vector<Q> maximal_grid(const MonoRing& r, int top) {
    std::vector<Q> out;
    for (int k = 1; k <= 10 * top; ++k)
        if (r.has(Q(k, 10))) out.push_back(Q(k, 10));
    return out;
}

Element t(const RingDescriptor& r, const Q& e) { return ambient_of(r).monomial(1, inst::q(ambient_of(r).group(), Rational(e))); }

long long observed_int(const CheckReport& rep, const std::string& key) {
    auto* o = rep.find(key);
    if (!o) throw std::runtime_error("missing observed key " + key);
    return std::get<long long>(*o);
}

Sampler sampler() { return Sampler(); }

} // namespace

TEST(Divided, LibraryMatchesMonomialOracle) {
    for (auto [r, m] : {std::pair{inst::equip(), equip_m}, std::pair{inst::fp_fp_t(), fpfpt_m}}) {
        auto grid = maximal_grid(m, 4);
        for (auto& a : grid)
            for (auto& b : grid) {
                int want = divided_oracle(m, a, b, 8);
                auto got = divided_exponent(r, t(r, a), t(r, b), 8);
                if (want == 0) ASSERT_EQ(got.kind, DividedResult::Kind::InPrincipal);
                else {
                    ASSERT_EQ(got.kind, DividedResult::Kind::MinExp) << r.label << " a=" << a << " b=" << b;
                    ASSERT_EQ(got.n, want);
                }
            }
    }
}

TEST(Divided, GridMaximaAndObservedExponents) {
    auto grid_max = [](const MonoRing& m) {
        int best = 0;
        for (auto& a : maximal_grid(m, 6))
            for (auto& b : maximal_grid(m, 6)) best = std::max(best, divided_oracle(m, a, b, 64));
        return best;
    };
    int eq = grid_max(equip_m), fp = grid_max(fpfpt_m);
    EXPECT_EQ(eq, 3);
    EXPECT_EQ(fp, 5);

    auto s = sampler();
    auto re = check_divided(inst::equip(), s, 1000, 8);
    EXPECT_EQ(re.verdict, V::Verified);
    EXPECT_LE(observed_int(re, "max_exponent"), eq);
    auto rf = check_divided(inst::fp_fp_t(), s, 1000, 8);
    EXPECT_EQ(rf.verdict, V::Verified);
    EXPECT_LE(observed_int(rf, "max_exponent"), fp);
}

// b = t, a = t^{29/10}: b^4/a = t^{11/10} is outside F_5 + F_5 t + {v >= 2}, b^5/a = t^{21/10} is inside.
TEST(Divided, FpFpTPairNeedsFifthPower) {
    auto r = inst::fp_fp_t();
    auto d = divided_exponent(r, t(r, Q(29, 10)), t(r, 1), 8);
    EXPECT_EQ(d.kind, DividedResult::Kind::MinExp);
    EXPECT_EQ(d.n, 5);
    EXPECT_EQ(divided_exponent(r, t(r, Q(29, 10)), t(r, 1), 4).kind, DividedResult::Kind::Exceeded);
}

TEST(Divided, SmallNMaxIsAnUnexpectedFalsification) {
    auto rep = check_divided(inst::equip(), sampler(), 1000, 1);
    EXPECT_EQ(rep.verdict, V::Falsified);
    EXPECT_TRUE(rep.unexpected());
    ASSERT_TRUE(rep.replay);
    EXPECT_TRUE(rep.replay());
}

TEST(Divided, FieldIsOutOfScope) {
    auto k = make_coarsening(Ambient::hahn(Q1, inst::default_field()), ConvexSubgroup::whole(Q1), "K");
    EXPECT_EQ(check_divided(k, sampler(), 10).verdict, V::OutOfScope);
}

TEST(StronglyPrimeCheck, Examples) {
    auto s = sampler();
    auto f = check_strongly_prime(maximal_ideal(inst::fp_fp_t()), s, 2000);
    EXPECT_EQ(f.verdict, V::Falsified);
    EXPECT_FALSE(f.unexpected());
    ASSERT_TRUE(f.replay);
    EXPECT_TRUE(f.replay());

    auto o = inst::valuation(Z2);
    auto v = check_strongly_prime(PrimeSpec{o, ConvexSubgroup::lex_cut(Z2, 1)}, s, 2000);
    EXPECT_EQ(v.verdict, V::Verified);
    EXPECT_TRUE(v.expected_verified);
    EXPECT_EQ(check_strongly_prime(zero_prime(inst::equip()), s, 500).verdict, V::Verified);
}

TEST(Comparability, EquipNamedIdealsAreIncomparable) {
    auto r = inst::equip();
    auto rep = check_comparability(r, sampler(), 200);
    EXPECT_EQ(rep.verdict, V::Falsified);
    EXPECT_EQ(rep.method, "structural");
    EXPECT_FALSE(rep.unexpected());
    ASSERT_EQ(rep.witnesses.size(), 2u);
    EXPECT_EQ(*value_of(rep.witnesses[0].value), inst::q(Q1, 1));
    EXPECT_EQ(*value_of(rep.witnesses[1].value), inst::q(Q1, Rational(3, 2)));
    ASSERT_TRUE(rep.replay);
    EXPECT_TRUE(rep.replay());
    // t ∈ tR, t ∉ {v > 1}; t^{3/2} ∈ {v > 1}, t^{3/2} ∉ tR since t^{1/2} ∉ R
    EXPECT_TRUE(equip_m.divides(1, 1));
    EXPECT_FALSE(equip_m.divides(1, Q(3, 2)));
}

TEST(Comparability, ValuationRingsVerifyAndPadicDFails) {
    auto s = sampler();
    for (auto g : {Z1, Z2, Q1, HR}) EXPECT_EQ(check_comparability(inst::valuation(g), s, 300).verdict, V::Verified) << g.to_string();
    auto m = check_comparability(inst::mixed(5), s, 300);
    EXPECT_EQ(m.verdict, V::Falsified);
    ASSERT_TRUE(m.replay);
    EXPECT_TRUE(m.replay());
}

TEST(UniformExponent, LibraryMatchesSymmetricOracle) {
    for (auto [r, m] : {std::pair{inst::equip(), equip_m}, std::pair{inst::fp_fp_t(), fpfpt_m}}) {
        auto grid = maximal_grid(m, 3);
        grid.push_back(0);
        for (auto& a : grid)
            for (auto& b : grid) ASSERT_EQ(symmetric_exponent(r, t(r, a), t(r, b), 16), symmetric_oracle(m, a, b, 16)) << a << " " << b;
    }
}

TEST(UniformExponent, ObservedValues) {
    int grid = 0;
    auto g = maximal_grid(equip_m, 6);
    g.push_back(0);
    for (auto& a : g)
        for (auto& b : g) grid = std::max(grid, symmetric_oracle(equip_m, a, b, 64));
    EXPECT_EQ(grid, 2);
    auto s = sampler();
    auto rep = check_uniform_exponent(inst::equip(), s, 500);
    EXPECT_EQ(rep.verdict, V::Verified);
    EXPECT_EQ(observed_int(rep, "observed_N"), grid);
    // comparable principal ideals: n = 1 always
    EXPECT_EQ(observed_int(check_uniform_exponent(inst::valuation(Z1), s, 300), "observed_N"), 1);
}

TEST(TwoGenerator, PadicD) {
    auto s = sampler();
    for (unsigned p : {5u, 7u}) {
        auto rep = check_two_generator_maximal(inst::mixed(p), s, 300);
        EXPECT_EQ(rep.verdict, V::Verified) << p;
        EXPECT_EQ(observed_int(rep, "unknown"), 0);
    }
    auto v = check_two_generator_maximal(make_padic_val(5, 8, "O/Q_5(pi)"), s, 100);
    EXPECT_EQ(v.verdict, V::Falsified);
    EXPECT_FALSE(v.unexpected());
    EXPECT_FALSE(std::get<bool>(*v.find("no_single_generator")));
    EXPECT_EQ(check_two_generator_maximal(inst::equip(), s, 10).verdict, V::OutOfScope);
}

TEST(TwoGenerator, LowPrecisionIsInconclusive) {
    for (int prec2 : {2, 3}) {
        auto rep = check_two_generator_maximal(inst::mixed(5, prec2), sampler(), 50);
        EXPECT_EQ(rep.verdict, V::Inconclusive) << prec2;
    }
    EXPECT_EQ(check_two_generator_maximal(inst::mixed(5, 4), sampler(), 50).verdict, V::Verified);
}

TEST(OverringDichotomy, Examples) {
    auto s = sampler();
    auto o = inst::valuation(Q1);
    EXPECT_EQ(check_overring_dichotomy(inst::equip(), o, s, 100).verdict, V::Verified);
    EXPECT_EQ(check_overring_dichotomy(inst::fp_fp_t(), o, s, 100).verdict, V::Verified);
    auto oz2 = inst::valuation(Z2);
    auto coarse = make_coarsening(Ambient::hahn(Z2, inst::default_field()), ConvexSubgroup::lex_cut(Z2, 1), "O_H");
    auto rep = check_overring_dichotomy(oz2, coarse, s, 100);
    EXPECT_EQ(rep.verdict, V::Verified);
    EXPECT_TRUE(std::get<bool>(*rep.find("localization_equal")));
    EXPECT_EQ(observed_int(rep, "localization_violations"), 0);
    EXPECT_THROW(check_overring_dichotomy(o, inst::equip(), s, 10), domain_error);
}

TEST(Registry, UnknownCheckThrows) { EXPECT_THROW(run_check("nonsense", inst::equip(), sampler(), {}), domain_error); }

TEST(Registry, DeterministicAtTheSameSeed) {
    RunOptions opt{200, 8};
    for (auto& r : inst::canonical()) {
        auto a = suite_json(run_suite(r, sampler(), check_names(), opt), false);
        auto b = suite_json(run_suite(r, sampler(), check_names(), opt), false);
        EXPECT_EQ(a.dump(), b.dump()) << r.label;
    }
}

TEST(Registry, EveryWitnessReplays) {
    RunOptions opt{200, 8};
    for (auto& r : inst::all()) {
        auto suite = run_suite(r, sampler(), check_names(), opt);
        EXPECT_TRUE(suite.errors.empty()) << r.label << ": " << (suite.errors.empty() ? "" : suite.errors[0]);
        EXPECT_EQ(suite.unexpected(), 0u) << r.label;
        for (auto& rep : suite.reports) {
            if (rep.verdict == V::Falsified && !rep.witnesses.empty()) {
                ASSERT_TRUE(rep.replay) << rep.check_id << " on " << r.label;
                EXPECT_TRUE(rep.replay()) << rep.check_id << " on " << r.label;
            }
        }
    }
}
