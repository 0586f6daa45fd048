#pragma once

// Prime spectra as chains of convex subgroups, and the structure theory on top:
// adjacency, property (*), pseudo-valuation and fragmented tests, and the
// checks that apply when the maximal ideal has no immediate predecessor.

#include <set>
#include <utility>

#include "sampler.hpp"

namespace spectra_lab {

struct SpecChain {
    RingDescriptor ring;
    // Ascending by inclusion of primes: the zero prime first, the maximal ideal last.
    std::vector<ConvexSubgroup> members;
    // adjacent[i]: nothing lies strictly between members[i] and members[i+1].
    std::vector<bool> adjacent;
    // Members are a finite skeleton of a chain with dense stretches.
    bool dense = false;

    PrimeSpec prime(std::size_t i) const { return {ring, members.at(i)}; }
    PrimeSpec top() const { return prime(members.size() - 1); }
    std::size_t size() const { return members.size(); }
};

namespace detail {

inline std::vector<Rational> hahn_probe_keys(const RingDescriptor& r) {
    std::set<Rational> keys = {Rational(-1), Rational(0), Rational(1), Rational(2)};
    DenseChain dc = dense_chain(r);
    if (dc.threshold.kind() == ConvexSubgroup::Kind::UpTo) {
        keys.insert(dc.threshold.bound());
        keys.insert(dc.threshold.bound() - Rational(1, 2));
        keys.insert(dc.threshold.bound() + Rational(1, 2));
    }
    return {keys.begin(), keys.end()};
}

} // namespace detail

inline SpecChain spec_chain(const RingDescriptor& r) {
    SpecChain c{r, {}, {}, false};
    ValueGroup g = ambient_of(r).group();
    std::vector<ConvexSubgroup> hs;
    if (chain_is_finite(r)) {
        hs = finite_chain(r);
    } else {
        c.dense = true;
        DenseChain dc = dense_chain(r);
        std::vector<ConvexSubgroup> cand = {ConvexSubgroup::trivial(g), ConvexSubgroup::whole(g), dc.threshold};
        for (auto& q : detail::hahn_probe_keys(r)) {
            cand.push_back(ConvexSubgroup::up_to(g, q, false));
            cand.push_back(ConvexSubgroup::up_to(g, q, true));
        }
        for (auto& h : cand)
            if (chain_member(r, h) && std::find(hs.begin(), hs.end(), h) == hs.end()) hs.push_back(h);
        std::sort(hs.begin(), hs.end());
    }
    c.members.assign(hs.rbegin(), hs.rend());
    for (std::size_t i = 0; i + 1 < c.members.size(); ++i) {
        auto prev = chain_prev(r, c.members[i]);
        c.adjacent.push_back(prev && *prev == c.members[i + 1]);
    }
    return c;
}

// Prime p ⊊ q with nothing strictly between, if any.
inline std::optional<PrimeSpec> immediate_predecessor(const PrimeSpec& q) {
    require_prime(q);
    auto next = chain_next(q.ring, q.h);
    if (!next) return std::nullopt;
    return PrimeSpec{q.ring, *next};
}

// Can a monomial of value v lie in the prime p?
inline bool realizable_in_prime(const PrimeSpec& p, const GroupElement& v) {
    if (!p.cut().admits(v)) return false;
    if (auto s = ring_shape(p.ring)) return s->cut.admits(v) || find_slot(*s, v) != nullptr;
    return contains(p.ring, ambient_of(p.ring).monomial(1, v)) == TriBool::True;
}

inline std::optional<GroupElement> halved(const GroupElement& v) {
    if (v.group().is_discrete())
        for (auto& c : v.coords())
            if (numerator(c) % 2 != 0) return std::nullopt;
    return v.scaled(Rational(1, 2));
}

// A monomial of R with value v (slot scale as its coefficient).
inline Element ring_monomial(const RingDescriptor& r, const GroupElement& v) {
    Ambient amb = ambient_of(r);
    Coeff c = 1;
    if (auto s = ring_shape(r))
        if (!s->cut.admits(v))
            if (const Slot* sl = find_slot(*s, v)) c = sl->scale;
    return amb.monomial(c, v);
}

// Deterministic elements of M covering every value class the chain can see.
inline std::vector<Element> structural_probes(const RingDescriptor& r) {
    Ambient amb = ambient_of(r);
    ValueGroup g = amb.group();
    std::vector<GroupElement> vals;
    if (amb.is_padic()) {
        for (int k = 1; k <= 6; ++k) vals.push_back(GroupElement::scalar(g, k));
    } else if (g.is_lex()) {
        std::vector<Rational> mags = {Rational(1), Rational(2), Rational(3)};
        if (!g.is_discrete()) mags.insert(mags.end(), {Rational(1, 2), Rational(3, 2), Rational(19, 10)});
        for (int i = 0; i < g.rank(); ++i)
            for (auto& m : mags) {
                vals.push_back(GroupElement::basis(g, i, m));
                if (i + 1 < g.rank()) vals.push_back(GroupElement::basis(g, i, m) - GroupElement::basis(g, i + 1, 1));
            }
    } else {
        for (auto& q : detail::hahn_probe_keys(r))
            for (auto& m : {Rational(1), Rational(2), Rational(1, 2)}) vals.push_back(GroupElement::basis(g, q, m));
    }
    if (auto s = ring_shape(r))
        for (auto& sl : s->slots) vals.push_back(sl.exp);
    PrimeSpec m = maximal_ideal(r);
    std::vector<Element> out;
    std::vector<GroupElement> seen;
    for (auto& v : vals) {
        if (std::find(seen.begin(), seen.end(), v) != seen.end() || !realizable_in_prime(m, v)) continue;
        seen.push_back(v);
        out.push_back(ring_monomial(r, v));
    }
    return out;
}

// ---------------------------------------------------------------- property (*)

struct StarVerdict {
    bool holds = false;
    bool criteria[3] = {false, false, false}; // dense Goldman family, no three consecutive, no P_a = sqrt<b>
    bool agree = false;
    std::optional<std::pair<Element, Element>> witness; // (a, b) with P_a = sqrt<b>
};

inline StarVerdict property_star(const RingDescriptor& r) {
    StarVerdict v;
    auto probes = structural_probes(r);
    SpecChain chain = spec_chain(r);

    std::vector<ConvexSubgroup> images;
    for (auto& a : probes) {
        ConvexSubgroup h = goldman(r, a).h;
        if (std::find(images.begin(), images.end(), h) == images.end()) images.push_back(h);
    }
    if (chain_is_finite(r)) {
        v.criteria[0] = images.size() <= 1;
    } else {
        bool dense = true;
        for (auto& h : images) {
            auto n = chain_next(r, h);
            if (n && std::find(images.begin(), images.end(), *n) != images.end()) dense = false;
        }
        v.criteria[0] = dense;
    }

    bool three = false;
    for (auto& h : chain.members)
        if (auto n = chain_next(r, h))
            if (chain_next(r, *n)) three = true;
    v.criteria[1] = !three;

    for (auto& a : probes) {
        if (v.witness) break;
        ConvexSubgroup pa = goldman(r, a).h;
        for (auto& b : probes)
            if (radical_principal(r, b).h == pa) {
                v.witness = std::make_pair(a, b);
                break;
            }
    }
    v.criteria[2] = !v.witness;
    v.agree = v.criteria[0] == v.criteria[1] && v.criteria[1] == v.criteria[2];
    v.holds = v.criteria[0] && v.criteria[1] && v.criteria[2];
    return v;
}

// ---------------------------------------------------------------- strongly prime

struct PairWitness {
    Element x, y;
};

// x, y in K with xy in p and neither in p.
inline bool refutes_strongly_prime(const PrimeSpec& p, const Element& x, const Element& y) {
    return prime_contains(p, x * y) == TriBool::True && prime_contains(p, x) == TriBool::False &&
           prime_contains(p, y) == TriBool::False;
}

inline std::optional<PairWitness> strongly_prime_monomial_search(const PrimeSpec& p) {
    if (p.is_zero()) return std::nullopt;
    Ambient amb = ambient_of(p.ring);
    ValueGroup g = amb.group();
    Gap boundary = p.cut();
    if (auto s = ring_shape(p.ring)) boundary = std::max(boundary, s->cut);
    std::vector<GroupElement> deltas;
    if (!boundary.is_nothing()) {
        deltas.push_back(boundary.shift());
        for (auto& eta : elements_just_above(boundary.subgroup())) deltas.push_back(boundary.shift() + eta);
        deltas.push_back(boundary.shift() + boundary.shift());
    }
    for (auto& d : deltas) {
        if (g.is_discrete()) {
            bool even = true;
            for (auto& c : d.coords()) even = even && numerator(c) % 2 == 0;
            if (!even) continue;
        }
        Element x = amb.monomial(1, d.scaled(Rational(1, 2)));
        if (refutes_strongly_prime(p, x, x)) return PairWitness{x, x};
    }
    return std::nullopt;
}

// z in p, x in K, y = z/x.
inline std::optional<PairWitness> strongly_prime_sampled_search(const PrimeSpec& p, const Sampler& s, std::size_t samples,
                                                               std::size_t* tried = nullptr) {
    Ambient amb = ambient_of(p.ring);
    for (std::size_t i = 0; i < samples; ++i) {
        if (tried) *tried = i + 1;
        auto rng = s.stream("strongly_prime", i);
        auto z = s.in_prime(rng, p);
        if (!z) continue;
        Element x = s.field_element(rng, amb);
        Element y = *z / x;
        if (refutes_strongly_prime(p, x, y)) return PairWitness{x, y};
    }
    return std::nullopt;
}

struct PseudoValuationResult {
    bool value;
    bool structural;
    std::optional<PairWitness> witness;
    std::size_t samples = 0;
};

inline bool is_prime_cut(const Gap& c) { return c == Gap::above_subgroup(c.subgroup()); }

inline PseudoValuationResult is_pseudo_valuation(const RingDescriptor& r, const Sampler& s, std::size_t samples = 10000) {
    const RingDescriptor& rr = resolve(r);
    if (rr.get<ValuationRing>()) return {true, true, std::nullopt};
    if (auto d = rr.get<DPlusRing>(); d && d->monomials.size() == 1 && is_prime_cut(d->cut)) return {true, true, std::nullopt};
    PrimeSpec m = maximal_ideal(r);
    if (auto w = strongly_prime_monomial_search(m)) return {false, true, w};
    std::size_t tried = 0;
    auto w = strongly_prime_sampled_search(m, s, samples, &tried);
    return {!w.has_value(), false, w, tried};
}

// ---------------------------------------------------------------- divided / fragmented

// Every prime p has R + pR_p = R.
inline bool is_divided_structural(const RingDescriptor& r) {
    for (auto& h : spec_chain(r).members)
        if (!cpi_extension({r, h}).equals_r) return false;
    return true;
}

inline bool is_fragmented(const RingDescriptor& r) {
    if (!is_divided_structural(r))
        throw domain_error("is_fragmented needs a divided ring; the divided check fails for " + display_name(r));
    return !immediate_predecessor(maximal_ideal(r)).has_value();
}

// ---------------------------------------------------------------- rings without a predecessor of M

struct NippItem {
    std::string id;
    enum class Status { Pass, Fail, OutOfScope } status;
    std::string detail;
};

inline const char* to_string(NippItem::Status s) {
    switch (s) {
    case NippItem::Status::Pass: return "pass";
    case NippItem::Status::Fail: return "fail";
    case NippItem::Status::OutOfScope: return "out_of_scope";
    }
    return "?";
}

struct NippReport {
    bool precondition_ok;
    std::optional<ConvexSubgroup> predecessor;
    std::vector<NippItem> items;

    bool all_pass() const {
        for (auto& i : items)
            if (i.status == NippItem::Status::Fail) return false;
        return true;
    }
};

// M^{-1} when M is a cut; nullopt otherwise.
inline std::optional<Gap> maximal_inverse_cut(const RingDescriptor& r) {
    auto ms = IdealObject::maximal(r).shape();
    auto core = core_cut(r);
    if (!ms || !core || !ms->slots.empty()) return std::nullopt;
    return ms->cut.residual_into(*core);
}

// ⋂ over a in M of the subgroups of R_{P_a}.
inline ConvexSubgroup goldman_infimum(const RingDescriptor& r) {
    if (!chain_is_finite(r)) return dense_chain(r).threshold;
    std::optional<ConvexSubgroup> best;
    for (auto& a : structural_probes(r)) {
        ConvexSubgroup h = goldman(r, a).h;
        if (!best || h < *best) best = h;
    }
    return best ? *best : unit_subgroup(r);
}

inline NippReport nipp_suite(const RingDescriptor& r, const Sampler& s, std::size_t samples = 500, bool enforce_precondition = true) {
    NippReport rep;
    auto pred = immediate_predecessor(maximal_ideal(r));
    rep.precondition_ok = !pred;
    if (pred) {
        rep.predecessor = pred->h;
        if (enforce_precondition)
            throw domain_error("the maximal ideal has an immediate predecessor: the prime above " + pred->h.to_string());
    }
    using St = NippItem::Status;
    Ambient amb = ambient_of(r);

    auto pv = is_pseudo_valuation(r, s, samples);
    rep.items.push_back({"1", pv.value ? St::Pass : St::Fail,
                         pv.value ? "pseudo-valuation ring" : "maximal ideal not strongly prime: x = " + to_string(pv.witness->x)});

    {
        IdealObject m = IdealObject::maximal(r);
        std::size_t bad = 0;
        std::string first;
        for (std::size_t i = 0; i < samples; ++i) {
            auto rng = s.stream("nipp.index", i);
            Element a = s.in_maximal(rng, r);
            IndexClass k = quotient_index_class(m, IdealObject::principal(r, a));
            if (k.finite && !bad++) first = to_string(a);
        }
        rep.items.push_back({"2", bad ? St::Fail : St::Pass,
                             bad ? std::to_string(bad) + " samples with M/<a> finite, first a = " + first
                                 : "M/<a> infinite on " + std::to_string(samples) + " samples"});
    }

    rep.items.push_back({"3", St::OutOfScope, "type-definable connected component; not computable here"});

    {
        auto inv = maximal_inverse_cut(r);
        ConvexSubgroup hint = goldman_infimum(r);
        std::string overring, meet;
        if (!inv) overring = "maximal ideal is not a cut";
        else if (!(*inv == Gap::from_subgroup(inv->subgroup()))) overring = "M^-1 = {v " + inv->to_string() + "} is not a valuation ring";
        else if (!(inv->subgroup() == unit_subgroup(r)) || *core_cut(r) > Gap::above_subgroup(inv->subgroup()))
            overring = "maximal ideal of M^-1 differs from M";
        if (overring.empty()) {
            std::size_t violations = 0;
            for (std::size_t i = 0; i < 100; ++i) {
                auto rng = s.stream("nipp.inverse", i);
                Element x = s.field_element(rng, amb);
                Element m = s.in_maximal(rng, r);
                bool in_inv = inv->admits(*value_of(x));
                if (in_inv && contains(r, x * m) == TriBool::False) ++violations;
                if (!in_inv) {
                    // some m' in M with x m' outside R
                    GroupElement half = (-*value_of(x)).scaled(Rational(1, 2));
                    bool refuted = contains(r, x * m) == TriBool::False;
                    if (!refuted && !amb.group().is_discrete() && realizable_in_prime(maximal_ideal(r), half))
                        refuted = contains(r, x * ring_monomial(r, half)) == TriBool::False;
                    if (!refuted) ++violations;
                }
            }
            if (violations) overring = std::to_string(violations) + " sampled violations of xM ⊆ R";
        }
        if (inv && !(inv->subgroup() == hint))
            meet = "M^-1 has subgroup " + inv->subgroup().to_string() + " but the R_{P_a} meet to subgroup " + hint.to_string();
        std::string detail = overring.empty() ? "M^-1 = O_" + inv->subgroup().to_string() + " is a valuation overring with maximal ideal M (100 probes)"
                                              : overring;
        detail += meet.empty() ? "; equals the intersection of the R_{P_a}" : "; " + meet;
        rep.items.push_back({"4", overring.empty() && meet.empty() ? St::Pass : St::Fail, detail});
    }

    {
        std::size_t bad = 0;
        std::string first;
        for (std::size_t i = 0; i < samples; ++i) {
            auto rng = s.stream("nipp.square", i);
            Element a = s.in_maximal(rng, r), b = s.in_maximal(rng, r);
            auto d = divided_exponent(r, a, b, 2);
            if (d.kind != DividedResult::Kind::InPrincipal && d.kind != DividedResult::Kind::MinExp && !bad++)
                first = "a = " + to_string(a) + ", b = " + to_string(b);
        }
        rep.items.push_back({"5", bad ? St::Fail : St::Pass,
                             bad ? std::to_string(bad) + " pairs with a ∉ <b> and b^2 ∉ <a>, first " + first
                                 : "a ∈ <b> or b^2 ∈ <a> on " + std::to_string(samples) + " pairs"});
    }
    return rep;
}

// a, b in M with a ∉ <b> and b^2 ∉ <a>.
inline std::optional<std::pair<Element, Element>> square_rule_counterexample(const RingDescriptor& r, const Sampler& s, std::size_t samples) {
    auto fails = [&](const Element& a, const Element& b) {
        return ideal_contains(r, b, a) == TriBool::False && ideal_contains(r, a, b * b) == TriBool::False;
    };
    auto probes = structural_probes(r);
    for (auto& a : probes)
        for (auto& b : probes)
            if (fails(a, b)) return std::make_pair(a, b);
    for (std::size_t i = 0; i < samples; ++i) {
        auto rng = s.stream("square_rule", i);
        Element a = s.in_maximal(rng, r), b = s.in_maximal(rng, r);
        if (fails(a, b)) return std::make_pair(a, b);
    }
    return std::nullopt;
}

} // namespace spectra_lab
