#pragma once

// Ring descriptors with decidable membership and the ideal calculus on them.
//
// Most rings here have a "shape": finitely many slots scale*F_{p^d}*t^gamma
// below a cut, plus the full cut {v in cut}. The shape records the graded
// pieces of the ring (leading coefficients available at each value) and is
// what index counts and inclusion tests run on.

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ambient.hpp"
#include "tribool.hpp"

namespace spectra_lab {

// ---------------------------------------------------------------- shapes

struct Slot {
    GroupElement exp;
    Coeff scale;      // nonzero
    unsigned degree;  // scale * F_{p^degree}
};

struct Shape {
    Ambient amb;
    std::vector<Slot> slots; // ascending, all below the cut
    Gap cut;
};

inline bool in_scaled_subfield(const CoeffField& f, Coeff c, Coeff scale, unsigned degree) {
    if (c == 0) return true;
    return f.in_subfield(f.div(c, scale), degree);
}

// c1*F_{d1} subset of c2*F_{d2}
inline bool scaled_subset(const CoeffField& f, Coeff c1, unsigned d1, Coeff c2, unsigned d2) {
    return d2 % d1 == 0 && f.in_subfield(f.div(c1, c2), d2);
}

inline Integer ipow(Integer b, unsigned e) {
    Integer r = 1;
    while (e--) r *= b;
    return r;
}

inline const Slot* find_slot(const Shape& s, const GroupElement& e) {
    for (auto& sl : s.slots)
        if (sl.exp == e) return &sl;
    return nullptr;
}

// Drop slots swallowed by the cut; in Z^n lex a full-field slot just below a
// point cut is part of the cut.
inline Shape normalized(Shape s) {
    const CoeffField& f = *s.amb.field();
    std::vector<Slot> kept;
    for (auto& sl : s.slots)
        if (!s.cut.admits(sl.exp)) kept.push_back(sl);
    s.slots = std::move(kept);
    const ValueGroup g = s.amb.group();
    if (g.is_discrete()) {
        while (s.cut.is_point() && s.cut.side() == Gap::Side::Bottom && !s.slots.empty()) {
            std::vector<Rational> step(g.rank(), Rational(0));
            step.back() = 1;
            GroupElement below = s.cut.shift() - GroupElement::from_coords(g, step);
            const Slot& last = s.slots.back();
            if (!(last.exp == below) || last.degree != f.degree()) break;
            s.cut = Gap::at_least(below);
            s.slots.pop_back();
        }
    }
    return s;
}

// Size of the graded piece at value delta.
inline Integer graded_size(const Shape& s, const GroupElement& delta) {
    const CoeffField& f = *s.amb.field();
    if (s.cut.admits(delta)) return Integer(f.size());
    if (const Slot* sl = find_slot(s, delta)) return ipow(f.characteristic(), sl->degree);
    return 1;
}

inline bool shape_has_monomial(const Shape& s, Coeff c, const GroupElement& delta) {
    if (c == 0 || s.cut.admits(delta)) return true;
    const Slot* sl = find_slot(s, delta);
    return sl && in_scaled_subfield(*s.amb.field(), c, sl->scale, sl->degree);
}

// inner subset of outer, for normalized shapes.
inline bool shape_subset(const Shape& inner, const Shape& outer) {
    if (inner.cut < outer.cut) return false;
    const CoeffField& f = *outer.amb.field();
    for (auto& sl : inner.slots) {
        if (outer.cut.admits(sl.exp)) continue;
        const Slot* o = find_slot(outer, sl.exp);
        if (!o || !scaled_subset(f, sl.scale, sl.degree, o->scale, o->degree)) return false;
    }
    return true;
}

inline Shape shape_meet_cut(const Shape& s, const Gap& c) {
    Shape r{s.amb, {}, std::max(s.cut, c)};
    for (auto& sl : s.slots)
        if (c.admits(sl.exp)) r.slots.push_back(sl);
    return normalized(std::move(r));
}

// Graded pieces of c*t^delta*S.
inline Shape shape_scaled(const Shape& s, Coeff c, const GroupElement& delta) {
    const CoeffField& f = *s.amb.field();
    Shape r{s.amb, {}, s.cut.shifted(delta)};
    for (auto& sl : s.slots) r.slots.push_back({sl.exp + delta, f.mul(sl.scale, c), sl.degree});
    return normalized(std::move(r));
}

inline std::string to_string(const Shape& s) {
    std::string out;
    const CoeffField& f = *s.amb.field();
    for (auto& sl : s.slots) {
        std::string fld = "F_" + std::to_string(f.characteristic()) + (sl.degree > 1 ? "^" + std::to_string(sl.degree) : "");
        if (sl.scale != 1) fld = f.to_string(sl.scale) + "*" + fld;
        out += fld + (sl.exp.is_zero() ? "" : "*t^{" + sl.exp.to_short_string() + "}") + " + ";
    }
    return out + "{v " + s.cut.to_string() + "}";
}

// Small positive elements sitting just above the subgroup h, for witness search.
inline std::vector<GroupElement> elements_just_above(const ConvexSubgroup& h) {
    std::vector<GroupElement> out;
    const ValueGroup& g = h.group();
    if (h.is_whole()) return out;
    if (g.is_lex()) {
        int m = h.lex_cut_index(); // coordinates >= m lie in h
        if (m == 0) return out;
        for (int k = 0; k < 4; ++k) {
            if (g.is_discrete() && k > 0) break;
            out.push_back(GroupElement::basis(g, m - 1, Rational(1, 1 << k)));
            if (g.is_discrete()) out.push_back(GroupElement::basis(g, m - 1, 2));
        }
        return out;
    }
    for (int k = 0; k < 4; ++k) {
        Rational c(1, 1 << k);
        if (h.is_trivial()) {
            out.push_back(GroupElement::basis(g, Rational(-k), c));
        } else if (h.closed()) {
            out.push_back(GroupElement::basis(g, h.bound() + Rational(1, 1 << k), 1));
        } else {
            out.push_back(GroupElement::basis(g, h.bound(), c));
        }
    }
    return out;
}

// Values admitted by lo but not by hi (a few candidates; empty if none found).
inline std::vector<GroupElement> values_strictly_between(const Gap& lo, const Gap& hi) {
    std::vector<GroupElement> cand, out;
    for (const Gap* gp : {&lo, &hi}) {
        const Gap& gap = *gp;
        if (gap.is_nothing() || gap.is_everything()) continue;
        cand.push_back(gap.shift());
        for (auto& eta : elements_just_above(gap.subgroup())) {
            cand.push_back(gap.shift() + eta);
            cand.push_back(gap.shift() - eta);
        }
    }
    const ValueGroup g = lo.group();
    if (!g.is_discrete() && !lo.is_everything() && !hi.is_nothing()) cand.push_back((lo.shift() + hi.shift()).scaled(Rational(1, 2)));
    if (lo.is_everything() && !hi.is_nothing()) {
        for (auto& eta : elements_just_above(ConvexSubgroup::trivial(g))) cand.push_back(hi.shift() - eta.scaled(64));
    }
    if (hi.is_nothing() && !lo.is_everything()) {
        for (auto& eta : elements_just_above(ConvexSubgroup::trivial(g))) cand.push_back(lo.shift() + eta.scaled(64));
    }
    if (g.is_discrete()) {
        auto pts = values_between(lo, hi);
        cand.insert(cand.end(), pts.begin(), pts.end());
    }
    for (auto& c : cand)
        if (lo.admits(c) && !hi.admits(c) && std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
    return out;
}

// An element of outer that is not in inner, from the shapes alone.
inline std::optional<Element> shape_witness(const Shape& inner, const Shape& outer) {
    const CoeffField& f = *outer.amb.field();
    auto non_member_coeff = [&](const Shape& s, const GroupElement& delta, const std::vector<Coeff>& pool) -> std::optional<Coeff> {
        for (Coeff c : pool)
            if (c != 0 && !shape_has_monomial(s, c, delta)) return c;
        return std::nullopt;
    };
    std::vector<Coeff> all;
    for (Coeff c = 1; c < f.size(); ++c) all.push_back(c);
    for (auto& sl : outer.slots) {
        std::vector<Coeff> pool;
        for (Coeff c = 1; c < f.size(); ++c)
            if (in_scaled_subfield(f, c, sl.scale, sl.degree)) pool.push_back(c);
        if (auto c = non_member_coeff(inner, sl.exp, pool)) return outer.amb.monomial(*c, sl.exp);
    }
    if (outer.cut < inner.cut) {
        for (auto& delta : values_strictly_between(outer.cut, inner.cut))
            if (auto c = non_member_coeff(inner, delta, all)) return outer.amb.monomial(*c, delta);
    }
    return std::nullopt;
}

// ---------------------------------------------------------------- descriptors

struct RingDescriptor;

// O_h = {x : v(x) >= 0 or v(x) in h}; h trivial is the valuation ring itself, h whole the field.
struct ValuationRing {
    Ambient amb;
    ConvexSubgroup h;
};

// F*t^0 + F*t^g1 + ... + {v in cut}, F = F_{p^degree} inside F_{p^k}.
struct DPlusRing {
    HahnAmbient amb;
    unsigned degree;
    std::vector<GroupElement> monomials;
    Gap cut;
};

// {0..p-1} + {v >= 1} inside Q_p(pi).
struct PadicDRing {
    unsigned p;
    int prec2 = default_prec2;
};

// (fractions supported on h, with v >= 0) + J. Not divided when J sits strictly
// inside the prime above h.
struct PullbackRing {
    HahnAmbient amb;
    ConvexSubgroup h;
    Gap j;
};

// R + p R_p, stored with its resolved descriptor.
struct CPIRing {
    std::shared_ptr<const RingDescriptor> base;
    ConvexSubgroup prime;
    std::shared_ptr<const RingDescriptor> resolved;
};

struct RingDescriptor {
    std::variant<ValuationRing, DPlusRing, PadicDRing, PullbackRing, CPIRing> v;
    std::string label; // optional human name, e.g. "E:equip"

    template <class T>
    const T* get() const { return std::get_if<T>(&v); }
};

inline Ambient ambient_of(const RingDescriptor& r) {
    struct V {
        Ambient operator()(const ValuationRing& x) const { return x.amb; }
        Ambient operator()(const DPlusRing& x) const { return Ambient(x.amb); }
        Ambient operator()(const PadicDRing& x) const { return Ambient::padic(x.p, x.prec2); }
        Ambient operator()(const PullbackRing& x) const { return Ambient(x.amb); }
        Ambient operator()(const CPIRing& x) const { return ambient_of(*x.resolved); }
    };
    return std::visit(V{}, r.v);
}

inline const RingDescriptor& resolve(const RingDescriptor& r) {
    if (auto c = r.get<CPIRing>()) return resolve(*c->resolved);
    return r;
}

inline RingDescriptor make_valuation_ring(const Ambient& amb, std::string label = {}) {
    return {ValuationRing{amb, ConvexSubgroup::trivial(amb.group())}, std::move(label)};
}

inline RingDescriptor make_coarsening(const Ambient& amb, const ConvexSubgroup& h, std::string label = {}) {
    if (!(h.group() == amb.group())) throw structural_error("coarsening subgroup is not in the ambient value group");
    return {ValuationRing{amb, h}, std::move(label)};
}

inline RingDescriptor make_padic_val(unsigned p, int prec2 = default_prec2, std::string label = {}) {
    return make_valuation_ring(Ambient::padic(p, prec2), std::move(label));
}

inline RingDescriptor make_padic_d(unsigned p, int prec2 = default_prec2, std::string label = {}) {
    if (p % 2 == 0 || !is_prime(p)) throw domain_error("padic_d needs an odd prime p (p != 2), got p=" + std::to_string(p));
    return {PadicDRing{p, prec2}, std::move(label)};
}

inline RingDescriptor make_d_plus(const HahnAmbient& amb, unsigned degree, std::vector<GroupElement> monomials, const Gap& cut,
                                  std::string label = {}) {
    const CoeffField& f = *amb.field;
    if (!f.divides_degree(degree))
        throw domain_error("subfield degree " + std::to_string(degree) + " does not divide " + std::to_string(f.degree()));
    if (monomials.empty() || !monomials.front().is_zero()) throw domain_error("monomial list must start with exponent 0");
    if (!(cut.group() == amb.group)) throw structural_error("ideal cut is not over the ambient value group");
    GroupElement zero = GroupElement::zero(amb.group);
    if (cut < Gap::at_least(zero)) throw domain_error("ideal cut must be >= 0 (an ideal of the valuation ring), got " + cut.to_string());
    for (std::size_t i = 0; i < monomials.size(); ++i) {
        if (!(monomials[i].group() == amb.group)) throw structural_error("monomial exponent from another group");
        if (i && !(monomials[i - 1] < monomials[i])) throw domain_error("monomial exponents must be strictly increasing");
        if (cut.admits(monomials[i]))
            throw domain_error("monomial exponent " + monomials[i].to_short_string() + " is not below the ideal cut " + cut.to_string());
    }
    for (auto& a : monomials)
        for (auto& b : monomials) {
            GroupElement s = a + b;
            if (!cut.admits(s) && std::find(monomials.begin(), monomials.end(), s) == monomials.end())
                throw domain_error("not closed under multiplication: exponent " + s.to_short_string() + " is neither listed nor in the cut");
        }
    return {DPlusRing{amb, degree, std::move(monomials), cut}, std::move(label)};
}

inline RingDescriptor make_pullback(const HahnAmbient& amb, const ConvexSubgroup& h, const Gap& j, std::string label = {}) {
    if (!amb.group.is_lex()) throw structural_error("pullback rings are supported over lexicographic groups only");
    if (h.is_whole() || h.is_trivial()) throw domain_error("pullback subgroup must be proper and nontrivial");
    if (j < Gap::above_subgroup(h)) throw domain_error("pullback ideal must lie inside the prime above the subgroup");
    return {PullbackRing{amb, h, j}, std::move(label)};
}

// Subgroup of values of units: v(u) in h for units u.
inline ConvexSubgroup unit_subgroup(const RingDescriptor& r) {
    const RingDescriptor& rr = resolve(r);
    if (auto x = rr.get<ValuationRing>()) return x->h;
    return ConvexSubgroup::trivial(ambient_of(rr).group());
}

inline bool is_valuation_variant(const RingDescriptor& r) { return resolve(r).get<ValuationRing>() != nullptr; }

inline std::optional<Shape> ring_shape(const RingDescriptor& r) {
    const RingDescriptor& rr = resolve(r);
    if (auto x = rr.get<ValuationRing>()) return normalized(Shape{x->amb, {}, Gap::from_subgroup(x->h)});
    if (auto x = rr.get<DPlusRing>()) {
        Shape s{Ambient(x->amb), {}, x->cut};
        for (auto& m : x->monomials) s.slots.push_back({m, 1, x->degree});
        return normalized(std::move(s));
    }
    if (auto x = rr.get<PadicDRing>()) {
        ValueGroup g = ValueGroup::int_lex(1);
        return normalized(Shape{Ambient::padic(x->p, x->prec2), {{GroupElement::zero(g), 1, 1}}, Gap::at_least(GroupElement::scalar(g, 2))});
    }
    return std::nullopt;
}

// Largest ideal of the ambient valuation ring contained in R.
inline std::optional<Gap> core_cut(const RingDescriptor& r) {
    if (auto s = ring_shape(r)) return s->cut;
    if (auto x = resolve(r).get<PullbackRing>()) return x->j;
    return std::nullopt;
}

inline std::string describe(const RingDescriptor& r) {
    struct V {
        std::string operator()(const ValuationRing& x) const {
            if (x.amb.is_padic()) {
                if (x.h.is_trivial()) return "padic_val(p=" + std::to_string(x.amb.as_padic().p) + ")";
                return "padic_field(p=" + std::to_string(x.amb.as_padic().p) + ")";
            }
            std::string base = "over " + x.amb.to_string();
            if (x.h.is_trivial()) return "valuation(" + base + ")";
            return "coarsening(H=" + x.h.to_string() + ", " + base + ")";
        }
        std::string operator()(const DPlusRing& x) const {
            std::string m;
            for (std::size_t i = 0; i < x.monomials.size(); ++i) m += (i ? ", " : "") + x.monomials[i].to_short_string();
            return "d_plus(F=F_" + std::to_string(x.amb.field->characteristic()) + "^" + std::to_string(x.degree) + ", monomials=[" + m +
                   "], ideal=" + x.cut.to_string() + ", over " + Ambient(x.amb).to_string() + ")";
        }
        std::string operator()(const PadicDRing& x) const { return "padic_d(p=" + std::to_string(x.p) + ")"; }
        std::string operator()(const PullbackRing& x) const {
            return "pullback(H=" + x.h.to_string() + ", J=" + x.j.to_string() + ", over " + Ambient(x.amb).to_string() + ")";
        }
        std::string operator()(const CPIRing& x) const {
            return "cpi(base=" + describe(*x.base) + ", prime above " + x.prime.to_string() + ") = " + describe(*x.resolved);
        }
    };
    return std::visit(V{}, r.v);
}

inline std::string kind_name(const RingDescriptor& r) {
    struct V {
        std::string operator()(const ValuationRing& x) const {
            if (x.amb.is_padic()) return "padic_val";
            return x.h.is_trivial() ? "valuation" : "coarsening";
        }
        std::string operator()(const DPlusRing&) const { return "d_plus"; }
        std::string operator()(const PadicDRing&) const { return "padic_d"; }
        std::string operator()(const PullbackRing&) const { return "pullback"; }
        std::string operator()(const CPIRing&) const { return "cpi"; }
    };
    return std::visit(V{}, r.v);
}

inline std::string display_name(const RingDescriptor& r) { return r.label.empty() ? describe(r) : r.label; }

// ---------------------------------------------------------------- membership

namespace detail {

inline TriBool valuation_contains(const ValuationRing& x, const Element& e) {
    if (is_padic(e)) {
        const PiAdic& a = as_piadic(e);
        if (x.h.is_whole()) return TriBool::True;
        if (a.is_zero()) return a.prec2() >= 0 ? TriBool::True : TriBool::Unknown;
        return to_tri(a.val2() >= 0);
    }
    auto v = as_series(e).valuation();
    if (!v) return TriBool::True;
    return to_tri(Gap::from_subgroup(x.h).admits(*v));
}

inline TriBool d_plus_contains(const DPlusRing& r, const FieldElement& x) {
    const CoeffField& f = *r.amb.field;
    FieldElement cur = x;
    std::size_t next = 0;
    while (!cur.is_zero()) {
        GroupElement v = *cur.valuation();
        if (r.cut.admits(v)) return TriBool::True;
        while (next < r.monomials.size() && r.monomials[next] < v) ++next;
        if (next == r.monomials.size() || !(r.monomials[next] == v)) return TriBool::False;
        Peeled p = cur.peel();
        if (!f.in_subfield(p.lead_coeff, r.degree)) return TriBool::False;
        cur = std::move(p.rest);
        ++next;
    }
    return TriBool::True;
}

inline TriBool padic_d_contains(const PiAdic& a) {
    if (!a.is_zero() && a.val2() < 0) return TriBool::False;
    auto d1 = a.digit_at(1);
    if (!d1) return TriBool::Unknown;
    if (*d1 != 0) return TriBool::False;
    return a.prec2() >= 2 ? TriBool::True : TriBool::Unknown;
}

// Part of a series whose exponents lie in the coset of its leading exponent.
inline Series leading_coset_part(const Series& s, const ConvexSubgroup& h) {
    std::vector<Series::Term> keep;
    const GroupElement& lead = s.min_exponent();
    for (auto& t : s.terms())
        if (h.contains(t.first - lead)) keep.push_back(t);
    return Series::from_terms(s.group(), s.field(), keep);
}

inline TriBool pullback_contains(const PullbackRing& r, const FieldElement& x) {
    auto v = x.valuation();
    if (!v) return TriBool::True;
    if (v->sign() < 0) return TriBool::False;
    if (!r.h.contains(*v)) return to_tri(r.j.admits(*v));
    FieldElement head(leading_coset_part(x.num(), r.h), leading_coset_part(x.den(), r.h));
    FieldElement tail = x - head;
    if (tail.is_zero()) return TriBool::True;
    return to_tri(r.j.admits(*tail.valuation()));
}

} // namespace detail

inline TriBool contains(const RingDescriptor& r, const Element& x) {
    const RingDescriptor& rr = resolve(r);
    check_ambient(ambient_of(rr), x);
    if (auto v = rr.get<ValuationRing>()) return detail::valuation_contains(*v, x);
    if (auto d = rr.get<DPlusRing>()) return detail::d_plus_contains(*d, as_series(x));
    if (rr.get<PadicDRing>()) return detail::padic_d_contains(as_piadic(x));
    if (auto pb = rr.get<PullbackRing>()) return detail::pullback_contains(*pb, as_series(x));
    throw structural_error("unsupported ring variant");
}

// y in gR.
inline TriBool ideal_contains(const RingDescriptor& r, const Element& g, const Element& y) {
    if (is_zero(g)) return to_tri(is_zero(y));
    if (is_zero(y)) return TriBool::True;
    return contains(r, y / g);
}

// ---------------------------------------------------------------- primes and chains

// The prime R ∩ {x : v(x) > h}.
struct PrimeSpec {
    RingDescriptor ring;
    ConvexSubgroup h;

    Gap cut() const { return Gap::above_subgroup(h); }
    bool is_zero() const { return h.is_whole(); }
};

inline bool same_prime(const PrimeSpec& a, const PrimeSpec& b) { return a.h == b.h; }

// Distinct primes of R are R ∩ A(H) for H in the chain set.
inline bool chain_member(const RingDescriptor& r, const ConvexSubgroup& h) {
    const RingDescriptor& rr = resolve(r);
    if (!(h.group() == ambient_of(rr).group())) throw structural_error("subgroup from a different value group");
    if (auto v = rr.get<ValuationRing>()) return v->h <= h;
    if (auto d = rr.get<DPlusRing>()) return h.is_trivial() || Gap::above_subgroup(h) >= d->cut;
    if (rr.get<PadicDRing>()) return true;
    if (auto pb = rr.get<PullbackRing>()) return h <= pb->h || Gap::above_subgroup(h) >= pb->j;
    throw structural_error("unsupported ring variant");
}

// Hahn-group chains are {H >= threshold} plus possibly the trivial subgroup.
struct DenseChain {
    ConvexSubgroup threshold;
    bool includes_trivial;
};

inline DenseChain dense_chain(const RingDescriptor& r) {
    const RingDescriptor& rr = resolve(r);
    ValueGroup g = ambient_of(rr).group();
    if (g.is_lex()) throw structural_error("dense_chain on a lexicographic group");
    if (auto v = rr.get<ValuationRing>()) return {v->h, v->h.is_trivial()};
    if (auto d = rr.get<DPlusRing>()) {
        const Gap& c = d->cut;
        if (c.is_nothing()) return {ConvexSubgroup::whole(g), true};
        if (c.shift().is_zero()) return {c.subgroup(), true}; // above the subgroup itself
        return {smallest_convex_containing(c.shift()), true};
    }
    throw structural_error("dense chains are available for valuation and d_plus rings only");
}

// Finite chain, from the maximal ideal (trivial H) down to zero (whole H).
inline std::vector<ConvexSubgroup> finite_chain(const RingDescriptor& r) {
    ValueGroup g = ambient_of(r).group();
    std::vector<ConvexSubgroup> out;
    for (auto& h : lex_convex_subgroups(g))
        if (chain_member(r, h)) out.push_back(h);
    return out;
}

inline bool chain_is_finite(const RingDescriptor& r) { return ambient_of(r).group().is_lex(); }

// Next larger member of the chain (the prime immediately below R ∩ A(h)), if adjacent.
inline std::optional<ConvexSubgroup> chain_next(const RingDescriptor& r, const ConvexSubgroup& h) {
    if (chain_is_finite(r)) {
        auto c = finite_chain(r);
        for (std::size_t i = 0; i + 1 < c.size(); ++i)
            if (c[i] == h) return c[i + 1];
        return std::nullopt;
    }
    DenseChain dc = dense_chain(r);
    if (h.is_whole()) return std::nullopt;
    if (h.is_trivial()) {
        if (dc.threshold.is_trivial()) return std::nullopt;
        if (dc.threshold.kind() == ConvexSubgroup::Kind::UpTo || dc.threshold.is_whole()) return dc.threshold;
        return std::nullopt;
    }
    if (!h.closed()) {
        auto up = ConvexSubgroup::up_to(h.group(), h.bound(), true);
        if (chain_member(r, up)) return up;
    }
    return std::nullopt;
}

// Next smaller member of the chain (the prime immediately above), if adjacent.
inline std::optional<ConvexSubgroup> chain_prev(const RingDescriptor& r, const ConvexSubgroup& h) {
    if (chain_is_finite(r)) {
        auto c = finite_chain(r);
        for (std::size_t i = 1; i < c.size(); ++i)
            if (c[i] == h) return c[i - 1];
        return std::nullopt;
    }
    DenseChain dc = dense_chain(r);
    if (h.is_trivial()) return std::nullopt;
    if (h == dc.threshold) {
        if (dc.includes_trivial) return ConvexSubgroup::trivial(h.group());
        return std::nullopt;
    }
    if (!h.is_whole() && h.closed()) {
        auto down = ConvexSubgroup::up_to(h.group(), h.bound(), false);
        if (chain_member(r, down)) return down;
    }
    return std::nullopt;
}

inline PrimeSpec maximal_ideal(const RingDescriptor& r) { return {r, unit_subgroup(r)}; }
inline PrimeSpec zero_prime(const RingDescriptor& r) { return {r, ConvexSubgroup::whole(ambient_of(r).group())}; }

inline TriBool prime_contains(const PrimeSpec& p, const Element& x) {
    if (is_zero(x)) return TriBool::True;
    TriBool in_r = contains(p.ring, x);
    if (in_r != TriBool::True) return in_r;
    return to_tri(p.cut().admits(*value_of(x)));
}

inline void require_in_maximal(const RingDescriptor& r, const Element& a, const char* op) {
    if (is_zero(a)) throw domain_error(std::string(op) + ": zero element");
    if (contains(r, a) == TriBool::False) throw domain_error(std::string(op) + ": element not in the ring");
    if (!Gap::above_subgroup(unit_subgroup(r)).admits(*value_of(a)))
        throw domain_error(std::string(op) + ": element is a unit");
}

// P_a: the largest prime avoiding {a^n}.
inline PrimeSpec goldman(const RingDescriptor& r, const Element& a) {
    require_in_maximal(r, a, "goldman");
    ConvexSubgroup c = smallest_convex_containing(*value_of(a));
    if (chain_is_finite(r)) {
        for (auto& h : finite_chain(r))
            if (c <= h) return {r, h};
        throw domain_error("goldman: no prime avoids the powers of a");
    }
    if (chain_member(r, c)) return {r, c};
    DenseChain dc = dense_chain(r);
    return {r, std::max(c, dc.threshold)};
}

// sqrt<a>: the smallest prime containing a.
inline PrimeSpec radical_principal(const RingDescriptor& r, const Element& a) {
    require_in_maximal(r, a, "radical_principal");
    ConvexSubgroup hb = largest_convex_excluding(*value_of(a));
    if (chain_is_finite(r)) {
        auto c = finite_chain(r);
        for (auto it = c.rbegin(); it != c.rend(); ++it)
            if (*it <= hb) return {r, *it};
        throw domain_error("radical_principal: no prime contains a");
    }
    if (chain_member(r, hb)) return {r, hb};
    DenseChain dc = dense_chain(r);
    if (dc.includes_trivial) return {r, ConvexSubgroup::trivial(hb.group())};
    return {r, dc.threshold};
}

// ---------------------------------------------------------------- ideals

class IdealObject {
public:
    enum class Kind { Cut, Principal };

    static IdealObject ring_cut(RingDescriptor r, Gap c) { return IdealObject(std::move(r), Kind::Cut, std::move(c), std::nullopt); }
    static IdealObject principal(RingDescriptor r, Element g) {
        Gap dummy = Gap::nothing(ambient_of(r).group());
        return IdealObject(std::move(r), Kind::Principal, dummy, std::move(g));
    }
    static IdealObject of_prime(const PrimeSpec& p) { return ring_cut(p.ring, p.cut()); }
    static IdealObject maximal(const RingDescriptor& r) { return of_prime(maximal_ideal(r)); }

    Kind kind() const { return kind_; }
    const RingDescriptor& ring() const { return ring_; }
    const Gap& cut() const { return cut_; }
    const Element& generator() const { return *gen_; }

    TriBool contains(const Element& y) const {
        if (kind_ == Kind::Principal) return ideal_contains(ring_, *gen_, y);
        if (is_zero(y)) return TriBool::True;
        TriBool in_r = spectra_lab::contains(ring_, y);
        if (in_r != TriBool::True) return in_r;
        return to_tri(cut_.admits(*value_of(y)));
    }

    // Graded pieces; nullopt when the ring has no finite shape.
    std::optional<Shape> shape() const {
        auto rs = ring_shape(ring_);
        if (!rs) return std::nullopt;
        if (kind_ == Kind::Cut) return shape_meet_cut(*rs, cut_);
        if (is_zero(*gen_)) return Shape{rs->amb, {}, Gap::nothing(rs->amb.group())};
        return shape_scaled(*rs, leading_coeff(*gen_), *value_of(*gen_));
    }

    std::string to_string() const {
        if (kind_ == Kind::Principal) return "<" + spectra_lab::to_string(*gen_) + ">";
        return "R ∩ {v " + cut_.to_string() + "}";
    }

private:
    IdealObject(RingDescriptor r, Kind k, Gap c, std::optional<Element> g)
        : ring_(std::move(r)), kind_(k), cut_(std::move(c)), gen_(std::move(g)) {}

    static Coeff leading_coeff(const Element& g) {
        if (is_padic(g)) return 1;
        return as_series(g).peel().lead_coeff;
    }

    RingDescriptor ring_;
    Kind kind_;
    Gap cut_;
    std::optional<Element> gen_;
};

// ---------------------------------------------------------------- divided exponent

struct DividedResult {
    enum class Kind { InPrincipal, MinExp, Exceeded, Unknown };
    Kind kind;
    int n = 0;

    std::string to_string() const {
        switch (kind) {
        case Kind::InPrincipal: return "InPrincipal";
        case Kind::MinExp: return "MinExp(" + std::to_string(n) + ")";
        case Kind::Exceeded: return "Exceeded";
        case Kind::Unknown: return "Unknown";
        }
        return "?";
    }
};

// a in bR, else the least n <= n_max with b^n in aR.
inline DividedResult divided_exponent(const RingDescriptor& r, const Element& a, const Element& b, int n_max) {
    if (is_zero(a) || is_zero(b)) throw domain_error("divided_exponent: zero input");
    if (n_max < 1) throw domain_error("divided_exponent: n_max must be >= 1");
    TriBool in = ideal_contains(r, b, a);
    if (in == TriBool::True) return {DividedResult::Kind::InPrincipal, 0};
    bool unknown = in == TriBool::Unknown;
    Element bn = b;
    for (int n = 1; n <= n_max; ++n) {
        if (n > 1) bn = bn * b;
        TriBool t = ideal_contains(r, a, bn);
        if (t == TriBool::True) return {unknown ? DividedResult::Kind::Unknown : DividedResult::Kind::MinExp, n};
        if (t == TriBool::Unknown) unknown = true;
    }
    return {unknown ? DividedResult::Kind::Unknown : DividedResult::Kind::Exceeded, 0};
}

// ---------------------------------------------------------------- colon and inverse

// I:I for an ideal cut I of the ambient valuation ring.
inline RingDescriptor colon_self(const Ambient& amb, const Gap& i) {
    if (i.is_nothing()) throw domain_error("colon_self: zero ideal");
    if (i.admits(GroupElement::zero(i.group()))) throw domain_error("colon_self: unit ideal");
    Gap r = i.residual_into(i);
    return make_coarsening(amb, r.subgroup());
}

// I^{-1} = {x : xI ⊆ O} as a fractional cut.
inline Gap inverse_ideal(const Gap& i) {
    if (i.is_nothing()) throw domain_error("inverse_ideal: zero ideal");
    return i.residual_into(Gap::at_least(GroupElement::zero(i.group())));
}

// ---------------------------------------------------------------- index

struct IndexClass {
    bool finite;
    Integer n;

    static IndexClass infinite() { return {false, 0}; }
    std::string to_string() const { return finite ? "Finite(" + n.str() + ")" : "Infinite"; }
    friend bool operator==(const IndexClass& a, const IndexClass& b) { return a.finite == b.finite && (!a.finite || a.n == b.n); }
};

// |I/J| from graded pieces: the product over values of |gr I| / |gr J|.
inline IndexClass index_of_shapes(const Shape& i, const Shape& j) {
    if (!shape_subset(j, i)) throw domain_error("quotient_index_class: J is not contained in I");
    Integer n = 1;
    if (i.cut < j.cut) {
        auto count = count_between(i.cut, j.cut);
        if (!count) return IndexClass::infinite();
        for (auto& delta : values_between(i.cut, j.cut)) n *= Integer(i.amb.field()->size()) / graded_size(j, delta);
    }
    for (auto& sl : i.slots)
        if (!j.cut.admits(sl.exp)) n *= graded_size(i, sl.exp) / graded_size(j, sl.exp);
    return {true, n};
}

inline IndexClass quotient_index_class(const IdealObject& i, const IdealObject& j) {
    auto si = i.shape(), sj = j.shape();
    if (!si || !sj) throw structural_error("quotient_index_class needs rings with a finite graded shape");
    return index_of_shapes(*si, *sj);
}

// ---------------------------------------------------------------- localization and CPI

inline void require_prime(const PrimeSpec& p) {
    if (!chain_member(p.ring, p.h)) throw domain_error("not a prime of the ring: above " + p.h.to_string());
}

inline RingDescriptor localization(const PrimeSpec& p) {
    require_prime(p);
    const RingDescriptor& r = p.ring;
    if (p.h == unit_subgroup(r)) return r;
    return make_coarsening(ambient_of(r), p.h);
}

struct CompareResult {
    enum class Relation { Subset, Superset, Equal, Incomparable, Unknown };
    Relation rel;
    bool structural;
    std::optional<Element> only_in_first;
    std::optional<Element> only_in_second;

    static const char* name(Relation r) {
        switch (r) {
        case Relation::Subset: return "Subset";
        case Relation::Superset: return "Superset";
        case Relation::Equal: return "Equal";
        case Relation::Incomparable: return "Incomparable";
        case Relation::Unknown: return "Unknown";
        }
        return "?";
    }
};

// Supplies probe elements of a ring for sampled comparisons.
using ElementSource = std::function<std::vector<Element>(const RingDescriptor&)>;

namespace detail {

inline std::vector<Element> monomial_probes(const Ambient& amb) {
    std::vector<Element> out;
    ValueGroup g = amb.group();
    std::vector<GroupElement> vals;
    if (g.is_lex()) {
        Rational step = g.is_discrete() ? Rational(1) : Rational(1, 2);
        int n = g.rank();
        int span = n <= 2 ? 4 : 2;
        std::vector<int> idx(n, -span);
        while (true) {
            std::vector<Rational> c;
            for (int i = 0; i < n; ++i) c.push_back(step * idx[i]);
            vals.push_back(GroupElement::from_coords(g, c));
            int k = n - 1;
            while (k >= 0 && ++idx[k] > span) idx[k--] = -span;
            if (k < 0) break;
        }
    } else {
        for (int q = -2; q <= 2; ++q)
            for (int c = -4; c <= 4; ++c)
                if (c) vals.push_back(GroupElement::basis(g, q, Rational(c, 2)));
    }
    std::vector<Coeff> coeffs = {1};
    if (amb.field()->size() > amb.field()->characteristic()) coeffs.push_back(amb.field()->gen_pow(1));
    if (amb.is_padic()) coeffs = {1};
    for (auto& v : vals)
        for (Coeff c : coeffs) out.push_back(amb.monomial(c, v));
    if (amb.is_padic()) {
        // pi-adic units with a nonzero first digit
        unsigned p = amb.as_padic().p;
        for (int k = 0; k < 4; ++k) out.push_back(PiAdic::from_digits(p, k, {1, 1}, amb.prec2()));
    }
    return out;
}

} // namespace detail

inline CompareResult ring_compare(const RingDescriptor& r1, const RingDescriptor& r2, const ElementSource* src = nullptr) {
    Ambient a1 = ambient_of(r1), a2 = ambient_of(r2);
    if (!(a1 == a2)) throw structural_error("ring_compare: different ambient fields " + a1.to_string() + " vs " + a2.to_string());
    using Rel = CompareResult::Relation;
    auto s1 = ring_shape(r1), s2 = ring_shape(r2);
    if (s1 && s2) {
        bool sub = shape_subset(*s1, *s2), sup = shape_subset(*s2, *s1);
        CompareResult res{Rel::Equal, true, std::nullopt, std::nullopt};
        if (!sub) res.only_in_first = shape_witness(*s2, *s1);
        if (!sup) res.only_in_second = shape_witness(*s1, *s2);
        res.rel = sub && sup ? Rel::Equal : sub ? Rel::Subset : sup ? Rel::Superset : Rel::Incomparable;
        return res;
    }
    // Exact witness search over monomials, then sampled probes.
    CompareResult res{Rel::Unknown, false, std::nullopt, std::nullopt};
    auto scan = [&](const std::vector<Element>& xs) {
        for (auto& x : xs) {
            TriBool in1 = contains(r1, x), in2 = contains(r2, x);
            if (!res.only_in_first && in1 == TriBool::True && in2 == TriBool::False) res.only_in_first = x;
            if (!res.only_in_second && in2 == TriBool::True && in1 == TriBool::False) res.only_in_second = x;
        }
    };
    scan(detail::monomial_probes(a1));
    // A pullback lies inside every valuation overring of its ambient ring.
    bool known_sub = resolve(r1).get<PullbackRing>() && is_valuation_variant(r2);
    bool known_sup = resolve(r2).get<PullbackRing>() && is_valuation_variant(r1);
    if (src && !(res.only_in_first && res.only_in_second)) {
        scan((*src)(r1));
        scan((*src)(r2));
    }
    if (res.only_in_first && res.only_in_second) res.rel = Rel::Incomparable;
    else if (res.only_in_first) res.rel = Rel::Superset;
    else if (res.only_in_second) res.rel = Rel::Subset;
    else res.rel = src ? Rel::Equal : Rel::Unknown;
    if ((known_sub && res.rel == Rel::Subset) || (known_sup && res.rel == Rel::Superset)) res.structural = true;
    return res;
}

struct CPIResult {
    RingDescriptor extension;
    bool equals_r;
    std::optional<Element> witness; // in the extension, not in R
};

// R + p R_p.
inline CPIResult cpi_extension(const PrimeSpec& p) {
    require_prime(p);
    const RingDescriptor& r = p.ring;
    const RingDescriptor& rr = resolve(r);
    auto wrap = [&](RingDescriptor ext) {
        return RingDescriptor{CPIRing{std::make_shared<const RingDescriptor>(r), p.h, std::make_shared<const RingDescriptor>(std::move(ext))}, {}};
    };
    if (p.h == unit_subgroup(r) || p.h.is_whole()) return {wrap(rr), true, std::nullopt}; // R_M = R, and 0*R_0 = 0
    if (rr.get<ValuationRing>()) return {wrap(rr), true, std::nullopt};
    Gap prime_local = Gap::above_subgroup(p.h); // p R_p as a cut
    if (auto core = core_cut(rr); core && prime_local >= *core) return {wrap(rr), true, std::nullopt};
    if (auto pb = rr.get<PullbackRing>()) {
        // p R_p is the whole prime above h, and R + that prime is the valuation ring.
        RingDescriptor o = make_valuation_ring(Ambient(pb->amb));
        CompareResult c = ring_compare(rr, o);
        return {wrap(o), c.rel == CompareResult::Relation::Equal, c.only_in_second};
    }
    throw structural_error("cpi_extension: unsupported configuration for " + describe(r));
}

} // namespace spectra_lab
