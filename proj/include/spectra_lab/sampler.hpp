#pragma once

// Seeded element sampler. Every draw is addressed by (label, index): the
// stream for one index never depends on how many other draws happened, so a
// check over n samples is a prefix of the same check over n' > n samples.

#include <cstdint>
#include <random>
#include <string_view>

#include "rings.hpp"

namespace spectra_lab {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Decimal or 0x-hex; anything else is hashed, so mnemonic seeds still work.
inline std::uint64_t parse_seed(std::string_view text) {
    std::string s(text);
    try {
        std::size_t used = 0;
        unsigned long long v = std::stoull(s, &used, 0);
        if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
    return fnv1a64(text);
}

inline const std::string acceptance_seed_text = "0xD1V1DED";
inline const std::uint64_t acceptance_seed = parse_seed(acceptance_seed_text);

enum class CoeffMode { PrimeSubfield, FullField };
enum class DenomMode { Monomial, OnePlusSmall };

struct SamplerConfig {
    std::uint64_t seed = acceptance_seed;
    Rational step = Rational(1, 10); // grid step for divisible components
    int range = 3;                   // coordinates drawn from [-range, range]
    CoeffMode coeff_mode = CoeffMode::FullField;
    DenomMode denom_mode = DenomMode::OnePlusSmall;

    std::string to_string() const {
        return "seed=" + std::to_string(seed) + " step=" + spectra_lab::to_string(step) + " range=" + std::to_string(range) +
               " coeffs=" + (coeff_mode == CoeffMode::FullField ? "full_field" : "prime_subfield") +
               " denominators=" + (denom_mode == DenomMode::OnePlusSmall ? "one_plus_small" : "monomial");
    }
};

class Sampler {
public:
    using Rng = std::mt19937_64;

    explicit Sampler(SamplerConfig cfg = {}) : cfg_(std::move(cfg)) {}

    const SamplerConfig& config() const { return cfg_; }

    Rng stream(std::string_view label, std::uint64_t index) const {
        std::uint64_t s = splitmix64(cfg_.seed ^ splitmix64(fnv1a64(label) + splitmix64(index)));
        return Rng(s);
    }

    // ---- values

    GroupElement positive_value(Rng& rng, const ValueGroup& g) const {
        if (g.is_lex()) {
            int n = g.rank();
            Rational step = g.is_discrete() ? Rational(1) : cfg_.step;
            int top = static_cast<int>(numerator(Rational(cfg_.range) / step));
            std::vector<Rational> c(n, Rational(0));
            int lead = uniform(rng, 0, n - 1);
            c[lead] = step * uniform(rng, 1, top);
            for (int i = lead + 1; i < n; ++i) c[i] = step * uniform(rng, -top, top);
            return GroupElement::from_coords(g, c);
        }
        Rational q = hahn_key(rng);
        GroupElement v = GroupElement::basis(g, q, grid_coeff(rng, true));
        if (coin(rng)) v = v + GroupElement::basis(g, q - Rational(uniform(rng, 1, 4), 2), grid_coeff(rng, false));
        return v;
    }

    GroupElement any_value(Rng& rng, const ValueGroup& g) const {
        int k = uniform(rng, 0, 8);
        if (k == 0) return GroupElement::zero(g);
        GroupElement v = positive_value(rng, g);
        return k % 2 ? v : -v;
    }

    // ---- coefficients

    Coeff coeff(Rng& rng, const CoeffField& f) const {
        if (cfg_.coeff_mode == CoeffMode::PrimeSubfield) return static_cast<Coeff>(uniform(rng, 1, static_cast<int>(f.characteristic()) - 1));
        return static_cast<Coeff>(uniform(rng, 1, static_cast<int>(f.size()) - 1));
    }

    Coeff coeff_in(Rng& rng, const CoeffField& f, Coeff scale, unsigned degree) const {
        auto elems = f.subfield_elements(degree);
        Coeff c;
        do c = elems[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(elems.size()) - 1))];
        while (c == 0);
        return f.mul(c, scale);
    }

    // ---- elements

    // Some unit of the ambient valuation ring with leading coefficient 1.
    Element unit(Rng& rng, const Ambient& amb) const {
        if (amb.is_padic()) return padic_from(rng, amb, 0, false);
        if (cfg_.denom_mode == DenomMode::Monomial || coin(rng)) return amb.one();
        const auto& h = amb.as_hahn();
        GroupElement eps = positive_value(rng, h.group);
        Element small = amb.monomial(coeff(rng, *h.field), eps);
        return coin(rng) ? amb.one() / (amb.one() + small) : amb.one() + small;
    }

    // Nonzero element of the fraction field.
    Element field_element(Rng& rng, const Ambient& amb) const {
        if (amb.is_padic()) {
            int top = 2 * cfg_.range;
            return padic_from(rng, amb, uniform(rng, -top, top), false);
        }
        const auto& h = amb.as_hahn();
        return amb.monomial(coeff(rng, *h.field), any_value(rng, h.group)) * unit(rng, amb);
    }

    // Element of R with value delta (delta must be admitted by the ring shape).
    Element element_at(Rng& rng, const RingDescriptor& r, const GroupElement& delta) const {
        Ambient amb = ambient_of(r);
        auto shape = ring_shape(r);
        const CoeffField& f = *amb.field();
        if (amb.is_padic()) {
            int d = static_cast<int>(numerator(delta.coord(0)));
            bool forced_zero_digit1 = resolve(r).get<PadicDRing>() && d == 0;
            return padic_from(rng, amb, d, forced_zero_digit1);
        }
        if (!shape) return amb.monomial(coeff(rng, f), delta);
        if (shape->cut.admits(delta)) return amb.monomial(coeff(rng, f), delta) * unit(rng, amb);
        const Slot* sl = find_slot(*shape, delta);
        if (!sl) throw domain_error("no ring element has value " + delta.to_short_string());
        Element lead = amb.monomial(coeff_in(rng, f, sl->scale, sl->degree), delta);
        if (!coin(rng)) return lead;
        GroupElement above = anchor(shape->cut) + positive_value(rng, amb.group());
        return lead + element_at(rng, r, above);
    }

    // Nonzero element of the maximal ideal.
    Element in_maximal(Rng& rng, const RingDescriptor& r) const {
        return element_at(rng, r, value_in_prime(rng, maximal_ideal(r)));
    }

    // Nonzero element of R ∩ A(h); nullopt for the zero prime.
    std::optional<Element> in_prime(Rng& rng, const PrimeSpec& p) const {
        if (p.is_zero()) return std::nullopt;
        return element_at(rng, p.ring, value_in_prime(rng, p));
    }

    // Nonzero element of R, units included.
    Element in_ring(Rng& rng, const RingDescriptor& r) const {
        if (unit_subgroup(r).is_whole()) return field_element(rng, ambient_of(r));
        if (uniform(rng, 0, 4) == 0) return element_at(rng, r, GroupElement::zero(ambient_of(r).group()));
        return in_maximal(rng, r);
    }

    // Positive value inside big but outside small (small ⊊ big).
    GroupElement value_between(Rng& rng, const ConvexSubgroup& small, const ConvexSubgroup& big) const {
        const ValueGroup& g = big.group();
        auto ok = [&](const GroupElement& v) { return v.sign() > 0 && big.contains(v) && !small.contains(v); };
        if (g.is_lex()) {
            int lo = big.lex_cut_index(), hi = small.lex_cut_index();
            Rational step = g.is_discrete() ? Rational(1) : cfg_.step;
            int top = static_cast<int>(numerator(Rational(cfg_.range) / step));
            std::vector<Rational> c(g.rank(), Rational(0));
            int lead = uniform(rng, lo, hi - 1);
            c[lead] = step * uniform(rng, 1, top);
            for (int i = lead + 1; i < g.rank(); ++i) c[i] = step * uniform(rng, -top, top);
            return GroupElement::from_coords(g, c);
        }
        std::vector<Rational> keys;
        Rational base = big.kind() == ConvexSubgroup::Kind::UpTo ? big.bound() : small.kind() == ConvexSubgroup::Kind::UpTo ? small.bound() + 2 : Rational(2);
        for (int k = 0; k <= 8; ++k) keys.push_back(base - Rational(k, 2));
        std::vector<Rational> good;
        for (auto& q : keys)
            if (ok(GroupElement::basis(g, q))) good.push_back(q);
        if (good.empty()) throw domain_error("no value between " + small.to_string() + " and " + big.to_string());
        Rational q = good[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(good.size()) - 1))];
        GroupElement v = GroupElement::basis(g, q, grid_coeff(rng, true));
        if (coin(rng)) v = v + GroupElement::basis(g, q - Rational(uniform(rng, 1, 4), 2), grid_coeff(rng, false));
        return v;
    }

    GroupElement value_in_prime(Rng& rng, const PrimeSpec& p) const {
        Ambient amb = ambient_of(p.ring);
        ValueGroup g = amb.group();
        Gap above = p.cut();
        auto shape = ring_shape(p.ring);
        auto allowed = [&](const GroupElement& v) {
            if (!above.admits(v)) return false;
            if (!shape) {
                TriBool t = contains(p.ring, amb.monomial(1, v));
                return t == TriBool::True;
            }
            return shape->cut.admits(v) || find_slot(*shape, v) != nullptr;
        };
        if (shape && uniform(rng, 0, 3) == 0) {
            std::vector<GroupElement> slots;
            for (auto& sl : shape->slots)
                if (above.admits(sl.exp)) slots.push_back(sl.exp);
            if (!slots.empty()) return slots[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(slots.size()) - 1))];
        }
        for (int attempt = 0; attempt < 64; ++attempt) {
            GroupElement v = amb.is_padic() ? GroupElement::scalar(g, uniform(rng, 1, 2 * cfg_.range)) : positive_value(rng, g);
            if (allowed(v)) return v;
            // push past the subgroup and the ring's cut
            GroupElement w = v + anchor(above);
            if (shape) w = w + anchor(shape->cut);
            if (allowed(w)) return w;
        }
        throw convergence_error("sampler could not find a value inside the prime above " + p.h.to_string());
    }

private:
    static int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
    static bool coin(Rng& rng) { return uniform(rng, 0, 1) == 1; }

    Rational grid_coeff(Rng& rng, bool positive) const {
        int top = static_cast<int>(numerator(Rational(cfg_.range) / cfg_.step));
        int k = positive ? uniform(rng, 1, top) : uniform(rng, -top, top);
        return cfg_.step * k;
    }

    static Rational hahn_key(Rng& rng) {
        static const int halves[] = {-2, -1, 0, 1, 2, 3, 4};
        return Rational(halves[uniform(rng, 0, 6)], 2);
    }

    // A value admitted by the gap (its boundary, nudged above when open).
    static GroupElement anchor(const Gap& c) {
        ValueGroup g = c.group();
        if (c.is_everything() || c.is_nothing()) return GroupElement::zero(g);
        GroupElement s = c.shift();
        if (c.side() == Gap::Side::Bottom && c.subgroup().is_trivial()) return s;
        auto eta = elements_just_above(c.subgroup());
        if (eta.empty()) return s;
        GroupElement v = s + eta.front();
        return c.admits(v) ? v : s + eta.front().scaled(2);
    }

    // Random digits from position start on, the first one nonzero.
    Element padic_from(Rng& rng, const Ambient& amb, int start, bool zero_digit1) const {
        unsigned p = amb.as_padic().p;
        int prec = amb.prec2();
        std::vector<unsigned> digits;
        int len = std::max(prec - start, 1);
        for (int i = 0; i < len; ++i) {
            int pos = start + i;
            unsigned d = static_cast<unsigned>(uniform(rng, i == 0 ? 1 : 0, static_cast<int>(p) - 1));
            if (zero_digit1 && pos == 1) d = 0;
            digits.push_back(d);
        }
        return PiAdic::from_digits(p, start, digits, std::max(prec, start + 1));
    }

    SamplerConfig cfg_;
};

} // namespace spectra_lab
