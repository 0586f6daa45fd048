#pragma once

// The two ambient fields: k((t^G)) restricted to fractions of finite-support
// series, and Q_p(pi). Values of pi-adic elements live in Z measured in
// half-units (val2), so both ambients share the GroupElement machinery.

#include <optional>
#include <string>
#include <variant>

#include "hahn.hpp"
#include "padic.hpp"

namespace spectra_lab {

struct HahnAmbient {
    ValueGroup group;
    FieldPtr field;
    friend bool operator==(const HahnAmbient& a, const HahnAmbient& b) {
        return a.group == b.group && *a.field == *b.field;
    }
};

struct PadicAmbient {
    unsigned p;
    int prec2 = default_prec2;
    friend bool operator==(const PadicAmbient& a, const PadicAmbient& b) { return a.p == b.p; }
};

using Element = std::variant<FieldElement, PiAdic>;

class Ambient {
public:
    Ambient(HahnAmbient h) : v_(std::move(h)) {}
    Ambient(PadicAmbient p) : v_(p) {
        if (p.p % 2 == 0 || !is_prime(p.p)) throw domain_error("pi-adic ambient needs an odd prime, got p=" + std::to_string(p.p));
    }

    static Ambient hahn(ValueGroup g, FieldPtr f) { return Ambient(HahnAmbient{g, std::move(f)}); }
    static Ambient padic(unsigned p, int prec2 = default_prec2) { return Ambient(PadicAmbient{p, prec2}); }

    bool is_padic() const { return std::holds_alternative<PadicAmbient>(v_); }
    const HahnAmbient& as_hahn() const {
        if (is_padic()) throw structural_error("expected a Hahn-series ambient");
        return std::get<HahnAmbient>(v_);
    }
    const PadicAmbient& as_padic() const {
        if (!is_padic()) throw structural_error("expected a pi-adic ambient");
        return std::get<PadicAmbient>(v_);
    }

    ValueGroup group() const { return is_padic() ? ValueGroup::int_lex(1) : as_hahn().group; }

    // Residue-digit field: F_{p^k} for series, F_p for pi-adic digits.
    FieldPtr field() const { return is_padic() ? coeff_field(as_padic().p, 1) : as_hahn().field; }

    int prec2() const { return is_padic() ? as_padic().prec2 : 0; }

    Ambient with_precision(int prec2) const {
        if (!is_padic()) return *this;
        return padic(as_padic().p, prec2);
    }

    Element zero() const {
        if (is_padic()) return PiAdic::zero(as_padic().p, as_padic().prec2);
        return FieldElement::zero(as_hahn().group, as_hahn().field);
    }
    Element one() const {
        if (is_padic()) return PiAdic::one(as_padic().p, as_padic().prec2);
        return FieldElement::one(as_hahn().group, as_hahn().field);
    }

    // c * t^delta, or c * pi^delta with delta in val2 units.
    Element monomial(Coeff c, const GroupElement& delta) const {
        if (is_padic()) {
            int k = static_cast<int>(numerator(delta.coord(0)));
            int prec = as_padic().prec2;
            return PiAdic::from_integer(as_padic().p, c, prec + std::abs(k) + 2) *
                   PiAdic::pi_power(as_padic().p, k, prec + std::abs(k) + 2);
        }
        return FieldElement::monomial(as_hahn().group, as_hahn().field, c, delta);
    }

    Element parse(std::string_view text) const {
        if (is_padic()) return parse_piadic(text, as_padic().p, as_padic().prec2);
        return parse_field_element(as_hahn().group, as_hahn().field, text);
    }

    std::string to_string() const {
        if (is_padic()) return "Q_" + std::to_string(as_padic().p) + "(pi)";
        return "F_" + std::to_string(as_hahn().field->size()) + "((t^" + as_hahn().group.to_string() + "))";
    }

    friend bool operator==(const Ambient& a, const Ambient& b) { return a.v_ == b.v_; }

private:
    std::variant<HahnAmbient, PadicAmbient> v_;
};

inline bool is_padic(const Element& x) { return std::holds_alternative<PiAdic>(x); }

inline const FieldElement& as_series(const Element& x) {
    if (is_padic(x)) throw structural_error("expected a Hahn-series element");
    return std::get<FieldElement>(x);
}
inline const PiAdic& as_piadic(const Element& x) {
    if (!is_padic(x)) throw structural_error("expected a pi-adic element");
    return std::get<PiAdic>(x);
}

inline void check_ambient(const Ambient& amb, const Element& x) {
    if (amb.is_padic() != is_padic(x)) throw structural_error("element does not belong to ambient " + amb.to_string());
    if (is_padic(x)) {
        if (as_piadic(x).prime() != amb.as_padic().p) throw structural_error("pi-adic element over the wrong prime");
    } else {
        const auto& h = amb.as_hahn();
        const auto& fx = as_series(x);
        if (!(fx.group() == h.group) || !(*fx.field() == *h.field))
            throw structural_error("series element over a different group or coefficient field");
    }
}

// Zero (or zero to precision) elements have value +infinity.
inline bool is_zero(const Element& x) {
    return std::visit([](const auto& e) { return e.is_zero(); }, x);
}

inline std::optional<GroupElement> value_of(const Element& x) {
    if (is_padic(x)) {
        const auto& e = as_piadic(x);
        if (e.is_zero()) return std::nullopt;
        return GroupElement::scalar(ValueGroup::int_lex(1), e.val2());
    }
    return as_series(x).valuation();
}

inline Element operator+(const Element& a, const Element& b) {
    if (is_padic(a) != is_padic(b)) throw structural_error("mixing pi-adic and series elements");
    if (is_padic(a)) return as_piadic(a) + as_piadic(b);
    return as_series(a) + as_series(b);
}
inline Element operator-(const Element& a) {
    return std::visit([](const auto& e) -> Element { return -e; }, a);
}
inline Element operator-(const Element& a, const Element& b) { return a + (-b); }
inline Element operator*(const Element& a, const Element& b) {
    if (is_padic(a) != is_padic(b)) throw structural_error("mixing pi-adic and series elements");
    if (is_padic(a)) return as_piadic(a) * as_piadic(b);
    return as_series(a) * as_series(b);
}
inline Element operator/(const Element& a, const Element& b) {
    if (is_padic(a) != is_padic(b)) throw structural_error("mixing pi-adic and series elements");
    if (is_padic(a)) return as_piadic(a) / as_piadic(b);
    return as_series(a) / as_series(b);
}
inline Element power(const Element& a, long long n) {
    return std::visit([n](const auto& e) -> Element { return e.pow(n); }, a);
}

// Exact for series; "agrees to shared precision" for pi-adic elements.
inline bool same_element(const Element& a, const Element& b) {
    if (is_padic(a) != is_padic(b)) return false;
    if (is_padic(a)) return as_piadic(a).agrees_with(as_piadic(b));
    return as_series(a) == as_series(b);
}

inline std::string to_string(const Element& x) {
    return std::visit([](const auto& e) { return e.to_string(); }, x);
}

} // namespace spectra_lab
