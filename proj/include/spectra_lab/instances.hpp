#pragma once

// Named rings used by the CLI, the golden files and the acceptance run.

#include "rings.hpp"

namespace spectra_lab::instances {

inline FieldPtr default_field() { return coeff_field(5, 2); }

inline GroupElement q(const ValueGroup& g, const Rational& x) {
    return g.is_lex() ? GroupElement::scalar(g, x) : GroupElement::basis(g, 0, x);
}

// F_5 + {v >= 1} over F_25((t^Q)).
inline RingDescriptor equip(FieldPtr f = default_field()) {
    ValueGroup g = ValueGroup::rat_lex(1);
    return make_d_plus(HahnAmbient{g, f}, 1, {q(g, 0)}, Gap::at_least(q(g, 1)), "E:equip");
}

// F_5 + F_5 t + {v >= 2}.
inline RingDescriptor fp_fp_t(FieldPtr f = default_field()) {
    ValueGroup g = ValueGroup::rat_lex(1);
    return make_d_plus(HahnAmbient{g, f}, 1, {q(g, 0), q(g, 1)}, Gap::at_least(q(g, 2)), "F5+F5t+{v>=2}");
}

// F_5 + m, m = {v > 0}.
inline RingDescriptor fp_plus_m(const ValueGroup& g, FieldPtr f = default_field()) {
    std::string name = g.is_lex() ? "F5+m/Q" : "F5+m/HahnRat";
    return make_d_plus(HahnAmbient{g, f}, 1, {q(g, 0)}, Gap::greater_than(q(g, 0)), name);
}

inline RingDescriptor mixed(unsigned p, int prec2 = 8) { return make_padic_d(p, prec2, "E:mixed/p=" + std::to_string(p)); }

inline RingDescriptor valuation(const ValueGroup& g, FieldPtr f = default_field()) {
    return make_valuation_ring(Ambient::hahn(g, f), "O/" + g.to_string());
}

inline std::vector<RingDescriptor> canonical() {
    return {equip(), mixed(5), fp_fp_t(), valuation(ValueGroup::int_lex(2))};
}

inline std::vector<RingDescriptor> all() {
    ValueGroup z2 = ValueGroup::int_lex(2);
    return {valuation(ValueGroup::int_lex(1)),
            valuation(ValueGroup::rat_lex(1)),
            valuation(z2),
            valuation(ValueGroup::hahn_rat()),
            equip(),
            fp_fp_t(),
            fp_plus_m(ValueGroup::rat_lex(1)),
            fp_plus_m(ValueGroup::hahn_rat()),
            mixed(5),
            mixed(7),
            make_padic_val(5, 8, "O/Q_5(pi)"),
            make_coarsening(Ambient::hahn(z2, default_field()), ConvexSubgroup::lex_cut(z2, 1), "O_H/int_lex:2")};
}

inline std::optional<RingDescriptor> by_name(const std::string& name) {
    for (auto& r : all())
        if (r.label == name) return r;
    return std::nullopt;
}

} // namespace spectra_lab::instances
