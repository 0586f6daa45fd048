#pragma once

// Finite-support series in k((t^G)) and their fractions.

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "coeff_field.hpp"
#include "valgroup.hpp"

namespace spectra_lab {

class Series {
public:
    using Term = std::pair<GroupElement, Coeff>;

    Series(ValueGroup g, FieldPtr f) : group_(g), field_(std::move(f)) {}

    static Series monomial(ValueGroup g, FieldPtr f, Coeff c, const GroupElement& e) {
        Series s(g, std::move(f));
        if (!(e.group() == g)) throw structural_error("exponent group mismatch");
        if (c % s.field_->size() != c) throw domain_error("coefficient out of range");
        if (c != 0) s.terms_.emplace_back(e, c);
        return s;
    }
    static Series constant(ValueGroup g, FieldPtr f, Coeff c) { return monomial(g, f, c, GroupElement::zero(g)); }

    static Series from_terms(ValueGroup g, FieldPtr f, const std::vector<Term>& terms) {
        Series s(g, f);
        std::map<GroupElement, Coeff> acc;
        for (auto& [e, c] : terms) {
            if (!(e.group() == g)) throw structural_error("exponent group mismatch");
            auto [it, fresh] = acc.emplace(e, c);
            if (!fresh) it->second = f->add(it->second, c);
        }
        for (auto& [e, c] : acc)
            if (c != 0) s.terms_.emplace_back(e, c);
        return s;
    }

    const ValueGroup& group() const { return group_; }
    const FieldPtr& field() const { return field_; }
    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    const GroupElement& min_exponent() const {
        if (terms_.empty()) throw domain_error("zero series has no minimal exponent");
        return terms_.front().first;
    }
    Coeff leading_coeff() const {
        if (terms_.empty()) throw domain_error("zero series has no leading coefficient");
        return terms_.front().second;
    }

    bool is_one() const { return terms_.size() == 1 && terms_[0].first.is_zero() && terms_[0].second == 1; }

    Series operator-() const {
        Series r = *this;
        for (auto& t : r.terms_) t.second = field_->neg(t.second);
        return r;
    }

    friend Series operator+(const Series& a, const Series& b) {
        check_same(a, b);
        Series r(a.group_, a.field_);
        r.terms_.reserve(a.size() + b.size());
        std::size_t i = 0, j = 0;
        while (i < a.size() || j < b.size()) {
            if (j == b.size() || (i < a.size() && a.terms_[i].first < b.terms_[j].first)) {
                r.terms_.push_back(a.terms_[i++]);
            } else if (i == a.size() || b.terms_[j].first < a.terms_[i].first) {
                r.terms_.push_back(b.terms_[j++]);
            } else {
                Coeff c = a.field_->add(a.terms_[i].second, b.terms_[j].second);
                if (c != 0) r.terms_.emplace_back(a.terms_[i].first, c);
                ++i;
                ++j;
            }
        }
        return r;
    }

    friend Series operator-(const Series& a, const Series& b) { return a + (-b); }

    friend Series operator*(const Series& a, const Series& b) {
        check_same(a, b);
        if (a.is_zero() || b.is_zero()) return Series(a.group_, a.field_);
        if (b.size() == 1) return a.times_monomial(b.terms_[0].second, b.terms_[0].first);
        if (a.size() == 1) return b.times_monomial(a.terms_[0].second, a.terms_[0].first);
        std::map<GroupElement, Coeff> acc;
        for (auto& [e1, c1] : a.terms_)
            for (auto& [e2, c2] : b.terms_) {
                Coeff c = a.field_->mul(c1, c2);
                auto [it, fresh] = acc.emplace(e1 + e2, c);
                if (!fresh) it->second = a.field_->add(it->second, c);
            }
        Series r(a.group_, a.field_);
        for (auto& [e, c] : acc)
            if (c != 0) r.terms_.emplace_back(e, c);
        return r;
    }

    Series times_monomial(Coeff c, const GroupElement& e) const {
        Series r(group_, field_);
        if (c == 0) return r;
        r.terms_.reserve(size());
        for (auto& t : terms_) r.terms_.emplace_back(t.first + e, field_->mul(t.second, c));
        return r;
    }

    friend bool operator==(const Series& a, const Series& b) {
        return a.group_ == b.group_ && *a.field_ == *b.field_ && a.terms_ == b.terms_;
    }

    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::string s;
        for (std::size_t i = 0; i < terms_.size(); ++i) {
            if (i) s += " + ";
            const auto& [e, c] = terms_[i];
            if (e.is_zero()) {
                s += field_->to_string(c);
                continue;
            }
            if (c != 1) s += field_->to_string(c) + "*";
            s += "t^{" + e.to_short_string() + "}";
        }
        return s;
    }

private:
    static void check_same(const Series& a, const Series& b) {
        if (!(a.group_ == b.group_)) throw structural_error("series over different value groups");
        if (!(*a.field_ == *b.field_)) throw structural_error("series over different coefficient fields");
    }

    ValueGroup group_;
    FieldPtr field_;
    std::vector<Term> terms_;
};

struct Peeled;

// num/den, never reduced. Monomial denominators are divided out on construction.
class FieldElement {
public:
    FieldElement(Series num, Series den) : num_(std::move(num)), den_(std::move(den)) {
        if (den_.is_zero()) throw arithmetic_error("zero denominator");
        if (!(num_.group() == den_.group()) || !(*num_.field() == *den_.field()))
            throw structural_error("numerator and denominator from different ambients");
        tidy();
    }
    explicit FieldElement(Series num) : FieldElement(num, Series::constant(num.group(), num.field(), 1)) {}

    static FieldElement zero(ValueGroup g, FieldPtr f) { return FieldElement(Series(g, f)); }
    static FieldElement one(ValueGroup g, FieldPtr f) { return FieldElement(Series::constant(g, f, 1)); }
    static FieldElement monomial(ValueGroup g, FieldPtr f, Coeff c, const GroupElement& e) {
        return FieldElement(Series::monomial(g, std::move(f), c, e));
    }

    const Series& num() const { return num_; }
    const Series& den() const { return den_; }
    const ValueGroup& group() const { return num_.group(); }
    const FieldPtr& field() const { return num_.field(); }
    bool is_zero() const { return num_.is_zero(); }

    std::optional<GroupElement> valuation() const {
        if (num_.is_zero()) return std::nullopt;
        return num_.min_exponent() - den_.min_exponent();
    }

    FieldElement operator-() const { return FieldElement(-num_, den_); }

    friend FieldElement operator+(const FieldElement& a, const FieldElement& b) {
        if (a.den_ == b.den_) return FieldElement(a.num_ + b.num_, a.den_);
        return FieldElement(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend FieldElement operator-(const FieldElement& a, const FieldElement& b) { return a + (-b); }
    friend FieldElement operator*(const FieldElement& a, const FieldElement& b) {
        return FieldElement(a.num_ * b.num_, a.den_ * b.den_);
    }
    FieldElement inverse() const {
        if (is_zero()) throw arithmetic_error("division by zero");
        return FieldElement(den_, num_);
    }
    friend FieldElement operator/(const FieldElement& a, const FieldElement& b) { return a * b.inverse(); }

    FieldElement pow(long long n) const {
        if (n < 0) return inverse().pow(-n);
        FieldElement r = one(group(), field()), base = *this;
        while (n) {
            if (n & 1) r = r * base;
            n >>= 1;
            if (n) base = base * base;
        }
        return r;
    }

    friend bool operator==(const FieldElement& a, const FieldElement& b) {
        return a.num_ * b.den_ == b.num_ * a.den_;
    }

    Peeled peel() const;

    std::string to_string() const {
        if (den_.is_one()) return num_.to_string();
        return "(" + num_.to_string() + ")/(" + den_.to_string() + ")";
    }

private:
    void tidy() {
        if (num_.is_zero()) {
            den_ = Series::constant(group(), field(), 1);
            return;
        }
        if (den_.size() == 1) {
            const auto& [e, c] = den_.terms()[0];
            num_ = num_.times_monomial(field()->inv(c), -e);
            den_ = Series::constant(group(), field(), 1);
        }
    }

    Series num_, den_;
};

struct Peeled {
    GroupElement lead_exp;
    Coeff lead_coeff;
    FieldElement rest;
};

inline Peeled FieldElement::peel() const {
    if (is_zero()) throw domain_error("peel of zero");
    GroupElement e = num_.min_exponent() - den_.min_exponent();
    Coeff c = field()->div(num_.leading_coeff(), den_.leading_coeff());
    Series rest = num_ - den_.times_monomial(c, e);
    return {e, c, FieldElement(std::move(rest), den_)};
}

struct NonTerminating {
    std::size_t terms_seen;
};

using WindowTerms = std::vector<std::pair<GroupElement, Coeff>>;
using WindowResult = std::variant<WindowTerms, NonTerminating>;

inline constexpr std::size_t default_max_terms = 64;

// Terms of x with exponent in [lo, hi], by repeated peeling.
inline WindowResult coefficient_window(const FieldElement& x, const GroupElement& lo, const GroupElement& hi,
                                       std::size_t max_terms = default_max_terms) {
    if (hi < lo) throw domain_error("coefficient_window: lo > hi");
    if (max_terms < 1) throw domain_error("coefficient_window: max_terms must be >= 1");
    WindowTerms out;
    FieldElement cur = x;
    std::size_t count = 0;
    while (!cur.is_zero() && *cur.valuation() <= hi) {
        if (++count > max_terms) return NonTerminating{count - 1};
        Peeled p = cur.peel();
        if (p.lead_exp >= lo) out.emplace_back(p.lead_exp, p.lead_coeff);
        cur = std::move(p.rest);
    }
    return out;
}

namespace detail {

inline std::string_view trim_view(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

// Split at top-level occurrences of '+'/'-' (outside brackets), keeping signs.
inline std::vector<std::pair<bool, std::string_view>> split_signed(std::string_view s) {
    std::vector<std::pair<bool, std::string_view>> out;
    int depth = 0;
    bool neg = false;
    std::size_t start = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (c == '{' || c == '[' || c == '(') ++depth;
        else if (c == '}' || c == ']' || c == ')') --depth;
        else if (depth == 0 && (c == '+' || c == '-')) {
            std::string_view before = trim_view(s.substr(start, i - start));
            if (!before.empty() && before.back() == '^') continue; // t^-1
            if (before.empty()) {
                if (c == '-') neg = !neg;
            } else {
                out.emplace_back(neg, before);
                neg = c == '-';
            }
            start = i + 1;
        }
    }
    if (depth != 0) throw parse_error("unbalanced brackets in series literal");
    std::string_view last = trim_view(s.substr(start));
    if (last.empty()) throw parse_error("series literal ends with a sign");
    out.emplace_back(neg, last);
    return out;
}

inline long long parse_small_int(std::string_view s, const char* what) {
    s = trim_view(s);
    if (s.empty()) throw parse_error(std::string("expected ") + what);
    std::size_t i = 0;
    bool neg = false;
    if (s[0] == '-' || s[0] == '+') {
        neg = s[0] == '-';
        i = 1;
    }
    if (i == s.size()) throw parse_error(std::string("expected ") + what);
    long long v = 0;
    for (; i < s.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) throw parse_error(std::string("expected ") + what + ", got '" + std::string(s) + "'");
        v = v * 10 + (s[i] - '0');
        if (v > (1LL << 40)) throw parse_error(std::string(what) + " too large");
    }
    return neg ? -v : v;
}

} // namespace detail

// "3*t^{1} + g^2*t^{3/2} - t", exponents as group-element literals.
inline Series parse_series(ValueGroup g, FieldPtr f, std::string_view text) {
    using namespace detail;
    text = trim_view(text);
    if (text.empty()) throw parse_error("empty series literal");
    std::vector<Series::Term> terms;
    for (auto [neg, term] : split_signed(text)) {
        Coeff c = 1;
        GroupElement e = GroupElement::zero(g);
        std::string_view coeff_part, mono_part;
        auto star = std::string_view::npos;
        {
            int depth = 0;
            for (std::size_t i = 0; i < term.size(); ++i) {
                char ch = term[i];
                if (ch == '{' || ch == '[') ++depth;
                else if (ch == '}' || ch == ']') --depth;
                else if (ch == '*' && depth == 0) {
                    star = i;
                    break;
                }
            }
        }
        if (star != std::string_view::npos) {
            coeff_part = trim_view(term.substr(0, star));
            mono_part = trim_view(term.substr(star + 1));
        } else if (!term.empty() && term[0] == 't') {
            mono_part = term;
        } else {
            coeff_part = term;
        }
        if (!coeff_part.empty()) {
            if (coeff_part[0] == 'g') {
                std::string_view rest = trim_view(coeff_part.substr(1));
                long long i = 1;
                if (!rest.empty()) {
                    if (rest[0] != '^') throw parse_error("expected g^i, got '" + std::string(coeff_part) + "'");
                    i = parse_small_int(rest.substr(1), "generator power");
                }
                c = f->gen_pow(i);
            } else {
                c = f->from_int(parse_small_int(coeff_part, "coefficient"));
            }
        }
        if (!mono_part.empty()) {
            if (mono_part[0] != 't') throw parse_error("expected monomial t^{...}, got '" + std::string(mono_part) + "'");
            std::string_view rest = trim_view(mono_part.substr(1));
            if (rest.empty()) {
                if (g.is_lex() && g.rank() == 1) e = GroupElement::scalar(g, 1);
                else throw parse_error("bare 't' needs a rank-1 group; write t^{...}");
            } else {
                if (rest[0] != '^') throw parse_error("expected '^' after t");
                rest = trim_view(rest.substr(1));
                if (!rest.empty() && rest.front() == '{') {
                    if (rest.back() != '}') throw parse_error("unterminated exponent braces");
                    e = GroupElement::parse(g, rest.substr(1, rest.size() - 2));
                } else {
                    e = GroupElement::parse(g, rest);
                }
            }
        }
        if (neg) c = f->neg(c);
        terms.emplace_back(e, c);
    }
    return Series::from_terms(g, f, terms);
}

// Series literal or "(<series>)/(<series>)".
inline FieldElement parse_field_element(ValueGroup g, FieldPtr f, std::string_view text) {
    using namespace detail;
    text = trim_view(text);
    if (!text.empty() && text.front() == '(') {
        int depth = 0;
        std::size_t close = std::string_view::npos;
        for (std::size_t i = 0; i < text.size(); ++i) {
            if (text[i] == '(') ++depth;
            else if (text[i] == ')' && --depth == 0) {
                close = i;
                break;
            }
        }
        if (close == std::string_view::npos) throw parse_error("unbalanced parentheses in element literal");
        Series num = parse_series(g, f, text.substr(1, close - 1));
        std::string_view rest = trim_view(text.substr(close + 1));
        if (rest.empty()) return FieldElement(num);
        if (rest[0] != '/') throw parse_error("expected '/' after parenthesised numerator");
        rest = trim_view(rest.substr(1));
        if (rest.size() >= 2 && rest.front() == '(' && rest.back() == ')') rest = rest.substr(1, rest.size() - 2);
        Series den = parse_series(g, f, rest);
        if (den.is_zero()) throw parse_error("zero denominator in element literal");
        return FieldElement(num, den);
    }
    return FieldElement(parse_series(g, f, text));
}

} // namespace spectra_lab
