#pragma once

// Exact ordered abelian value groups: Z^n and Q^n with lexicographic order,
// and the finite-support Hahn group Q -> Q ordered by largest support index.
//
// Internally every element is a sorted list of (key, coefficient) pairs where
// a larger key is more significant. For the lexicographic groups coordinate i
// has key -i, so coordinate 0 is the most significant; for the Hahn group the
// key is the support index itself. This keeps convex subgroups and cuts uniform:
// a convex subgroup is "every key <= b" or "every key < b".

#include <algorithm>
#include <compare>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"

namespace spectra_lab {

enum class GroupKind { IntLex, RatLex, HahnRat };

class ValueGroup {
public:
    static ValueGroup int_lex(int n) { return ValueGroup(GroupKind::IntLex, n); }
    static ValueGroup rat_lex(int n) { return ValueGroup(GroupKind::RatLex, n); }
    static ValueGroup hahn_rat() { return ValueGroup(GroupKind::HahnRat, 0); }

    // "int_lex:2" | "rat_lex:3" | "hahn_rat"
    static ValueGroup parse(std::string_view text) {
        auto colon = text.find(':');
        std::string_view name = text.substr(0, colon);
        if (name == "hahn_rat") {
            if (colon != std::string_view::npos) throw parse_error("hahn_rat takes no rank");
            return hahn_rat();
        }
        if (name != "int_lex" && name != "rat_lex") throw parse_error("unknown group '" + std::string(text) + "'");
        if (colon == std::string_view::npos) throw parse_error("group '" + std::string(name) + "' needs a rank, e.g. int_lex:2");
        Rational r = parse_rational(text.substr(colon + 1));
        if (!is_integer(r) || r < 1 || r > 64) throw parse_error("group rank must be an integer in [1, 64]");
        int n = static_cast<int>(numerator(r));
        return name == "int_lex" ? int_lex(n) : rat_lex(n);
    }

    GroupKind kind() const { return kind_; }
    int rank() const { return rank_; }
    bool is_lex() const { return kind_ != GroupKind::HahnRat; }
    bool is_discrete() const { return kind_ == GroupKind::IntLex; }

    // Keys usable as support: lex coordinates map to keys 0, -1, ..., -(n-1).
    bool valid_key(const Rational& key) const {
        if (!is_lex()) return true;
        return is_integer(key) && key <= 0 && key > -rank_;
    }

    // The set of archimedean classes is densely ordered only for the Hahn group.
    bool dense_components() const { return kind_ == GroupKind::HahnRat; }

    std::string to_string() const {
        switch (kind_) {
        case GroupKind::IntLex: return "int_lex:" + std::to_string(rank_);
        case GroupKind::RatLex: return "rat_lex:" + std::to_string(rank_);
        case GroupKind::HahnRat: return "hahn_rat";
        }
        return {};
    }

    friend bool operator==(const ValueGroup&, const ValueGroup&) = default;

private:
    ValueGroup(GroupKind k, int n) : kind_(k), rank_(n) {
        if (k != GroupKind::HahnRat && n < 1) throw domain_error("lexicographic group needs rank >= 1");
    }
    GroupKind kind_;
    int rank_;
};

// Identifies the archimedean class of a nonzero element: a coordinate position
// for the lexicographic groups, a rational support index for the Hahn group.
struct ArchIndex {
    GroupKind kind;
    Rational index;
    friend bool operator==(const ArchIndex&, const ArchIndex&) = default;
};

class GroupElement {
public:
    using Term = std::pair<Rational, Rational>; // (key, coefficient), ascending keys

    explicit GroupElement(ValueGroup g) : group_(g) {}

    static GroupElement zero(ValueGroup g) { return GroupElement(g); }

    static GroupElement from_coords(ValueGroup g, const std::vector<Rational>& coords) {
        if (!g.is_lex()) throw structural_error("coordinate tuples need a lexicographic group");
        if (static_cast<int>(coords.size()) != g.rank())
            throw structural_error("expected " + std::to_string(g.rank()) + " coordinates, got " + std::to_string(coords.size()));
        GroupElement e(g);
        for (int i = g.rank() - 1; i >= 0; --i) {
            if (g.is_discrete() && !is_integer(coords[i])) throw domain_error("int_lex coordinates must be integers");
            if (coords[i] != 0) e.terms_.emplace_back(Rational(-i), coords[i]);
        }
        return e;
    }

    static GroupElement from_terms(ValueGroup g, std::vector<Term> terms) {
        std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.first < b.first; });
        GroupElement e(g);
        for (auto& [k, c] : terms) {
            if (!g.valid_key(k)) throw structural_error("support index " + spectra_lab::to_string(k) + " invalid for " + g.to_string());
            if (g.is_discrete() && !is_integer(c)) throw domain_error("int_lex coordinates must be integers");
            if (!e.terms_.empty() && e.terms_.back().first == k) {
                e.terms_.back().second += c;
                if (e.terms_.back().second == 0) e.terms_.pop_back();
            } else if (c != 0) {
                e.terms_.emplace_back(k, c);
            }
        }
        return e;
    }

    // Hahn-group monomial {index: coeff}; for lex groups index is the coordinate position.
    static GroupElement basis(ValueGroup g, const Rational& index, const Rational& coeff = 1) {
        Rational key = g.is_lex() ? Rational(-index) : index;
        return from_terms(g, {{key, coeff}});
    }

    // Rank-1 convenience: the element q of Z or Q.
    static GroupElement scalar(ValueGroup g, const Rational& q) {
        if (!g.is_lex() || g.rank() != 1) throw structural_error("scalar exponent needs a rank-1 lexicographic group");
        return from_coords(g, {q});
    }

    const ValueGroup& group() const { return group_; }
    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    std::vector<Rational> coords() const {
        if (!group_.is_lex()) throw structural_error("coords() on a Hahn group element");
        std::vector<Rational> c(group_.rank(), Rational(0));
        for (auto& [k, v] : terms_) c[static_cast<std::size_t>(-numerator(k))] = v;
        return c;
    }

    Rational coord(int i) const {
        Rational key(-i);
        for (auto& [k, v] : terms_)
            if (k == key) return v;
        return 0;
    }

    int sign() const { return terms_.empty() ? 0 : terms_.back().second.sign(); }

    // Key of the most significant nonzero coordinate.
    const Rational& leading_key() const {
        if (terms_.empty()) throw domain_error("zero element has no archimedean class");
        return terms_.back().first;
    }

    GroupElement operator-() const {
        GroupElement r = *this;
        for (auto& t : r.terms_) t.second = -t.second;
        return r;
    }

    friend GroupElement operator+(const GroupElement& a, const GroupElement& b) {
        check_same(a, b);
        GroupElement r(a.group_);
        r.terms_.reserve(a.terms_.size() + b.terms_.size());
        std::size_t i = 0, j = 0;
        while (i < a.terms_.size() || j < b.terms_.size()) {
            if (j == b.terms_.size() || (i < a.terms_.size() && a.terms_[i].first < b.terms_[j].first)) {
                r.terms_.push_back(a.terms_[i++]);
            } else if (i == a.terms_.size() || b.terms_[j].first < a.terms_[i].first) {
                r.terms_.push_back(b.terms_[j++]);
            } else {
                Rational s = a.terms_[i].second + b.terms_[j].second;
                if (s != 0) r.terms_.emplace_back(a.terms_[i].first, std::move(s));
                ++i;
                ++j;
            }
        }
        return r;
    }

    friend GroupElement operator-(const GroupElement& a, const GroupElement& b) { return a + (-b); }

    GroupElement& operator+=(const GroupElement& o) { return *this = *this + o; }

    // Integer multiple; rational multiples only where the group is divisible.
    GroupElement scaled(const Rational& q) const {
        if (group_.is_discrete() && !is_integer(q)) {
            for (auto& t : terms_)
                if (!is_integer(t.second * q)) throw domain_error("int_lex is not divisible by " + spectra_lab::to_string(q));
        }
        GroupElement r(group_);
        if (q == 0) return r;
        for (auto& t : terms_) r.terms_.emplace_back(t.first, t.second * q);
        return r;
    }

    friend std::strong_ordering compare(const GroupElement& a, const GroupElement& b) {
        check_same(a, b);
        // Walk from the most significant key downwards.
        auto i = a.terms_.rbegin(), j = b.terms_.rbegin();
        while (i != a.terms_.rend() || j != b.terms_.rend()) {
            if (j == b.terms_.rend() || (i != a.terms_.rend() && i->first > j->first)) {
                return i->second.sign() > 0 ? std::strong_ordering::greater : std::strong_ordering::less;
            }
            if (i == a.terms_.rend() || j->first > i->first) {
                return j->second.sign() > 0 ? std::strong_ordering::less : std::strong_ordering::greater;
            }
            if (i->second != j->second) return i->second < j->second ? std::strong_ordering::less : std::strong_ordering::greater;
            ++i;
            ++j;
        }
        return std::strong_ordering::equal;
    }

    friend bool operator==(const GroupElement& a, const GroupElement& b) {
        return a.group_ == b.group_ && a.terms_ == b.terms_;
    }
    friend std::strong_ordering operator<=>(const GroupElement& a, const GroupElement& b) { return compare(a, b); }

    // "[1, -3/2]" for lex groups, "{1/2: 3, -1: 7}" for the Hahn group (descending significance).
    std::string to_string() const {
        std::string s;
        if (group_.is_lex()) {
            s = "[";
            auto c = coords();
            for (std::size_t i = 0; i < c.size(); ++i) {
                if (i) s += ", ";
                s += spectra_lab::to_string(c[i]);
            }
            return s + "]";
        }
        s = "{";
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            if (it != terms_.rbegin()) s += ", ";
            s += spectra_lab::to_string(it->first) + ": " + spectra_lab::to_string(it->second);
        }
        return s + "}";
    }

    // Rank-1 lex groups print as a bare rational.
    std::string to_short_string() const {
        if (group_.is_lex() && group_.rank() == 1) return spectra_lab::to_string(coord(0));
        if (!group_.is_lex() && (terms_.empty() || (terms_.size() == 1 && terms_[0].first == 0)))
            return spectra_lab::to_string(terms_.empty() ? Rational(0) : terms_[0].second);
        return to_string();
    }

    static GroupElement parse(ValueGroup g, std::string_view text);

private:
    static void check_same(const GroupElement& a, const GroupElement& b) {
        if (!(a.group_ == b.group_))
            throw structural_error("mismatched value groups: " + a.group_.to_string() + " vs " + b.group_.to_string());
    }

    ValueGroup group_;
    std::vector<Term> terms_;
};

inline std::strong_ordering compare_values(const GroupElement& a, const GroupElement& b) { return compare(a, b); }

inline GroupElement GroupElement::parse(ValueGroup g, std::string_view text) {
    auto trim = [](std::string_view s) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
        return s;
    };
    auto split = [](std::string_view s) {
        std::vector<std::string_view> parts;
        std::size_t start = 0;
        for (std::size_t i = 0; i <= s.size(); ++i) {
            if (i == s.size() || s[i] == ',') {
                parts.push_back(s.substr(start, i - start));
                start = i + 1;
            }
        }
        return parts;
    };
    text = trim(text);
    if (text.empty()) throw parse_error("empty group element");
    if (text.front() == '[') {
        if (text.back() != ']') throw parse_error("unterminated '[' in group element");
        if (!g.is_lex()) throw parse_error("tuple literal needs a lexicographic group, got " + g.to_string());
        std::vector<Rational> c;
        auto body = trim(text.substr(1, text.size() - 2));
        if (!body.empty())
            for (auto p : split(body)) c.push_back(parse_rational(p));
        return from_coords(g, c);
    }
    if (text.front() == '{') {
        if (text.back() != '}') throw parse_error("unterminated '{' in group element");
        if (g.is_lex()) throw parse_error("support-map literal needs hahn_rat");
        std::vector<Term> terms;
        auto body = trim(text.substr(1, text.size() - 2));
        if (!body.empty()) {
            for (auto p : split(body)) {
                auto colon = p.find(':');
                if (colon == std::string_view::npos) throw parse_error("expected 'index: coeff' in '" + std::string(p) + "'");
                terms.emplace_back(parse_rational(p.substr(0, colon)), parse_rational(p.substr(colon + 1)));
            }
        }
        return from_terms(g, std::move(terms));
    }
    if (g.is_lex() && g.rank() == 1) return scalar(g, parse_rational(text));
    if (!g.is_lex()) return basis(g, 0, parse_rational(text)); // bare q means q at index 0
    throw parse_error("cannot read '" + std::string(text) + "' as an element of " + g.to_string());
}

// Archimedean class of a nonzero element.
inline ArchIndex arch_class(const GroupElement& g) {
    if (g.is_zero()) throw domain_error("arch_class of the zero element");
    const Rational& k = g.leading_key();
    return {g.group().kind(), g.group().is_lex() ? Rational(-k) : k};
}

// Convex subgroup of a ValueGroup. For the lexicographic groups the canonical
// description is the cut index k: "supported on coordinates >= k".
class ConvexSubgroup {
public:
    enum class Kind { Trivial, UpTo, Whole };

    static ConvexSubgroup trivial(ValueGroup g) { return ConvexSubgroup(g, Kind::Trivial, 0, true); }
    static ConvexSubgroup whole(ValueGroup g) { return ConvexSubgroup(g, Kind::Whole, 0, true); }

    // Support contained in keys (-inf, bound] or (-inf, bound).
    static ConvexSubgroup up_to_key(ValueGroup g, Rational bound, bool closed) {
        return ConvexSubgroup(g, Kind::UpTo, std::move(bound), closed).normalized();
    }

    // Hahn group: support in (-inf, q] or (-inf, q).
    static ConvexSubgroup up_to(ValueGroup g, const Rational& q, bool closed) {
        if (g.is_lex()) throw structural_error("up_to(q, ...) is the Hahn-group vocabulary; use lex_cut(k)");
        return up_to_key(g, q, closed);
    }

    // Lexicographic groups: supported on coordinates >= k, k in [0, n].
    static ConvexSubgroup lex_cut(ValueGroup g, int k) {
        if (!g.is_lex()) throw structural_error("lex_cut needs a lexicographic group");
        if (k < 0 || k > g.rank()) throw domain_error("lex cut index out of range");
        return up_to_key(g, Rational(-k), true);
    }

    const ValueGroup& group() const { return group_; }
    Kind kind() const { return kind_; }
    bool is_trivial() const { return kind_ == Kind::Trivial; }
    bool is_whole() const { return kind_ == Kind::Whole; }
    const Rational& bound() const { return bound_; }
    bool closed() const { return closed_; }

    int lex_cut_index() const {
        if (!group_.is_lex()) throw structural_error("lex_cut_index on a Hahn group subgroup");
        if (kind_ == Kind::Whole) return 0;
        if (kind_ == Kind::Trivial) return group_.rank();
        return static_cast<int>(-numerator(bound_));
    }

    bool contains(const GroupElement& g) const {
        if (!(g.group() == group_)) throw structural_error("subgroup/element group mismatch");
        if (g.is_zero() || kind_ == Kind::Whole) return true;
        if (kind_ == Kind::Trivial) return false;
        return closed_ ? g.leading_key() <= bound_ : g.leading_key() < bound_;
    }

    // Position of g relative to this subgroup: -1 below, 0 inside, +1 above.
    int position(const GroupElement& g) const {
        if (contains(g)) return 0;
        return g.sign();
    }

    // Inclusion order; any two convex subgroups are comparable.
    friend std::strong_ordering operator<=>(const ConvexSubgroup& a, const ConvexSubgroup& b) {
        if (!(a.group_ == b.group_)) throw structural_error("comparing subgroups of different groups");
        auto rank = [](Kind k) { return k == Kind::Trivial ? 0 : k == Kind::UpTo ? 1 : 2; };
        if (a.kind_ != b.kind_) return rank(a.kind_) <=> rank(b.kind_);
        if (a.kind_ != Kind::UpTo) return std::strong_ordering::equal;
        if (a.bound_ != b.bound_) return a.bound_ < b.bound_ ? std::strong_ordering::less : std::strong_ordering::greater;
        return a.closed_ <=> b.closed_;
    }
    friend bool operator==(const ConvexSubgroup& a, const ConvexSubgroup& b) {
        return a.group_ == b.group_ && (a <=> b) == 0;
    }

    // Lex: "cut(k)"; Hahn: "trivial" | "whole" | "up_to(q,closed|open)"
    std::string to_string() const {
        if (group_.is_lex()) return "cut(" + std::to_string(lex_cut_index()) + ")";
        switch (kind_) {
        case Kind::Trivial: return "trivial";
        case Kind::Whole: return "whole";
        case Kind::UpTo: return "up_to(" + spectra_lab::to_string(bound_) + "," + (closed_ ? "closed" : "open") + ")";
        }
        return {};
    }

    static ConvexSubgroup parse(ValueGroup g, std::string_view text) {
        std::string t;
        for (char c : text)
            if (!std::isspace(static_cast<unsigned char>(c))) t += c;
        if (t == "trivial") return trivial(g);
        if (t == "whole") return whole(g);
        auto inner = [&](std::string_view prefix) -> std::string {
            if (t.rfind(prefix, 0) != 0 || t.back() != ')') throw parse_error("bad subgroup '" + std::string(text) + "'");
            return t.substr(prefix.size(), t.size() - prefix.size() - 1);
        };
        if (t.rfind("cut(", 0) == 0) {
            Rational k = parse_rational(inner("cut("));
            if (!is_integer(k)) throw parse_error("cut index must be an integer");
            return lex_cut(g, static_cast<int>(numerator(k)));
        }
        if (t.rfind("up_to(", 0) == 0) {
            std::string body = inner("up_to(");
            auto comma = body.find(',');
            if (comma == std::string::npos) throw parse_error("up_to needs (q, closed|open)");
            std::string mode = body.substr(comma + 1);
            if (mode != "closed" && mode != "open") throw parse_error("up_to mode must be closed or open");
            return up_to(g, parse_rational(body.substr(0, comma)), mode == "closed");
        }
        throw parse_error("unknown subgroup '" + std::string(text) + "'");
    }

private:
    ConvexSubgroup(ValueGroup g, Kind k, Rational b, bool c) : group_(g), kind_(k), bound_(std::move(b)), closed_(c) {}

    ConvexSubgroup normalized() const {
        if (kind_ != Kind::UpTo) return *this;
        if (!group_.is_lex()) return *this;
        // Lex: keys are the integers 0..-(n-1).
        Rational b = closed_ ? floor_of(bound_) : ceil_of(bound_) - 1;
        if (b >= 0) return whole(group_);
        if (b <= -group_.rank()) return trivial(group_);
        return ConvexSubgroup(group_, Kind::UpTo, b, true);
    }

    ValueGroup group_;
    Kind kind_;
    Rational bound_;
    bool closed_;
};

// C(g): the least convex subgroup containing g.
inline ConvexSubgroup smallest_convex_containing(const GroupElement& g) {
    if (g.is_zero()) throw domain_error("smallest_convex_containing(0)");
    return ConvexSubgroup::up_to_key(g.group(), g.leading_key(), true);
}

// H(g): the union of the convex subgroups not containing g.
inline ConvexSubgroup largest_convex_excluding(const GroupElement& g) {
    if (g.is_zero()) throw domain_error("largest_convex_excluding(0)");
    return ConvexSubgroup::up_to_key(g.group(), g.leading_key(), false);
}

inline bool dense_components(const ValueGroup& g) { return g.dense_components(); }

// All convex subgroups of a lexicographic group, from trivial to whole.
inline std::vector<ConvexSubgroup> lex_convex_subgroups(const ValueGroup& g) {
    if (!g.is_lex()) throw structural_error("the Hahn group has infinitely many convex subgroups");
    std::vector<ConvexSubgroup> out;
    for (int k = g.rank(); k >= 0; --k) out.push_back(ConvexSubgroup::lex_cut(g, k));
    return out;
}

// Keep only the part of s that is significant modulo H (drops coordinates inside H).
inline GroupElement reduce_mod(const GroupElement& s, const ConvexSubgroup& h) {
    if (h.is_whole()) return GroupElement::zero(s.group());
    if (h.is_trivial()) return s;
    std::vector<GroupElement::Term> kept;
    for (auto& t : s.terms())
        if (h.closed() ? t.first > h.bound() : t.first >= h.bound()) kept.push_back(t);
    return GroupElement::from_terms(s.group(), std::move(kept));
}

// A cut of the value group: the upward-closed set of values lying above the
// bottom or top of the coset shift + H. With H trivial this is {v >= shift} or
// {v > shift}; with H = whole it is everything (bottom) or nothing (top).
class Gap {
public:
    enum class Side { Bottom, Top };

    Gap(ConvexSubgroup h, GroupElement shift, Side side) : h_(std::move(h)), shift_(std::move(shift)), side_(side) {
        if (!(h_.group() == shift_.group())) throw structural_error("gap subgroup/shift group mismatch");
        normalize();
    }

    static Gap at_least(const GroupElement& g) { return Gap(ConvexSubgroup::trivial(g.group()), g, Side::Bottom); }
    static Gap greater_than(const GroupElement& g) { return Gap(ConvexSubgroup::trivial(g.group()), g, Side::Top); }
    static Gap above_subgroup(const ConvexSubgroup& h) { return Gap(h, GroupElement::zero(h.group()), Side::Top); }
    static Gap from_subgroup(const ConvexSubgroup& h) { return Gap(h, GroupElement::zero(h.group()), Side::Bottom); }
    static Gap nothing(ValueGroup g) { return above_subgroup(ConvexSubgroup::whole(g)); }
    static Gap everything(ValueGroup g) { return from_subgroup(ConvexSubgroup::whole(g)); }

    const ConvexSubgroup& subgroup() const { return h_; }
    const GroupElement& shift() const { return shift_; }
    Side side() const { return side_; }
    const ValueGroup& group() const { return h_.group(); }

    bool is_nothing() const { return h_.is_whole() && side_ == Side::Top; }
    bool is_everything() const { return h_.is_whole() && side_ == Side::Bottom; }
    bool is_point() const { return h_.is_trivial(); }

    // Is the value v in the upward-closed set above this gap?
    bool admits(const GroupElement& v) const {
        int pos = h_.position(v - shift_);
        if (pos != 0) return pos > 0;
        return side_ == Side::Bottom;
    }

    // Gap order: a lower gap admits more values.
    friend std::strong_ordering operator<=>(const Gap& a, const Gap& b) {
        if (a.h_ <= b.h_) return cmp_small_big(a, b);
        return 0 <=> cmp_small_big(b, a);
    }
    friend bool operator==(const Gap& a, const Gap& b) { return (a <=> b) == 0; }

    Gap shifted(const GroupElement& by) const { return Gap(h_, shift_ + by, side_); }

    // {x : x + I subset of C} for I = *this, C = target.
    Gap residual_into(const Gap& target) const {
        const Gap& i = *this;
        const Gap& c = target;
        GroupElement s = c.shift_ - i.shift_;
        if (i.h_ <= c.h_) {
            bool bottom = (i.h_ < c.h_ && c.side_ == Side::Bottom) ||
                          (i.h_ == c.h_ && (i.side_ == Side::Top || c.side_ == Side::Bottom));
            return Gap(c.h_, s, bottom ? Side::Bottom : Side::Top);
        }
        return Gap(i.h_, s, i.side_ == Side::Top ? Side::Bottom : Side::Top);
    }

    std::string to_string() const;

private:
    static std::strong_ordering cmp_small_big(const Gap& x, const Gap& y) {
        int pos = y.h_.position(x.shift_ - y.shift_);
        if (pos > 0) return std::strong_ordering::greater;
        if (pos < 0) return std::strong_ordering::less;
        if (x.h_ == y.h_) {
            if (x.side_ == y.side_) return std::strong_ordering::equal;
            return x.side_ == Side::Bottom ? std::strong_ordering::less : std::strong_ordering::greater;
        }
        return y.side_ == Side::Bottom ? std::strong_ordering::greater : std::strong_ordering::less;
    }

    void normalize() {
        // In Z^n lex the cosets of cut(k) are consecutive in the quotient Z^k, so the
        // top of one coset is the bottom of the next.
        if (group().is_discrete() && side_ == Side::Top && !h_.is_whole()) {
            int k = h_.lex_cut_index();
            std::vector<Rational> step(group().rank(), Rational(0));
            step[k - 1] = 1;
            shift_ = shift_ + GroupElement::from_coords(group(), step);
            side_ = Side::Bottom;
        }
        shift_ = reduce_mod(shift_, h_);
    }

    ConvexSubgroup h_;
    GroupElement shift_;
    Side side_;
};

inline std::string Gap::to_string() const {
    if (is_nothing()) return "nothing";
    if (is_everything()) return "everything";
    if (h_.is_trivial()) return std::string(side_ == Side::Bottom ? ">= " : "> ") + shift_.to_short_string();
    std::string base = side_ == Side::Top ? "above " : "from ";
    std::string s = base + "H:" + h_.to_string();
    if (!shift_.is_zero()) s += " + " + shift_.to_short_string();
    return s;
}

// Number of group elements strictly between two gaps (values admitted by lo but
// not by hi); nullopt when infinite.
inline std::optional<Integer> count_between(const Gap& lo, const Gap& hi) {
    if (lo >= hi) return Integer(0);
    const ValueGroup& g = lo.group();
    if (!g.is_discrete() || !lo.is_point() || !hi.is_point()) return std::nullopt;
    auto a = lo.shift().coords(), b = hi.shift().coords();
    for (int i = 0; i + 1 < g.rank(); ++i)
        if (a[i] != b[i]) return std::nullopt;
    return numerator(b.back() - a.back());
}

// Enumerate the finitely many values between lo and hi (empty if infinitely many).
inline std::vector<GroupElement> values_between(const Gap& lo, const Gap& hi) {
    std::vector<GroupElement> out;
    auto n = count_between(lo, hi);
    if (!n || *n == 0) return out;
    auto base = lo.shift().coords();
    for (Integer i = 0; i < *n; ++i) {
        auto c = base;
        c.back() += Rational(i);
        out.push_back(GroupElement::from_coords(lo.group(), c));
    }
    return out;
}

} // namespace spectra_lab
