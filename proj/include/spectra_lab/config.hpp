#pragma once

// Ring-description files: a small TOML subset (sections, key = value, strings,
// integers, one-line arrays, # comments). Unknown keys are errors.

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "checks.hpp"

namespace spectra_lab {

namespace toml_lite {

struct Value {
    enum class Type { String, Integer, Array } type = Type::String;
    std::string str;
    long long num = 0;
    std::vector<Value> items;
    int line = 0, column = 0;

    std::string type_name() const {
        switch (type) {
        case Type::String: return "string";
        case Type::Integer: return "integer";
        case Type::Array: return "array";
        }
        return "?";
    }
};

struct Entry {
    std::string key;
    Value value;
    int line = 0, column = 0;
};

struct Table {
    std::string name;
    int line = 0;
    std::vector<Entry> entries;
};

class Reader {
public:
    explicit Reader(std::string_view text) : text_(text) {}

    std::vector<Table> read() {
        std::vector<Table> tables;
        std::set<std::string> seen;
        while (pos_ < text_.size()) {
            skip_blank();
            if (at_end_of_line()) {
                next_line();
                continue;
            }
            if (peek() == '[') {
                int col = column();
                ++pos_;
                std::string name = bare_word();
                if (name.empty()) fail("expected a section name", col + 1);
                skip_blank();
                if (peek() != ']') fail("expected ']' after section name");
                ++pos_;
                if (!seen.insert(name).second) fail("section [" + name + "] appears twice", col);
                int at = line_;
                end_line();
                tables.push_back({name, at, {}});
                continue;
            }
            if (tables.empty()) fail("key outside of any section");
            int col = column();
            std::string key = bare_word();
            if (key.empty()) fail(std::string("unexpected character '") + peek() + "'");
            skip_blank();
            if (peek() != '=') fail("expected '=' after key '" + key + "'");
            ++pos_;
            skip_blank();
            Value v = value();
            end_line();
            for (auto& e : tables.back().entries)
                if (e.key == key) fail("duplicate key '" + key + "'", col);
            tables.back().entries.push_back({key, std::move(v), line_ - 1, col});
        }
        return tables;
    }

private:
    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\n'; }
    int column() const { return static_cast<int>(pos_ - line_start_) + 1; }

    [[noreturn]] void fail(const std::string& msg, int col = 0) const { throw parse_error(msg, line_, col ? col : column()); }

    void skip_blank() {
        while (peek() == ' ' || peek() == '\t' || peek() == '\r') ++pos_;
    }
    bool at_end_of_line() const { return peek() == '\n' || peek() == '#'; }

    void next_line() {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
        if (pos_ < text_.size()) ++pos_;
        ++line_;
        line_start_ = pos_;
    }

    void end_line() {
        skip_blank();
        if (!at_end_of_line()) fail("unexpected text after value");
        next_line();
    }

    std::string bare_word() {
        std::string w;
        while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == '-') w += text_[pos_++];
        return w;
    }

    Value value() {
        Value v;
        v.line = line_;
        v.column = column();
        char c = peek();
        if (c == '"') {
            ++pos_;
            while (peek() != '"') {
                if (peek() == '\n') fail("unterminated string", v.column);
                if (peek() == '\\') {
                    ++pos_;
                    char e = peek();
                    if (e != '"' && e != '\\') fail("unsupported escape");
                }
                v.str += text_[pos_++];
            }
            ++pos_;
            return v;
        }
        if (c == '[') {
            v.type = Value::Type::Array;
            ++pos_;
            skip_blank();
            if (peek() == ']') {
                ++pos_;
                return v;
            }
            while (true) {
                skip_blank();
                Value item = value();
                if (item.type == Value::Type::Array) fail("nested arrays are not supported", item.column);
                v.items.push_back(std::move(item));
                skip_blank();
                if (peek() == ',') {
                    ++pos_;
                    skip_blank();
                    if (peek() == ']') {
                        ++pos_;
                        return v;
                    }
                    continue;
                }
                if (peek() == ']') {
                    ++pos_;
                    return v;
                }
                fail("expected ',' or ']' in array");
            }
        }
        if (c == '-' || c == '+' || std::isdigit(static_cast<unsigned char>(c))) {
            v.type = Value::Type::Integer;
            std::string digits;
            if (c == '-' || c == '+') digits += text_[pos_++];
            while (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '_') {
                if (peek() != '_') digits += peek();
                ++pos_;
            }
            if (digits.empty() || digits == "-" || digits == "+") fail("malformed integer", v.column);
            if (std::isalpha(static_cast<unsigned char>(peek())) || peek() == '.' || peek() == '/')
                fail("only integers are allowed unquoted; quote rationals and other literals", v.column);
            try {
                v.num = std::stoll(digits);
            } catch (const std::out_of_range&) {
                fail("integer out of range", v.column);
            }
            return v;
        }
        if (c == 't' || c == 'f') fail("booleans are not used by this format", v.column);
        fail("expected a value");
    }

    std::string_view text_;
    std::size_t pos_ = 0, line_start_ = 0;
    int line_ = 1;
};

inline std::vector<Table> parse(std::string_view text) { return Reader(text).read(); }

} // namespace toml_lite

struct RingConfig {
    RingDescriptor ring;
    SamplerConfig sampler;
    std::size_t samples = 1000;
    int n_max = 8;
    std::vector<std::string> checks; // registry order
};

namespace detail {

class Fields {
public:
    Fields(const toml_lite::Table& t) : t_(t) {}

    const toml_lite::Entry* find(const std::string& key) {
        for (auto& e : t_.entries)
            if (e.key == key) {
                used_.insert(key);
                return &e;
            }
        return nullptr;
    }

    [[noreturn]] static void fail_at(const toml_lite::Entry& e, const std::string& msg) {
        throw parse_error(msg, e.value.line, e.value.column);
    }

    std::optional<std::string> str(const std::string& key) {
        auto e = find(key);
        if (!e) return std::nullopt;
        if (e->value.type != toml_lite::Value::Type::String) fail_at(*e, "'" + key + "' must be a string, got " + e->value.type_name());
        return e->value.str;
    }

    std::optional<long long> integer(const std::string& key, long long lo, long long hi) {
        auto e = find(key);
        if (!e) return std::nullopt;
        if (e->value.type != toml_lite::Value::Type::Integer) fail_at(*e, "'" + key + "' must be an integer, got " + e->value.type_name());
        if (e->value.num < lo || e->value.num > hi)
            fail_at(*e, "'" + key + "' must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
        return e->value.num;
    }

    std::optional<std::vector<std::string>> strings(const std::string& key) {
        auto e = find(key);
        if (!e) return std::nullopt;
        if (e->value.type != toml_lite::Value::Type::Array) fail_at(*e, "'" + key + "' must be an array of strings");
        std::vector<std::string> out;
        for (auto& v : e->value.items) {
            if (v.type != toml_lite::Value::Type::String) throw parse_error("array items of '" + key + "' must be strings", v.line, v.column);
            out.push_back(v.str);
        }
        return out;
    }

    // Wraps errors from literal parsers with the location of the key's value.
    template <class F>
    auto located(const std::string& key, F&& f) -> decltype(f()) {
        const toml_lite::Entry* e = nullptr;
        for (auto& x : t_.entries)
            if (x.key == key) e = &x;
        try {
            return f();
        } catch (const parse_error& err) {
            if (err.line || !e) throw;
            fail_at(*e, err.what());
        } catch (const domain_error& err) {
            if (!e) throw;
            fail_at(*e, err.what());
        } catch (const structural_error& err) {
            if (!e) throw;
            fail_at(*e, err.what());
        }
    }

    void reject_unused(const std::set<std::string>& allowed, const std::string& context) {
        for (auto& e : t_.entries) {
            if (used_.count(e.key)) continue;
            if (allowed.count(e.key)) fail_keyed(e, "key '" + e.key + "' does not apply to " + context);
            throw parse_error("unknown key '" + e.key + "' in [" + t_.name + "]", e.line, e.column);
        }
    }

    const toml_lite::Table& table() const { return t_; }

private:
    [[noreturn]] static void fail_keyed(const toml_lite::Entry& e, const std::string& msg) { throw parse_error(msg, e.line, e.column); }

    const toml_lite::Table& t_;
    std::set<std::string> used_;
};

inline const std::set<std::string>& ring_keys() {
    static const std::set<std::string> keys = {"kind",  "base_kind", "label", "field",     "group", "subfield",
                                               "monomials", "ideal", "subgroup", "p",     "precision", "prime"};
    return keys;
}

// ">= g" | "> g" | "above H:<subgroup>" | "from H:<subgroup>" [+ g] | "nothing" | "everything"
inline Gap parse_cut(const ValueGroup& g, std::string_view text) {
    auto trim = [](std::string_view s) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
        return s;
    };
    std::string_view t = trim(text);
    if (t == "nothing") return Gap::nothing(g);
    if (t == "everything") return Gap::everything(g);
    if (t.rfind(">=", 0) == 0) return Gap::at_least(GroupElement::parse(g, t.substr(2)));
    if (t.rfind(">", 0) == 0) return Gap::greater_than(GroupElement::parse(g, t.substr(1)));
    for (auto [prefix, top] : {std::pair{std::string_view("above H:"), true}, std::pair{std::string_view("from H:"), false}}) {
        if (t.rfind(prefix, 0) != 0) continue;
        std::string_view rest = t.substr(prefix.size());
        std::size_t close = rest.find(')');
        std::string_view sub = close == std::string_view::npos ? rest : rest.substr(0, close + 1);
        ConvexSubgroup h = ConvexSubgroup::parse(g, trim(sub));
        GroupElement shift = GroupElement::zero(g);
        std::string_view tail = trim(rest.substr(sub.size()));
        if (!tail.empty()) {
            if (tail.front() != '+') throw parse_error("expected '+ shift' after subgroup in cut '" + std::string(t) + "'");
            shift = GroupElement::parse(g, tail.substr(1));
        }
        return Gap(h, shift, top ? Gap::Side::Top : Gap::Side::Bottom);
    }
    throw parse_error("bad cut '" + std::string(t) + "'; expected '>= g', '> g' or 'above H:<subgroup>'");
}

inline unsigned parse_subfield(const CoeffField& f, const std::string& s) {
    if (s == "prime") return 1;
    if (s == "full") return f.degree();
    if (s.rfind("degree=", 0) == 0) {
        Rational d = parse_rational(s.substr(7));
        if (!is_integer(d) || d < 1) throw parse_error("subfield degree must be a positive integer");
        return static_cast<unsigned>(numerator(d));
    }
    throw parse_error("subfield must be 'prime', 'full' or 'degree=d', got '" + s + "'");
}

inline RingDescriptor build_ring(Fields& f, const std::string& kind, const std::string& label, int precision_override) {
    static const std::set<std::string> hahn_kinds = {"valuation", "d_plus", "coarsening", "pullback"};
    if (hahn_kinds.count(kind)) {
        FieldPtr field = f.located("field", [&] { return parse_coeff_field(f.str("field").value_or("p=5,k=2")); });
        auto gtext = f.str("group");
        if (!gtext) throw parse_error("[ring] kind '" + kind + "' needs 'group'", f.table().line, 1);
        ValueGroup g = f.located("group", [&] { return ValueGroup::parse(*gtext); });
        HahnAmbient amb{g, field};
        if (kind == "valuation") return make_valuation_ring(Ambient(amb), label);
        if (kind == "coarsening" || kind == "pullback") {
            auto stext = f.str("subgroup");
            if (!stext) throw parse_error("kind '" + kind + "' needs 'subgroup'", f.table().line, 1);
            ConvexSubgroup h = f.located("subgroup", [&] { return ConvexSubgroup::parse(g, *stext); });
            if (kind == "coarsening") return make_coarsening(Ambient(amb), h, label);
            auto itext = f.str("ideal");
            if (!itext) throw parse_error("kind 'pullback' needs 'ideal'", f.table().line, 1);
            Gap j = f.located("ideal", [&] { return parse_cut(g, *itext); });
            return f.located("ideal", [&] { return make_pullback(amb, h, j, label); });
        }
        unsigned degree = f.located("subfield", [&] { return parse_subfield(*field, f.str("subfield").value_or("prime")); });
        auto mono = f.strings("monomials").value_or(std::vector<std::string>{"0"});
        std::vector<GroupElement> ms;
        for (auto& m : mono) ms.push_back(f.located("monomials", [&] { return GroupElement::parse(g, m); }));
        auto itext = f.str("ideal");
        if (!itext) throw parse_error("kind 'd_plus' needs 'ideal'", f.table().line, 1);
        Gap cut = f.located("ideal", [&] { return parse_cut(g, *itext); });
        if (cut < Gap::at_least(GroupElement::zero(g)))
            f.located("ideal", [&]() -> int { throw domain_error("ideal cut must be >= 0, got '" + *itext + "'"); });
        f.located("subfield", [&] {
            if (!field->divides_degree(degree)) throw domain_error("subfield degree does not divide " + std::to_string(field->degree()));
            return 0;
        });
        return f.located("monomials", [&] { return make_d_plus(amb, degree, ms, cut, label); });
    }
    if (kind == "padic_d" || kind == "padic_val") {
        auto p = f.integer("p", 2, 1000003);
        if (!p) throw parse_error("kind '" + kind + "' needs 'p'", f.table().line, 1);
        int prec = static_cast<int>(f.integer("precision", 2, 4096).value_or(default_prec2));
        if (precision_override > 0) prec = precision_override;
        return f.located("p", [&] {
            if (*p % 2 == 0 || !is_prime(static_cast<unsigned>(*p)))
                throw domain_error("p must be an odd prime (p != 2), got " + std::to_string(*p));
            return kind == "padic_d" ? make_padic_d(static_cast<unsigned>(*p), prec, label)
                                     : make_padic_val(static_cast<unsigned>(*p), prec, label);
        });
    }
    throw parse_error("unknown ring kind '" + kind + "'; expected valuation, d_plus, coarsening, padic_d, padic_val, cpi or pullback");
}

inline std::set<std::string> keys_for(const std::string& kind) {
    if (kind == "valuation") return {"field", "group"};
    if (kind == "coarsening") return {"field", "group", "subgroup"};
    if (kind == "pullback") return {"field", "group", "subgroup", "ideal"};
    if (kind == "d_plus") return {"field", "group", "subfield", "monomials", "ideal"};
    if (kind == "padic_d" || kind == "padic_val") return {"p", "precision"};
    return {};
}

} // namespace detail

inline RingDescriptor parse_ring_table(const toml_lite::Table& t, int precision_override = 0) {
    detail::Fields f(t);
    auto kind = f.str("kind");
    if (!kind) throw parse_error("[ring] needs 'kind'", t.line, 1);
    std::string label = f.str("label").value_or("");
    RingDescriptor r = [&] {
        if (*kind != "cpi") return f.located("kind", [&] { return detail::build_ring(f, *kind, label, precision_override); });
        auto base = f.str("base_kind");
        if (!base) throw parse_error("kind 'cpi' needs 'base_kind'", t.line, 1);
        if (*base == "cpi") throw parse_error("cpi of a cpi ring is not supported", t.line, 1);
        RingDescriptor b = f.located("base_kind", [&] { return detail::build_ring(f, *base, "", precision_override); });
        auto ptext = f.str("prime");
        if (!ptext) throw parse_error("kind 'cpi' needs 'prime' (a convex subgroup)", t.line, 1);
        ConvexSubgroup h = f.located("prime", [&] { return ConvexSubgroup::parse(ambient_of(b).group(), *ptext); });
        return f.located("prime", [&] {
            RingDescriptor out = cpi_extension(PrimeSpec{b, h}).extension;
            out.label = label;
            return out;
        });
    }();
    std::set<std::string> allowed = detail::keys_for(*kind == "cpi" ? f.str("base_kind").value_or("") : *kind);
    allowed.insert({"kind", "label"});
    if (*kind == "cpi") allowed.insert({"base_kind", "prime"});
    std::set<std::string> other;
    for (auto& k : detail::ring_keys())
        if (!allowed.count(k)) other.insert(k);
    f.reject_unused(other, "kind '" + *kind + "'");
    return r;
}

inline RingConfig parse_ring(std::string_view text, int precision_override = 0) {
    auto tables = toml_lite::parse(text);
    std::optional<RingDescriptor> ring;
    RingConfig cfg{make_padic_val(3)};
    for (auto& t : tables) {
        if (t.name == "ring") {
            ring = parse_ring_table(t, precision_override);
        } else if (t.name == "sampler") {
            detail::Fields f(t);
            if (auto e = f.find("seed")) {
                if (e->value.type == toml_lite::Value::Type::Integer) {
                    if (e->value.num < 0) detail::Fields::fail_at(*e, "seed must be non-negative");
                    cfg.sampler.seed = static_cast<std::uint64_t>(e->value.num);
                } else if (e->value.type == toml_lite::Value::Type::String) {
                    cfg.sampler.seed = parse_seed(e->value.str);
                } else {
                    detail::Fields::fail_at(*e, "seed must be an integer or a string");
                }
            }
            if (auto s = f.integer("samples", 0, 100000000)) cfg.samples = static_cast<std::size_t>(*s);
            if (auto r = f.integer("range", 1, 1000)) cfg.sampler.range = static_cast<int>(*r);
            if (auto st = f.str("step")) {
                cfg.sampler.step = f.located("step", [&] { return parse_rational(*st); });
                if (cfg.sampler.step <= 0)
                    f.located("step", [&]() -> int { throw domain_error("step must be positive"); });
            }
            if (auto c = f.str("coeffs")) {
                if (*c == "full_field") cfg.sampler.coeff_mode = CoeffMode::FullField;
                else if (*c == "prime_subfield") cfg.sampler.coeff_mode = CoeffMode::PrimeSubfield;
                else f.located("coeffs", [&]() -> int { throw domain_error("coeffs must be full_field or prime_subfield"); });
            }
            if (auto d = f.str("denominators")) {
                if (*d == "one_plus_small") cfg.sampler.denom_mode = DenomMode::OnePlusSmall;
                else if (*d == "monomial") cfg.sampler.denom_mode = DenomMode::Monomial;
                else f.located("denominators", [&]() -> int { throw domain_error("denominators must be one_plus_small or monomial"); });
            }
            f.reject_unused({}, "[sampler]");
        } else if (t.name == "checks") {
            detail::Fields f(t);
            if (auto n = f.integer("n_max", 1, 64)) cfg.n_max = static_cast<int>(*n);
            if (auto run = f.strings("run")) {
                std::set<std::string> chosen;
                for (auto& name : *run) {
                    if (name == "all") {
                        chosen.insert(check_names().begin(), check_names().end());
                        continue;
                    }
                    if (std::find(check_names().begin(), check_names().end(), name) == check_names().end())
                        f.located("run", [&]() -> int { throw domain_error("unknown check '" + name + "'"); });
                    chosen.insert(name);
                }
                for (auto& n : check_names())
                    if (chosen.count(n)) cfg.checks.push_back(n);
            }
            f.reject_unused({}, "[checks]");
        } else {
            throw parse_error("unknown section [" + t.name + "]", t.line, 1);
        }
    }
    if (!ring) throw parse_error("missing [ring] section", 1, 1);
    cfg.ring = *ring;
    return cfg;
}

inline RingConfig load_ring(const std::string& path, int precision_override = 0) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open ring file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_ring(ss.str(), precision_override);
    } catch (const parse_error& e) {
        throw parse_error(path + ":" + e.what());
    }
}

namespace detail {

inline std::string quoted(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

inline void serialize_base(std::ostream& os, const RingDescriptor& r) {
    const RingDescriptor& rr = resolve(r);
    auto hahn_head = [&](const HahnAmbient& a) {
        os << "field = " << quoted("p=" + std::to_string(a.field->characteristic()) + ",k=" + std::to_string(a.field->degree())) << "\n";
        os << "group = " << quoted(a.group.to_string()) << "\n";
    };
    if (auto x = rr.get<ValuationRing>()) {
        if (x->amb.is_padic()) {
            os << "p = " << x->amb.as_padic().p << "\nprecision = " << x->amb.prec2() << "\n";
            return;
        }
        hahn_head(x->amb.as_hahn());
        if (!x->h.is_trivial()) os << "subgroup = " << quoted(x->h.to_string()) << "\n";
    } else if (auto x = rr.get<DPlusRing>()) {
        hahn_head(x->amb);
        std::string sub = x->degree == 1 ? "prime" : x->degree == x->amb.field->degree() ? "full" : "degree=" + std::to_string(x->degree);
        os << "subfield = " << quoted(sub) << "\nmonomials = [";
        for (std::size_t i = 0; i < x->monomials.size(); ++i) os << (i ? ", " : "") << quoted(x->monomials[i].to_short_string());
        os << "]\nideal = " << quoted(x->cut.to_string()) << "\n";
    } else if (auto x = rr.get<PadicDRing>()) {
        os << "p = " << x->p << "\nprecision = " << x->prec2 << "\n";
    } else if (auto x = rr.get<PullbackRing>()) {
        hahn_head(x->amb);
        os << "subgroup = " << quoted(x->h.to_string()) << "\nideal = " << quoted(x->j.to_string()) << "\n";
    }
}

} // namespace detail

inline std::string serialize(const RingConfig& cfg) {
    std::ostringstream os;
    const RingDescriptor& r = cfg.ring;
    os << "[ring]\n";
    if (auto c = r.get<CPIRing>()) {
        os << "kind = \"cpi\"\nbase_kind = " << detail::quoted(kind_name(*c->base)) << "\n";
        if (!r.label.empty()) os << "label = " << detail::quoted(r.label) << "\n";
        detail::serialize_base(os, *c->base);
        os << "prime = " << detail::quoted(c->prime.to_string()) << "\n";
    } else {
        os << "kind = " << detail::quoted(kind_name(r)) << "\n";
        if (!r.label.empty()) os << "label = " << detail::quoted(r.label) << "\n";
        detail::serialize_base(os, r);
    }
    const SamplerConfig& s = cfg.sampler;
    os << "\n[sampler]\nseed = " << detail::quoted(std::to_string(s.seed)) << "\nsamples = " << cfg.samples << "\nstep = "
       << detail::quoted(to_string(s.step)) << "\nrange = " << s.range << "\ncoeffs = "
       << detail::quoted(s.coeff_mode == CoeffMode::FullField ? "full_field" : "prime_subfield") << "\ndenominators = "
       << detail::quoted(s.denom_mode == DenomMode::OnePlusSmall ? "one_plus_small" : "monomial") << "\n";
    os << "\n[checks]\nn_max = " << cfg.n_max << "\nrun = [";
    for (std::size_t i = 0; i < cfg.checks.size(); ++i) os << (i ? ", " : "") << detail::quoted(cfg.checks[i]);
    os << "]\n";
    return os.str();
}

} // namespace spectra_lab
