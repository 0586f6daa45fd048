#pragma once

// Elements of Q_p(pi), pi^2 = p, p odd, known modulo pi^prec2.
//
// An element is stored as p^(s/2) * (A + B*pi) with s even and A, B reduced
// non-negative integers. The pi-adic digit at index s+2j is the j-th base-p
// digit of A, the digit at s+2j+1 is the j-th base-p digit of B.

#include <boost/integer/mod_inverse.hpp>

#include <optional>
#include <string>
#include <vector>

#include "coeff_field.hpp"
#include "errors.hpp"
#include "rational.hpp"
#include "tribool.hpp"

namespace spectra_lab {

inline constexpr int default_prec2 = 32;

class PiAdic {
public:
    static PiAdic from_integer(unsigned p, const Integer& n, int prec2 = default_prec2) {
        return PiAdic(p, 0, n, 0, prec2);
    }

    // pi^k, any integer k.
    static PiAdic pi_power(unsigned p, int k, int prec2 = default_prec2) {
        int s = k - mod2(k);
        return mod2(k) ? PiAdic(p, s, 0, 1, prec2) : PiAdic(p, s, 1, 0, prec2);
    }

    // sum of digits[i] * pi^(start + i)
    static PiAdic from_digits(unsigned p, int start, const std::vector<unsigned>& digits, int prec2 = default_prec2) {
        PiAdic r = zero(p, prec2);
        for (std::size_t i = 0; i < digits.size(); ++i) {
            if (digits[i] >= p) throw domain_error("pi-adic digit out of range");
            if (digits[i] == 0) continue;
            r = r + from_integer(p, digits[i], prec2) * pi_power(p, start + static_cast<int>(i), prec2);
        }
        return r;
    }

    static PiAdic zero(unsigned p, int prec2 = default_prec2) { return PiAdic(p, 0, 0, 0, prec2); }
    static PiAdic one(unsigned p, int prec2 = default_prec2) { return from_integer(p, 1, prec2); }

    unsigned prime() const { return p_; }
    int prec2() const { return prec2_; }

    bool is_zero() const { return a_ == 0 && b_ == 0; }

    // Index of the first nonzero digit, or prec2 when zero to precision.
    int val2() const {
        if (is_zero()) return prec2_;
        return a_ % p_ != 0 ? s_ : s_ + 1;
    }

    // Valuation with v(p) = 1.
    Rational valuation() const { return Rational(val2(), 2); }

    std::optional<unsigned> digit_at(int i) const {
        if (i >= prec2_) return std::nullopt;
        if (is_zero() || i < s_) return 0u;
        int j = i - s_;
        const Integer& src = (j % 2 == 0) ? a_ : b_;
        Integer q = src / pow_p(j / 2);
        return static_cast<unsigned>(q % p_);
    }

    // Digits from val2 up to prec2-1.
    std::vector<unsigned> digits() const {
        std::vector<unsigned> out;
        for (int i = val2(); i < prec2_; ++i) out.push_back(*digit_at(i));
        return out;
    }

    PiAdic operator-() const { return PiAdic(p_, s_, -a_, -b_, prec2_); }

    friend PiAdic operator+(const PiAdic& x, const PiAdic& y) {
        check_same(x, y);
        int s = std::min(x.s_, y.s_);
        Integer fx = x.pow_p((x.s_ - s) / 2), fy = y.pow_p((y.s_ - s) / 2);
        return PiAdic(x.p_, s, x.a_ * fx + y.a_ * fy, x.b_ * fx + y.b_ * fy, std::min(x.prec2_, y.prec2_));
    }
    friend PiAdic operator-(const PiAdic& x, const PiAdic& y) { return x + (-y); }

    friend PiAdic operator*(const PiAdic& x, const PiAdic& y) {
        check_same(x, y);
        int prec = std::min(x.prec2_ + y.val2(), y.prec2_ + x.val2());
        Integer a = x.a_ * y.a_ + Integer(x.p_) * x.b_ * y.b_;
        Integer b = x.a_ * y.b_ + x.b_ * y.a_;
        return PiAdic(x.p_, x.s_ + y.s_, a, b, prec);
    }

    PiAdic inverse() const {
        if (is_zero()) throw precision_error("inverse of an element that is zero to precision " + std::to_string(prec2_));
        int v = val2();
        int prec = prec2_ - 2 * v;
        // Unit part u = A + B pi (or pi * (B + A/p * pi) when p | A).
        Integer a = a_, b = b_;
        int s = s_;
        int shift = 0;
        if (a % p_ == 0) {
            Integer na = b, nb = a / p_;
            a = na;
            b = nb;
            shift = 1;
        }
        // 1/(a + b pi) = (a - b pi) / (a^2 - p b^2), the norm is a p-adic unit.
        int need = (prec - (-s - shift)) / 2 + 2;
        if (need < 1) need = 1;
        Integer mod = pow_p(need);
        Integer norm = a * a - Integer(p_) * b * b;
        Integer nm = norm % mod;
        if (nm < 0) nm += mod;
        Integer ninv = boost::integer::mod_inverse(nm, mod);
        if (!shift) return PiAdic(p_, -s, a * ninv, -b * ninv, prec);
        // times 1/pi = pi/p
        return PiAdic(p_, -s - 2, -b * ninv * Integer(p_), a * ninv, prec);
    }

    friend PiAdic operator/(const PiAdic& x, const PiAdic& y) { return x * y.inverse(); }

    PiAdic pow(long long n) const {
        if (n < 0) return inverse().pow(-n);
        if (n == 0) return one(p_, prec2_);
        PiAdic r = *this, base = *this;
        bool first = true;
        while (n) {
            if (n & 1) {
                r = first ? base : r * base;
                first = false;
            }
            n >>= 1;
            if (n) base = base * base;
        }
        return r;
    }

    // Same element with a different absolute precision: truncates, or treats the
    // stored representative as exact when raising.
    PiAdic with_precision(int prec2) const { return PiAdic(p_, s_, a_, b_, prec2); }

    // Digits agree below the shared precision.
    bool agrees_with(const PiAdic& y) const { return (*this - y).is_zero(); }

    std::string to_string() const {
        std::string s;
        if (!is_zero()) {
            for (int i = val2(); i < prec2_; ++i) {
                unsigned d = *digit_at(i);
                if (!d) continue;
                if (!s.empty()) s += " + ";
                if (d != 1 || i == 0) s += std::to_string(d);
                if (i != 0) {
                    if (d != 1) s += "*";
                    s += i == 1 ? "pi" : "pi^" + std::to_string(i);
                }
            }
        }
        if (s.empty()) s = "0";
        return s + " (p=" + std::to_string(p_) + ", prec=" + std::to_string(prec2_) + ")";
    }

private:
    PiAdic(unsigned p, int s, Integer a, Integer b, int prec2) : p_(p), s_(s), a_(std::move(a)), b_(std::move(b)), prec2_(prec2) {
        if (p % 2 == 0 || !is_prime(p)) throw domain_error("pi-adic arithmetic needs an odd prime, got " + std::to_string(p));
        if (mod2(s_)) throw structural_error("odd scale in pi-adic representation");
        normalize();
    }

    static int mod2(int k) { return ((k % 2) + 2) % 2; }
    static int ceil_half(int n) { return n <= 0 ? 0 : (n + 1) / 2; }

    Integer pow_p(int e) const {
        Integer r = 1;
        for (int i = 0; i < e; ++i) r *= p_;
        return r;
    }

    static void check_same(const PiAdic& x, const PiAdic& y) {
        if (x.p_ != y.p_) throw structural_error("pi-adic elements over different primes");
    }

    void normalize() {
        Integer ma = pow_p(ceil_half(prec2_ - s_)), mb = pow_p(ceil_half(prec2_ - s_ - 1));
        a_ %= ma;
        if (a_ < 0) a_ += ma;
        b_ %= mb;
        if (b_ < 0) b_ += mb;
        if (is_zero()) {
            s_ = 0;
            return;
        }
        while (a_ % p_ == 0 && b_ % p_ == 0) {
            a_ /= p_;
            b_ /= p_;
            s_ += 2;
        }
    }

    unsigned p_;
    int s_;
    Integer a_, b_;
    int prec2_;
};

// "pi^3 + 2*pi^4 (p=5, prec=32)"
inline PiAdic parse_piadic(std::string_view text, std::optional<unsigned> default_p = std::nullopt,
                           int default_prec = default_prec2) {
    auto trim = [](std::string_view s) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
        return s;
    };
    text = trim(text);
    std::optional<unsigned> p = default_p;
    int prec = default_prec;
    auto open = text.rfind('(');
    if (open != std::string_view::npos && text.back() == ')') {
        std::string_view params = text.substr(open + 1, text.size() - open - 2);
        text = trim(text.substr(0, open));
        std::size_t pos = 0;
        while (pos <= params.size()) {
            auto comma = params.find(',', pos);
            std::string_view part = trim(params.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
            auto eq = part.find('=');
            if (eq == std::string_view::npos) throw parse_error("expected key=value in pi-adic parameters");
            std::string_view key = trim(part.substr(0, eq));
            Rational v = parse_rational(part.substr(eq + 1));
            if (!is_integer(v) || v < 1 || v > 100000) throw parse_error("pi-adic parameter out of range");
            if (key == "p") p = static_cast<unsigned>(numerator(v));
            else if (key == "prec") prec = static_cast<int>(numerator(v));
            else throw parse_error("unknown pi-adic parameter '" + std::string(key) + "'");
            if (comma == std::string_view::npos) break;
            pos = comma + 1;
        }
    }
    if (!p) throw parse_error("pi-adic literal needs (p=...)");
    if (*p % 2 == 0 || !is_prime(*p)) throw parse_error("pi-adic literal needs an odd prime p");
    PiAdic r = PiAdic::zero(*p, prec);
    if (text == "0") return r;
    // Split on top-level + and -.
    std::vector<std::pair<bool, std::string_view>> terms;
    bool neg = false;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= text.size(); ++i) {
        if (i == text.size() || text[i] == '+' || text[i] == '-') {
            std::string_view t = trim(text.substr(start, i - start));
            if (!t.empty() && t.back() == '^') continue;
            if (!t.empty()) terms.emplace_back(neg, t);
            else if (i == text.size()) throw parse_error("pi-adic literal ends with a sign");
            if (i < text.size()) neg = text[i] == '-';
            start = i + 1;
        }
    }
    for (auto [negative, t] : terms) {
        Integer c = 1;
        int k = 0;
        auto star = t.find('*');
        std::string_view coeff = t, mono;
        if (star != std::string_view::npos) {
            coeff = trim(t.substr(0, star));
            mono = trim(t.substr(star + 1));
        } else if (t.substr(0, 2) == "pi") {
            coeff = {};
            mono = t;
        }
        if (!coeff.empty()) {
            Rational cv = parse_rational(coeff);
            if (!is_integer(cv)) throw parse_error("pi-adic coefficients must be integers");
            c = numerator(cv);
        }
        if (!mono.empty()) {
            if (mono.substr(0, 2) != "pi") throw parse_error("expected pi^k, got '" + std::string(mono) + "'");
            std::string_view rest = trim(mono.substr(2));
            k = 1;
            if (!rest.empty()) {
                if (rest[0] != '^') throw parse_error("expected '^' after pi");
                Rational kv = parse_rational(rest.substr(1));
                if (!is_integer(kv)) throw parse_error("pi exponent must be an integer");
                k = static_cast<int>(numerator(kv));
            }
        }
        PiAdic term = PiAdic::from_integer(*p, negative ? Integer(-c) : c, prec + std::abs(k) + 2) * PiAdic::pi_power(*p, k, prec + std::abs(k) + 2);
        r = r + term.with_precision(prec);
    }
    return r.with_precision(prec);
}

// Coefficients c0 + c1 x + c2 x^2 + ...
struct PiPolynomial {
    std::vector<PiAdic> coeffs;

    PiAdic eval(const PiAdic& x) const {
        if (coeffs.empty()) return PiAdic::zero(x.prime(), x.prec2());
        PiAdic r = coeffs.back();
        for (std::size_t i = coeffs.size() - 1; i-- > 0;) r = r * x + coeffs[i];
        return r;
    }

    PiPolynomial derivative() const {
        PiPolynomial d;
        for (std::size_t i = 1; i < coeffs.size(); ++i) {
            const PiAdic& c = coeffs[i];
            d.coeffs.push_back(c * PiAdic::from_integer(c.prime(), static_cast<long>(i), c.prec2() + 64));
        }
        return d;
    }
};

// Newton iteration from x0; requires v(f(x0)) > 2 v(f'(x0)).
inline PiAdic hensel_lift(const PiPolynomial& f, const PiAdic& x0, int target_prec2) {
    PiPolynomial df = f.derivative();
    PiAdic fx = f.eval(x0), dfx = df.eval(x0);
    if (dfx.is_zero()) throw convergence_error("f'(x0) vanishes to precision; Newton iteration undefined");
    if (!fx.is_zero() && !(fx.val2() > 2 * dfx.val2()))
        throw convergence_error("Newton precondition fails: v2(f(x0)) = " + std::to_string(fx.val2()) +
                                " is not > 2*v2(f'(x0)) = " + std::to_string(2 * dfx.val2()));
    PiAdic x = x0.with_precision(target_prec2 + 2 * dfx.val2() + 4);
    for (int iter = 0; iter < 256; ++iter) {
        fx = f.eval(x);
        if (fx.val2() >= target_prec2) {
            if (x.prec2() < target_prec2) break;
            return x.with_precision(target_prec2);
        }
        x = x - fx / df.eval(x);
    }
    throw precision_error("Newton iteration could not reach precision " + std::to_string(target_prec2) +
                          " (coefficients known to too few digits)");
}

} // namespace spectra_lab
