#pragma once

// Finite fields F_{p^k}. Elements are integers 0..q-1 read as polynomials in
// base p (digit i is the coefficient of x^i) modulo a fixed primitive
// polynomial, so x itself generates the multiplicative group.

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "errors.hpp"

namespace spectra_lab {

using Coeff = std::uint32_t;

inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

class CoeffField {
public:
    static constexpr std::uint64_t max_size = 1u << 16;

    CoeffField(std::uint32_t p, std::uint32_t k) : p_(p), k_(k) {
        if (!is_prime(p)) throw domain_error("coefficient characteristic " + std::to_string(p) + " is not prime");
        if (k < 1) throw domain_error("extension degree must be >= 1");
        std::uint64_t q = 1;
        for (std::uint32_t i = 0; i < k; ++i) {
            q *= p;
            if (q > max_size) throw domain_error("field F_" + std::to_string(p) + "^" + std::to_string(k) + " too large");
        }
        q_ = static_cast<Coeff>(q);
        pow_p_.resize(k + 1, 1);
        for (std::uint32_t i = 1; i <= k; ++i) pow_p_[i] = pow_p_[i - 1] * p;
        find_primitive();
    }

    std::uint32_t characteristic() const { return p_; }
    std::uint32_t degree() const { return k_; }
    Coeff size() const { return q_; }

    Coeff zero() const { return 0; }
    Coeff one() const { return 1; }

    Coeff from_int(long long n) const {
        long long r = n % static_cast<long long>(p_);
        if (r < 0) r += p_;
        return static_cast<Coeff>(r);
    }

    // g^i for the fixed generator g.
    Coeff gen_pow(long long i) const {
        long long m = static_cast<long long>(q_) - 1;
        long long r = i % m;
        if (r < 0) r += m;
        return exp_[static_cast<std::size_t>(r)];
    }

    // Discrete log base g; a must be nonzero.
    std::uint32_t log(Coeff a) const {
        if (a == 0) throw arithmetic_error("log of zero");
        return log_[a];
    }

    Coeff add(Coeff a, Coeff b) const {
        if (k_ == 1) return (a + b) % p_;
        Coeff r = 0;
        for (std::uint32_t i = 0; i < k_; ++i) {
            Coeff d = ((a / pow_p_[i]) % p_ + (b / pow_p_[i]) % p_) % p_;
            r += d * pow_p_[i];
        }
        return r;
    }

    Coeff neg(Coeff a) const {
        Coeff r = 0;
        for (std::uint32_t i = 0; i < k_; ++i) {
            Coeff d = (a / pow_p_[i]) % p_;
            r += ((p_ - d) % p_) * pow_p_[i];
        }
        return r;
    }

    Coeff sub(Coeff a, Coeff b) const { return add(a, neg(b)); }

    Coeff mul(Coeff a, Coeff b) const {
        if (a == 0 || b == 0) return 0;
        return exp_[(log_[a] + log_[b]) % (q_ - 1)];
    }

    Coeff inv(Coeff a) const {
        if (a == 0) throw arithmetic_error("inverse of zero in F_" + std::to_string(q_));
        return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
    }

    Coeff div(Coeff a, Coeff b) const { return mul(a, inv(b)); }

    Coeff pow(Coeff a, long long e) const {
        if (a == 0) {
            if (e < 0) throw arithmetic_error("negative power of zero");
            return e == 0 ? 1 : 0;
        }
        long long m = static_cast<long long>(q_) - 1;
        long long r = (static_cast<long long>(log_[a]) * (e % m)) % m;
        if (r < 0) r += m;
        return exp_[static_cast<std::size_t>(r)];
    }

    bool divides_degree(std::uint32_t d) const { return d >= 1 && k_ % d == 0; }

    // Membership in the subfield F_{p^d}: a^{p^d} = a.
    bool in_subfield(Coeff a, std::uint32_t d) const {
        if (!divides_degree(d)) throw domain_error("no subfield of degree " + std::to_string(d) + " in F_" + std::to_string(q_));
        if (a == 0) return true;
        return pow(a, static_cast<long long>(pow_p_[d])) == a;
    }

    bool in_prime_subfield(Coeff a) const { return a < p_; }

    std::vector<Coeff> subfield_elements(std::uint32_t d) const {
        std::vector<Coeff> out;
        for (Coeff a = 0; a < q_; ++a)
            if (in_subfield(a, d)) out.push_back(a);
        return out;
    }

    // Prime-subfield elements print as integers, everything else as g^i.
    std::string to_string(Coeff a) const {
        if (a < p_) return std::to_string(a);
        return "g^" + std::to_string(log_[a]);
    }

    std::string name() const { return "p=" + std::to_string(p_) + ",k=" + std::to_string(k_); }

    // The primitive polynomial as coefficients c_0..c_{k-1} of x^k + ... (monic).
    const std::vector<Coeff>& modulus() const { return modulus_; }

    friend bool operator==(const CoeffField& a, const CoeffField& b) { return a.p_ == b.p_ && a.k_ == b.k_; }

private:
    // Multiply a polynomial (packed as base-p digits) by x modulo the candidate.
    Coeff times_x(Coeff a, const std::vector<Coeff>& f) const {
        std::vector<Coeff> d(k_ + 1, 0);
        for (std::uint32_t i = 0; i < k_; ++i) d[i + 1] = (a / pow_p_[i]) % p_;
        Coeff top = d[k_];
        Coeff r = 0;
        for (std::uint32_t i = 0; i < k_; ++i) {
            // x^k = -(f_0 + f_1 x + ... )
            Coeff v = (d[i] + (p_ - (top * f[i]) % p_)) % p_;
            r += v * pow_p_[i];
        }
        return r;
    }

    void find_primitive() {
        std::vector<Coeff> f(k_, 0);
        const Coeff order = q_ - 1;
        for (Coeff code = 0; code < q_; ++code) {
            for (std::uint32_t i = 0; i < k_; ++i) f[i] = (code / pow_p_[i]) % p_;
            if (f[0] == 0) continue;
            std::vector<Coeff> ex(order);
            std::vector<std::int64_t> lg(q_, -1);
            Coeff cur = 1;
            bool ok = true;
            for (Coeff i = 0; i < order; ++i) {
                if (cur == 0 || lg[cur] != -1) {
                    ok = false;
                    break;
                }
                ex[i] = cur;
                lg[cur] = i;
                cur = times_x(cur, f);
            }
            if (!ok || cur != 1) continue;
            modulus_ = f;
            exp_ = std::move(ex);
            log_.assign(q_, 0);
            for (Coeff a = 1; a < q_; ++a) log_[a] = static_cast<std::uint32_t>(lg[a]);
            return;
        }
        throw domain_error("no primitive polynomial found"); // unreachable for prime p
    }

    std::uint32_t p_, k_;
    Coeff q_;
    std::vector<Coeff> pow_p_;
    std::vector<Coeff> modulus_;
    std::vector<Coeff> exp_;
    std::vector<std::uint32_t> log_;
};

using FieldPtr = std::shared_ptr<const CoeffField>;

// Fields are interned so elements can compare field identity by pointer.
inline FieldPtr coeff_field(std::uint32_t p, std::uint32_t k) {
    static std::mutex mu;
    static std::map<std::pair<std::uint32_t, std::uint32_t>, FieldPtr> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[{p, k}];
    if (!slot) slot = std::make_shared<const CoeffField>(p, k);
    return slot;
}

// "p=5,k=2"
inline FieldPtr parse_coeff_field(const std::string& text) {
    std::uint32_t p = 0, k = 1;
    bool have_p = false;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        std::string part = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        std::string key, val;
        auto eq = part.find('=');
        if (eq == std::string::npos) throw parse_error("expected key=value in field spec '" + text + "'");
        for (char c : part.substr(0, eq))
            if (!std::isspace(static_cast<unsigned char>(c))) key += c;
        for (char c : part.substr(eq + 1))
            if (!std::isspace(static_cast<unsigned char>(c))) val += c;
        if (val.empty() || val.find_first_not_of("0123456789") != std::string::npos || val.size() > 6)
            throw parse_error("field parameter '" + key + "' must be a positive integer");
        auto n = static_cast<std::uint32_t>(std::stoul(val));
        if (key == "p") {
            p = n;
            have_p = true;
        } else if (key == "k") {
            k = n;
        } else {
            throw parse_error("unknown field parameter '" + key + "'");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (!have_p) throw parse_error("field spec needs p=...");
    return coeff_field(p, k);
}

} // namespace spectra_lab
