#pragma once

// Finite fields F_q, q = p^f, elements encoded as integers sum c_i p^i (c_i the
// coefficients on 1, t, ..., t^{f-1}).  The encoding also fixes the element order
// used for the deterministic generator and modulus choices.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "endoscope/cyclo.hpp"
#include "endoscope/errors.hpp"

namespace endoscope {

struct FqElem {
    std::uint32_t code = 0;

    friend bool operator==(FqElem a, FqElem b) { return a.code == b.code; }
    friend bool operator!=(FqElem a, FqElem b) { return a.code != b.code; }
    friend bool operator<(FqElem a, FqElem b) { return a.code < b.code; }
};

inline bool is_prime(std::int64_t n) {
    if (n < 2) return false;
    for (std::int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

namespace detail {

using ModPoly = std::vector<int>;  // little-endian over F_p

inline void poly_trim(ModPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline ModPoly poly_mod(ModPoly a, const ModPoly& m, int p) {
    poly_trim(a);
    const std::size_t dm = m.size() - 1;
    const int lead_inv = [&] {
        int x = 1;
        for (int e = 0; e < p - 2; ++e) x = x * m.back() % p;
        return x;
    }();
    while (a.size() > dm && !a.empty()) {
        const int c = a.back() * lead_inv % p;
        const std::size_t shift = a.size() - 1 - dm;
        for (std::size_t j = 0; j <= dm; ++j) a[shift + j] = ((a[shift + j] - c * m[j]) % p + p) % p;
        poly_trim(a);
    }
    return a;
}

inline ModPoly poly_from_code(std::uint64_t code, int p, std::size_t len) {
    ModPoly a(len, 0);
    for (std::size_t i = 0; i < len; ++i) {
        a[i] = static_cast<int>(code % static_cast<std::uint64_t>(p));
        code /= static_cast<std::uint64_t>(p);
    }
    return a;
}

inline bool is_irreducible(const ModPoly& f, int p) {
    const std::size_t deg = f.size() - 1;
    for (std::size_t d = 1; d <= deg / 2; ++d) {
        std::uint64_t count = 1;
        for (std::size_t i = 0; i < d; ++i) count *= static_cast<std::uint64_t>(p);
        for (std::uint64_t c = 0; c < count; ++c) {
            ModPoly g = poly_from_code(c, p, d);
            g.push_back(1);
            if (poly_mod(f, g, p).empty()) return false;
        }
    }
    return true;
}

}  // namespace detail

class Fq {
public:
    // modulus: monic, little-endian, degree f; empty selects the smallest irreducible one.
    Fq(int p, int f = 1, std::vector<int> modulus = {}) {
        if (p <= 2 || !is_prime(p)) throw DomainError("p must be an odd prime");
        if (f < 1) throw DomainError("field degree must be positive");
        auto impl = std::make_shared<Impl>();
        impl->p = p;
        impl->f = f;
        std::uint64_t q = 1;
        for (int i = 0; i < f; ++i) q *= static_cast<std::uint64_t>(p);
        if (q > (1u << 22)) throw DomainError("field too large for table-based arithmetic");
        impl->q = static_cast<std::uint32_t>(q);
        if (modulus.empty()) {
            if (f == 1) modulus = {0, 1};
            else {
                for (std::uint64_t c = 0;; ++c) {
                    detail::ModPoly cand = detail::poly_from_code(c, p, static_cast<std::size_t>(f));
                    cand.push_back(1);
                    if (detail::is_irreducible(cand, p)) {
                        modulus = cand;
                        break;
                    }
                }
            }
        } else {
            if (static_cast<int>(modulus.size()) != f + 1 || modulus.back() != 1)
                throw DomainError("modulus must be monic of degree f");
            for (int& c : modulus) c = ((c % p) + p) % p;
            if (!detail::is_irreducible(modulus, p)) throw DomainError("modulus is reducible");
        }
        impl->modulus = modulus;
        build_tables(*impl);
        impl_ = std::move(impl);
    }

    int p() const { return impl_->p; }
    int f() const { return impl_->f; }
    std::uint32_t q() const { return impl_->q; }
    const std::vector<int>& modulus() const { return impl_->modulus; }
    FqElem generator() const { return impl_->exp_table[1]; }

    FqElem zero() const { return {0}; }
    FqElem one() const { return {1}; }

    FqElem element(std::uint32_t code) const {
        if (code >= q()) throw DomainError("element code out of range");
        return {code};
    }

    // Image of an integer in the prime field.
    FqElem from_int(std::int64_t c) const {
        const std::int64_t r = ((c % p()) + p()) % p();
        return {static_cast<std::uint32_t>(r)};
    }

    FqElem from_coeffs(const std::vector<int>& c) const {
        if (static_cast<int>(c.size()) > f()) throw DomainError("too many coefficients");
        std::uint32_t code = 0, scale = 1;
        for (int ci : c) {
            code += scale * static_cast<std::uint32_t>(((ci % p()) + p()) % p());
            scale *= static_cast<std::uint32_t>(p());
        }
        return {code};
    }

    std::vector<int> coeffs(FqElem x) const {
        return detail::poly_from_code(x.code, p(), static_cast<std::size_t>(f()));
    }

    // Integer representative in [0, p) of a prime-field element.
    int to_int(FqElem x) const {
        if (x.code >= static_cast<std::uint32_t>(p())) throw DomainError("element not in the prime field");
        return static_cast<int>(x.code);
    }

    FqElem add(FqElem x, FqElem y) const {
        if (f() == 1) return {(x.code + y.code) % q()};
        return digitwise(x, y, +1);
    }
    FqElem sub(FqElem x, FqElem y) const {
        if (f() == 1) return {(x.code + q() - y.code) % q()};
        return digitwise(x, y, -1);
    }
    FqElem neg(FqElem x) const { return sub(zero(), x); }

    FqElem mul(FqElem x, FqElem y) const {
        if (x.code == 0 || y.code == 0) return zero();
        const std::uint32_t e = (impl_->log_table[x.code] + impl_->log_table[y.code]) % (q() - 1);
        return impl_->exp_table[e];
    }

    FqElem inv(FqElem x) const {
        if (x.code == 0) throw DomainError("inverse of zero in F_q");
        const std::uint32_t l = impl_->log_table[x.code];
        return impl_->exp_table[(q() - 1 - l) % (q() - 1)];
    }

    FqElem div(FqElem x, FqElem y) const { return mul(x, inv(y)); }

    FqElem pow(FqElem x, std::int64_t e) const {
        if (x.code == 0) {
            if (e < 0) throw DomainError("negative power of zero");
            return e == 0 ? one() : zero();
        }
        const std::int64_t n = q() - 1;
        const std::int64_t l = (static_cast<std::int64_t>(impl_->log_table[x.code]) * (((e % n) + n) % n)) % n;
        return impl_->exp_table[static_cast<std::size_t>(l)];
    }

    // Exponent of x with respect to the fixed generator.
    std::uint32_t dlog(FqElem x) const {
        if (x.code == 0) throw DomainError("discrete logarithm of zero");
        return impl_->log_table[x.code];
    }

    FqElem gen_power(std::int64_t e) const {
        const std::int64_t n = q() - 1;
        return impl_->exp_table[static_cast<std::size_t>(((e % n) + n) % n)];
    }

    bool is_square(FqElem x) const {
        if (x.code == 0) throw DomainError("square test of zero");
        return dlog(x) % 2 == 0;
    }

    std::optional<FqElem> sqrt(FqElem x) const {
        if (!is_square(x)) return std::nullopt;
        return gen_power(dlog(x) / 2);
    }

    // Tr(x) = sum of x^{p^i}, an element of the prime field.
    FqElem trace(FqElem x) const { return {impl_->trace_table[x.code]}; }

    std::string to_string(FqElem x) const {
        if (f() == 1) return std::to_string(x.code);
        std::string s = "[";
        const auto c = coeffs(x);
        for (std::size_t i = 0; i < c.size(); ++i) s += (i ? "," : "") + std::to_string(c[i]);
        return s + "]";
    }

    friend bool operator==(const Fq& a, const Fq& b) {
        return a.impl_ == b.impl_ || (a.p() == b.p() && a.f() == b.f() && a.modulus() == b.modulus());
    }

private:
    struct Impl {
        int p = 0;
        int f = 0;
        std::uint32_t q = 0;
        std::vector<int> modulus;
        std::vector<FqElem> exp_table;        // generator^e, e in [0, q-1)
        std::vector<std::uint32_t> log_table; // index by code; entry 0 unused
        std::vector<std::uint32_t> trace_table;
    };

    FqElem digitwise(FqElem x, FqElem y, int sign) const {
        std::uint32_t a = x.code, b = y.code, out = 0, scale = 1;
        const std::uint32_t pp = static_cast<std::uint32_t>(p());
        for (int i = 0; i < f(); ++i) {
            const std::uint32_t da = a % pp, db = b % pp;
            const std::uint32_t d = sign > 0 ? (da + db) % pp : (da + pp - db) % pp;
            out += d * scale;
            scale *= pp;
            a /= pp;
            b /= pp;
        }
        return {out};
    }

    static std::uint32_t slow_mul(const Impl& F, std::uint32_t x, std::uint32_t y) {
        const auto a = detail::poly_from_code(x, F.p, static_cast<std::size_t>(F.f));
        const auto b = detail::poly_from_code(y, F.p, static_cast<std::size_t>(F.f));
        detail::ModPoly c(a.size() + b.size(), 0);
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = 0; j < b.size(); ++j) c[i + j] = (c[i + j] + a[i] * b[j]) % F.p;
        c = detail::poly_mod(c, F.modulus, F.p);
        std::uint32_t code = 0, scale = 1;
        for (int ci : c) {
            code += static_cast<std::uint32_t>(ci) * scale;
            scale *= static_cast<std::uint32_t>(F.p);
        }
        return code;
    }

    static void build_tables(Impl& F) {
        const std::uint32_t n = F.q - 1;
        // smallest primitive element in code order
        std::uint32_t gen = 0;
        std::vector<std::uint32_t> powers;
        for (std::uint32_t cand = 1; cand < F.q && gen == 0; ++cand) {
            powers.assign(1, 1);
            std::uint32_t cur = 1;
            for (std::uint32_t e = 1; e <= n; ++e) {
                cur = slow_mul(F, cur, cand);
                if (cur == 1) {
                    if (e == n) gen = cand;
                    break;
                }
                powers.push_back(cur);
            }
        }
        if (gen == 0) throw std::logic_error("no primitive element found");
        F.exp_table.resize(n);
        F.log_table.assign(F.q, 0);
        for (std::uint32_t e = 0; e < n; ++e) {
            F.exp_table[e] = FqElem{powers[e]};
            F.log_table[powers[e]] = e;
        }
        F.trace_table.assign(F.q, 0);
        const std::uint32_t pp = static_cast<std::uint32_t>(F.p);
        for (std::uint32_t x = 1; x < F.q; ++x) {
            // x^{p^i} via logs
            std::uint64_t l = F.log_table[x];
            std::uint32_t acc = 0;
            for (int i = 0; i < F.f; ++i) {
                const std::uint32_t term = F.exp_table[l % n].code;
                // prime-field sum of the conjugates; carry digitwise
                std::uint32_t a = acc, b = term, out = 0, scale = 1;
                for (int d = 0; d < F.f; ++d) {
                    out += ((a % pp + b % pp) % pp) * scale;
                    scale *= pp;
                    a /= pp;
                    b /= pp;
                }
                acc = out;
                l = (l * pp) % n;
            }
            if (acc >= pp) throw std::logic_error("trace left the prime field");
            F.trace_table[x] = acc;
        }
    }

    std::shared_ptr<const Impl> impl_;
};

// psi(x) = zeta_p^{Tr(c x)}.
class FqAddChar {
public:
    FqAddChar(Fq field, FqElem shift) : field_(std::move(field)), shift_(shift) {
        if (shift_.code == 0) throw DomainError("additive character shift must be nonzero");
    }
    explicit FqAddChar(Fq field) : FqAddChar(field, field.one()) {}

    const Fq& field() const { return field_; }
    FqElem shift() const { return shift_; }

    // Exponent e in [0, p) with psi(x) = zeta_p^e.
    int exponent(FqElem x) const { return static_cast<int>(field_.trace(field_.mul(shift_, x)).code); }
    CycElem operator()(FqElem x) const { return CycElem::root_of_unity(field_.p(), exponent(x)); }

private:
    Fq field_;
    FqElem shift_;
};

// chi_j(g^t) = zeta_{q-1}^{j t}.
class FqMulChar {
public:
    FqMulChar(Fq field, std::int64_t j) : field_(std::move(field)) {
        const std::int64_t n = field_.q() - 1;
        index_ = ((j % n) + n) % n;
    }

    const Fq& field() const { return field_; }
    std::int64_t index() const { return index_; }
    std::int64_t order_modulus() const { return field_.q() - 1; }
    bool is_trivial() const { return index_ == 0; }
    FqMulChar power(std::int64_t k) const { return FqMulChar(field_, index_ * k); }

    std::int64_t exponent(FqElem x) const {
        return (index_ * static_cast<std::int64_t>(field_.dlog(x))) % order_modulus();
    }
    CycElem operator()(FqElem x) const { return CycElem::root_of_unity(order_modulus(), exponent(x)); }

private:
    Fq field_;
    std::int64_t index_ = 0;
};

}  // namespace endoscope
