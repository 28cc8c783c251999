#pragma once

// Exact arithmetic in cyclotomic integer rings Z[zeta_m].
//
// Elements are stored on the power basis 1, z, ..., z^{phi(m)-1} after reduction
// modulo the m-th cyclotomic polynomial.  Orders m = 2 (mod 4) are folded to m/2,
// since Z[zeta_{2d}] = Z[zeta_d] for odd d; this keeps e.g. -zeta_p inside Z[zeta_p].

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "endoscope/errors.hpp"

namespace endoscope {

using BigInt = boost::multiprecision::cpp_int;

namespace detail {

using IntPoly = std::vector<std::int64_t>;  // little-endian coefficients

inline void trim(IntPoly& f) {
    while (f.size() > 1 && f.back() == 0) f.pop_back();
}

// Exact division by a monic polynomial; throws if the remainder is nonzero.
inline IntPoly divide_exact_monic(IntPoly num, const IntPoly& den) {
    trim(num);
    const std::size_t dn = den.size() - 1;
    if (num.size() - 1 < dn) throw std::logic_error("cyclotomic division: degree too small");
    IntPoly quot(num.size() - dn, 0);
    for (std::size_t i = num.size(); i-- > dn;) {
        const std::int64_t c = num[i];
        quot[i - dn] = c;
        if (c == 0) continue;
        for (std::size_t j = 0; j <= dn; ++j) num[i - dn + j] -= c * den[j];
    }
    for (std::size_t i = 0; i < dn; ++i)
        if (num[i] != 0) throw std::logic_error("cyclotomic division: nonzero remainder");
    return quot;
}

struct CycloRing {
    std::int64_t m = 1;
    std::size_t phi = 1;
    IntPoly poly;                         // Phi_m, monic, degree phi
    std::vector<IntPoly> power_table;     // X^e mod Phi_m for 0 <= e < m, each of length phi
};

inline IntPoly cyclotomic_polynomial(std::int64_t m, std::map<std::int64_t, IntPoly>& memo) {
    if (auto it = memo.find(m); it != memo.end()) return it->second;
    IntPoly num(static_cast<std::size_t>(m) + 1, 0);
    num[0] = -1;
    num[static_cast<std::size_t>(m)] = 1;
    for (std::int64_t d = 1; d < m; ++d)
        if (m % d == 0) num = divide_exact_monic(num, cyclotomic_polynomial(d, memo));
    trim(num);
    memo[m] = num;
    return num;
}

inline std::shared_ptr<const CycloRing> build_ring(std::int64_t m) {
    static std::map<std::int64_t, IntPoly> memo;  // guarded by the caller's mutex
    auto ring = std::make_shared<CycloRing>();
    ring->m = m;
    ring->poly = cyclotomic_polynomial(m, memo);
    ring->phi = ring->poly.size() - 1;
    const std::size_t phi = ring->phi;
    ring->power_table.reserve(static_cast<std::size_t>(m));
    IntPoly cur(phi, 0);
    cur[0] = 1;
    if (phi == 0) throw std::logic_error("degenerate cyclotomic ring");
    for (std::int64_t e = 0; e < m; ++e) {
        ring->power_table.push_back(cur);
        // multiply by X and reduce with X^phi = -(poly[0] + ... + poly[phi-1] X^{phi-1})
        const std::int64_t top = cur[phi - 1];
        for (std::size_t i = phi - 1; i > 0; --i) cur[i] = cur[i - 1];
        cur[0] = 0;
        for (std::size_t i = 0; i < phi; ++i) {
            cur[i] -= top * ring->poly[i];
            if (cur[i] > (std::int64_t{1} << 40) || cur[i] < -(std::int64_t{1} << 40))
                throw std::overflow_error("cyclotomic reduction table overflow");
        }
    }
    return ring;
}

inline std::shared_ptr<const CycloRing> ring_for(std::int64_t m) {
    static std::mutex mu;
    static std::map<std::int64_t, std::shared_ptr<const CycloRing>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;
    auto ring = build_ring(m);
    cache.emplace(m, ring);
    return ring;
}

inline std::int64_t normalized_order(std::int64_t m) { return (m % 4 == 2) ? m / 2 : m; }

inline std::int64_t mod_floor(std::int64_t a, std::int64_t m) {
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

}  // namespace detail

class CycElem {
public:
    CycElem() : CycElem(1) {}

    // Zero of Z[zeta_m].
    explicit CycElem(std::int64_t m) {
        if (m < 1) throw DomainError("cyclotomic order must be positive");
        ring_ = detail::ring_for(detail::normalized_order(m));
        coeffs_.assign(ring_->phi, 0);
    }

    static CycElem from_int(const BigInt& c, std::int64_t m = 1) {
        CycElem x(m);
        x.coeffs_[0] = c;
        return x;
    }

    static CycElem root_of_unity(std::int64_t m, std::int64_t j) {
        std::vector<std::int64_t> counts(static_cast<std::size_t>(m), 0);
        counts[static_cast<std::size_t>(detail::mod_floor(j, m))] = 1;
        return from_exponent_counts(m, counts);
    }

    // Sum of counts[e] * zeta_m^e; counts has length m.
    static CycElem from_exponent_counts(std::int64_t m, const std::vector<std::int64_t>& counts) {
        if (static_cast<std::int64_t>(counts.size()) != m)
            throw DomainError("exponent count vector must have length m");
        CycElem out(m);
        const std::int64_t mm = out.order();
        for (std::int64_t e = 0; e < m; ++e) {
            std::int64_t c = counts[static_cast<std::size_t>(e)];
            if (c == 0) continue;
            std::int64_t target = e;
            if (mm != m) {
                // zeta_{2d} = -zeta_d^{(d+1)/2}
                if (e % 2 != 0) c = -c;
                target = detail::mod_floor(e * ((mm + 1) / 2), mm);
            }
            out.add_power(target, c);
        }
        return out;
    }

    std::int64_t order() const { return ring_->m; }
    const std::vector<BigInt>& coeffs() const { return coeffs_; }

    bool is_zero() const {
        for (const auto& c : coeffs_)
            if (c != 0) return false;
        return true;
    }

    // Image in Z[zeta_M] for a multiple M of order().
    CycElem promote(std::int64_t M) const {
        CycElem out(M);
        const std::int64_t target = out.order();
        if (target % order() != 0) throw DomainError("promotion target is not a multiple of the order");
        const std::int64_t stretch = target / order();
        for (std::size_t i = 0; i < coeffs_.size(); ++i)
            if (coeffs_[i] != 0) out.add_power(static_cast<std::int64_t>(i) * stretch, coeffs_[i]);
        return out;
    }

    CycElem operator-() const {
        CycElem out = *this;
        for (auto& c : out.coeffs_) c = -c;
        return out;
    }

    CycElem& operator+=(const CycElem& y) {
        align(y);
        if (y.order() == order()) {
            for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += y.coeffs_[i];
        } else {
            CycElem yy = y.promote(order());
            for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += yy.coeffs_[i];
        }
        return *this;
    }

    CycElem& operator-=(const CycElem& y) { return *this += -y; }

    CycElem& operator*=(const CycElem& y) {
        *this = *this * y;
        return *this;
    }

    friend CycElem operator+(CycElem x, const CycElem& y) { return x += y; }
    friend CycElem operator-(CycElem x, const CycElem& y) { return x -= y; }

    friend CycElem operator*(const CycElem& x, const CycElem& y) {
        const std::int64_t L = common_order(x.order(), y.order());
        const CycElem xa = x.order() == L ? x : x.promote(L);
        const CycElem ya = y.order() == L ? y : y.promote(L);
        const std::size_t phi = xa.coeffs_.size();
        std::vector<BigInt> conv(2 * phi - 1, 0);
        for (std::size_t i = 0; i < phi; ++i) {
            if (xa.coeffs_[i] == 0) continue;
            for (std::size_t j = 0; j < phi; ++j)
                if (ya.coeffs_[j] != 0) conv[i + j] += xa.coeffs_[i] * ya.coeffs_[j];
        }
        CycElem out(L);
        for (std::size_t e = 0; e < conv.size(); ++e)
            if (conv[e] != 0) out.add_power(static_cast<std::int64_t>(e), conv[e]);
        return out;
    }

    friend bool operator==(const CycElem& x, const CycElem& y) {
        if (x.order() == y.order()) return x.coeffs_ == y.coeffs_;
        const std::int64_t L = common_order(x.order(), y.order());
        return x.promote(L).coeffs_ == y.promote(L).coeffs_;
    }
    friend bool operator!=(const CycElem& x, const CycElem& y) { return !(x == y); }

    // zeta -> zeta^k for k coprime to m.
    CycElem galois(std::int64_t k) const {
        if (std::gcd(detail::mod_floor(k, order()), order()) != 1 && order() != 1)
            throw DomainError("Galois exponent must be coprime to the order");
        CycElem out(order());
        for (std::size_t i = 0; i < coeffs_.size(); ++i)
            if (coeffs_[i] != 0) out.add_power(static_cast<std::int64_t>(i) * k, coeffs_[i]);
        return out;
    }

    // zeta -> zeta^{-1}; complex conjugation under the standard embedding.
    CycElem conj() const { return galois(-1); }

    std::complex<double> embed() const {
        long double re = 0, im = 0;
        const long double two_pi = 6.283185307179586476925286766559L;
        for (std::size_t i = 0; i < coeffs_.size(); ++i) {
            if (coeffs_[i] == 0) continue;
            const long double c = static_cast<long double>(coeffs_[i]);
            const long double ang = two_pi * static_cast<long double>(i) / static_cast<long double>(order());
            re += c * std::cos(ang);
            im += c * std::sin(ang);
        }
        return {static_cast<double>(re), static_cast<double>(im)};
    }

    std::string to_string() const {
        std::ostringstream os;
        bool first = true;
        for (std::size_t i = 0; i < coeffs_.size(); ++i) {
            if (coeffs_[i] == 0) continue;
            if (!first) os << (coeffs_[i] < 0 ? " - " : " + ");
            else if (coeffs_[i] < 0) os << "-";
            const BigInt a = coeffs_[i] < 0 ? BigInt(-coeffs_[i]) : coeffs_[i];
            if (i == 0) os << a;
            else {
                if (a != 1) os << a << "*";
                os << "z" << order() << "^" << i;
            }
            first = false;
        }
        if (first) os << "0";
        return os.str();
    }

private:
    static std::int64_t common_order(std::int64_t a, std::int64_t b) {
        return detail::normalized_order(std::lcm(a, b));
    }

    void align(const CycElem& y) {
        if (y.order() == order()) return;
        const std::int64_t L = common_order(order(), y.order());
        if (L != order()) *this = promote(L);
    }

    // coeffs += c * zeta^e
    void add_power(std::int64_t e, const BigInt& c) {
        const auto& row = ring_->power_table[static_cast<std::size_t>(detail::mod_floor(e, ring_->m))];
        for (std::size_t i = 0; i < row.size(); ++i)
            if (row[i] != 0) coeffs_[i] += c * row[i];
    }

    std::shared_ptr<const detail::CycloRing> ring_;
    std::vector<BigInt> coeffs_;
};

// Accumulates sums of roots of unity as integer counts per exponent and converts once.
class RootSum {
public:
    explicit RootSum(std::int64_t m) : m_(m), counts_(static_cast<std::size_t>(m), 0) {}

    void add(std::int64_t exponent, std::int64_t times = 1) {
        counts_[static_cast<std::size_t>(detail::mod_floor(exponent, m_))] += times;
    }

    void merge(const RootSum& other) {
        if (other.m_ != m_) throw DomainError("RootSum orders differ");
        for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
    }

    std::int64_t order() const { return m_; }
    CycElem value() const { return CycElem::from_exponent_counts(m_, counts_); }

private:
    std::int64_t m_;
    std::vector<std::int64_t> counts_;
};

}  // namespace endoscope
