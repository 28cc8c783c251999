#pragma once

// Fixed-point p-adic numbers over Q_p and dense matrices.
//
// A scalar is p^{-E} * r with r an integer modulo p^{K+E}, together with its absolute
// precision P (the value is known modulo p^P, P <= K).  Digits of r at or above
// position P+E are kept at zero, so r != 0 exactly when the valuation is resolved.
// Exact zero carries P = kExact.
//
// Precision rules (worst case):
//   x +- y : P = min(Px, Py)
//   x * y  : P = min(vx + Py, vy + Px, K), v taken as P when unresolved
//   1 / x  : P = min(Px - 2 vx, K)
// Any question that depends on an untrusted digit raises PrecisionError.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "endoscope/errors.hpp"

namespace endoscope {

struct PadicParams {
    int p = 0;
    int K = 0;
    int E = 0;
    std::vector<std::int64_t> ppow;  // p^0 .. p^{K+E}

    std::int64_t modulus() const { return ppow[static_cast<std::size_t>(K + E)]; }
    std::int64_t shift_unit() const { return ppow[static_cast<std::size_t>(E)]; }

    // Interned so that scalars can carry a plain pointer.
    static const PadicParams& get(int p, int K, int E) {
        static std::mutex mu;
        static std::map<std::tuple<int, int, int>, const PadicParams*> registry;
        static std::deque<PadicParams> storage;
        std::lock_guard<std::mutex> lock(mu);
        auto key = std::make_tuple(p, K, E);
        if (auto it = registry.find(key); it != registry.end()) return *it->second;
        if (p < 3 || K < 1 || E < 0) throw DomainError("invalid p-adic parameters");
        PadicParams par;
        par.p = p;
        par.K = K;
        par.E = E;
        par.ppow.push_back(1);
        for (int i = 0; i < K + E; ++i) {
            if (par.ppow.back() > std::numeric_limits<std::int64_t>::max() / 4 / p)
                throw DomainError("p^(K+E) too large for the fixed-point representation");
            par.ppow.push_back(par.ppow.back() * p);
        }
        storage.push_back(par);
        registry[key] = &storage.back();
        return storage.back();
    }
};

namespace detail {

inline std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t m) {
    return static_cast<std::int64_t>((static_cast<__int128>(a) * b) % m);
}

inline std::int64_t inverse_mod(std::int64_t a, std::int64_t m) {
    __int128 t = 0, new_t = 1, r = m, new_r = ((a % m) + m) % m;
    while (new_r != 0) {
        const __int128 qt = r / new_r;
        std::tie(t, new_t) = std::make_tuple(new_t, t - qt * new_t);
        std::tie(r, new_r) = std::make_tuple(new_r, r - qt * new_r);
    }
    if (r != 1) throw DomainError("not invertible modulo p^k");
    if (t < 0) t += m;
    return static_cast<std::int64_t>(t);
}

}  // namespace detail

class PadicScalar {
public:
    static constexpr int kExact = 1 << 28;

    PadicScalar() = default;

    static PadicScalar zero(const PadicParams& par) { return PadicScalar(&par, 0, kExact); }

    static PadicScalar from_int(const PadicParams& par, std::int64_t c) {
        if (c == 0) return zero(par);
        const std::int64_t mk = par.ppow[static_cast<std::size_t>(par.K)];
        const std::int64_t cm = ((c % mk) + mk) % mk;
        return PadicScalar(&par, detail::mulmod(cm, par.shift_unit(), par.modulus()), par.K);
    }

    static PadicScalar one(const PadicParams& par) { return from_int(par, 1); }

    // num / den for integers with den prime to p.
    static PadicScalar from_fraction(const PadicParams& par, std::int64_t num, std::int64_t den) {
        if (den % par.p == 0) throw DomainError("fraction denominator divisible by p");
        return from_int(par, num) * from_int(par, den).inv();
    }

    // p^k for -E <= k < K.
    static PadicScalar uniformizer_power(const PadicParams& par, int k) {
        if (k < -par.E || k >= par.K) throw PrecisionError("uniformizer power outside the representable range");
        return PadicScalar(&par, par.ppow[static_cast<std::size_t>(k + par.E)], par.K);
    }

    // Teichmueller lift of a unit of F_p, given by a representative a.
    static PadicScalar teichmuller(const PadicParams& par, std::int64_t a) {
        const std::int64_t p = par.p;
        a = ((a % p) + p) % p;
        if (a == 0) throw DomainError("Teichmueller lift of zero");
        const std::int64_t mk = par.ppow[static_cast<std::size_t>(par.K)];
        std::int64_t t = a;
        for (int iter = 0; iter <= par.K + 1; ++iter) {
            std::int64_t next = 1;
            for (int e = 0; e < p; ++e) next = detail::mulmod(next, t, mk);
            if (next == t) break;
            t = next;
        }
        return PadicScalar(&par, detail::mulmod(t, par.shift_unit(), par.modulus()), par.K);
    }

    const PadicParams& params() const { return *par_; }
    bool exact_zero() const { return prec_ == kExact; }
    // Absolute precision: the value is known modulo p^prec.
    int prec() const { return prec_; }
    // Number of trusted digits counted from p^{-E}.
    int guaranteed() const { return exact_zero() ? par_->K + par_->E : std::max(0, prec_ + par_->E); }
    std::int64_t raw_residue() const { return r_; }

    bool is_zero_to_precision() const { return r_ == 0; }

    std::optional<int> valuation_opt() const {
        if (r_ == 0) return std::nullopt;
        int j = 0;
        std::int64_t r = r_;
        while (r % par_->p == 0) {
            r /= par_->p;
            ++j;
        }
        return j - par_->E;
    }

    int valuation() const {
        auto v = valuation_opt();
        if (!v) throw PrecisionError("valuation of an element indistinguishable from zero");
        return *v;
    }

    // Whether v(x) >= k.
    bool val_at_least(int k) const {
        if (exact_zero()) return true;
        if (auto v = valuation_opt()) return *v >= k;
        if (prec_ >= k) return true;
        throw PrecisionError("valuation bound needs more digits than are trusted");
    }

    bool is_unit() const { return val_at_least(0) && !val_at_least(1); }

    // Residue in [0, p) of an integral element.
    int reduce_mod_p() const {
        if (exact_zero()) return 0;
        if (prec_ < 1) throw PrecisionError("reduction mod p needs the p^0 digit");
        if (r_ % par_->shift_unit() != 0) throw DomainError("reduction mod p of a non-integral element");
        return static_cast<int>((r_ / par_->shift_unit()) % par_->p);
    }

    // Multiplication by p^k.
    PadicScalar shifted(int k) const {
        if (exact_zero() || k == 0) return *this;
        if (k > 0) {
            if (k >= par_->K + par_->E) return PadicScalar(par_, 0, std::min(prec_ + k, par_->K));
            return PadicScalar(par_, detail::mulmod(r_, par_->ppow[static_cast<std::size_t>(k)], par_->modulus()),
                               std::min(prec_ + k, par_->K));
        }
        const int d = -k;
        if (d > par_->K + par_->E) throw PrecisionError("shift exceeds the representable range");
        const std::int64_t pd = par_->ppow[static_cast<std::size_t>(d)];
        if (r_ % pd != 0) throw PrecisionError("shift budget exceeded");
        return PadicScalar(par_, r_ / pd, prec_ - d);
    }

    PadicScalar inv() const {
        const auto v = valuation_opt();
        if (!v) throw PrecisionError("inversion of an element indistinguishable from zero");
        if (*v > par_->E) throw PrecisionError("inverse exceeds the shift budget");
        const std::int64_t unit = r_ / par_->ppow[static_cast<std::size_t>(*v + par_->E)];
        const std::int64_t M = par_->modulus();
        const std::int64_t uinv = detail::inverse_mod(unit, M);
        const std::int64_t r = detail::mulmod(uinv, par_->ppow[static_cast<std::size_t>(par_->E - *v)], M);
        return PadicScalar(par_, r, std::min(prec_ - 2 * *v, par_->K));
    }

    PadicScalar operator-() const {
        if (exact_zero()) return *this;
        return PadicScalar(par_, r_ == 0 ? 0 : par_->modulus() - r_, prec_);
    }

    friend PadicScalar operator+(const PadicScalar& x, const PadicScalar& y) {
        check_same(x, y);
        if (x.exact_zero()) return y;
        if (y.exact_zero()) return x;
        return PadicScalar(x.par_, (x.r_ + y.r_) % x.par_->modulus(), std::min(x.prec_, y.prec_));
    }

    friend PadicScalar operator-(const PadicScalar& x, const PadicScalar& y) { return x + (-y); }

    friend PadicScalar operator*(const PadicScalar& x, const PadicScalar& y) {
        check_same(x, y);
        if (x.exact_zero() || y.exact_zero()) return zero(*x.par_);
        const int vx = x.valuation_opt().value_or(x.prec_);
        const int vy = y.valuation_opt().value_or(y.prec_);
        const int prec = std::min({vx + y.prec_, vy + x.prec_, x.par_->K});
        const __int128 prod = static_cast<__int128>(x.r_) * y.r_;
        const std::int64_t pe = x.par_->shift_unit();
        if (prod % pe != 0) throw PrecisionError("product valuation below the shift budget");
        const std::int64_t r = static_cast<std::int64_t>((prod / pe) % x.par_->modulus());
        return PadicScalar(x.par_, r, prec);
    }

    friend PadicScalar operator/(const PadicScalar& x, const PadicScalar& y) { return x * y.inv(); }

    PadicScalar& operator+=(const PadicScalar& y) { return *this = *this + y; }
    PadicScalar& operator-=(const PadicScalar& y) { return *this = *this - y; }
    PadicScalar& operator*=(const PadicScalar& y) { return *this = *this * y; }

    // Agreement up to the joint precision.
    bool agrees_with(const PadicScalar& y) const { return (*this - y).is_zero_to_precision(); }

    std::string to_string() const {
        if (exact_zero()) return "0";
        if (r_ == 0) return "O(p^" + std::to_string(prec_) + ")";
        const int v = valuation();
        const std::int64_t unit = r_ / par_->ppow[static_cast<std::size_t>(v + par_->E)];
        return std::to_string(unit) + "*p^" + std::to_string(v) + " + O(p^" + std::to_string(prec_) + ")";
    }

private:
    PadicScalar(const PadicParams* par, std::int64_t r, int prec) : par_(par), r_(r), prec_(prec) {
        if (prec_ != kExact) {
            const int keep = prec_ + par_->E;
            if (keep <= 0) r_ = 0;
            else if (keep < par_->K + par_->E) r_ %= par_->ppow[static_cast<std::size_t>(keep)];
        }
    }

    static void check_same(const PadicScalar& x, const PadicScalar& y) {
        if (x.par_ != y.par_) throw DomainError("p-adic scalars from different contexts");
    }

    const PadicParams* par_ = nullptr;
    std::int64_t r_ = 0;
    int prec_ = kExact;
};

class PadicMatrix {
public:
    PadicMatrix() = default;

    PadicMatrix(const PadicParams& par, std::size_t rows, std::size_t cols)
        : par_(&par), rows_(rows), cols_(cols), a_(rows * cols, PadicScalar::zero(par)) {}

    static PadicMatrix identity(const PadicParams& par, std::size_t n) {
        PadicMatrix m(par, n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = PadicScalar::one(par);
        return m;
    }

    static PadicMatrix diagonal(const PadicParams& par, const std::vector<PadicScalar>& d) {
        PadicMatrix m(par, d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }

    const PadicParams& params() const { return *par_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    PadicScalar& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const PadicScalar& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    friend PadicMatrix operator*(const PadicMatrix& x, const PadicMatrix& y) {
        if (x.cols_ != y.rows_) throw DomainError("matrix shape mismatch in product");
        PadicMatrix out(*x.par_, x.rows_, y.cols_);
        for (std::size_t i = 0; i < x.rows_; ++i)
            for (std::size_t k = 0; k < x.cols_; ++k) {
                const PadicScalar& xik = x(i, k);
                if (xik.exact_zero()) continue;
                for (std::size_t j = 0; j < y.cols_; ++j)
                    if (!y(k, j).exact_zero()) out(i, j) += xik * y(k, j);
            }
        return out;
    }

    friend PadicMatrix operator+(const PadicMatrix& x, const PadicMatrix& y) {
        x.check_shape(y);
        PadicMatrix out = x;
        for (std::size_t i = 0; i < out.a_.size(); ++i) out.a_[i] += y.a_[i];
        return out;
    }

    friend PadicMatrix operator-(const PadicMatrix& x, const PadicMatrix& y) {
        x.check_shape(y);
        PadicMatrix out = x;
        for (std::size_t i = 0; i < out.a_.size(); ++i) out.a_[i] -= y.a_[i];
        return out;
    }

    PadicMatrix operator-() const {
        PadicMatrix out = *this;
        for (auto& e : out.a_) e = -e;
        return out;
    }

    friend PadicMatrix operator*(const PadicScalar& s, const PadicMatrix& m) {
        PadicMatrix out = m;
        for (auto& e : out.a_) e = s * e;
        return out;
    }

    PadicMatrix transpose() const {
        PadicMatrix out(*par_, cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
        return out;
    }

    PadicMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
        PadicMatrix out(*par_, nr, nc);
        for (std::size_t i = 0; i < nr; ++i)
            for (std::size_t j = 0; j < nc; ++j) out(i, j) = (*this)(r0 + i, c0 + j);
        return out;
    }

    PadicMatrix pow(int e) const {
        if (rows_ != cols_ || e < 0) throw DomainError("matrix power needs a square matrix and e >= 0");
        PadicMatrix out = identity(*par_, rows_);
        for (int i = 0; i < e; ++i) out = out * *this;
        return out;
    }

    // Gauss-Jordan elimination choosing the pivot of least valuation in each column.
    PadicMatrix inv() const {
        require_square();
        const std::size_t n = rows_;
        PadicMatrix a = *this;
        PadicMatrix b = identity(*par_, n);
        for (std::size_t c = 0; c < n; ++c) {
            const std::size_t piv = pick_pivot_row(a, c, c);
            a.swap_rows(piv, c);
            b.swap_rows(piv, c);
            const PadicScalar pinv = a(c, c).inv();
            for (std::size_t j = 0; j < n; ++j) {
                a(c, j) = pinv * a(c, j);
                b(c, j) = pinv * b(c, j);
            }
            for (std::size_t i = 0; i < n; ++i) {
                if (i == c || a(i, c).exact_zero()) continue;
                const PadicScalar f = a(i, c);
                for (std::size_t j = 0; j < n; ++j) {
                    a(i, j) -= f * a(c, j);
                    b(i, j) -= f * b(c, j);
                }
            }
        }
        return b;
    }

    PadicScalar det() const {
        require_square();
        const std::size_t n = rows_;
        PadicMatrix a = *this;
        PadicScalar d = PadicScalar::one(*par_);
        for (std::size_t c = 0; c < n; ++c) {
            std::size_t piv;
            try {
                piv = pick_pivot_row(a, c, c);
            } catch (const PrecisionError&) {
                bool all_exact_zero = true;
                for (std::size_t i = c; i < n; ++i) all_exact_zero = all_exact_zero && a(i, c).exact_zero();
                if (all_exact_zero) return PadicScalar::zero(*par_);
                throw;
            }
            if (piv != c) {
                a.swap_rows(piv, c);
                d = -d;
            }
            d *= a(c, c);
            const PadicScalar pinv = a(c, c).inv();
            for (std::size_t i = c + 1; i < n; ++i) {
                if (a(i, c).exact_zero()) continue;
                const PadicScalar f = a(i, c) * pinv;
                for (std::size_t j = c; j < n; ++j) a(i, j) -= f * a(c, j);
            }
        }
        return d;
    }

    int val_det() const { return det().valuation(); }

    // Coefficients of det(tI - M), leading first, by the division-free Berkowitz recursion.
    std::vector<PadicScalar> char_poly() const {
        require_square();
        const std::size_t n = rows_;
        if (n == 0) return {PadicScalar::one(*par_)};
        std::vector<PadicScalar> poly = {PadicScalar::one(*par_), -(*this)(n - 1, n - 1)};
        for (std::size_t k = n - 1; k-- > 0;) {
            // leading block A_k = [[a, R], [C, A1]] with A1 of size m
            const std::size_t m = n - 1 - k;
            const PadicScalar a = (*this)(k, k);
            std::vector<PadicScalar> col(m + 2, PadicScalar::zero(*par_));
            col[0] = PadicScalar::one(*par_);
            col[1] = -a;
            std::vector<PadicScalar> w(m);  // A1^i C
            for (std::size_t i = 0; i < m; ++i) w[i] = (*this)(k + 1 + i, k);
            for (std::size_t step = 0; step < m; ++step) {
                PadicScalar rc = PadicScalar::zero(*par_);
                for (std::size_t i = 0; i < m; ++i) rc += (*this)(k, k + 1 + i) * w[i];
                col[step + 2] = -rc;
                if (step + 1 < m) {
                    std::vector<PadicScalar> nw(m, PadicScalar::zero(*par_));
                    for (std::size_t i = 0; i < m; ++i)
                        for (std::size_t j = 0; j < m; ++j) nw[i] += (*this)(k + 1 + i, k + 1 + j) * w[j];
                    w = std::move(nw);
                }
            }
            // Toeplitz (m+2) x (m+1) with first column col, times poly (length m+1)
            std::vector<PadicScalar> next(m + 2, PadicScalar::zero(*par_));
            for (std::size_t i = 0; i < m + 2; ++i)
                for (std::size_t j = 0; j <= std::min(i, m); ++j) next[i] += col[i - j] * poly[j];
            poly = std::move(next);
        }
        return poly;
    }

    // Kernel basis by full-pivoting elimination; vectors scaled into O^n minus p^n.
    std::vector<std::vector<PadicScalar>> kernel() const {
        PadicMatrix a = *this;
        std::vector<std::size_t> pivot_cols;
        std::vector<bool> used(cols_, false);
        int max_pivot_val = 0;
        std::size_t r = 0;
        while (r < rows_) {
            std::optional<int> best;
            std::size_t bi = 0, bj = 0;
            for (std::size_t i = r; i < rows_; ++i)
                for (std::size_t j = 0; j < cols_; ++j) {
                    if (used[j]) continue;
                    auto v = a(i, j).valuation_opt();
                    if (v && (!best || *v < *best)) {
                        best = v;
                        bi = i;
                        bj = j;
                    }
                }
            if (!best) break;
            max_pivot_val = std::max(max_pivot_val, *best);
            a.swap_rows(bi, r);
            const PadicScalar pinv = a(r, bj).inv();
            for (std::size_t j = 0; j < cols_; ++j) a(r, j) = pinv * a(r, j);
            for (std::size_t i = 0; i < rows_; ++i) {
                if (i == r || a(i, bj).exact_zero()) continue;
                const PadicScalar f = a(i, bj);
                for (std::size_t j = 0; j < cols_; ++j) a(i, j) -= f * a(r, j);
            }
            used[bj] = true;
            pivot_cols.push_back(bj);
            ++r;
        }
        for (std::size_t i = r; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) {
                const PadicScalar& e = a(i, j);
                if (!e.exact_zero() && e.prec() < std::max(1, max_pivot_val + 1))
                    throw PrecisionError("kernel rank is ambiguous at the working precision");
            }
        std::vector<std::vector<PadicScalar>> basis;
        for (std::size_t f = 0; f < cols_; ++f) {
            if (used[f]) continue;
            std::vector<PadicScalar> v(cols_, PadicScalar::zero(*par_));
            v[f] = PadicScalar::one(*par_);
            for (std::size_t i = 0; i < pivot_cols.size(); ++i) v[pivot_cols[i]] = -a(i, f);
            std::optional<int> minv;
            for (const auto& e : v)
                if (auto ve = e.valuation_opt()) minv = minv ? std::min(*minv, *ve) : *ve;
            for (auto& e : v) e = e.shifted(-*minv);
            basis.push_back(std::move(v));
        }
        return basis;
    }

    // Smallest absolute precision over the entries (kExact if all are exact zeros).
    int min_precision() const {
        int m = PadicScalar::kExact;
        for (const auto& e : a_) m = std::min(m, e.prec());
        return m;
    }

    bool agrees_with(const PadicMatrix& y) const {
        check_shape(y);
        for (std::size_t i = 0; i < a_.size(); ++i)
            if (!a_[i].agrees_with(y.a_[i])) return false;
        return true;
    }

    // Precision at which the difference with y is known to vanish (kExact if identical exact zeros).
    int agreement_precision(const PadicMatrix& y) const {
        const PadicMatrix d = *this - y;
        for (const auto& e : d.a_)
            if (!e.is_zero_to_precision()) return -PadicScalar::kExact;
        return d.min_precision();
    }

private:
    void require_square() const {
        if (rows_ != cols_) throw DomainError("square matrix required");
    }

    void check_shape(const PadicMatrix& y) const {
        if (rows_ != y.rows_ || cols_ != y.cols_) throw DomainError("matrix shape mismatch");
        if (par_ != y.par_) throw DomainError("matrices from different p-adic contexts");
    }

    void swap_rows(std::size_t i, std::size_t j) {
        if (i == j) return;
        for (std::size_t c = 0; c < cols_; ++c) std::swap((*this)(i, c), (*this)(j, c));
    }

    static std::size_t pick_pivot_row(const PadicMatrix& a, std::size_t col, std::size_t from) {
        std::optional<int> best;
        std::size_t bi = from;
        for (std::size_t i = from; i < a.rows_; ++i) {
            auto v = a(i, col).valuation_opt();
            if (v && (!best || *v < *best)) {
                best = v;
                bi = i;
            }
        }
        if (!best) throw PrecisionError("matrix is singular to the working precision");
        return bi;
    }

    const PadicParams* par_ = nullptr;
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<PadicScalar> a_;
};

// Leading coefficient a unit, the others in p, the constant term of valuation exactly 1.
inline bool is_eisenstein(const std::vector<PadicScalar>& poly) {
    if (poly.size() < 2) return false;
    if (!poly.front().is_unit()) return false;
    for (std::size_t i = 1; i + 1 < poly.size(); ++i)
        if (!poly[i].val_at_least(1)) return false;
    return poly.back().val_at_least(1) && !poly.back().val_at_least(2);
}

}  // namespace endoscope
