#pragma once

// Reference computations that share no code with the library: plain modular integers,
// std::complex sums and exact rational matrices.

#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace oracle {

inline std::complex<double> root(long m, long e) {
    const double ang = 2.0 * std::numbers::pi * static_cast<double>(((e % m) + m) % m) / static_cast<double>(m);
    return {std::cos(ang), std::sin(ang)};
}

inline long powmod(long x, long e, long p) {
    long r = 1;
    x %= p;
    for (; e > 0; --e) r = r * x % p;
    return r;
}

// psi-exponent counts of the prime-field Kloosterman sum with psi(x) = zeta_p^{shift x}.
inline std::vector<long> kl_counts(int p, long a, const std::vector<int>& exps, long shift = 1) {
    std::vector<long> counts(p, 0);
    std::vector<long> x(exps.size(), 0);
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == exps.size()) {
            long prod = 1, sum = 0;
            for (std::size_t k = 0; k < x.size(); ++k) {
                prod = prod * powmod(x[k], exps[k], p) % p;
                sum += x[k];
            }
            if (prod == ((a % p) + p) % p) ++counts[(shift * sum) % p];
            return;
        }
        for (long v = 0; v < p; ++v) {
            x[i] = v;
            rec(i + 1);
        }
    };
    rec(0);
    return counts;
}

// Coordinates on 1, zeta, ..., zeta^{p-2}.
inline std::vector<long> zp_coeffs(const std::vector<long>& counts) {
    const std::size_t p = counts.size();
    std::vector<long> c(p - 1);
    for (std::size_t i = 0; i + 1 < p; ++i) c[i] = counts[i] - counts[p - 1];
    return c;
}

inline std::complex<double> from_counts(const std::vector<long>& counts) {
    std::complex<double> s = 0;
    for (std::size_t e = 0; e < counts.size(); ++e) s += static_cast<double>(counts[e]) * root(static_cast<long>(counts.size()), static_cast<long>(e));
    return s;
}

inline std::complex<double> kl(int p, long a, const std::vector<int>& exps, long shift = 1) {
    return from_counts(kl_counts(p, a, exps, shift));
}

// Smallest primitive root mod p.
inline long primitive_root(long p) {
    for (long g = 2; g < p; ++g) {
        bool ok = true;
        for (long e = 1; e < p - 1 && ok; ++e)
            if (powmod(g, e, p) == 1) ok = false;
        if (ok) return g;
    }
    return 1;
}

// Gauss sum of chi_j(g^t) = zeta_{p-1}^{jt} over F_p.
inline std::complex<double> gauss(long p, long j, long shift = 1) {
    const long g = primitive_root(p);
    std::complex<double> s = 0;
    long x = 1;
    for (long t = 0; t < p - 1; ++t) {
        s += root(p - 1, j * t) * root(p, shift * x);
        x = x * g % p;
    }
    return s;
}

// F_9 = F_3[t]/(t^2 + 1) as pairs (c0, c1).
struct F9 {
    int c0 = 0, c1 = 0;
    friend F9 operator+(F9 x, F9 y) { return {(x.c0 + y.c0) % 3, (x.c1 + y.c1) % 3}; }
    friend F9 operator*(F9 x, F9 y) {
        return {((x.c0 * y.c0 - x.c1 * y.c1) % 3 + 3) % 3, (x.c0 * y.c1 + x.c1 * y.c0) % 3};
    }
    int code() const { return c0 + 3 * c1; }
    static F9 from_code(int c) { return {c % 3, c / 3}; }
};

inline F9 f9_pow(F9 x, int e) {
    F9 r{1, 0};
    for (int i = 0; i < e; ++i) r = r * x;
    return r;
}

// Kloosterman sum over F_9 with psi(x) = zeta_3^{Tr x}, Tr(c0 + c1 t) = 2 c0.
inline std::complex<double> kl_f9(int a_code, const std::vector<int>& exps) {
    std::complex<double> s = 0;
    std::vector<int> x(exps.size(), 0);
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == exps.size()) {
            F9 prod{1, 0}, sum{0, 0};
            for (std::size_t k = 0; k < x.size(); ++k) {
                const F9 v = F9::from_code(x[k]);
                prod = prod * f9_pow(v, exps[k]);
                sum = sum + v;
            }
            if (prod.code() == a_code) s += root(3, 2 * sum.c0);
            return;
        }
        for (int v = 0; v < 9; ++v) {
            x[i] = v;
            rec(i + 1);
        }
    };
    rec(0);
    return s;
}

// ---- exact rational matrices ----

using Q = boost::multiprecision::cpp_rational;
using QMat = std::vector<std::vector<Q>>;

inline QMat qzero(std::size_t r, std::size_t c) { return QMat(r, std::vector<Q>(c, Q(0))); }
inline QMat qid(std::size_t n) {
    QMat m = qzero(n, n);
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}
inline QMat qmul(const QMat& a, const QMat& b) {
    QMat c = qzero(a.size(), b[0].size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < b.size(); ++k)
            if (a[i][k] != 0)
                for (std::size_t j = 0; j < b[0].size(); ++j) c[i][j] += a[i][k] * b[k][j];
    return c;
}
inline QMat qtranspose(const QMat& a) {
    QMat t = qzero(a[0].size(), a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[0].size(); ++j) t[j][i] = a[i][j];
    return t;
}
inline QMat qinv(QMat a) {
    const std::size_t n = a.size();
    QMat r = qid(n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (a[piv][col] == 0) ++piv;
        std::swap(a[piv], a[col]);
        std::swap(r[piv], r[col]);
        const Q s = a[col][col];
        for (std::size_t j = 0; j < n; ++j) {
            a[col][j] /= s;
            r[col][j] /= s;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == col || a[i][col] == 0) continue;
            const Q f = a[i][col];
            for (std::size_t j = 0; j < n; ++j) {
                a[i][j] -= f * a[col][j];
                r[i][j] -= f * r[col][j];
            }
        }
    }
    return r;
}
inline QMat qscale(const Q& s, QMat a) {
    for (auto& row : a)
        for (auto& e : row) e *= s;
    return a;
}
// Antidiagonal with (-1)^i in row i.
inline QMat qform(std::size_t n) {
    QMat j = qzero(n, n);
    for (std::size_t i = 0; i < n; ++i) j[i][n - 1 - i] = (i % 2 == 0) ? 1 : -1;
    return j;
}

}  // namespace oracle
