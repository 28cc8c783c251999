#pragma once

// Simple supercuspidal characters of GL_N, twisted GL_{2n} and SO_{2n+1} on the element
// families where they reduce to Kloosterman sums.  Every character has a closed form and
// a brute-force form that sums the inducing character over torus representatives.

#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "endoscope/cyclo.hpp"
#include "endoscope/errors.hpp"
#include "endoscope/expsum.hpp"
#include "endoscope/ffield.hpp"
#include "endoscope/iwahori.hpp"
#include "endoscope/padic.hpp"

namespace endoscope {

enum class CharMode { closed, brute };

// (a, zeta) with zeta = zeta_order-th root of unity to the power zeta_exponent.
struct GLSscParam {
    FqElem a;
    std::int64_t zeta_order = 1;
    std::int64_t zeta_exponent = 0;

    static GLSscParam with_sign(FqElem a, int zeta) {
        if (zeta != 1 && zeta != -1) throw DomainError("zeta must be +1 or -1 here");
        return zeta == 1 ? GLSscParam{a, 1, 0} : GLSscParam{a, 2, 1};
    }
    CycElem zeta() const { return CycElem::root_of_unity(zeta_order, zeta_exponent); }
    // +1 / -1 when zeta is real, 0 otherwise
    int sign() const {
        const std::int64_t e = ((zeta_exponent % zeta_order) + zeta_order) % zeta_order;
        if (e == 0) return 1;
        if (2 * e == zeta_order) return -1;
        return 0;
    }
};

struct SOSscParam {
    FqElem b;
    int xi = 1;
};

// Additive character of F_p with the standard shift 1.
inline FqAddChar default_psi(const Fq& F) { return FqAddChar(F); }

namespace detail {

// Value zeta^m * zeta_p^e as an exponent in a RootSum of order lcm(zeta_order, p).
struct RootTerm {
    std::int64_t zeta_power = 0;
    int psi_exponent = 0;
};

inline std::int64_t term_exponent(const RootTerm& t, std::int64_t zeta_order, std::int64_t zeta_exponent, int p,
                                  std::int64_t M) {
    return t.zeta_power * zeta_exponent * (M / zeta_order) + static_cast<std::int64_t>(t.psi_exponent) * (M / p);
}

// All tuples in (F_p^x)^k, in lexicographic code order.
inline void for_each_unit_tuple(const Fq& F, std::size_t k, const std::function<void(const std::vector<FqElem>&)>& fn) {
    std::vector<FqElem> t(k, F.one());
    while (true) {
        fn(t);
        std::size_t i = 0;
        while (i < k) {
            if (t[i].code + 1 < F.q()) {
                t[i].code += 1;
                break;
            }
            t[i] = F.one();
            ++i;
        }
        if (i == k) return;
    }
}

inline std::vector<PadicScalar> lifts(const PadicParams& par, const std::vector<FqElem>& t) {
    std::vector<PadicScalar> out;
    out.reserve(t.size());
    for (auto x : t) out.push_back(teich(par, x));
    return out;
}

inline std::vector<PadicScalar> inverses(const std::vector<PadicScalar>& v) {
    std::vector<PadicScalar> out;
    out.reserve(v.size());
    for (const auto& x : v) out.push_back(x.inv());
    return out;
}

inline PadicMatrix conjugate_by_diagonal(const PadicMatrix& g, const std::vector<PadicScalar>& d,
                                         const std::vector<PadicScalar>& dinv) {
    PadicMatrix out = g;
    for (std::size_t i = 0; i < g.rows(); ++i)
        for (std::size_t j = 0; j < g.cols(); ++j)
            if (!g(i, j).exact_zero()) out(i, j) = d[i] * g(i, j) * dinv[j];
    return out;
}

// diag(t_1..t_n, 1, t_n^{-1}..t_1^{-1}) entries
inline std::vector<FqElem> so_torus_entries(const Fq& F, const std::vector<FqElem>& t) {
    std::vector<FqElem> d(t.begin(), t.end());
    d.push_back(F.one());
    for (std::size_t i = t.size(); i-- > 0;) d.push_back(F.inv(t[i]));
    return d;
}

inline CycElem finish(const RootSum& acc) { return acc.value(); }

}  // namespace detail

// ---- inducing characters ----

// psi_a(x) = psi(x_12 + ... + x_{N-1,N} + a * x_{N1}/p), as an exponent of zeta_p.
inline int psi_a_exponent(const GLContext& ctx, const FqAddChar& psi, FqElem a, const PadicMatrix& x) {
    const auto c = affine_components(ctx, x);
    const Fq& F = ctx.field;
    FqElem s = F.zero();
    for (std::size_t i = 0; i + 1 < c.size(); ++i) s = F.add(s, c[i]);
    s = F.add(s, F.mul(a, c.back()));
    return psi.exponent(s);
}

// psi'_b(y) = psi(y_12 + ... + y_{n,n+1} + b * y_{2n,1}/p).
inline int psi_prime_exponent(const SOContext& ctx, const FqAddChar& psi, FqElem b, const PadicMatrix& y) {
    const auto c = affine_components(ctx, y);
    const Fq& F = ctx.field;
    FqElem s = F.zero();
    for (std::size_t i = 0; i + 1 < c.size(); ++i) s = F.add(s, c[i]);
    s = F.add(s, F.mul(b, c.back()));
    return psi.exponent(s);
}

namespace detail {

inline RootTerm chi_term(const GLContext& ctx, const FqAddChar& psi, const GLSscParam& param, const PadicMatrix& g) {
    const KDecomposition d = decompose_K(ctx, g, param.a);
    return {d.m, psi_a_exponent(ctx, psi, param.a, d.x)};
}

inline RootTerm chi_prime_term(const SOContext& ctx, const FqAddChar& psi, const SOSscParam& param,
                               const PadicMatrix& g) {
    const KprimeDecomposition d = decompose_Kprime(ctx, g, param.b);
    return {d.m, psi_prime_exponent(ctx, psi, param.b, d.y)};
}

inline std::int64_t xi_exponent(int xi) {
    if (xi != 1 && xi != -1) throw DomainError("xi must be +1 or -1");
    return xi == 1 ? 0 : 1;
}

}  // namespace detail

inline CycElem eval_chi(const GLContext& ctx, const FqAddChar& psi, const GLSscParam& param, const PadicMatrix& g) {
    const auto t = detail::chi_term(ctx, psi, param, g);
    return CycElem::root_of_unity(param.zeta_order, param.zeta_exponent * t.zeta_power) *
           CycElem::root_of_unity(ctx.field.p(), t.psi_exponent);
}

inline CycElem eval_chi_prime(const SOContext& ctx, const FqAddChar& psi, const SOSscParam& param,
                              const PadicMatrix& g) {
    const auto t = detail::chi_prime_term(ctx, psi, param, g);
    return CycElem::root_of_unity(2, detail::xi_exponent(param.xi) * t.zeta_power) *
           CycElem::root_of_unity(ctx.field.p(), t.psi_exponent);
}

// ---- torus representative sets, as constraint filters over T(q) ----

// {t in T(q) : t_N = 1}
inline std::vector<std::vector<FqElem>> reps_gl(const Fq& F, int N) {
    std::vector<std::vector<FqElem>> out;
    detail::for_each_unit_tuple(F, static_cast<std::size_t>(N - 1), [&](const std::vector<FqElem>& t) {
        auto full = t;
        full.push_back(F.one());
        out.push_back(full);
    });
    return out;
}

// {t in T(q) : t_1 t_{2n} = ... = t_n t_{n+1}, t_n = 1}
inline std::vector<std::vector<FqElem>> reps_tgl(const Fq& F, int n) {
    std::vector<std::vector<FqElem>> out;
    const std::size_t N = static_cast<std::size_t>(2 * n);
    detail::for_each_unit_tuple(F, N - 1, [&](const std::vector<FqElem>& rest) {
        std::vector<FqElem> t(rest.begin(), rest.begin() + (n - 1));
        t.push_back(F.one());
        t.insert(t.end(), rest.begin() + (n - 1), rest.end());
        const FqElem A = F.mul(t[0], t[N - 1]);
        for (std::size_t i = 1; i < static_cast<std::size_t>(n); ++i)
            if (F.mul(t[i], t[N - 1 - i]) != A) return;
        out.push_back(t);
    });
    return out;
}

// {t in T(q) : t_i t_{2n-i} = a u for 1 <= i <= 2n-1, t_{2n} = 1}; for a = 1 this is the
// set t_1 t_{2n-1} = ... = t_{2n-1} t_1 = u.
inline std::vector<std::vector<FqElem>> reps_tgl_phiu(const Fq& F, int n, FqElem a, FqElem u) {
    std::vector<std::vector<FqElem>> out;
    const std::size_t N = static_cast<std::size_t>(2 * n);
    const FqElem target = F.mul(a, u);
    detail::for_each_unit_tuple(F, N - 1, [&](const std::vector<FqElem>& rest) {
        for (std::size_t i = 0; i + 1 < N; ++i)
            if (F.mul(rest[i], rest[N - 2 - i]) != target) return;
        auto t = rest;
        t.push_back(F.one());
        out.push_back(t);
    });
    return out;
}

// all of T_H(q), as tuples (t_1, ..., t_n)
inline std::vector<std::vector<FqElem>> reps_so(const Fq& F, int n) {
    std::vector<std::vector<FqElem>> out;
    detail::for_each_unit_tuple(F, static_cast<std::size_t>(n), [&](const std::vector<FqElem>& t) { out.push_back(t); });
    return out;
}

// {t in T_H(q) : t_1^2 = u}
inline std::vector<std::vector<FqElem>> reps_so_phiprime(const Fq& F, int n, FqElem u) {
    std::vector<std::vector<FqElem>> out;
    detail::for_each_unit_tuple(F, static_cast<std::size_t>(n), [&](const std::vector<FqElem>& t) {
        if (F.mul(t[0], t[0]) == u) out.push_back(t);
    });
    return out;
}

// ---- the twisted-conjugation actions summed by the brute forms ----

inline PadicMatrix torus_matrix(const PadicParams& par, const std::vector<FqElem>& t) {
    return PadicMatrix::diagonal(par, detail::lifts(par, t));
}

inline PadicMatrix so_torus_matrix(const SOContext& ctx, const std::vector<FqElem>& t) {
    return torus_matrix(*ctx.par, detail::so_torus_entries(ctx.field, t));
}

// y g theta(y)^{-1}
inline PadicMatrix twisted_conjugate(const GLContext& ctx, const std::vector<FqElem>& t, const PadicMatrix& g) {
    const PadicMatrix y = torus_matrix(*ctx.par, t);
    return y * g * theta_inverse(ctx, y);
}

// ---- preconditions ----

inline std::vector<FqElem> require_generic_gl(const GLContext& ctx, const PadicMatrix& g) {
    const auto c = affine_components(ctx, g);
    if (!is_affine_generic(c)) throw DomainError("element is not affine generic");
    return c;
}

inline std::vector<FqElem> require_generic_so(const SOContext& ctx, const PadicMatrix& h) {
    const auto c = affine_components(ctx, h);
    if (!is_affine_generic(c)) throw DomainError("element is not affine generic");
    return c;
}

inline void require_sign(const GLSscParam& param) {
    if (param.sign() == 0) throw DomainError("twisted characters need zeta = +1 or -1");
}

// ---- the five characters ----

// Theta(g) for g in I+ affine generic.
inline CycElem char_gl(const GLContext& ctx, const FqAddChar& psi, const GLSscParam& param, const PadicMatrix& g,
                       CharMode mode) {
    const Fq& F = ctx.field;
    const auto c = require_generic_gl(ctx, g);
    if (mode == CharMode::closed) {
        FqElem P = param.a;
        for (auto x : c) P = F.mul(P, x);
        return kl(psi, P, unit_weights(ctx.N));
    }
    const std::int64_t M = std::lcm<std::int64_t>(param.zeta_order, F.p());
    RootSum acc(M);
    for (const auto& t : reps_gl(F, ctx.N)) {
        const auto d = detail::lifts(*ctx.par, t);
        const PadicMatrix conj = detail::conjugate_by_diagonal(g, d, detail::inverses(d));
        acc.add(detail::term_exponent(detail::chi_term(ctx, psi, param, conj), param.zeta_order, param.zeta_exponent,
                                      F.p(), M));
    }
    return acc.value();
}

// Twisted character Theta_{pi,theta}(g), g in I+ with N(g) affine generic (GL_{2n}).
inline CycElem tchar_gl(const GLContext& ctx, const FqAddChar& psi, const GLSscParam& param, const PadicMatrix& g,
                        CharMode mode) {
    if (ctx.N % 2 != 0) throw DomainError("twisted characters live on GL_{2n}");
    require_sign(param);
    const Fq& F = ctx.field;
    const int n = ctx.N / 2;
    const auto c = affine_components(ctx, g);
    if (!is_affine_generic(ctx, norm_theta(ctx, g))) throw DomainError("N(g) is not affine generic");
    if (mode == CharMode::closed) {
        // index g_n (g_1+g_{2n-1})^2 ... (g_{n-1}+g_{n+1})^2 * a g_{2n}
        FqElem P = F.mul(c[static_cast<std::size_t>(n - 1)], F.mul(param.a, c.back()));
        for (int i = 0; i + 1 < n; ++i) {
            const FqElem s = F.add(c[static_cast<std::size_t>(i)], c[static_cast<std::size_t>(2 * n - 2 - i)]);
            P = F.mul(P, F.mul(s, s));
        }
        return kl(psi, P, end_weights(n + 1));
    }
    const std::int64_t M = std::lcm<std::int64_t>(param.zeta_order, F.p());
    RootSum acc(M);
    for (const auto& t : reps_tgl(F, n))
        acc.add(detail::term_exponent(detail::chi_term(ctx, psi, param, twisted_conjugate(ctx, t, g)),
                                      param.zeta_order, param.zeta_exponent, F.p(), M));
    return acc.value();
}

// Theta_{pi,theta}(phi_u g), g in I+ with -N(phi_u g) affine generic.
inline CycElem tchar_gl_phiu(const GLContext& ctx, const FqAddChar& psi, const GLSscParam& param, FqElem u,
                             const PadicMatrix& g, CharMode mode) {
    if (ctx.N % 2 != 0) throw DomainError("twisted characters live on GL_{2n}");
    require_sign(param);
    require_nonzero(u, "u");
    const Fq& F = ctx.field;
    const int n = ctx.N / 2;
    const auto c = affine_components(ctx, g);
    const PadicMatrix pg = phi(ctx, u) * g;
    if (!is_affine_generic(ctx, -norm_theta(ctx, pg))) throw DomainError("-N(phi_u g) is not affine generic");
    if (mode == CharMode::closed) {
        const FqElem A = F.mul(param.a, u);
        const auto w = F.sqrt(A);
        if (!w) return CycElem(F.p());
        // (A g_1 + a g_{2n}) (g_2 + g_{2n-1}) ... (g_n + g_{n+1}) / w
        FqElem P = F.add(F.mul(A, c[0]), F.mul(param.a, c.back()));
        for (int i = 1; i < n; ++i)
            P = F.mul(P, F.add(c[static_cast<std::size_t>(i)], c[static_cast<std::size_t>(2 * n - 1 - i)]));
        P = F.div(P, *w);
        const auto exps = unit_weights(n);
        return param.zeta() * (kl(psi, P, exps) + kl(psi, F.neg(P), exps));
    }
    const std::int64_t M = std::lcm<std::int64_t>(param.zeta_order, F.p());
    RootSum acc(M);
    for (const auto& t : reps_tgl_phiu(F, n, param.a, u))
        acc.add(detail::term_exponent(detail::chi_term(ctx, psi, param, twisted_conjugate(ctx, t, pg)),
                                      param.zeta_order, param.zeta_exponent, F.p(), M));
    return acc.value();
}

// Theta_{pi'}(h), h in I_H+ affine generic.
inline CycElem char_so(const SOContext& ctx, const FqAddChar& psi, const SOSscParam& param, const PadicMatrix& h,
                       CharMode mode) {
    const Fq& F = ctx.field;
    const int n = ctx.n;
    const auto c = require_generic_so(ctx, h);
    if (mode == CharMode::closed) {
        // h_1 h_2^2 ... h_n^2 h_{2n} b
        FqElem P = F.mul(c[0], F.mul(c.back(), param.b));
        for (int i = 1; i < n; ++i) P = F.mul(P, F.mul(c[static_cast<std::size_t>(i)], c[static_cast<std::size_t>(i)]));
        return kl(psi, P, end_weights(n + 1));
    }
    RootSum acc(2 * F.p());
    for (const auto& t : reps_so(F, n)) {
        const auto d = detail::lifts(*ctx.par, detail::so_torus_entries(F, t));
        const PadicMatrix conj = detail::conjugate_by_diagonal(h, d, detail::inverses(d));
        acc.add(detail::term_exponent(detail::chi_prime_term(ctx, psi, param, conj), 2,
                                      detail::xi_exponent(param.xi), F.p(), 2 * F.p()));
    }
    return acc.value();
}

// phi'_{b^{-1}u} h, the element evaluated by char_so_phiprime.
inline PadicMatrix so_phiprime_element(const SOContext& ctx, const SOSscParam& param, FqElem u, const PadicMatrix& h) {
    return phi_prime(ctx, ctx.field.mul(ctx.field.inv(param.b), u)) * h;
}

// Theta_{pi'}(phi'_{b^{-1}u} h), h in I_H+ with (phi'_{b^{-1}u} h)^2 affine generic.
inline CycElem char_so_phiprime(const SOContext& ctx, const FqAddChar& psi, const SOSscParam& param, FqElem u,
                                const PadicMatrix& h, CharMode mode) {
    require_nonzero(u, "u");
    const Fq& F = ctx.field;
    const int n = ctx.n;
    const auto c = affine_components(ctx, h);
    const PadicMatrix g = so_phiprime_element(ctx, param, u, h);
    if (!is_affine_generic(ctx, g * g)) throw DomainError("(phi' h)^2 is not affine generic");
    if (mode == CharMode::closed) {
        const auto v = F.sqrt(u);
        if (!v) return CycElem(F.p());
        // (h_1 v^2 + h_{2n} b) h_2 ... h_n / v
        FqElem P = F.add(F.mul(c[0], u), F.mul(c.back(), param.b));
        for (int i = 1; i < n; ++i) P = F.mul(P, c[static_cast<std::size_t>(i)]);
        P = F.div(P, *v);
        const auto exps = unit_weights(n);
        return CycElem::from_int(param.xi) * (kl(psi, P, exps) + kl(psi, F.neg(P), exps));
    }
    RootSum acc(2 * F.p());
    for (const auto& t : reps_so_phiprime(F, n, u)) {
        const auto d = detail::lifts(*ctx.par, detail::so_torus_entries(F, t));
        const PadicMatrix conj = detail::conjugate_by_diagonal(g, d, detail::inverses(d));
        acc.add(detail::term_exponent(detail::chi_prime_term(ctx, psi, param, conj), 2,
                                      detail::xi_exponent(param.xi), F.p(), 2 * F.p()));
    }
    return acc.value();
}

}  // namespace endoscope
