#pragma once

// Norm pairs between GL_{2n} (twisted) and SO_{2n+1}, the partial diagonalization of an
// affine generic element of I_H+, and the endoscopic character relation.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "endoscope/checks.hpp"
#include "endoscope/expsum.hpp"
#include "endoscope/iwahori.hpp"
#include "endoscope/sschar.hpp"

namespace endoscope {

struct EndoscopyContext {
    int n;
    GLContext gl;
    SOContext so;
    FqAddChar psi;

    EndoscopyContext(int n_, int p, int K = 8, int E = 2, int psi_shift = 1)
        : n(n_), gl(2 * n_, p, K, E), so(n_, p, K, E), psi(gl.field, gl.field.from_int(psi_shift)) {
        if (n < 1) throw DomainError("n must be positive");
    }
    const Fq& field() const { return gl.field; }
    const PadicParams& par() const { return *gl.par; }
    // Trusted digits demanded of every matrix identity.
    int identity_digits() const { return std::max(2, par().K / 2); }
};

enum class PairKind { unramified, ramified };

struct NormPair {
    PairKind kind;
    FqElem u;
    PadicMatrix g;  // in GL_{2n}
    PadicMatrix h;  // in SO_{2n+1}
    std::vector<IdentityCheck> checks;
};

// 1 + phi_u
inline PadicMatrix one_plus_phi(const EndoscopyContext& ec, FqElem u) {
    return PadicMatrix::identity(ec.par(), ec.gl.size()) + phi(ec.gl, u);
}

// (1 - w)^{-1} (diagonal 1+w, 2 above, 2w below) with w = p u: the norm of 1 + phi_u.
inline PadicMatrix norm_one_plus_phi_display(const EndoscopyContext& ec, FqElem u) {
    const PadicParams& par = ec.par();
    const std::size_t N = ec.gl.size();
    const PadicScalar w = PadicScalar::uniformizer_power(par, 1) * teich(par, u);
    const PadicScalar one = PadicScalar::one(par), two = PadicScalar::from_int(par, 2);
    PadicMatrix B(par, N, N);
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) B(i, j) = i == j ? one + w : (i < j ? two : two * w);
    return (one - w).inv() * B;
}

// N'(1 + phi_u) in SO_{2n+1}: (1 - w)^{-1} times
//   row 1      : 1, 2, ..., 2
//   rows 2..2n : w, then 1+w on the diagonal, 2 to the right (last column included), 2w to the left
//   last row   : w^2/2, w, ..., w, 1
inline PadicMatrix norm_prime_one_plus_phi(const EndoscopyContext& ec, FqElem u) {
    require_nonzero(u, "u");
    const PadicParams& par = ec.par();
    const std::size_t N = ec.so.size();
    const PadicScalar w = PadicScalar::uniformizer_power(par, 1) * teich(par, u);
    const PadicScalar one = PadicScalar::one(par), two = PadicScalar::from_int(par, 2);
    PadicMatrix M(par, N, N);
    M(0, 0) = one;
    for (std::size_t j = 1; j < N; ++j) M(0, j) = two;
    for (std::size_t i = 1; i + 1 < N; ++i) {
        M(i, 0) = w;
        for (std::size_t j = 1; j < N; ++j) M(i, j) = i == j ? one + w : (j > i ? two : two * w);
    }
    M(N - 1, 0) = w * w * PadicScalar::from_fraction(par, 1, 2);
    for (std::size_t j = 1; j + 1 < N; ++j) M(N - 1, j) = w;
    M(N - 1, N - 1) = one;
    return (one - w).inv() * M;
}

// Unipotent with -w/2 in the lower-left corner, and its inverse.
inline PadicMatrix corner_unipotent(const EndoscopyContext& ec, FqElem u, bool inverse) {
    const PadicParams& par = ec.par();
    const std::size_t N = ec.so.size();
    PadicMatrix X = PadicMatrix::identity(par, N);
    const PadicScalar w = PadicScalar::uniformizer_power(par, 1) * teich(par, u);
    const PadicScalar c = w * PadicScalar::from_fraction(par, 1, 2);
    X(N - 1, 0) = inverse ? c : -c;
    return X;
}

namespace detail {

inline IdentityCheck matrix_check(const EndoscopyContext& ec, std::string name, const PadicMatrix& a,
                                  const PadicMatrix& b) {
    const int prec = a.agreement_precision(b);
    IdentityCheck c;
    c.name = std::move(name);
    if (prec == -PadicScalar::kExact) {
        c.pass = false;
        c.note = "matrices differ";
        return c;
    }
    if (prec < ec.identity_digits())
        throw PrecisionError(c.name + ": only " + std::to_string(prec) + " trusted digits");
    c.pass = true;
    c.note = prec == PadicScalar::kExact ? "exact" : "agrees mod p^" + std::to_string(prec);
    return c;
}

inline IdentityCheck components_check(std::string name, const std::vector<FqElem>& got,
                                      const std::vector<FqElem>& want, const Fq& F) {
    std::string s = "got (";
    for (std::size_t i = 0; i < got.size(); ++i) s += (i ? "," : "") + F.to_string(got[i]);
    s += ")";
    return boolean_check(std::move(name), got == want, s);
}

inline std::vector<FqElem> constant_components(const Fq& F, std::size_t count, int value, FqElem last) {
    std::vector<FqElem> c(count - 1, F.from_int(value));
    c.push_back(last);
    return c;
}

// X^{-1} h X has first column e_1 and lower-right block `block`.
inline std::vector<IdentityCheck> x_conjugation_checks(const EndoscopyContext& ec, const std::string& tag,
                                                       const PadicMatrix& h, FqElem u, const PadicMatrix& block) {
    const std::size_t N = ec.so.size();
    const PadicMatrix c = corner_unipotent(ec, u, true) * h * corner_unipotent(ec, u, false);
    PadicMatrix e1(ec.par(), N, 1);
    e1(0, 0) = PadicScalar::one(ec.par());
    return {matrix_check(ec, tag + ": X^-1 h X has first column e_1", c.block(0, 0, N, 1), e1),
            matrix_check(ec, tag + ": X^-1 h X lower-right block equals the GL norm", c.block(1, 1, N - 1, N - 1),
                         block)};
}

}  // namespace detail

inline NormPair build_pair_unramified(const EndoscopyContext& ec, FqElem u) {
    require_nonzero(u, "u");
    const Fq& F = ec.field();
    NormPair np{PairKind::unramified, u, one_plus_phi(ec, u), norm_prime_one_plus_phi(ec, u), {}};
    auto& ch = np.checks;
    const PadicMatrix Ng = norm_theta(ec.gl, np.g);
    ch.push_back(detail::components_check("components of 1+phi_u", affine_components(ec.gl, np.g),
                                          detail::constant_components(F, ec.gl.size(), 1, u), F));
    ch.push_back(detail::matrix_check(ec, "N(1+phi_u) matches the closed display", Ng, norm_one_plus_phi_display(ec, u)));
    ch.push_back(detail::components_check("components of N(1+phi_u)", affine_components(ec.gl, Ng),
                                          detail::constant_components(F, ec.gl.size(), 2, F.mul(F.from_int(2), u)), F));
    const PadicMatrix th = theta(ec.gl, np.g);
    ch.push_back(detail::matrix_check(ec, "1+phi_u commutes with theta(1+phi_u)", np.g * th, th * np.g));
    ch.push_back(boolean_check("N'(1+phi_u) lies in SO_{2n+1}", in_so(ec.so, np.h)));
    ch.push_back(detail::components_check("components of N'(1+phi_u)", affine_components(ec.so, np.h),
                                          detail::constant_components(F, ec.so.n + 1u, 2, u), F));
    for (auto& c : detail::x_conjugation_checks(ec, "unramified", np.h, u, Ng)) ch.push_back(std::move(c));
    const PadicMatrix I = PadicMatrix::identity(ec.par(), ec.gl.size());
    ch.push_back(boolean_check("char poly of (1+phi_u) - I is Eisenstein", is_eisenstein((np.g - I).char_poly())));
    return np;
}

// phi'_{u/2} with parameter lifted as teich(u)/2, matching the lift of u inside phi_u.
inline PadicMatrix half_phi_prime(const EndoscopyContext& ec, FqElem u) {
    require_nonzero(u, "u");
    return phi_prime(ec.so, teich(ec.par(), u) * PadicScalar::from_fraction(ec.par(), 1, 2));
}

inline NormPair build_pair_ramified(const EndoscopyContext& ec, FqElem u) {
    require_nonzero(u, "u");
    const Fq& F = ec.field();
    const PadicMatrix base = one_plus_phi(ec, u);
    NormPair np{PairKind::ramified, u, phi(ec.gl, u) * base, half_phi_prime(ec, u) * norm_prime_one_plus_phi(ec, u), {}};
    auto& ch = np.checks;
    const PadicMatrix Ng = norm_theta(ec.gl, np.g);
    const PadicMatrix Nbase = norm_theta(ec.gl, base);
    ch.push_back(detail::matrix_check(ec, "N(phi_u(1+phi_u)) = -N(1+phi_u)", Ng, -Nbase));
    const auto want = [&] {
        // (g_2+g_{2n-1}, ..., u^{-1} g_{2n} + g_1, u g_1 + g_{2n}) at g = 1+phi_u
        std::vector<FqElem> c(ec.gl.size() - 1, F.from_int(2));
        c.push_back(F.mul(F.from_int(2), u));
        return c;
    }();
    ch.push_back(detail::components_check("components of -N(phi_u(1+phi_u))", affine_components(ec.gl, -Ng), want, F));
    ch.push_back(boolean_check("phi'_{u/2} N'(1+phi_u) lies in SO_{2n+1}", in_so(ec.so, np.h)));
    for (auto& c : detail::x_conjugation_checks(ec, "ramified", np.h, u, Ng)) ch.push_back(std::move(c));
    // first row of the ramified conjugate: 1, 2/(w-1), ..., 2/(w-1), 2/(w(w-1))
    {
        const std::size_t N = ec.so.size();
        const PadicParams& par = ec.par();
        const PadicMatrix c = corner_unipotent(ec, u, true) * np.h * corner_unipotent(ec, u, false);
        const PadicScalar w = PadicScalar::uniformizer_power(par, 1) * teich(par, u);
        const PadicScalar s = (w - PadicScalar::one(par)).inv();
        PadicMatrix row(par, 1, N);
        row(0, 0) = PadicScalar::one(par);
        for (std::size_t j = 1; j + 1 < N; ++j) row(0, j) = PadicScalar::from_int(par, 2) * s;
        row(0, N - 1) = PadicScalar::from_int(par, 2) * s * w.inv();
        ch.push_back(detail::matrix_check(ec, "ramified: first row of X^-1 h X", c.block(0, 0, 1, N), row));
    }
    const auto cp = phi(ec.gl, u).char_poly();
    std::vector<PadicScalar> expected(ec.gl.size() + 1, PadicScalar::zero(ec.par()));
    expected.front() = PadicScalar::one(ec.par());
    expected.back() = -(PadicScalar::uniformizer_power(ec.par(), 1) * teich(ec.par(), u));
    bool same = true;
    for (std::size_t i = 0; i < cp.size(); ++i) same = same && cp[i].agrees_with(expected[i]);
    ch.push_back(boolean_check("char poly of phi_u is t^{2n} - p u", same));
    ch.push_back(boolean_check("char poly of phi_u is Eisenstein", is_eisenstein(cp)));
    ch.push_back(detail::components_check("components of (phi'_{u/2} N'(1+phi_u))^2", affine_components(ec.so, np.h * np.h),
                                          detail::constant_components(F, ec.so.n + 1u, 4, F.mul(F.from_int(2), u)), F));
    return np;
}

// ---- partial diagonalization ----

struct PartialDiagonalization {
    PadicMatrix conjugator;  // unipotent with first column v, v_1 = 1
    PadicMatrix conjugated;  // conjugator^{-1} h conjugator
    PadicMatrix reduced;     // lower-right 2n x 2n block
    std::vector<FqElem> components;
};

inline PartialDiagonalization partial_diagonalize(const EndoscopyContext& ec, const PadicMatrix& h) {
    require_generic_so(ec.so, h);
    const PadicParams& par = ec.par();
    const std::size_t N = ec.so.size();
    const auto basis = (h - PadicMatrix::identity(par, N)).kernel();
    if (basis.size() != 1) throw DomainError("fixed space of h is not one-dimensional");
    auto v = basis.front();
    if (!v[0].is_unit()) throw DomainError("first coordinate of the fixed vector is not a unit");
    const PadicScalar inv0 = v[0].inv();
    for (auto& e : v) e = e * inv0;
    PadicMatrix V = PadicMatrix::identity(par, N), Vinv = PadicMatrix::identity(par, N);
    for (std::size_t i = 1; i < N; ++i) {
        V(i, 0) = v[i];
        Vinv(i, 0) = -v[i];
    }
    PartialDiagonalization out{V, Vinv * h * V, {}, {}};
    PadicMatrix e1(par, N, 1);
    e1(0, 0) = PadicScalar::one(par);
    if (!matrices_agree(out.conjugated.block(0, 0, N, 1), e1))
        throw VerificationError("conjugated matrix does not fix the first basis vector");
    out.reduced = out.conjugated.block(1, 1, N - 1, N - 1);
    out.components = affine_components(ec.gl, out.reduced);
    return out;
}

// (h_2, ..., h_n, h_n, ..., h_1, 2 h_{2n})
inline std::vector<FqElem> expected_partial_components(const Fq& F, const std::vector<FqElem>& hc) {
    const std::size_t n = hc.size() - 1;
    std::vector<FqElem> out;
    for (std::size_t i = 1; i < n; ++i) out.push_back(hc[i]);
    for (std::size_t i = n; i-- > 0;) out.push_back(hc[i]);
    out.push_back(F.mul(F.from_int(2), hc[n]));
    return out;
}

// ---- endoscopic character relation ----

inline FqElem half(const Fq& F) { return F.inv(F.from_int(2)); }

// pi'_{b, xi} lifts to pi_{2b, xi}.
inline GLSscParam lifting(const Fq& F, FqElem b, int xi) {
    require_nonzero(b, "b");
    return GLSscParam::with_sign(F.mul(F.from_int(2), b), xi);
}

struct RelationSides {
    CycElem lhs_closed, lhs_brute, rhs_closed, rhs_brute;
};

inline std::vector<IdentityCheck> side_checks(const std::string& tag, const RelationSides& s) {
    return {compare_values(tag + ": SO side closed = brute", s.lhs_closed, s.lhs_brute),
            compare_values(tag + ": GL side closed = brute", s.rhs_closed, s.rhs_brute),
            compare_values(tag + ": SO side = GL side", s.lhs_closed, s.rhs_closed)};
}

// Theta_{pi'_{b, zeta}}(N'(1+phi_u)) against Theta_{pi_{1,zeta},theta}(1+phi_u); b defaults to 1/2.
inline std::vector<IdentityCheck> verify_ecr_unramified(const EndoscopyContext& ec, int zeta, FqElem u,
                                                        std::optional<FqElem> b = std::nullopt) {
    const Fq& F = ec.field();
    const SOSscParam sp{b.value_or(half(F)), zeta};
    const GLSscParam gp = GLSscParam::with_sign(F.one(), zeta);
    const PadicMatrix g = one_plus_phi(ec, u);
    const PadicMatrix h = norm_prime_one_plus_phi(ec, u);
    const RelationSides s{char_so(ec.so, ec.psi, sp, h, CharMode::closed), char_so(ec.so, ec.psi, sp, h, CharMode::brute),
                          tchar_gl(ec.gl, ec.psi, gp, g, CharMode::closed), tchar_gl(ec.gl, ec.psi, gp, g, CharMode::brute)};
    const std::string tag = "unramified u=" + F.to_string(u) + " zeta=" + std::to_string(zeta);
    auto out = side_checks(tag, s);
    // Kl^{n+1}_{2^{2(n-1)} u}(psi; 1, 2, ..., 2, 1)
    const FqElem idx = F.mul(F.pow(F.from_int(2), 2 * (ec.n - 1)), u);
    out.push_back(compare_values(tag + ": GL side = Kl^{n+1}_{2^{2(n-1)}u}", s.rhs_closed, kl(ec.psi, idx, end_weights(ec.n + 1))));
    return out;
}

// Theta_{pi'_{1/2, xi}}(phi'_{u/2} N'(1+phi_u)); as phi'_{b^{-1}u'} h this is u' = b u / 2.
inline RelationSides ramified_sides(const EndoscopyContext& ec, int zeta, int xi, FqElem u,
                                    std::optional<FqElem> b = std::nullopt) {
    const Fq& F = ec.field();
    const SOSscParam sp{b.value_or(half(F)), xi};
    const GLSscParam gp = GLSscParam::with_sign(F.one(), zeta);
    const FqElem u_prime = F.mul(sp.b, F.div(u, F.from_int(2)));
    const PadicMatrix g = one_plus_phi(ec, u);
    const PadicMatrix h = norm_prime_one_plus_phi(ec, u);
    return {char_so_phiprime(ec.so, ec.psi, sp, u_prime, h, CharMode::closed),
            char_so_phiprime(ec.so, ec.psi, sp, u_prime, h, CharMode::brute),
            tchar_gl_phiu(ec.gl, ec.psi, gp, u, g, CharMode::closed),
            tchar_gl_phiu(ec.gl, ec.psi, gp, u, g, CharMode::brute)};
}

inline std::vector<IdentityCheck> verify_ecr_ramified(const EndoscopyContext& ec, int zeta, FqElem u,
                                                      std::optional<FqElem> b = std::nullopt) {
    const Fq& F = ec.field();
    const RelationSides s = ramified_sides(ec, zeta, zeta, u, b);
    const std::string tag = "ramified u=" + F.to_string(u) + " zeta=" + std::to_string(zeta);
    auto out = side_checks(tag, s);
    // the pair's SO element is phi'_{b^{-1}u'} N'(1+phi_u)
    {
        const SOSscParam sp{b.value_or(half(F)), zeta};
        const FqElem u_prime = F.mul(sp.b, F.div(u, F.from_int(2)));
        const PadicMatrix built = so_phiprime_element(ec.so, sp, u_prime, norm_prime_one_plus_phi(ec, u));
        const PadicMatrix paired = half_phi_prime(ec, u) * norm_prime_one_plus_phi(ec, u);
        out.push_back(boolean_check(tag + ": evaluated element lies in phi'_{u/2} N'(1+phi_u) I_H++",
                                    iwahori_level(ec.so, built.inv() * paired) == IwahoriLevel::I_plusplus));
    }
    CycElem expected(F.p());
    if (auto v = F.sqrt(u)) {
        const FqElem idx = F.mul(F.pow(F.from_int(2), ec.n), *v);
        const auto w = unit_weights(ec.n);
        expected = CycElem::from_int(zeta) * (kl(ec.psi, idx, w) + kl(ec.psi, F.neg(idx), w));
    }
    out.push_back(compare_values(tag + ": GL side = zeta (Kl^n_{2^n v} + Kl^n_{-2^n v}), or 0 off squares",
                                 s.rhs_closed, expected));
    return out;
}

// Sum over units of Kl^n_u = (-1)^n, which pins xi once c = 1.
inline IdentityCheck unit_sum_check(const EndoscopyContext& ec) {
    const KlTotals t = kl_sum_over_all(ec.n, unit_weights(ec.n), ec.psi);
    return compare_values("sum over units of Kl^n_u = (-1)^n", t.over_units, CycElem::from_int(ec.n % 2 ? -1 : 1));
}

// Some square u where replacing xi by -zeta breaks the ramified relation.
inline std::optional<FqElem> xi_flip_witness(const EndoscopyContext& ec, int zeta) {
    const Fq& F = ec.field();
    for (std::uint32_t c = 1; c < F.q(); ++c) {
        const FqElem u{c};
        const RelationSides s = ramified_sides(ec, zeta, -zeta, u);
        if (s.lhs_closed != s.rhs_closed) return u;
    }
    return std::nullopt;
}

struct BcFit {
    std::vector<std::pair<FqElem, CycElem>> solutions;  // every (b, c) making the tables proportional
    CycElem gl_total;                                   // sum of the GL table
};

// Treats b and c as unknowns: u -> Theta_{pi'_{b,.}}(N'(1+phi_u)) must equal c times
// u -> Theta_{pi_{1,zeta},theta}(1+phi_u).  Summing over u fixes c as the ratio of the totals.
inline BcFit fit_bc(const EndoscopyContext& ec, int zeta, CharMode mode = CharMode::closed) {
    const Fq& F = ec.field();
    const GLSscParam gp = GLSscParam::with_sign(F.one(), zeta);
    std::vector<CycElem> gl_table, so_table;
    std::vector<PadicMatrix> hs;
    BcFit fit{{}, CycElem(F.p())};
    for (std::uint32_t c = 1; c < F.q(); ++c) {
        const FqElem u{c};
        gl_table.push_back(tchar_gl(ec.gl, ec.psi, gp, one_plus_phi(ec, u), mode));
        hs.push_back(norm_prime_one_plus_phi(ec, u));
        fit.gl_total += gl_table.back();
    }
    const CycElem one = CycElem::from_int(1), minus_one = CycElem::from_int(-1);
    if (fit.gl_total != one && fit.gl_total != minus_one)
        throw VerificationError("GL-side table does not sum to a sign");
    for (std::uint32_t bc = 1; bc < F.q(); ++bc) {
        const SOSscParam sp{FqElem{bc}, zeta};
        so_table.clear();
        CycElem so_total(F.p());
        for (const auto& h : hs) {
            so_table.push_back(char_so(ec.so, ec.psi, sp, h, mode));
            so_total += so_table.back();
        }
        const CycElem c = so_total * fit.gl_total;
        bool ok = true;
        for (std::size_t i = 0; i < gl_table.size() && ok; ++i) ok = (so_table[i] == c * gl_table[i]);
        if (ok) fit.solutions.emplace_back(FqElem{bc}, c);
    }
    return fit;
}

}  // namespace endoscope
