#pragma once

// GL_N(Q_p) and SO_{2n+1}(Q_p): Iwahori filtration membership, affine simple
// components, the special elements phi_a and phi'_b, the twist theta and its norm.
//
// Residue-field elements are FqElem of a prime field F_p; they enter matrices
// through the Teichmueller lift.  Matrix indices are 0-based in code.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "endoscope/errors.hpp"
#include "endoscope/ffield.hpp"
#include "endoscope/padic.hpp"

namespace endoscope {

// Antidiagonal form with entry (-1)^i in row i (0-based).
inline PadicMatrix antidiagonal_form(const PadicParams& par, std::size_t size) {
    PadicMatrix J(par, size, size);
    for (std::size_t i = 0; i < size; ++i) J(i, size - 1 - i) = PadicScalar::from_int(par, i % 2 == 0 ? 1 : -1);
    return J;
}

struct GLContext {
    int N;
    const PadicParams* par;
    Fq field;
    PadicMatrix J;  // form defining theta (used when N is even)

    GLContext(int N_, int p, int K = 8, int E = 2)
        : N(N_), par(&PadicParams::get(p, K, E)), field(p), J(antidiagonal_form(*par, static_cast<std::size_t>(N_))) {
        if (N < 2) throw DomainError("GL_N needs N >= 2");
    }
    std::size_t size() const { return static_cast<std::size_t>(N); }
};

struct SOContext {
    int n;
    const PadicParams* par;
    Fq field;
    PadicMatrix J;

    SOContext(int n_, int p, int K = 8, int E = 2)
        : n(n_), par(&PadicParams::get(p, K, E)), field(p), J(antidiagonal_form(*par, static_cast<std::size_t>(2 * n_ + 1))) {
        if (n < 1) throw DomainError("SO_{2n+1} needs n >= 1");
    }
    std::size_t size() const { return static_cast<std::size_t>(2 * n + 1); }
};

enum class IwahoriLevel { none, I, I_plus, I_plusplus };

inline std::string to_string(IwahoriLevel l) {
    switch (l) {
        case IwahoriLevel::none: return "none";
        case IwahoriLevel::I: return "I";
        case IwahoriLevel::I_plus: return "I_plus";
        case IwahoriLevel::I_plusplus: return "I_plusplus";
    }
    return "?";
}

inline PadicScalar teich(const PadicParams& par, FqElem a) {
    return PadicScalar::teichmuller(par, static_cast<std::int64_t>(a.code));
}

inline void require_nonzero(FqElem a, const char* what) {
    if (a.code == 0) throw DomainError(std::string(what) + " must be nonzero");
}

// phi_a: ones on the superdiagonal, p*a in the lower-left corner.
inline PadicMatrix phi(const GLContext& ctx, FqElem a) {
    require_nonzero(a, "phi parameter");
    const std::size_t N = ctx.size();
    PadicMatrix m(*ctx.par, N, N);
    for (std::size_t i = 0; i + 1 < N; ++i) m(i, i + 1) = PadicScalar::one(*ctx.par);
    m(N - 1, 0) = PadicScalar::uniformizer_power(*ctx.par, 1) * teich(*ctx.par, a);
    return m;
}

inline PadicMatrix phi_inverse(const GLContext& ctx, FqElem a) {
    require_nonzero(a, "phi parameter");
    const std::size_t N = ctx.size();
    PadicMatrix m(*ctx.par, N, N);
    for (std::size_t i = 0; i + 1 < N; ++i) m(i + 1, i) = PadicScalar::one(*ctx.par);
    m(0, N - 1) = PadicScalar::uniformizer_power(*ctx.par, -1) * teich(*ctx.par, a).inv();
    return m;
}

// phi'_b = -(corner p^{-1} b^{-1} at top right, p b at bottom left, identity in between).
// phi' built from an explicit unit lift of its parameter.
inline PadicMatrix phi_prime(const SOContext& ctx, const PadicScalar& tb) {
    if (!tb.is_unit()) throw DomainError("phi' parameter must be a unit");
    const std::size_t N = ctx.size();
    const PadicParams& par = *ctx.par;
    PadicMatrix m(par, N, N);
    m(0, N - 1) = -(PadicScalar::uniformizer_power(par, -1) * tb.inv());
    m(N - 1, 0) = -(PadicScalar::uniformizer_power(par, 1) * tb);
    for (std::size_t i = 1; i + 1 < N; ++i) m(i, i) = -PadicScalar::one(par);
    return m;
}

inline PadicMatrix phi_prime(const SOContext& ctx, FqElem b) {
    require_nonzero(b, "phi' parameter");
    return phi_prime(ctx, teich(*ctx.par, b));
}

// theta(g) = J g^{-T} J^{-1}; J is a signed permutation so J^{-1} = J^T.
inline PadicMatrix theta(const GLContext& ctx, const PadicMatrix& g) {
    return ctx.J * g.transpose().inv() * ctx.J.transpose();
}

// theta(g)^{-1} = J g^T J^{-1}, without any inversion.
inline PadicMatrix theta_inverse(const GLContext& ctx, const PadicMatrix& g) {
    return ctx.J * g.transpose() * ctx.J.transpose();
}

inline PadicMatrix norm_theta(const GLContext& ctx, const PadicMatrix& g) { return g * theta(ctx, g); }

// Fails with PrecisionError when too few digits remain to decide.
inline bool matrices_agree(const PadicMatrix& a, const PadicMatrix& b, int min_digits = 1) {
    const int prec = a.agreement_precision(b);
    if (prec == -PadicScalar::kExact) return false;
    if (prec < min_digits) throw PrecisionError("identity check has fewer trusted digits than required");
    return true;
}

inline bool in_so(const SOContext& ctx, const PadicMatrix& g) {
    if (g.rows() != ctx.size() || g.cols() != ctx.size()) return false;
    if (!matrices_agree(g.transpose() * ctx.J * g, ctx.J)) return false;
    const PadicScalar d = g.det() - PadicScalar::one(*ctx.par);
    if (!d.is_zero_to_precision()) return false;
    if (d.prec() < 1) throw PrecisionError("determinant check has no trusted digits");
    return true;
}

namespace detail {

// Standard Iwahori pattern of size N: I (units on the diagonal, integral above,
// p below) or I+ (diagonal in 1+p).
inline IwahoriLevel standard_level(const PadicMatrix& g) {
    const std::size_t N = g.rows();
    const PadicScalar one = PadicScalar::one(g.params());
    bool plus = true;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) {
            const PadicScalar& x = g(i, j);
            if (i == j) {
                if (!x.is_unit()) return IwahoriLevel::none;
                if (!(x - one).val_at_least(1)) plus = false;
            } else if (i < j) {
                if (!x.val_at_least(0)) return IwahoriLevel::none;
            } else if (!x.val_at_least(1)) {
                return IwahoriLevel::none;
            }
        }
    return plus ? IwahoriLevel::I_plus : IwahoriLevel::I;
}

inline FqElem corner_component(const Fq& F, const PadicScalar& x) {
    return F.from_int(x.shifted(-1).reduce_mod_p());
}

}  // namespace detail

// GL_N: I++ additionally asks for the superdiagonal in p and the (N,1) corner in p^2.
inline IwahoriLevel iwahori_level(const GLContext& ctx, const PadicMatrix& g) {
    if (g.rows() != ctx.size() || g.cols() != ctx.size()) throw DomainError("matrix size does not match GL_N");
    const IwahoriLevel l = detail::standard_level(g);
    if (l != IwahoriLevel::I_plus) return l;
    const std::size_t N = ctx.size();
    for (std::size_t i = 0; i + 1 < N; ++i)
        if (!g(i, i + 1).val_at_least(1)) return IwahoriLevel::I_plus;
    if (!g(N - 1, 0).val_at_least(2)) return IwahoriLevel::I_plus;
    return IwahoriLevel::I_plusplus;
}

inline std::vector<FqElem> affine_components(const GLContext& ctx, const PadicMatrix& g) {
    const IwahoriLevel l = iwahori_level(ctx, g);
    if (l != IwahoriLevel::I_plus && l != IwahoriLevel::I_plusplus)
        throw DomainError("affine components need an element of I+");
    const std::size_t N = ctx.size();
    std::vector<FqElem> c;
    for (std::size_t i = 0; i + 1 < N; ++i) c.push_back(ctx.field.from_int(g(i, i + 1).reduce_mod_p()));
    c.push_back(detail::corner_component(ctx.field, g(N - 1, 0)));
    return c;
}

inline bool is_affine_generic(const std::vector<FqElem>& comps) {
    for (auto c : comps)
        if (c.code == 0) return false;
    return true;
}

inline bool is_affine_generic(const GLContext& ctx, const PadicMatrix& g) {
    return is_affine_generic(affine_components(ctx, g));
}

// SO_{2n+1}.  With torus diag(t_1..t_n, 1, t_n^{-1}..t_1^{-1}) the affine simple roots
// e_i - e_{i+1}, e_n and -e_1 - e_2 + 1 live in entries (i, i+1) for i <= n (paired with
// (2n+1-i, 2n+2-i)) and in p^{-1} times entry (2n, 1) (paired with (2n+1, 2)).  I_H and
// I_H+ are SO intersected with the GL_{2n+1} patterns.  I_H++ is generated by T_1 and the
// non-simple positive affine root groups, i.e. the kernel of the component map:
//   superdiagonal entries in p, entries (2n,1) and (2n+1,2) in p^2,
// everything else as in I_H+.  Entry (2n+1,1) carries no root of B_n and is in p^2
// automatically for elements of SO once the rest of the pattern holds.
inline IwahoriLevel iwahori_level(const SOContext& ctx, const PadicMatrix& g) {
    if (g.rows() != ctx.size() || g.cols() != ctx.size()) throw DomainError("matrix size does not match SO_{2n+1}");
    if (!in_so(ctx, g)) return IwahoriLevel::none;
    const IwahoriLevel l = detail::standard_level(g);
    if (l != IwahoriLevel::I_plus) return l;
    const std::size_t N = ctx.size();
    for (std::size_t i = 0; i + 1 < N; ++i)
        if (!g(i, i + 1).val_at_least(1)) return IwahoriLevel::I_plus;
    if (!g(N - 2, 0).val_at_least(2) || !g(N - 1, 1).val_at_least(2)) return IwahoriLevel::I_plus;
    return IwahoriLevel::I_plusplus;
}

inline std::vector<FqElem> affine_components(const SOContext& ctx, const PadicMatrix& g) {
    const IwahoriLevel l = iwahori_level(ctx, g);
    if (l != IwahoriLevel::I_plus && l != IwahoriLevel::I_plusplus)
        throw DomainError("affine components need an element of I_H+");
    std::vector<FqElem> c;
    for (std::size_t i = 0; i < static_cast<std::size_t>(ctx.n); ++i)
        c.push_back(ctx.field.from_int(g(i, i + 1).reduce_mod_p()));
    c.push_back(detail::corner_component(ctx.field, g(ctx.size() - 2, 0)));
    return c;
}

inline bool is_affine_generic(const SOContext& ctx, const PadicMatrix& g) {
    return is_affine_generic(affine_components(ctx, g));
}

// g = z * x * phi_{a^{-1}}^m with z = p^k * (Teichmueller unit), x in I+, 0 <= m < N.
struct KDecomposition {
    PadicScalar z;
    PadicMatrix x;
    int m = 0;
};

inline KDecomposition decompose_K(const GLContext& ctx, const PadicMatrix& g, FqElem a) {
    require_nonzero(a, "inducing parameter a");
    const int N = ctx.N;
    const int vd = g.val_det();
    const int m = ((vd % N) + N) % N;
    const int vz = (vd - m) / N;
    const FqElem ainv = ctx.field.inv(a);
    const PadicMatrix w = g * phi_inverse(ctx, ainv).pow(m);
    const PadicScalar& w11 = w(0, 0);
    if (w11.exact_zero()) throw DomainError("element is not in Z I+ <phi>");
    auto v11 = w11.valuation_opt();
    if (!v11) throw PrecisionError("cannot resolve the (1,1) entry in the K decomposition");
    if (*v11 != vz) throw DomainError("element is not in Z I+ <phi>");
    const int unit_res = w11.shifted(-vz).reduce_mod_p();
    const PadicScalar z = PadicScalar::uniformizer_power(*ctx.par, vz) * PadicScalar::teichmuller(*ctx.par, unit_res);
    const PadicMatrix x = z.inv() * w;
    const IwahoriLevel l = iwahori_level(ctx, x);
    if (l != IwahoriLevel::I_plus && l != IwahoriLevel::I_plusplus) throw DomainError("element is not in Z I+ <phi>");
    return {z, x, m};
}

// g = y * phi'_{b^{-1}}^m with y in I_H+ and m in {0, 1}.
struct KprimeDecomposition {
    PadicMatrix y;
    int m = 0;
};

inline KprimeDecomposition decompose_Kprime(const SOContext& ctx, const PadicMatrix& g, FqElem b) {
    require_nonzero(b, "inducing parameter b");
    auto in_plus = [&](const PadicMatrix& y) {
        const IwahoriLevel l = iwahori_level(ctx, y);
        return l == IwahoriLevel::I_plus || l == IwahoriLevel::I_plusplus;
    };
    if (in_plus(g)) return {g, 0};
    // phi' has order two
    const PadicMatrix y = g * phi_prime(ctx, ctx.field.inv(b));
    if (in_plus(y)) return {y, 1};
    throw DomainError("element is not in I_H+ <phi'>");
}

// ---- constructors of elements with prescribed affine components ----

// I + components on the superdiagonal + p * c_N in the corner.
inline PadicMatrix gl_representative(const GLContext& ctx, const std::vector<FqElem>& comps) {
    const std::size_t N = ctx.size();
    if (comps.size() != N) throw DomainError("GL_N element needs N components");
    PadicMatrix g = PadicMatrix::identity(*ctx.par, N);
    for (std::size_t i = 0; i + 1 < N; ++i)
        g(i, i + 1) = comps[i].code ? teich(*ctx.par, comps[i]) : PadicScalar::zero(*ctx.par);
    if (comps[N - 1].code) g(N - 1, 0) = PadicScalar::uniformizer_power(*ctx.par, 1) * teich(*ctx.par, comps[N - 1]);
    return g;
}

namespace detail {

inline PadicScalar random_integral(const PadicParams& par, std::mt19937_64& rng, int min_val = 0) {
    const std::int64_t bound = par.ppow[static_cast<std::size_t>(par.K)];
    std::uniform_int_distribution<std::int64_t> dist(0, bound - 1);
    return PadicScalar::from_int(par, dist(rng)).shifted(min_val);
}

inline PadicScalar lift_component(const PadicParams& par, FqElem c) {
    return c.code ? PadicScalar::teichmuller(par, c.code) : PadicScalar::zero(par);
}

}  // namespace detail

// Random element of I+ with the given components.
inline PadicMatrix gl_random_iplus(const GLContext& ctx, std::mt19937_64& rng, const std::vector<FqElem>& comps) {
    const std::size_t N = ctx.size();
    if (comps.size() != N) throw DomainError("GL_N element needs N components");
    const PadicParams& par = *ctx.par;
    PadicMatrix g(par, N, N);
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) {
            if (i == j) g(i, j) = PadicScalar::one(par) + detail::random_integral(par, rng, 1);
            else if (j == i + 1) g(i, j) = detail::lift_component(par, comps[i]) + detail::random_integral(par, rng, 1);
            else if (i < j) g(i, j) = detail::random_integral(par, rng, 0);
            else if (i == N - 1 && j == 0)
                g(i, j) = (detail::lift_component(par, comps[N - 1]) + detail::random_integral(par, rng, 1)).shifted(1);
            else g(i, j) = detail::random_integral(par, rng, 1);
        }
    return g;
}

// Cayley transform (I + X)(I - X)^{-1}; lands in SO for X skew with respect to J.
inline PadicMatrix cayley(const SOContext& ctx, const PadicMatrix& X) {
    const PadicMatrix I = PadicMatrix::identity(*ctx.par, ctx.size());
    return (I + X) * (I - X).inv();
}

// Element of I_H+ with the given n+1 components: Cayley transform of a J-skew X whose
// components are half the targets (the transform doubles them mod p).  With a generator,
// the remaining lattice entries of X are random.
inline PadicMatrix so_element(const SOContext& ctx, const std::vector<FqElem>& comps, std::mt19937_64* rng = nullptr) {
    const std::size_t N = ctx.size();
    const std::size_t n = static_cast<std::size_t>(ctx.n);
    if (comps.size() != n + 1) throw DomainError("SO_{2n+1} element needs n+1 components");
    const PadicParams& par = *ctx.par;
    const PadicScalar half = PadicScalar::from_fraction(par, 1, 2);
    PadicMatrix A(par, N, N);
    if (rng) {
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j) A(i, j) = detail::random_integral(par, *rng, i < j ? 0 : 1);
    }
    // entries whose partners under X -> J^{-1} X^T J are the component entries
    for (std::size_t i = 0; i < n; ++i) {
        A(i, i + 1) = detail::lift_component(par, comps[i]);
        A(N - 2 - i, N - 1 - i) = PadicScalar::zero(par);
    }
    A(N - 2, 0) = detail::lift_component(par, comps[n]).shifted(1);
    A(N - 1, 1) = PadicScalar::zero(par);
    const PadicMatrix Jt = ctx.J.transpose();
    const PadicMatrix X = half * (A - Jt * A.transpose() * ctx.J);
    PadicMatrix g = cayley(ctx, X);
    return g;
}

}  // namespace endoscope
