#pragma once

// Gauss sums, generalized Kloosterman sums and the identities they satisfy.

#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "endoscope/checks.hpp"
#include "endoscope/cyclo.hpp"
#include "endoscope/errors.hpp"
#include "endoscope/ffield.hpp"

namespace endoscope {

// (1, ..., 1) of length n.
inline std::vector<int> unit_weights(int n) { return std::vector<int>(static_cast<std::size_t>(n), 1); }

// (1, 2, ..., 2, 1) of length n; (1) for n = 1 and (1, 1) for n = 2.
inline std::vector<int> end_weights(int n) {
    std::vector<int> w(static_cast<std::size_t>(n), 2);
    w.front() = 1;
    w.back() = 1;
    return w;
}

struct KlSpec {
    int n = 1;
    std::vector<int> exps;
    FqElem a;
};

inline void validate(const KlSpec& s) {
    if (s.n < 1) throw DomainError("Kloosterman sum needs n >= 1");
    if (static_cast<int>(s.exps.size()) != s.n) throw DomainError("exponent vector length must equal n");
    for (int b : s.exps)
        if (b < 1) throw DomainError("Kloosterman exponents must be positive");
}

// G(chi, psi) = sum over t != 0 of chi(t) psi(t), in Z[zeta_{lcm(p, q-1)}].
inline CycElem gauss(const FqMulChar& chi, const FqAddChar& psi) {
    const Fq& F = psi.field();
    const std::int64_t n = F.q() - 1;
    const std::int64_t M = std::lcm<std::int64_t>(F.p(), n);
    RootSum acc(M);
    for (std::uint32_t c = 1; c < F.q(); ++c) {
        const FqElem t{c};
        acc.add(chi.exponent(t) * (M / n) + psi.exponent(t) * (M / F.p()));
    }
    return acc.value();
}

// All Kl_a for a in F_q at once (indexed by code) by enumerating F_q^n.
inline std::vector<CycElem> kloosterman_table(int n, const std::vector<int>& exps, const FqAddChar& psi) {
    validate(KlSpec{n, exps, {}});
    const Fq& F = psi.field();
    const std::uint32_t q = F.q();
    std::vector<std::vector<FqElem>> pw(static_cast<std::size_t>(n), std::vector<FqElem>(q));
    for (int i = 0; i < n; ++i)
        for (std::uint32_t x = 0; x < q; ++x) pw[static_cast<std::size_t>(i)][x] = F.pow(FqElem{x}, exps[static_cast<std::size_t>(i)]);
    std::vector<RootSum> buckets(q, RootSum(F.p()));
    std::function<void(int, FqElem, FqElem)> rec = [&](int depth, FqElem sum, FqElem prod) {
        if (depth == n) {
            buckets[prod.code].add(psi.exponent(sum));
            return;
        }
        for (std::uint32_t x = 0; x < q; ++x)
            rec(depth + 1, F.add(sum, FqElem{x}), F.mul(prod, pw[static_cast<std::size_t>(depth)][x]));
    };
    rec(0, F.zero(), F.one());
    std::vector<CycElem> out;
    out.reserve(q);
    for (const auto& b : buckets) out.push_back(b.value());
    return out;
}

// Kl_a by filtering all of F_q^n; the reference computation.
inline CycElem kloosterman_filter(const KlSpec& s, const FqAddChar& psi) {
    validate(s);
    const Fq& F = psi.field();
    RootSum acc(F.p());
    std::vector<FqElem> x(static_cast<std::size_t>(s.n));
    std::function<void(int, FqElem, FqElem)> rec = [&](int depth, FqElem sum, FqElem prod) {
        if (depth == s.n) {
            if (prod == s.a) acc.add(psi.exponent(sum));
            return;
        }
        for (std::uint32_t c = 0; c < F.q(); ++c) {
            const FqElem xi{c};
            rec(depth + 1, F.add(sum, xi), F.mul(prod, F.pow(xi, s.exps[static_cast<std::size_t>(depth)])));
        }
    };
    rec(0, F.zero(), F.one());
    return acc.value();
}

// Kl_a for a != 0: free units x_1..x_{n-1}, then every root of x_n^{b_n} = a / prod.
inline CycElem kloosterman_dlog(const KlSpec& s, const FqAddChar& psi) {
    validate(s);
    if (s.a.code == 0) throw DomainError("the discrete-log strategy needs a != 0");
    const Fq& F = psi.field();
    const std::int64_t order = F.q() - 1;
    const std::int64_t b = s.exps.back();
    const std::int64_t d = std::gcd(b, order);
    const std::int64_t reduced_order = order / d;
    // inverse of b/d modulo order/d
    std::int64_t b_inv = 0;
    for (std::int64_t k = 0; k < reduced_order; ++k)
        if (((b / d) * k) % reduced_order == 1 % reduced_order) {
            b_inv = k;
            break;
        }
    RootSum acc(F.p());
    std::function<void(int, FqElem, FqElem)> rec = [&](int depth, FqElem sum, FqElem prod) {
        if (depth == s.n - 1) {
            const FqElem rhs = F.div(s.a, prod);
            const std::int64_t l = F.dlog(rhs);
            if (l % d != 0) return;
            const std::int64_t t0 = ((l / d) * b_inv) % reduced_order;
            for (std::int64_t k = 0; k < d; ++k) {
                const FqElem xn = F.gen_power(t0 + k * reduced_order);
                acc.add(psi.exponent(F.add(sum, xn)));
            }
            return;
        }
        for (std::uint32_t c = 1; c < F.q(); ++c) {
            const FqElem xi{c};
            rec(depth + 1, F.add(sum, xi), F.mul(prod, F.pow(xi, s.exps[static_cast<std::size_t>(depth)])));
        }
    };
    rec(0, F.zero(), F.one());
    return acc.value();
}

inline CycElem kloosterman(const KlSpec& s, const FqAddChar& psi) {
    return s.a.code == 0 ? kloosterman_filter(s, psi) : kloosterman_dlog(s, psi);
}

// Shorthand for Kl^n_a(psi; exps).
inline CycElem kl(const FqAddChar& psi, FqElem a, const std::vector<int>& exps) {
    return kloosterman(KlSpec{static_cast<int>(exps.size()), exps, a}, psi);
}

struct KlTotals {
    CycElem over_all;    // sum over a in F_q
    CycElem over_units;  // sum over a != 0
};

inline KlTotals kl_sum_over_all(int n, const std::vector<int>& exps, const FqAddChar& psi) {
    const auto table = kloosterman_table(n, exps, psi);
    KlTotals t{CycElem(psi.field().p()), CycElem(psi.field().p())};
    for (std::size_t a = 0; a < table.size(); ++a) {
        t.over_all += table[a];
        if (a != 0) t.over_units += table[a];
    }
    return t;
}

struct MellinResult {
    CycElem direct;         // sum over a != 0 of chi(a) Kl_a
    CycElem gauss_product;  // prod of G(chi^{b_i}, psi)
    bool agree = false;
};

inline MellinResult kl_mellin(const FqMulChar& chi, int n, const std::vector<int>& exps, const FqAddChar& psi,
                              const std::vector<CycElem>* table = nullptr) {
    std::vector<CycElem> local;
    if (!table) {
        local = kloosterman_table(n, exps, psi);
        table = &local;
    }
    const Fq& F = psi.field();
    MellinResult r{CycElem(1), CycElem::from_int(1), false};
    for (std::uint32_t a = 1; a < F.q(); ++a) r.direct += chi(FqElem{a}) * (*table)[a];
    for (int b : exps) r.gauss_product = r.gauss_product * gauss(chi.power(b), psi);
    r.agree = (r.direct == r.gauss_product);
    return r;
}

// Two units a, a' with Kl_a != Kl_{a'}.
inline std::pair<FqElem, FqElem> verify_nonconstancy(int n, const std::vector<int>& exps, const FqAddChar& psi) {
    const auto table = kloosterman_table(n, exps, psi);
    for (std::uint32_t a = 2; a < psi.field().q(); ++a)
        if (table[a] != table[1]) return {FqElem{1}, FqElem{a}};
    throw VerificationError("Kloosterman sum is constant on units");
}

struct FourierResult {
    bool holds = false;            // Kl_{ta} = c Kl_{tb} for every t
    std::optional<CycElem> c;      // constant forced by summing over t
    std::optional<FqElem> witness; // t breaking the relation
};

// Tests proportionality of t -> Kl_{ta} and t -> Kl_{tb}.  Summing the relation over
// units gives (-1)^n = c (-1)^n, so the only possible constant is the ratio of the sums.
inline FourierResult verify_fourier_uniqueness(FqElem a, FqElem b, int n, const std::vector<int>& exps,
                                               const FqAddChar& psi) {
    if (a.code == 0 || b.code == 0) throw DomainError("Fourier uniqueness needs a, b != 0");
    const Fq& F = psi.field();
    const auto table = kloosterman_table(n, exps, psi);
    CycElem sa(F.p()), sb(F.p());
    for (std::uint32_t t = 1; t < F.q(); ++t) {
        sa += table[F.mul(FqElem{t}, a).code];
        sb += table[F.mul(FqElem{t}, b).code];
    }
    const CycElem sign = CycElem::from_int((n % 2 == 0) ? 1 : -1);
    if (sa != sign || sb != sign) throw VerificationError("unit sum of Kloosterman sums is not (-1)^n");
    // sb = +-1 is its own inverse
    const CycElem c = sa * sb;
    FourierResult r;
    for (std::uint32_t t = 1; t < F.q(); ++t) {
        const FqElem tt{t};
        if (table[F.mul(tt, a).code] != c * table[F.mul(tt, b).code]) {
            r.witness = tt;
            return r;
        }
    }
    r.holds = true;
    r.c = c;
    return r;
}

// The full identity suite for one field and all n <= max_n, both weight families.
inline std::vector<IdentityCheck> verify_appendix(const FqAddChar& psi, int max_n) {
    const Fq& F = psi.field();
    const std::string tag = "q=" + std::to_string(F.q());
    std::vector<IdentityCheck> out;
    const CycElem minus_one = CycElem::from_int(-1);
    out.push_back(compare_values(tag + " gauss(trivial) = -1", gauss(FqMulChar(F, 0), psi), minus_one));
    bool norms = true;
    for (std::int64_t j = 1; j < F.q() - 1; ++j) {
        const CycElem g = gauss(FqMulChar(F, j), psi);
        if (g * g.conj() != CycElem::from_int(F.q())) norms = false;
    }
    out.push_back(boolean_check(tag + " gauss * conj(gauss) = q for every nontrivial chi", norms));
    for (int n = 1; n <= max_n; ++n) {
        for (int family = 0; family < 2; ++family) {
            const auto exps = family == 0 ? unit_weights(n) : end_weights(n);
            std::string label = tag + " n=" + std::to_string(n) + " exps=(";
            for (std::size_t i = 0; i < exps.size(); ++i) label += (i ? "," : "") + std::to_string(exps[i]);
            label += ")";
            const auto table = kloosterman_table(n, exps, psi);
            const CycElem sign = CycElem::from_int(n % 2 == 1 ? 1 : -1);
            out.push_back(compare_values(label + " Kl_0 = (-1)^(n-1)", table[0], sign));
            CycElem total(F.p());
            for (const auto& v : table) total += v;
            out.push_back(compare_values(label + " sum_a Kl_a = 0", total, CycElem(1)));
            bool strategies = true;
            for (std::uint32_t a = 1; a < F.q(); ++a)
                if (kloosterman_dlog(KlSpec{n, exps, FqElem{a}}, psi) != table[a]) strategies = false;
            out.push_back(boolean_check(label + " filter and dlog strategies agree", strategies));
            bool mellin = true;
            for (std::int64_t j = 0; j < F.q() - 1; ++j)
                if (!kl_mellin(FqMulChar(F, j), n, exps, psi, &table).agree) mellin = false;
            out.push_back(boolean_check(label + " Mellin transform = product of Gauss sums for every chi", mellin));
        }
    }
    return out;
}

}  // namespace endoscope
