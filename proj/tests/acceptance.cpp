// One pass/fail line per acceptance criterion; exits nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "endoscope/endoscope.hpp"

using namespace endoscope;

namespace {

struct Outcome {
    bool pass = true;
    long checks = 0;
    std::string first_failure;

    void expect(bool ok, const std::string& what) {
        ++checks;
        if (!ok && pass) {
            pass = false;
            first_failure = what;
        }
    }
    void expect_all(const std::vector<IdentityCheck>& cs, const std::string& ctx) {
        for (const auto& c : cs) expect(c.pass, ctx + ": " + c.name + " " + c.note);
    }
};

std::string str(int p, int n) { return "p=" + std::to_string(p) + " n=" + std::to_string(n); }

FqElem random_unit(const Fq& F, std::mt19937_64& rng) {
    return FqElem{std::uniform_int_distribution<std::uint32_t>(1, F.q() - 1)(rng)};
}
FqElem random_elem(const Fq& F, std::mt19937_64& rng) {
    return FqElem{std::uniform_int_distribution<std::uint32_t>(0, F.q() - 1)(rng)};
}
std::vector<FqElem> random_vec(const Fq& F, std::size_t k, bool units, std::mt19937_64& rng) {
    std::vector<FqElem> v;
    for (std::size_t i = 0; i < k; ++i) v.push_back(units ? random_unit(F, rng) : random_elem(F, rng));
    return v;
}
int random_sign(std::mt19937_64& rng) { return rng() % 2 ? 1 : -1; }

Outcome appendix_suite() {
    Outcome o;
    for (auto [p, f] : std::vector<std::pair<int, int>>{{3, 1}, {5, 1}, {7, 1}, {3, 2}}) {
        const Fq F(p, f);
        o.expect_all(verify_appendix(FqAddChar(F), 4), "q=" + std::to_string(F.q()));
    }
    return o;
}

// Draws until `tries` inputs satisfy the genericity precondition, comparing closed and brute.
template <class Eval>
void oracle_family(Outcome& o, const std::string& ctx, int wanted, Eval eval) {
    int done = 0;
    for (int attempt = 0; done < wanted && attempt < 50 * wanted; ++attempt) {
        std::optional<std::pair<CycElem, CycElem>> v;
        try {
            v = eval();
        } catch (const DomainError&) {
            continue;
        }
        o.expect(v->first == v->second, ctx + ": closed " + v->first.to_string() + " brute " + v->second.to_string());
        ++done;
    }
    o.expect(done == wanted, ctx + ": too few generic inputs");
}

Outcome oracle_equivalence() {
    Outcome o;
    std::mt19937_64 rng(20240501);
    constexpr int kPerFamily = 20;
    for (int p : {3, 5, 7})
        for (int n : {1, 2, 3}) {
            const GLContext gl(2 * n, p);
            const SOContext so(n, p);
            const Fq& F = gl.field;
            const FqAddChar psi(F);
            const std::string ctx = str(p, n);
            const auto both = [](auto fn) { return std::pair{fn(CharMode::closed), fn(CharMode::brute)}; };
            oracle_family(o, ctx + " char_gl", kPerFamily, [&] {
                const PadicMatrix g = gl_random_iplus(gl, rng, random_vec(F, gl.size(), true, rng));
                const GLSscParam param{random_unit(F, rng), 2 * n, static_cast<std::int64_t>(rng() % (2 * n))};
                return both([&](CharMode m) { return char_gl(gl, psi, param, g, m); });
            });
            oracle_family(o, ctx + " tchar_gl", kPerFamily, [&] {
                const PadicMatrix g = gl_random_iplus(gl, rng, random_vec(F, gl.size(), false, rng));
                const auto param = GLSscParam::with_sign(random_unit(F, rng), random_sign(rng));
                return both([&](CharMode m) { return tchar_gl(gl, psi, param, g, m); });
            });
            oracle_family(o, ctx + " tchar_gl_phiu", kPerFamily, [&] {
                const PadicMatrix g = gl_random_iplus(gl, rng, random_vec(F, gl.size(), false, rng));
                const auto param = GLSscParam::with_sign(random_unit(F, rng), random_sign(rng));
                const FqElem u = random_unit(F, rng);
                return both([&](CharMode m) { return tchar_gl_phiu(gl, psi, param, u, g, m); });
            });
            oracle_family(o, ctx + " char_so", kPerFamily, [&] {
                const PadicMatrix h = so_element(so, random_vec(F, so.n + 1u, true, rng), &rng);
                const SOSscParam param{random_unit(F, rng), random_sign(rng)};
                return both([&](CharMode m) { return char_so(so, psi, param, h, m); });
            });
            oracle_family(o, ctx + " char_so_phiprime", kPerFamily, [&] {
                const PadicMatrix h = so_element(so, random_vec(F, so.n + 1u, false, rng), &rng);
                const SOSscParam param{random_unit(F, rng), random_sign(rng)};
                const FqElem u = random_unit(F, rng);
                return both([&](CharMode m) { return char_so_phiprime(so, psi, param, u, h, m); });
            });
        }
    return o;
}

Outcome matrix_identities() {
    Outcome o;
    for (int p : {3, 5, 7})
        for (int n : {2, 3}) {
            const EndoscopyContext ec(n, p, 8);
            const PadicParams& par = ec.par();
            const int digits = ec.identity_digits();
            const std::size_t N = ec.gl.size();
            for (std::uint32_t c = 1; c < static_cast<std::uint32_t>(p); ++c) {
                const FqElem u{c};
                const std::string ctx = str(p, n) + " u=" + std::to_string(c);
                const PadicMatrix f = phi(ec.gl, u);
                const PadicMatrix scalar = (PadicScalar::uniformizer_power(par, 1) * teich(par, u)) *
                                           PadicMatrix::identity(par, N);
                o.expect(matrices_agree(f.pow(static_cast<int>(N)), scalar, digits), ctx + ": phi^N = p u I");
                o.expect(matrices_agree(theta(ec.gl, f), -f.inv(), digits), ctx + ": theta(phi) = -phi^-1");
                const PadicMatrix fp = phi_prime(ec.so, u);
                o.expect(matrices_agree(fp * fp, PadicMatrix::identity(par, ec.so.size()), digits), ctx + ": phi'^2 = I");
                o.expect_all(build_pair_unramified(ec, u).checks, ctx);
                o.expect_all(build_pair_ramified(ec, u).checks, ctx);
            }
        }
    return o;
}

Outcome character_relation() {
    Outcome o;
    for (int p : {3, 5, 7})
        for (int n : {2, 3}) {
            const EndoscopyContext ec(n, p);
            const Fq& F = ec.field();
            const std::string ctx = str(p, n);
            for (int zeta : {1, -1}) {
                for (std::uint32_t c = 1; c < static_cast<std::uint32_t>(p); ++c) {
                    o.expect_all(verify_ecr_unramified(ec, zeta, FqElem{c}), ctx);
                    o.expect_all(verify_ecr_ramified(ec, zeta, FqElem{c}), ctx);
                }
                const BcFit fit = fit_bc(ec, zeta);
                o.expect(fit.solutions.size() == 1, ctx + ": fit is not unique");
                if (fit.solutions.size() == 1) {
                    o.expect(fit.solutions[0].first == half(F), ctx + ": fitted b is not 1/2");
                    o.expect(fit.solutions[0].second == CycElem::from_int(1), ctx + ": fitted c is not 1");
                }
                o.expect(xi_flip_witness(ec, zeta).has_value(), ctx + ": flipping xi never breaks the relation");
            }
            o.expect(unit_sum_check(ec).pass, ctx + ": unit sum of Kl^n");
        }
    return o;
}

Outcome partial_diagonalization() {
    Outcome o;
    std::mt19937_64 rng(77);
    for (int p : {3, 5})
        for (int n : {2, 3}) {
            const EndoscopyContext ec(n, p);
            const Fq& F = ec.field();
            for (int rep = 0; rep < 50; ++rep) {
                const auto comps = random_vec(F, n + 1u, true, rng);
                const auto pd = partial_diagonalize(ec, so_element(ec.so, comps, &rng));
                o.expect(pd.components == expected_partial_components(F, comps), str(p, n) + ": components");
            }
        }
    return o;
}

Outcome property_suites() {
    Outcome o;
    std::mt19937_64 rng(11);
    // ring axioms in Z[zeta_m]
    for (std::int64_t m : {5, 7, 12, 15}) {
        std::uniform_int_distribution<int> d(-4, 4);
        auto rnd = [&] {
            CycElem x(m);
            for (std::int64_t k = 0; k < m; ++k) x += CycElem::from_int(d(rng)) * CycElem::root_of_unity(m, k);
            return x;
        };
        for (int rep = 0; rep < 20; ++rep) {
            const CycElem a = rnd(), b = rnd(), c = rnd();
            o.expect((a * b) * c == a * (b * c), "associativity");
            o.expect(a * (b + c) == a * b + a * c, "distributivity");
            o.expect(a * b == b * a && a + b == b + a, "commutativity");
            o.expect((a * b).conj() == a.conj() * b.conj(), "conjugation is multiplicative");
        }
    }
    for (auto [p, f] : std::vector<std::pair<int, int>>{{3, 1}, {5, 1}, {7, 1}, {3, 2}}) {
        const Fq F(p, f);
        const FqAddChar psi(F);
        const std::string ctx = "q=" + std::to_string(F.q());
        // characters are homomorphisms
        for (std::int64_t j = 0; j < F.q() - 1; ++j) {
            const FqMulChar chi(F, j);
            for (std::uint32_t x = 1; x < F.q(); ++x)
                for (std::uint32_t y = 1; y < F.q(); ++y)
                    o.expect(chi(F.mul(FqElem{x}, FqElem{y})) == chi(FqElem{x}) * chi(FqElem{y}), ctx + ": chi(xy)");
        }
        for (std::uint32_t x = 0; x < F.q(); ++x)
            for (std::uint32_t y = 0; y < F.q(); ++y)
                o.expect(psi(F.add(FqElem{x}, FqElem{y})) == psi(FqElem{x}) * psi(FqElem{y}), ctx + ": psi(x+y)");
        for (int n = 1; n <= 4; ++n)
            for (const auto& exps : {unit_weights(n), end_weights(n)}) {
                int total = 0;
                for (int e : exps) total += e;
                const auto table = kloosterman_table(n, exps, psi);
                for (std::uint32_t a = 0; a < F.q(); ++a) {
                    const FqElem flipped = total % 2 ? F.neg(FqElem{a}) : FqElem{a};
                    o.expect(table[a].conj() == table[flipped.code], ctx + ": conj(Kl_a)");
                }
                if (n > 1 || exps == unit_weights(n)) {
                    const auto [a0, a1] = verify_nonconstancy(n, exps, psi);
                    o.expect(table[a0.code] != table[a1.code], ctx + ": nonconstancy witness");
                }
            }
        // only a = b makes t -> Kl_{ta} and t -> Kl_{tb} proportional
        for (int n = 1; n <= 3; ++n)
            for (std::uint32_t a = 1; a < F.q(); ++a)
                for (std::uint32_t b = 1; b < F.q(); ++b) {
                    const FourierResult r = verify_fourier_uniqueness(FqElem{a}, FqElem{b}, n, unit_weights(n), psi);
                    o.expect(r.holds == (a == b), ctx + ": Fourier uniqueness");
                    if (a == b) o.expect(r.c && *r.c == CycElem::from_int(1), ctx + ": Fourier constant");
                }
    }
    // Teichmuller lifts are multiplicative
    for (int p : {3, 5, 7}) {
        const PadicParams& par = PadicParams::get(p, 8, 2);
        for (std::uint32_t a = 1; a < static_cast<std::uint32_t>(p); ++a)
            for (std::uint32_t b = 1; b < static_cast<std::uint32_t>(p); ++b) {
                const Fq F(p);
                o.expect((teich(par, FqElem{a}) * teich(par, FqElem{b})).agrees_with(teich(par, F.mul(FqElem{a}, FqElem{b}))),
                         "teichmuller multiplicativity p=" + std::to_string(p));
            }
    }
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"exponential sum identities, q in {3,5,7,9}, n <= 4", appendix_suite},
        {"closed forms equal brute sums for all five characters", oracle_equivalence},
        {"matrix identities at precision 8, p in {3,5,7}, n in {2,3}", matrix_identities},
        {"character relation with b = 1/2, c = 1, unique fit, xi pinned", character_relation},
        {"partial diagonalization components, 50 random h per (p, n)", partial_diagonalization},
        {"module property suites", property_suites},
    };
    bool all = true;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.pass = false;
            o.first_failure = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::ostringstream line;
        line << "criterion " << i + 1 << ": " << (o.pass ? "PASS" : "FAIL") << "  " << criteria[i].first << "  ("
             << o.checks << " checks, ";
        line.precision(2);
        line << std::fixed << secs << " s)";
        if (!o.pass) line << "  first failure: " << o.first_failure;
        std::cout << line.str() << std::endl;
        all = all && o.pass;
    }
    return all ? 0 : 1;
}
