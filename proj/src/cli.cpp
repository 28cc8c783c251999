#include "endoscope/cli.hpp"

#include <functional>
#include <future>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "endoscope/endoscope.hpp"
#include "endoscope/serialize.hpp"

namespace endoscope::cli {
namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Common {
    int p = 5;
    int f = 1;
    int K = 8;
    int E = 2;
    int psi_shift = 1;
};

void add_field_flags(CLI::App* cmd, Common& c) {
    cmd->add_option("--p", c.p, "residue characteristic (odd prime)");
    cmd->add_option("--f", c.f, "residue degree");
    cmd->add_option("--psi-shift", c.psi_shift, "additive character x -> psi(c x)");
}

void add_padic_flags(CLI::App* cmd, Common& c) {
    cmd->add_option("--precision", c.K, "p-adic digits K")->envname("ENDOSCOPE_PRECISION");
    cmd->add_option("--shift", c.E, "guard digits E below valuation 0");
}

void require_group_config(const Common& c) {
    if (c.f != 1) throw UsageError("group commands run over the prime field only (--f 1)");
    if (c.K < 6) throw UsageError("--precision must be at least 6");
    if (c.E < 1) throw UsageError("--shift must be at least 1");
}

std::vector<int> parse_ints(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stoi(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw UsageError("not an integer list: " + s);
        }
    }
    if (out.empty()) throw UsageError("empty integer list");
    return out;
}

FqElem parse_elem(const Fq& F, const std::string& s) { return F.from_coeffs(parse_ints(s)); }

FqElem parse_unit(const Fq& F, const std::string& s, const char* what) {
    const FqElem x = parse_elem(F, s);
    if (x.code == 0) throw UsageError(std::string(what) + " must be nonzero");
    return x;
}

int parse_sign(const std::string& s, const char* what) {
    if (s == "1" || s == "+1") return 1;
    if (s == "-1") return -1;
    throw UsageError(std::string(what) + " must be +1 or -1");
}

std::vector<int> parse_signs(const std::string& s, const char* what) {
    if (s == "both") return {1, -1};
    return {parse_sign(s, what)};
}

// "all" or a single unit.
std::vector<FqElem> parse_units(const Fq& F, const std::string& s) {
    if (s == "all") {
        std::vector<FqElem> out;
        for (std::uint32_t c = 1; c < F.q(); ++c) out.push_back(FqElem{c});
        return out;
    }
    return {parse_unit(F, s, "u")};
}

Json metadata(const Fq& F, const Common& c, bool padic) {
    Json m{{"p", F.p()},
           {"f", F.f()},
           {"q", F.q()},
           {"modulus", F.modulus()},
           {"generator", to_json(F, F.generator())},
           {"psi_shift", c.psi_shift}};
    if (padic) {
        m["precision"] = c.K;
        m["shift"] = c.E;
        m["twisted_normalization"] = "A = id";
    }
    return m;
}

struct Output {
    Json body = Json::object();
    std::vector<IdentityCheck> items;
    std::string csv;  // replaces JSON when set
};

int emit(const std::vector<std::string>& args, const Json& meta, const Output& o, std::ostream& out) {
    const bool pass = all_pass(o.items);
    if (!o.csv.empty()) {
        out << o.csv;
        return pass ? kPass : kVerificationFailure;
    }
    Json rep;
    rep["command"] = args;
    rep["metadata"] = meta;
    for (auto it = o.body.begin(); it != o.body.end(); ++it) rep[it.key()] = it.value();
    Json items = Json::array();
    for (const auto& c : o.items) items.push_back(to_json(c));
    rep["items"] = items;
    rep["pass"] = pass;
    out << rep.dump(2) << "\n";
    return pass ? kPass : kVerificationFailure;
}

std::string prefixed(const std::string& prefix, const std::string& name) { return prefix + name; }

void append(std::vector<IdentityCheck>& dst, std::vector<IdentityCheck> src, const std::string& prefix) {
    for (auto& c : src) {
        c.name = prefixed(prefix, c.name);
        dst.push_back(std::move(c));
    }
}

// ---- expsum ----

struct ExpsumFlags {
    Common c;
    std::int64_t chi = 1;
    int n = 1;
    std::string exps;
    std::string a = "1";
    int max_n = 4;
};

Output expsum_gauss(const ExpsumFlags& fl, const Fq& F) {
    const FqAddChar psi(F, F.from_int(fl.c.psi_shift));
    const FqMulChar chi(F, fl.chi);
    const CycElem g = gauss(chi, psi);
    Output o;
    o.body["result"] = Json{{"chi_index", chi.index()}, {"value", to_json(g)}};
    if (chi.is_trivial())
        o.items.push_back(compare_values("gauss sum of the trivial character is -1", g, CycElem::from_int(-1)));
    else
        o.items.push_back(compare_values("gauss * conj(gauss) = q", g * g.conj(), CycElem::from_int(F.q())));
    return o;
}

Output expsum_kloosterman(const ExpsumFlags& fl, const Fq& F) {
    const FqAddChar psi(F, F.from_int(fl.c.psi_shift));
    const std::vector<int> exps = fl.exps.empty() ? unit_weights(fl.n) : parse_ints(fl.exps);
    const KlSpec spec{static_cast<int>(exps.size()), exps, parse_elem(F, fl.a)};
    validate(spec);
    const CycElem v = kloosterman_filter(spec, psi);
    Output o;
    o.body["result"] = Json{{"n", spec.n}, {"exps", exps}, {"a", to_json(F, spec.a)}, {"value", to_json(v)}};
    if (spec.a.code != 0) o.items.push_back(compare_values("filter and dlog strategies agree", v, kloosterman_dlog(spec, psi)));
    else o.items.push_back(compare_values("Kl_0 = (-1)^(n-1)", v, CycElem::from_int(spec.n % 2 ? 1 : -1)));
    return o;
}

Output expsum_appendix(const ExpsumFlags& fl, const Fq& F) {
    if (fl.max_n < 1) throw UsageError("--max-n must be positive");
    const FqAddChar psi(F, F.from_int(fl.c.psi_shift));
    Output o;
    o.items = verify_appendix(psi, fl.max_n);
    o.body["result"] = Json{{"max_n", fl.max_n}, {"checks", o.items.size()}};
    return o;
}

// ---- char ----

struct CharFlags {
    Common c;
    int n = 2;
    std::string a = "1", b = "1", zeta = "1", xi = "1";
    std::string components, u, element = "components";
    std::string mode = "closed", format = "json";
};

struct CharJob {
    std::function<CycElem(CharMode, FqElem)> eval;  // value at twist parameter u
    bool needs_u = false;
};

CharJob make_char_job(const std::string& kind, const CharFlags& fl, const Fq& F) {
    const FqAddChar psi(F, F.from_int(fl.c.psi_shift));
    const bool by_components = fl.element == "components";
    if (!by_components && fl.element != "one-plus-phi" && fl.element != "norm-prime")
        throw UsageError("--element must be components, one-plus-phi or norm-prime");
    if (by_components && fl.components.empty()) throw UsageError("--components is required");
    const auto comps = [&] {
        std::vector<FqElem> out;
        if (by_components)
            for (int x : parse_ints(fl.components)) out.push_back(F.from_int(x));
        return out;
    }();
    const bool gl_family = kind == "gl" || kind == "tgl" || kind == "tgl-phiu";
    if (!by_components && gl_family && fl.element != "one-plus-phi")
        throw UsageError("GL characters take --element one-plus-phi");
    if (!by_components && !gl_family && fl.element != "norm-prime")
        throw UsageError("SO characters take --element norm-prime");

    CharJob job;
    job.needs_u = !by_components || kind == "tgl-phiu" || kind == "so-phiprime";
    if (gl_family) {
        const int N = kind == "gl" ? fl.n : 2 * fl.n;
        auto ctx = std::make_shared<GLContext>(N, fl.c.p, fl.c.K, fl.c.E);
        const FqElem a = parse_unit(F, fl.a, "a");
        const GLSscParam param = GLSscParam::with_sign(a, parse_sign(fl.zeta, "zeta"));
        if (by_components && comps.size() != ctx->size()) throw UsageError("expected " + std::to_string(N) + " components");
        const auto element = [ctx, comps, by_components](FqElem u) {
            if (by_components) return gl_representative(*ctx, comps);
            return PadicMatrix::identity(*ctx->par, ctx->size()) + phi(*ctx, u);
        };
        if (kind == "gl")
            job.eval = [=](CharMode m, FqElem u) { return char_gl(*ctx, psi, param, element(u), m); };
        else if (kind == "tgl")
            job.eval = [=](CharMode m, FqElem u) { return tchar_gl(*ctx, psi, param, element(u), m); };
        else
            job.eval = [=](CharMode m, FqElem u) { return tchar_gl_phiu(*ctx, psi, param, u, element(u), m); };
    } else {
        auto ec = std::make_shared<EndoscopyContext>(fl.n, fl.c.p, fl.c.K, fl.c.E, fl.c.psi_shift);
        const SOSscParam param{parse_unit(F, fl.b, "b"), parse_sign(fl.xi, "xi")};
        if (by_components && comps.size() != ec->so.n + 1u)
            throw UsageError("expected " + std::to_string(fl.n + 1) + " components");
        const auto element = [ec, comps, by_components](FqElem u) {
            if (by_components) return so_element(ec->so, comps);
            return norm_prime_one_plus_phi(*ec, u);
        };
        if (kind == "so")
            job.eval = [=](CharMode m, FqElem u) { return char_so(ec->so, psi, param, element(u), m); };
        else
            job.eval = [=](CharMode m, FqElem u) { return char_so_phiprime(ec->so, psi, param, u, element(u), m); };
    }
    return job;
}

Output run_char(const std::string& kind, const CharFlags& fl, const Fq& F) {
    require_group_config(fl.c);
    if (fl.n < 1) throw UsageError("--n must be positive");
    std::vector<CharMode> modes;
    if (fl.mode == "closed" || fl.mode == "both") modes.push_back(CharMode::closed);
    if (fl.mode == "brute" || fl.mode == "both") modes.push_back(CharMode::brute);
    if (modes.empty()) throw UsageError("--mode must be closed, brute or both");
    if (fl.format != "json" && fl.format != "csv") throw UsageError("--format must be json or csv");

    const CharJob job = make_char_job(kind, fl, F);
    if (job.needs_u && fl.u.empty()) throw UsageError("--u is required");
    const std::vector<FqElem> us = job.needs_u ? parse_units(F, fl.u) : std::vector<FqElem>{F.one()};
    if (fl.format == "csv" && (!job.needs_u || fl.u != "all"))
        throw UsageError("CSV output is for character tables over --u all");

    Output o;
    Json rows = Json::array();
    std::ostringstream csv;
    csv << "u,mode,m,coeffs,re,im\n";
    for (FqElem u : us) {
        std::vector<CycElem> vals;
        Json row;
        if (job.needs_u) row["u"] = to_json(F, u);
        for (CharMode m : modes) {
            vals.push_back(job.eval(m, u));
            const char* name = m == CharMode::closed ? "closed" : "brute";
            const Json v = to_json(vals.back());
            row[name] = v;
            csv << F.to_string(u) << "," << name << "," << v["m"] << ",";
            for (std::size_t i = 0; i < v["coeffs"].size(); ++i) csv << (i ? ";" : "") << v["coeffs"][i];
            csv << "," << v["re"] << "," << v["im"] << "\n";
        }
        if (vals.size() == 2) {
            const std::string tag = job.needs_u ? "u=" + F.to_string(u) + ": " : "";
            o.items.push_back(compare_values(tag + "closed = brute", vals[0], vals[1]));
        }
        rows.push_back(std::move(row));
    }
    o.body["result"] = Json{{"character", kind}, {"values", rows}};
    if (fl.format == "csv") o.csv = csv.str();
    return o;
}

// ---- endoscopy ----

struct EndoFlags {
    Common c;
    std::string ps, ns;  // comma lists for the verification grid
    int n = 2;
    std::string u = "all", zeta = "both", b = "1", xi = "1", kind = "unramified", components;
    std::string so_b;  // SO-side b for verify; empty means 1/2
};

std::vector<IdentityCheck> verify_one_u(const EndoscopyContext& ec, FqElem u, const std::vector<int>& zetas,
                                        std::optional<FqElem> b) {
    const Fq& F = ec.field();
    std::vector<IdentityCheck> out;
    const std::string tag = "u=" + F.to_string(u) + ": ";
    append(out, build_pair_unramified(ec, u).checks, tag);
    append(out, build_pair_ramified(ec, u).checks, tag);
    for (int z : zetas) {
        append(out, verify_ecr_unramified(ec, z, u, b), "");
        append(out, verify_ecr_ramified(ec, z, u, b), "");
    }
    return out;
}

Output endoscopy_verify(const EndoFlags& fl) {
    const std::vector<int> ps = fl.ps.empty() ? std::vector<int>{fl.c.p} : parse_ints(fl.ps);
    const std::vector<int> ns = fl.ns.empty() ? std::vector<int>{fl.n} : parse_ints(fl.ns);
    const std::vector<int> zetas = parse_signs(fl.zeta, "zeta");
    Output o;
    Json grid = Json::array();
    for (int p : ps) {
        for (int n : ns) {
            if (n < 1) throw UsageError("--n must be positive");
            const EndoscopyContext ec(n, p, fl.c.K, fl.c.E, fl.c.psi_shift);
            const std::vector<FqElem> us = parse_units(ec.field(), fl.u);
            std::optional<FqElem> b;
            if (!fl.so_b.empty()) b = parse_unit(ec.field(), fl.so_b, "b");
            std::vector<std::future<std::vector<IdentityCheck>>> jobs;
            for (FqElem u : us)
                jobs.push_back(
                    std::async(std::launch::async, [&ec, u, &zetas, b] { return verify_one_u(ec, u, zetas, b); }));
            const std::string tag = "p=" + std::to_string(p) + " n=" + std::to_string(n) + " ";
            std::vector<IdentityCheck> items;
            for (auto& j : jobs) append(items, j.get(), "");
            items.push_back(unit_sum_check(ec));
            for (int z : zetas) {
                const auto w = xi_flip_witness(ec, z);
                items.push_back(boolean_check("zeta=" + std::to_string(z) + ": xi = -zeta breaks the ramified relation", w.has_value(),
                                              w ? "witness u=" + ec.field().to_string(*w) : "no witness"));
            }
            grid.push_back(Json{{"p", p}, {"n", n}, {"units", us.size()}, {"pass", all_pass(items)}});
            append(o.items, std::move(items), tag);
        }
    }
    o.body["result"] = Json{{"b", fl.so_b.empty() ? Json("1/2") : Json(fl.so_b)}, {"c", 1}, {"grid", grid}};
    return o;
}

Output endoscopy_fit(const EndoFlags& fl) {
    const EndoscopyContext ec(fl.n, fl.c.p, fl.c.K, fl.c.E, fl.c.psi_shift);
    const Fq& F = ec.field();
    Output o;
    Json fits = Json::array();
    for (int z : parse_signs(fl.zeta, "zeta")) {
        const BcFit fit = fit_bc(ec, z);
        Json sols = Json::array();
        for (const auto& [b, c] : fit.solutions) sols.push_back(Json{{"b", to_json(F, b)}, {"c", to_json(c)}});
        Json entry{{"zeta", z}, {"solutions", sols}};
        const std::string tag = "zeta=" + std::to_string(z) + ": ";
        o.items.push_back(boolean_check(tag + "exactly one (b, c) fits", fit.solutions.size() == 1,
                                        std::to_string(fit.solutions.size()) + " solutions"));
        if (fit.solutions.size() == 1) {
            entry["b"] = to_json(F, fit.solutions[0].first);
            entry["c"] = to_json(fit.solutions[0].second);
            o.items.push_back(boolean_check(tag + "b = 1/2", fit.solutions[0].first == half(F)));
            o.items.push_back(compare_values(tag + "c = 1", fit.solutions[0].second, CycElem::from_int(1)));
        }
        fits.push_back(std::move(entry));
    }
    o.body["result"] = Json{{"fits", fits}};
    return o;
}

Output endoscopy_lift(const EndoFlags& fl, const Fq& F) {
    const GLSscParam g = lifting(F, parse_unit(F, fl.b, "b"), parse_sign(fl.xi, "xi"));
    Output o;
    o.body["a"] = to_json(F, g.a);
    o.body["zeta"] = g.sign();
    return o;
}

Output endoscopy_norm_pair(const EndoFlags& fl) {
    const EndoscopyContext ec(fl.n, fl.c.p, fl.c.K, fl.c.E, fl.c.psi_shift);
    const Fq& F = ec.field();
    const FqElem u = parse_unit(F, fl.u, "u");
    NormPair np = [&] {
        if (fl.kind == "unramified") return build_pair_unramified(ec, u);
        if (fl.kind == "ramified") return build_pair_ramified(ec, u);
        throw UsageError("--kind must be unramified or ramified");
    }();
    Output o;
    o.items = np.checks;
    o.body["result"] = Json{{"kind", fl.kind}, {"u", to_json(F, u)}, {"g", to_json(np.g)}, {"h", to_json(np.h)}};
    return o;
}

Output endoscopy_partial(const EndoFlags& fl) {
    const EndoscopyContext ec(fl.n, fl.c.p, fl.c.K, fl.c.E, fl.c.psi_shift);
    const Fq& F = ec.field();
    PadicMatrix h;
    if (!fl.components.empty()) {
        std::vector<FqElem> comps;
        for (int x : parse_ints(fl.components)) comps.push_back(F.from_int(x));
        if (comps.size() != ec.so.n + 1u) throw UsageError("expected " + std::to_string(fl.n + 1) + " components");
        h = so_element(ec.so, comps);
    } else {
        h = norm_prime_one_plus_phi(ec, parse_unit(F, fl.u, "u"));
    }
    const PartialDiagonalization pd = partial_diagonalize(ec, h);
    const auto expected = expected_partial_components(F, affine_components(ec.so, h));
    Output o;
    o.items.push_back(boolean_check("reduced block has components (h_2..h_n, h_n..h_1, 2h_{2n})", pd.components == expected));
    o.items.push_back(boolean_check("top-left entry of the conjugate is 1",
                                    pd.conjugated(0, 0).agrees_with(PadicScalar::one(ec.par()))));
    o.body["result"] = Json{{"h_components", to_json(F, affine_components(ec.so, h))},
                            {"components", to_json(F, pd.components)},
                            {"expected", to_json(F, expected)},
                            {"conjugator", to_json(pd.conjugator)},
                            {"reduced", to_json(pd.reduced)}};
    return o;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"exact verification of characters of simple supercuspidals and their endoscopic relation", "endoscope"};
    app.require_subcommand(1);

    ExpsumFlags ex;
    CharFlags ch;
    EndoFlags en;
    std::function<Output()> action;
    std::function<Json()> meta;

    auto* expsum = app.add_subcommand("expsum", "Gauss and Kloosterman sums")->require_subcommand(1);
    const auto field_meta = [](const Common& c, bool padic) {
        return [&c, padic] { return metadata(Fq(c.p, c.f), c, padic); };
    };
    {
        auto* cmd = expsum->add_subcommand("gauss", "Gauss sum G(chi, psi)");
        add_field_flags(cmd, ex.c);
        cmd->add_option("--chi,--chi-index", ex.chi, "multiplicative character index j: chi(g^t) = zeta^{jt}");
        cmd->callback([&] {
            meta = field_meta(ex.c, false);
            action = [&] { return expsum_gauss(ex, Fq(ex.c.p, ex.c.f)); };
        });
    }
    {
        auto* cmd = expsum->add_subcommand("kloosterman", "generalized Kloosterman sum");
        add_field_flags(cmd, ex.c);
        cmd->add_option("--n", ex.n, "number of variables");
        cmd->add_option("--exps", ex.exps, "comma-separated exponents (default all 1)");
        cmd->add_option("--a", ex.a, "index a as coefficients c0,c1,...");
        cmd->callback([&] {
            meta = field_meta(ex.c, false);
            action = [&] { return expsum_kloosterman(ex, Fq(ex.c.p, ex.c.f)); };
        });
    }
    const auto appendix = [&](CLI::App* cmd) {
        add_field_flags(cmd, ex.c);
        cmd->add_option("--max-n", ex.max_n, "largest number of variables");
        cmd->callback([&] {
            meta = field_meta(ex.c, false);
            action = [&] { return expsum_appendix(ex, Fq(ex.c.p, ex.c.f)); };
        });
    };
    appendix(expsum->add_subcommand("verify-appendix", "Gauss/Kloosterman identity suite"));
    auto* verify = app.add_subcommand("verify", "verification suites")->require_subcommand(1);
    appendix(verify->add_subcommand("appendix", "Gauss/Kloosterman identity suite"));

    auto* chr = app.add_subcommand("char", "character values, closed form and brute force")->require_subcommand(1);
    for (const char* kind : {"gl", "so", "tgl", "tgl-phiu", "so-phiprime"}) {
        auto* cmd = chr->add_subcommand(kind);
        add_field_flags(cmd, ch.c);
        add_padic_flags(cmd, ch.c);
        cmd->add_option("--n", ch.n, "GL_n for gl, GL_2n for tgl*, SO_2n+1 for so*");
        cmd->add_option("--a", ch.a, "parameter a");
        cmd->add_option("--b", ch.b, "parameter b");
        cmd->add_option("--zeta", ch.zeta, "+1 or -1");
        cmd->add_option("--xi", ch.xi, "+1 or -1");
        cmd->add_option("--components", ch.components, "affine components c1,...");
        cmd->add_option("--element", ch.element, "components | one-plus-phi | norm-prime");
        cmd->add_option("--u", ch.u, "twist parameter u, or 'all'");
        cmd->add_option("--mode", ch.mode, "closed | brute | both");
        cmd->add_option("--format", ch.format, "json | csv");
        const std::string k = kind;
        cmd->callback([&, k] {
            meta = field_meta(ch.c, true);
            action = [&, k] { return run_char(k, ch, Fq(ch.c.p, ch.c.f)); };
        });
    }

    auto* endo = app.add_subcommand("endoscopy", "norm pairs and the endoscopic character relation")->require_subcommand(1);
    const auto endo_cmd = [&](const char* name, const char* desc) {
        auto* cmd = endo->add_subcommand(name, desc);
        add_field_flags(cmd, en.c);
        add_padic_flags(cmd, en.c);
        return cmd;
    };
    const auto endo_action = [&](CLI::App* cmd, std::function<Output()> fn) {
        cmd->callback([&, fn] {
            meta = [&] {
                require_group_config(en.c);
                return metadata(Fq(en.c.p), en.c, true);
            };
            action = fn;
        });
    };
    {
        auto* cmd = endo_cmd("verify", "norm pairs and both character relations over a grid");
        cmd->add_option("--n", en.n, "rank n");
        cmd->add_option("--ps", en.ps, "comma-separated primes (overrides --p)");
        cmd->add_option("--ns", en.ns, "comma-separated ranks (overrides --n)");
        cmd->add_option("--u", en.u, "unit u or 'all'");
        cmd->add_option("--zeta", en.zeta, "+1, -1 or both");
        cmd->add_option("--b", en.so_b, "SO-side parameter b (default 1/2)");
        endo_action(cmd, [&] { return endoscopy_verify(en); });
    }
    {
        auto* cmd = endo_cmd("fit-bc", "solve for (b, c) from the two character tables");
        cmd->add_option("--n", en.n, "rank n");
        cmd->add_option("--zeta", en.zeta, "+1, -1 or both");
        endo_action(cmd, [&] { return endoscopy_fit(en); });
    }
    {
        auto* cmd = endo_cmd("lift", "(b, xi) -> (2b, xi)");
        cmd->add_option("--b", en.b, "parameter b");
        cmd->add_option("--xi", en.xi, "+1 or -1");
        endo_action(cmd, [&] { return endoscopy_lift(en, Fq(en.c.p)); });
    }
    {
        auto* cmd = endo_cmd("norm-pair", "build and check a norm pair");
        cmd->add_option("--n", en.n, "rank n");
        cmd->add_option("--u", en.u, "unit u")->required();
        cmd->add_option("--kind", en.kind, "unramified | ramified");
        endo_action(cmd, [&] { return endoscopy_norm_pair(en); });
    }
    {
        auto* cmd = endo_cmd("partial-diag", "split off the fixed line of an affine generic h");
        cmd->add_option("--n", en.n, "rank n");
        cmd->add_option("--components", en.components, "affine components of h (n+1 values)");
        cmd->add_option("--u", en.u, "use h = N'(1+phi_u)");
        endo_action(cmd, [&] { return endoscopy_partial(en); });
    }

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kPass;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kPass;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsageError;
    }
    if (!action) {
        err << "usage error: no command\n";
        return kUsageError;
    }
    try {
        const Json m = meta();
        const Output o = action();
        return emit(args, m, o, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsageError;
    } catch (const DomainError& e) {
        err << "invalid input: " << e.what() << "\n";
        return kUsageError;
    } catch (const PrecisionError& e) {
        err << "precision error: " << e.what() << "\n";
        return kPrecisionError;
    } catch (const VerificationError& e) {
        err << "verification failure: " << e.what() << "\n";
        return kVerificationFailure;
    }
}

}  // namespace endoscope::cli
