#pragma once

// JSON encodings shared by the command-line front end and its tests.

#include <complex>
#include <string>
#include <vector>

#include "json.hpp"

#include "endoscope/checks.hpp"
#include "endoscope/cyclo.hpp"
#include "endoscope/ffield.hpp"
#include "endoscope/padic.hpp"

namespace endoscope {

using Json = nlohmann::ordered_json;

// Exact form {m, coeffs} with the complex approximation {re, im}.
inline Json to_json(const CycElem& x) {
    Json coeffs = Json::array();
    for (const auto& c : x.coeffs()) {
        if (c >= std::numeric_limits<std::int64_t>::min() && c <= std::numeric_limits<std::int64_t>::max())
            coeffs.push_back(static_cast<std::int64_t>(c));
        else
            coeffs.push_back(c.str());
    }
    const std::complex<double> z = x.embed();
    // keep -0.0 out of the output
    const auto clean = [](double v) { return v == 0.0 ? 0.0 : v; };
    return Json{{"m", x.order()}, {"coeffs", coeffs}, {"re", clean(z.real())}, {"im", clean(z.imag())}};
}

// Prime-field elements as integers, extension-field elements as coefficient vectors.
inline Json to_json(const Fq& F, FqElem x) {
    if (F.f() == 1) return F.to_int(x);
    return F.coeffs(x);
}

inline Json to_json(const Fq& F, const std::vector<FqElem>& xs) {
    Json out = Json::array();
    for (auto x : xs) out.push_back(to_json(F, x));
    return out;
}

// {val, unit} with val = null when the entry is zero to its precision.
inline Json to_json(const PadicScalar& x) {
    Json j;
    if (auto v = x.valuation_opt()) {
        j["val"] = *v;
        j["unit"] = x.shifted(-*v).reduce_mod_p();
    } else {
        j["val"] = nullptr;
        j["unit"] = 0;
    }
    if (x.prec() != PadicScalar::kExact) j["prec"] = x.prec();
    return j;
}

inline Json to_json(const PadicMatrix& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Json to_json(const IdentityCheck& c) {
    Json j{{"name", c.name}, {"status", c.pass ? "pass" : "fail"}};
    if (c.lhs) j["lhs"] = to_json(*c.lhs);
    if (c.rhs) j["rhs"] = to_json(*c.rhs);
    if (!c.note.empty()) j["note"] = c.note;
    return j;
}

}  // namespace endoscope
