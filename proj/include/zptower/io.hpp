#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "zptower/iwasawa.hpp"
#include "zptower/lfun.hpp"
#include "zptower/tower.hpp"

namespace zptower::io {

using json = nlohmann::json;
using tower::SpecError;
using tower::TowerSpec;

inline json rational_to_json(const Rational& r) {
    return json::array({r.num(), r.den()});
}

// ---------------------------------------------------------------------------
// TowerSpec JSON:
// { "p": 2, "r": 1, "modulus": [0,1] | null, "domain": "A1" | "Gm",
//   "f": [0,0,0,1], "f_neg": [1],
//   "precision": {"a":20,"guard":7,"b_s":14,"b_T":80,"n_max":3} }
// Coefficients are lowest-degree first; f_neg[i] is the coefficient of
// x^{-(i+1)}. For r > 1 each coefficient is a list of r residues mod p.
// ---------------------------------------------------------------------------

inline ff::FqPoly parse_fq_poly(const ff::FieldCtx& ctx, const json& arr,
                                const std::string& field) {
    if (!arr.is_array()) throw SpecError("spec field '" + field + "': expected an array");
    ff::FqPoly f;
    for (const auto& item : arr) {
        ff::FqElem e = ctx.zero();
        if (item.is_number_integer()) {
            std::int64_t v = item.get<std::int64_t>() % ctx.p;
            if (v < 0) v += ctx.p;
            e[0] = (std::uint8_t)v;
        } else if (item.is_array()) {
            if ((int)item.size() > ctx.r)
                throw SpecError("spec field '" + field + "': coefficient longer than r");
            for (size_t i = 0; i < item.size(); ++i) {
                std::int64_t v = item[i].get<std::int64_t>() % ctx.p;
                if (v < 0) v += ctx.p;
                e[i] = (std::uint8_t)v;
            }
        } else {
            throw SpecError("spec field '" + field + "': bad coefficient");
        }
        f.push_back(e);
    }
    ff::fq_trim(ctx, f);
    return f;
}

struct PrecisionOverrides {
    std::optional<int> a, b_s, n_max;
};

inline TowerSpec tower_spec_from_json(const json& j,
                                      const PrecisionOverrides& ov = {}) {
    if (!j.is_object()) throw SpecError("spec: expected a JSON object");
    if (!j.contains("p")) throw SpecError("spec: missing field 'p'");
    int p = j.at("p").get<int>();
    int r = j.value("r", 1);
    ff::FieldCtx ctx;
    try {
        if (j.contains("modulus") && !j.at("modulus").is_null()) {
            ff::FpVec m;
            for (const auto& c : j.at("modulus")) {
                std::int64_t v = c.get<std::int64_t>() % p;
                if (v < 0) v += p;
                m.push_back((std::uint8_t)v);
            }
            ctx = ff::build_field(p, r, &m);
        } else {
            ctx = ff::build_field(p, r);
        }
    } catch (const std::invalid_argument& e) {
        throw SpecError(std::string("spec field 'p'/'r'/'modulus': ") + e.what());
    }

    std::string dom = j.value("domain", "A1");
    ff::Domain domain;
    if (dom == "A1") domain = ff::Domain::AffineLine;
    else if (dom == "Gm") domain = ff::Domain::Torus;
    else throw SpecError("spec field 'domain': expected \"A1\" or \"Gm\"");

    if (!j.contains("f")) throw SpecError("spec: missing field 'f'");
    ff::FqPoly f_pos = parse_fq_poly(ctx, j.at("f"), "f");
    ff::FqPoly f_neg;
    if (j.contains("f_neg") && !j.at("f_neg").is_null())
        f_neg = parse_fq_poly(ctx, j.at("f_neg"), "f_neg");

    tower::Precision prec;
    if (j.contains("precision")) {
        const json& pj = j.at("precision");
        prec.a = pj.value("a", 20);
        prec.guard = pj.value("guard", 0);
        prec.b_s = pj.value("b_s", 0);
        prec.b_T = pj.value("b_T", 0);
        prec.n_max = pj.value("n_max", 3);
    }
    if (ov.a) prec.a = *ov.a;
    if (ov.b_s) prec.b_s = *ov.b_s;
    if (ov.n_max) {
        prec.n_max = *ov.n_max;
        prec.b_T = 0;  // re-derive for the new top level
        prec.guard = 0;
    }
    return tower::make_tower_spec(ctx, domain, f_pos, f_neg, prec);
}

inline TowerSpec load_tower_spec(const std::string& path,
                                 const PrecisionOverrides& ov = {}) {
    std::ifstream in(path);
    if (!in) throw SpecError("cannot open spec file: " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw SpecError("spec parse error in " + path + ": " + e.what());
    }
    return tower_spec_from_json(j, ov);
}

inline json fq_poly_to_json(const ff::FieldCtx& ctx, const ff::FqPoly& f) {
    json arr = json::array();
    for (const auto& c : f) {
        if (ctx.r == 1) {
            arr.push_back((int)c[0]);
        } else {
            json e = json::array();
            for (int i = 0; i < ctx.r; ++i) e.push_back((int)c[i]);
            arr.push_back(e);
        }
    }
    return arr;
}

inline json tower_spec_to_json(const TowerSpec& s) {
    json j;
    j["p"] = s.ctx.p;
    j["r"] = s.ctx.r;
    j["modulus"] = json::array();
    for (auto c : s.ctx.modulus) j["modulus"].push_back((int)c);
    j["domain"] = s.domain == ff::Domain::AffineLine ? "A1" : "Gm";
    j["f"] = fq_poly_to_json(s.ctx, s.f_pos);
    if (!s.f_neg.empty()) j["f_neg"] = fq_poly_to_json(s.ctx, s.f_neg);
    j["precision"] = {{"a", s.prec.a},
                      {"guard", s.prec.guard},
                      {"b_s", s.prec.b_s},
                      {"b_T", s.prec.b_T},
                      {"n_max", s.prec.n_max}};
    return j;
}

inline std::string f_display(const TowerSpec& s) {
    std::string out = ff::fq_poly_str(s.ctx, s.f_pos);
    if (!s.f_neg.empty()) {
        for (int i = 0; i < (int)s.f_neg.size(); ++i) {
            if (s.ctx.is_zero(s.f_neg[i])) continue;
            out += "+";
            if (s.ctx.r == 1 && s.f_neg[i][0] != 1) out += std::to_string((int)s.f_neg[i][0]);
            out += "x^-" + std::to_string(i + 1);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Report / result serialization.
// ---------------------------------------------------------------------------

inline json report_to_json(const iwasawa::VerificationReport& rep, const TowerSpec& spec) {
    json j;
    j["tower"] = tower_spec_to_json(spec);
    j["mu"] = rep.mu;
    j["lambda"] = rep.lambda;
    j["lambda_nonzero"] = rep.lambda_nonzero;
    j["nu"] = rep.nu ? json(*rep.nu) : json(nullptr);
    j["c"] = rep.c ? rational_to_json(*rep.c) : json(nullptr);
    j["per_n"] = json::array();
    for (const auto& lvl : rep.per_n) {
        json l;
        l["n"] = lvl.n;
        l["ell"] = lvl.ell;
        l["slopes"] = json::array();
        for (const auto& s : lvl.slopes) l["slopes"].push_back(rational_to_json(s));
        l["slopes_symmetric"] = lvl.slopes_symmetric;
        l["v_L1"] = rational_to_json(lvl.v_L1);
        l["identity_ok"] = lvl.identity_ok ? json(*lvl.identity_ok) : json(nullptr);
        l["cross_route_ok"] = lvl.cross_route_ok;
        l["galois_ok"] = lvl.galois_ok;
        l["ram_lower_bound"] = lvl.ram_lower_bound;
        l["conj4_threshold"] =
            lvl.conj4_threshold ? json(*lvl.conj4_threshold) : json(nullptr);
        l["conj4_ok"] = lvl.conj4_ok ? json(*lvl.conj4_ok) : json(nullptr);
        l["v_h"] = rational_to_json(lvl.v_h);
        l["telescoping_ok"] = lvl.telescoping_ok;
        j["per_n"].push_back(l);
    }
    j["telescoping_ok"] = rep.telescoping_ok;
    j["routes_agree"] = rep.routes_agree ? json(*rep.routes_agree) : json(nullptr);
    j["all_ok"] = rep.all_ok;
    return j;
}

/// ClassicalL JSON: coefficients as pi-adic digit lists of length e.
inline json classical_to_json(const lfun::ClassicalL& C) {
    json j;
    j["n"] = C.n;
    j["p"] = C.ring.p;
    j["a"] = C.ring.a;
    j["e"] = C.ring.e;
    j["ell"] = C.ell >= 0 ? json(C.ell) : json(nullptr);
    j["coeffs"] = json::array();
    for (int k = 0; k <= C.retained(); ++k) {
        json arr = json::array();
        for (auto d : C.coeffs[k].c) arr.push_back(d);
        j["coeffs"].push_back(arr);
    }
    return j;
}

inline json tadic_to_json(const lfun::TadicL& L) {
    json j;
    j["p"] = L.series.sc[0].p;
    j["a"] = L.series.sc[0].a;
    j["b_T"] = L.series.sc[0].b_T();
    j["b_s"] = L.series.b_s();
    j["s_coeffs"] = json::array();
    for (const auto& ts : L.series.sc) {
        json arr = json::array();
        for (auto c : ts.c) arr.push_back(c);
        j["s_coeffs"].push_back(arr);
    }
    return j;
}

/// Newton polygon TSV: vertex rows index <tab> num <tab> den.
inline std::string newton_polygon_tsv(const lfun::NewtonPolygon& np) {
    std::ostringstream out;
    out << "# index\tvaluation_num\tvaluation_den\n";
    for (const auto& [i, v] : np.vertices)
        out << i << "\t" << v.num() << "\t" << v.den() << "\n";
    return out.str();
}

inline std::string points_tsv(const TowerSpec& spec, const tower::FrobAssignment& fa) {
    std::ostringstream out;
    out << "# minpoly\tdegree\tfrobenius\n";
    for (const auto& [pt, v] : fa.values)
        out << ff::fq_poly_str(spec.ctx, pt.minpoly) << "\t" << pt.degree << "\t"
            << v.residue << "\n";
    return out.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

}  // namespace zptower::io
