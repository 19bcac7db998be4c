#pragma once

#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "tnfun/catalog.hpp"
#include "tnfun/constructors.hpp"
#include "tnfun/errors.hpp"
#include "tnfun/expr.hpp"
#include "tnfun/function_handle.hpp"
#include "tnfun/levy_triple.hpp"
#include "tnfun/membership.hpp"
#include "tnfun/stochastic.hpp"

namespace tnfun {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// measure / triple schema

inline json measure_to_json(const MeasureRepr& m) {
    json j;
    switch (m.kind) {
        case MeasureRepr::Kind::Atoms: {
            j["kind"] = "atoms";
            json arr = json::array();
            for (const auto& a : m.atoms)
                arr.push_back({{"u", a.u}, {"w", a.w}});
            j["atoms"] = std::move(arr);
            break;
        }
        case MeasureRepr::Kind::Grid: {
            j["kind"] = "grid";
            json arr = json::array();
            for (const auto& g : m.grid)
                arr.push_back({{"u", g.u},
                               {"density", g.density},
                               {"quad_w", g.quad_w}});
            j["nodes"] = std::move(arr);
            break;
        }
        case MeasureRepr::Kind::Parametric: {
            j["kind"] = "parametric";
            j["family"] = m.family;
            if (m.family == "stable")
                j["params"] = {{"alpha", m.alpha}, {"tilt", m.tilt}};
            else
                j["params"] = {{"rate", m.rate}};
            break;
        }
        case MeasureRepr::Kind::Sum: {
            j["kind"] = "sum";
            json arr = json::array();
            for (std::size_t i = 0; i < m.parts.size(); ++i)
                arr.push_back({{"coef", m.coefs[i]},
                               {"measure", measure_to_json(m.parts[i])}});
            j["parts"] = std::move(arr);
            break;
        }
    }
    return j;
}

inline MeasureRepr measure_from_json(const json& j) {
    const std::string kind = j.value("kind", "atoms");
    if (kind == "atoms") {
        std::vector<Atom> atoms;
        for (const auto& a : j.value("atoms", json::array()))
            atoms.push_back(Atom{a.at("u").get<std::vector<double>>(),
                                 a.at("w").get<double>()});
        return MeasureRepr::from_atoms(std::move(atoms));
    }
    if (kind == "grid") {
        std::vector<GridNode> nodes;
        for (const auto& g : j.value("nodes", json::array()))
            nodes.push_back(GridNode{g.at("u").get<std::vector<double>>(),
                                     g.at("density").get<double>(),
                                     g.at("quad_w").get<double>()});
        return MeasureRepr::from_grid(std::move(nodes));
    }
    if (kind == "parametric") {
        const std::string family = j.at("family").get<std::string>();
        const json& p = j.value("params", json::object());
        if (family == "stable")
            return MeasureRepr::stable(p.at("alpha").get<double>(),
                                       p.value("tilt", 0.0));
        if (family == "exp_over_u")
            return MeasureRepr::exp_over_u(p.at("rate").get<double>());
        throw StructuralError("unknown parametric family '" + family + "'");
    }
    if (kind == "sum") {
        std::vector<double> coefs;
        std::vector<MeasureRepr> parts;
        for (const auto& part : j.at("parts")) {
            coefs.push_back(part.at("coef").get<double>());
            parts.push_back(measure_from_json(part.at("measure")));
        }
        return MeasureRepr::sum(std::move(coefs), std::move(parts));
    }
    throw StructuralError("unknown measure kind '" + kind + "'");
}

inline json triple_to_json(const LevyTriple& t) {
    return {{"dim", t.dim},
            {"c0", t.c0},
            {"c1", t.c1},
            {"measure", measure_to_json(t.measure)}};
}

inline LevyTriple triple_from_json(const json& j) {
    LevyTriple t;
    t.dim = j.at("dim").get<int>();
    t.c0 = j.value("c0", 0.0);
    t.c1 = j.value("c1", std::vector<double>{});
    if (t.c1.empty()) t.c1.assign(std::max(t.dim, 0), 0.0);
    if (j.contains("measure")) t.measure = measure_from_json(j.at("measure"));
    return t;
}

inline LevyTriple load_triple(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ArgumentError("cannot open triple file '" + path + "'");
    json j;
    in >> j;
    return triple_from_json(j);
}

// ---------------------------------------------------------------------------
// reports

inline json report_to_json(const MembershipReport& r) {
    json j;
    switch (r.verdict) {
        case MembershipReport::Verdict::Accept: j["verdict"] = "accept"; break;
        case MembershipReport::Verdict::Reject: j["verdict"] = "reject"; break;
        case MembershipReport::Verdict::Inconclusive:
            j["verdict"] = "inconclusive";
            break;
    }
    j["tested_order"] = r.tested_order;
    j["step"] = r.step;
    j["noise_floor"] = r.noise_floor;
    if (!r.note.empty()) j["note"] = r.note;
    if (r.violation) {
        j["violation"] = {{"location", r.violation->location},
                          {"order", r.violation->order},
                          {"value", r.violation->value},
                          {"noise", r.violation->noise}};
    }
    // The difference test is a necessary condition; acceptance certifies
    // the checked differences, not membership itself.
    j["claim"] = "necessary-condition check";
    return j;
}

inline json report_to_json(const SectorReport& r) {
    json j{{"samples", r.samples},
           {"violations", r.violations},
           {"max_ratio", r.max_ratio},
           {"identically_zero", r.identically_zero}};
    return j;
}

inline json report_to_json(const LemmaReport& r) {
    return {{"samples", r.samples},
            {"violations", r.violations},
            {"min_margin", r.min_margin},
            {"mean_margin", r.mean_margin}};
}

inline json report_to_json(const ValidationReport& r) {
    return {{"pass", r.pass},
            {"structural_ok", r.structural_ok},
            {"integrability_ok", r.integrability_ok},
            {"coord_moments", r.coord_moments},
            {"tail_mass", r.tail_mass},
            {"message", r.message}};
}

// ---------------------------------------------------------------------------
// construction recipes (persistable factory pipelines)

inline FunctionHandle handle_from_recipe(const json& j);

inline std::map<std::string, double> params_from_json(const json& j) {
    std::map<std::string, double> out;
    for (auto it = j.begin(); it != j.end(); ++it)
        out[it.key()] = it.value().get<double>();
    return out;
}

inline FunctionHandle handle_from_recipe(const json& j) {
    const std::string op = j.at("op").get<std::string>();
    if (op == "catalog")
        return catalog_get(j.at("name").get<std::string>(),
                           params_from_json(j.value("params", json::object())))
            .handle;
    if (op == "expr") return parse_expression(j.at("text").get<std::string>());
    if (op == "triple")
        return handle_from_triple(triple_from_json(j.at("triple")));
    if (op == "compose")
        return compose(handle_from_recipe(j.at("outer")),
                       handle_from_recipe(j.at("inner")));
    if (op == "conic") {
        std::vector<std::pair<double, FunctionHandle>> terms;
        for (const auto& term : j.at("terms"))
            terms.emplace_back(term.at("coef").get<double>(),
                               handle_from_recipe(term.at("fn")));
        return conic_combine(terms);
    }
    if (op == "tailint") {
        const std::string w = j.value("w", "neg_inv_t");
        if (w != "neg_inv_t")
            throw ArgumentError("unknown weight '" + w + "' in recipe");
        return tail_integral(handle_from_recipe(j.at("fn")),
                             WeightSpec::neg_inv_t());
    }
    if (op == "lift2")
        return divided_difference_lift(triple_from_json(j.at("triple")))
            .handle;
    if (op == "permute")
        return permute_arguments(handle_from_recipe(j.at("fn")),
                                 j.at("perm").get<std::vector<int>>());
    throw ArgumentError("unknown recipe op '" + op + "'");
}

}  // namespace tnfun
