// Batch front end: evaluation, verification, construction, catalog and
// simulation as composable subcommands with JSON/CSV I/O.
//
// Exit codes: 0 success/accept, 1 verified violation (reject),
//             2 usage error, 3 numerical failure or insufficient data.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "tnfun/json_io.hpp"
#include "tnfun/tnfun.hpp"

namespace {

using tnfun::json;

constexpr int kExitOk = 0;
constexpr int kExitReject = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

std::vector<double> parse_vector(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stod(item));
    }
    if (out.empty()) throw tnfun::ArgumentError("empty vector '" + text + "'");
    return out;
}

std::vector<std::vector<double>> parse_probes(const std::string& text) {
    std::vector<std::vector<double>> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ';'))
        if (!item.empty()) out.push_back(parse_vector(item));
    if (out.empty()) throw tnfun::ArgumentError("no probe points given");
    return out;
}

// fn specs: catalog:name?k=v&k=v | expr:text | recipe:file | triple:file
json spec_to_recipe(const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw tnfun::ArgumentError(
            "function spec must look like catalog:..., expr:..., "
            "recipe:file or triple:file");
    const std::string kind = spec.substr(0, colon);
    const std::string rest = spec.substr(colon + 1);
    if (kind == "expr") return {{"op", "expr"}, {"text", rest}};
    if (kind == "recipe" || kind == "triple") {
        std::ifstream in(rest);
        if (!in)
            throw tnfun::ArgumentError("cannot open file '" + rest + "'");
        json j;
        in >> j;
        if (kind == "recipe") return j;
        return {{"op", "triple"}, {"triple", j}};
    }
    if (kind == "catalog") {
        const auto q = rest.find('?');
        json params = json::object();
        std::string name = rest.substr(0, q);
        if (q != std::string::npos) {
            std::stringstream ss(rest.substr(q + 1));
            std::string kv;
            while (std::getline(ss, kv, '&')) {
                const auto eq = kv.find('=');
                if (eq == std::string::npos)
                    throw tnfun::ArgumentError("bad catalog parameter '" + kv +
                                               "'");
                params[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
            }
        }
        return {{"op", "catalog"}, {"name", name}, {"params", params}};
    }
    throw tnfun::ArgumentError("unknown function spec kind '" + kind + "'");
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

void write_out(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out)
        throw tnfun::ArgumentError("cannot write file '" + path + "'");
    out << j.dump(2) << "\n";
}

tnfun::GridSpec grid_from_flag(const std::string& flag, int arity) {
    if (flag.empty()) return tnfun::default_grid(arity);
    // "lo:hi:count" applied log-spaced per axis
    double lo, hi;
    int count;
    if (std::sscanf(flag.c_str(), "%lf:%lf:%d", &lo, &hi, &count) != 3 ||
        !(lo < hi && hi < 0.0) || count < 2)
        throw tnfun::ArgumentError("--grid expects lo:hi:count with hi < 0");
    tnfun::GridSpec g;
    const double la = std::log(-lo), lb = std::log(-hi);
    for (int j = 0; j < arity; ++j) {
        std::vector<double> axis;
        for (int i = 0; i < count; ++i)
            axis.push_back(-std::exp(la + (lb - la) * i / (count - 1)));
        g.axes.push_back(std::move(axis));
    }
    return g;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"negative Bernstein function toolkit"};
    app.require_subcommand(1);

    // ---- eval
    auto* eval_cmd = app.add_subcommand("eval", "evaluate a triple at a point");
    std::string eval_triple, eval_s;
    double eval_tol = 0.0;
    eval_cmd->add_option("--triple", eval_triple, "triple JSON file")
        ->required();
    eval_cmd->add_option("--s", eval_s, "evaluation point, comma-separated")
        ->required();
    eval_cmd->add_option("--tol", eval_tol, "quadrature tolerance");

    // ---- verify
    auto* verify_cmd =
        app.add_subcommand("verify", "membership test for a function spec");
    std::string verify_fn, verify_grid;
    int verify_order = 5, verify_samples = 1000;
    double verify_step = 0.0, verify_theta = 0.0, verify_tol = 1e-9;
    std::uint64_t verify_seed = 0;
    verify_cmd->add_option("--fn", verify_fn, "function spec")->required();
    verify_cmd->add_option("--grid", verify_grid, "lo:hi:count");
    verify_cmd->add_option("--order", verify_order, "max difference order");
    verify_cmd->add_option("--step", verify_step, "difference step");
    verify_cmd->add_option("--theta", verify_theta,
                           "also run the sector check at this angle");
    verify_cmd->add_option("--samples", verify_samples, "sector samples");
    verify_cmd->add_option("--seed", verify_seed, "sampling seed");
    verify_cmd->add_option("--tol", verify_tol, "sector tolerance");

    // ---- compose
    auto* compose_cmd =
        app.add_subcommand("compose", "first-slot composition of two specs");
    std::string compose_outer, compose_inner, compose_at, compose_out;
    compose_cmd->add_option("--outer", compose_outer, "outer spec")
        ->required();
    compose_cmd->add_option("--inner", compose_inner, "inner spec")
        ->required();
    compose_cmd->add_option("--at", compose_at, "evaluate at this point");
    compose_cmd->add_option("--out", compose_out, "write recipe JSON here");

    // ---- tailint
    auto* tail_cmd =
        app.add_subcommand("tailint", "tail-integral factory on a 1-D spec");
    std::string tail_fn, tail_w = "neg_inv_t", tail_at, tail_out;
    tail_cmd->add_option("--fn", tail_fn, "function spec")->required();
    tail_cmd->add_option("--w", tail_w, "weight name (neg_inv_t)");
    tail_cmd->add_option("--at", tail_at, "evaluate at this point");
    tail_cmd->add_option("--out", tail_out, "write recipe JSON here");

    // ---- lift2
    auto* lift_cmd = app.add_subcommand(
        "lift2", "divided-difference lift of a drift-free 1-D triple");
    std::string lift_triple, lift_at, lift_push;
    int lift_atoms = 0;
    lift_cmd->add_option("--triple", lift_triple, "triple JSON file")
        ->required();
    lift_cmd->add_option("--at", lift_at, "evaluate at s1,s2");
    lift_cmd->add_option("--pushforward", lift_push,
                         "write the 2-D pushforward triple here");
    lift_cmd->add_option("--atomize", lift_atoms,
                         "atomize a parametric measure first (atom count)");

    // ---- simulate
    auto* sim_cmd = app.add_subcommand(
        "simulate", "Monte Carlo verification of the Laplace exponent");
    std::string sim_triple, sim_t = "0.5,1,2", sim_s = "-1", sim_csv;
    int sim_samples = 100000;
    double sim_eps = 1e-3;
    std::uint64_t sim_seed = 42;
    sim_cmd->add_option("--triple", sim_triple, "triple JSON file")
        ->required();
    sim_cmd->add_option("--t", sim_t, "time grid, comma-separated");
    sim_cmd->add_option("--s", sim_s,
                        "probe points, ';'-separated vectors");
    sim_cmd->add_option("--samples", sim_samples, "paths per time");
    sim_cmd->add_option("--eps", sim_eps, "small-jump cutoff");
    sim_cmd->add_option("--seed", sim_seed, "stream seed");
    sim_cmd->add_option("--csv", sim_csv, "CSV output path");

    // ---- catalog
    auto* cat_cmd = app.add_subcommand("catalog", "named members");
    auto* cat_list = cat_cmd->add_subcommand("list", "list entry names");
    auto* cat_show = cat_cmd->add_subcommand("show", "show one entry");
    std::string cat_name, cat_params;
    cat_show->add_option("name", cat_name, "entry name")->required();
    cat_show->add_option("--params", cat_params, "k=v,k=v parameters");
    cat_cmd->require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << json{{"error", e.what()}, {"code", kExitUsage}}.dump()
                  << "\n";
        return kExitUsage;
    }

    try {
        if (*eval_cmd) {
            const auto t = tnfun::load_triple(eval_triple);
            const auto s = parse_vector(eval_s);
            const double v = tnfun::evaluate_real(t, s, eval_tol);
            std::printf("%.12g\n", v);
            return kExitOk;
        }

        if (*verify_cmd) {
            auto fn = tnfun::handle_from_recipe(spec_to_recipe(verify_fn));
            tnfun::MembershipOptions opt;
            opt.max_order = verify_order;
            opt.step = verify_step;
            auto grid = grid_from_flag(verify_grid, fn.arity);
            auto rep = tnfun::verify_Tn(fn, grid, opt);
            json out{{"params",
                      {{"fn", verify_fn},
                       {"order", verify_order},
                       {"step", rep.step},
                       {"seed", verify_seed}}},
                     {"membership", tnfun::report_to_json(rep)}};
            if (verify_theta > 0.0) {
                tnfun::SectorSpec spec;
                spec.theta = verify_theta;
                spec.samples = verify_samples;
                auto srep = tnfun::sector_check(fn, spec, verify_seed,
                                                verify_tol);
                out["sector"] = tnfun::report_to_json(srep);
                if (srep.violations > 0) {
                    emit(out);
                    return kExitReject;
                }
            }
            emit(out);
            if (rep.rejected()) return kExitReject;
            if (!rep.accepted()) return kExitNumerical;
            return kExitOk;
        }

        if (*compose_cmd) {
            json recipe{{"op", "compose"},
                        {"outer", spec_to_recipe(compose_outer)},
                        {"inner", spec_to_recipe(compose_inner)}};
            auto fn = tnfun::handle_from_recipe(recipe);
            json out{{"params", {{"outer", compose_outer},
                                 {"inner", compose_inner}}},
                     {"arity", fn.arity},
                     {"recipe", recipe}};
            if (!compose_at.empty())
                out["value"] = fn(parse_vector(compose_at));
            if (!compose_out.empty()) write_out(compose_out, recipe);
            emit(out);
            return kExitOk;
        }

        if (*tail_cmd) {
            json recipe{{"op", "tailint"},
                        {"fn", spec_to_recipe(tail_fn)},
                        {"w", tail_w}};
            auto fn = tnfun::handle_from_recipe(recipe);
            json out{{"params", {{"fn", tail_fn}, {"w", tail_w}}},
                     {"recipe", recipe}};
            if (!tail_at.empty()) out["value"] = fn(parse_vector(tail_at));
            if (!tail_out.empty()) write_out(tail_out, recipe);
            emit(out);
            return kExitOk;
        }

        if (*lift_cmd) {
            auto t = tnfun::load_triple(lift_triple);
            if (lift_atoms > 0 &&
                t.measure.kind == tnfun::MeasureRepr::Kind::Parametric)
                t.measure = tnfun::MeasureRepr::from_atoms(
                    tnfun::atomize(t.measure, lift_atoms, 1e-8, 64.0));
            auto lift = tnfun::divided_difference_lift(t);
            json out{{"params", {{"triple", lift_triple}}},
                     {"omega", lift.omega},
                     {"has_pushforward", lift.pushforward.has_value()}};
            if (!lift_at.empty())
                out["value"] = lift.handle(parse_vector(lift_at));
            if (!lift_push.empty()) {
                if (!lift.pushforward)
                    throw tnfun::ConstructionError(
                        "no pushforward triple for a non-discrete measure; "
                        "use --atomize");
                write_out(lift_push,
                          tnfun::triple_to_json(*lift.pushforward));
            }
            emit(out);
            return kExitOk;
        }

        if (*sim_cmd) {
            tnfun::SimPlan plan;
            plan.triple = tnfun::load_triple(sim_triple);
            plan.times = parse_vector(sim_t);
            plan.probes = parse_probes(sim_s);
            plan.samples = sim_samples;
            plan.eps = sim_eps;
            plan.seed = sim_seed;
            auto rep = tnfun::verify_exponent(plan);
            json out{{"params",
                      {{"triple", sim_triple},
                       {"t", sim_t},
                       {"s", sim_s},
                       {"samples", sim_samples},
                       {"eps", sim_eps},
                       {"seed", sim_seed}}},
                     {"all_pass", rep.all_pass}};
            bool insufficient = false;
            for (const auto& r : rep.rows)
                insufficient = insufficient || r.insufficient;
            out["insufficient_data"] = insufficient;
            if (!sim_csv.empty()) {
                std::ofstream csv(sim_csv, std::ios::binary);
                if (!csv)
                    throw tnfun::ArgumentError("cannot write CSV '" +
                                               sim_csv + "'");
                tnfun::write_simulation_csv(csv, rep);
            }
            emit(out);
            if (insufficient) return kExitNumerical;
            return rep.all_pass ? kExitOk : kExitReject;
        }

        if (*cat_list) {
            emit(json{{"entries", tnfun::catalog_names()}});
            return kExitOk;
        }
        if (*cat_show) {
            std::map<std::string, double> params;
            if (!cat_params.empty()) {
                std::stringstream ss(cat_params);
                std::string kv;
                while (std::getline(ss, kv, ',')) {
                    const auto eq = kv.find('=');
                    if (eq == std::string::npos)
                        throw tnfun::ArgumentError("bad parameter '" + kv +
                                                   "'");
                    params[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
                }
            }
            auto entry = tnfun::catalog_get(cat_name, params);
            json out{{"name", entry.name},
                     {"params", entry.params},
                     {"notes", entry.notes},
                     {"arity", entry.handle.arity}};
            if (entry.triple)
                out["triple"] = tnfun::triple_to_json(*entry.triple);
            emit(out);
            return kExitOk;
        }
    } catch (const tnfun::ArgumentError& e) {
        std::cerr << json{{"error", e.what()}, {"code", kExitUsage}}.dump()
                  << "\n";
        return kExitUsage;
    } catch (const tnfun::ParseError& e) {
        std::cerr << json{{"error", e.what()},
                          {"position", e.pos},
                          {"code", kExitUsage}}
                         .dump()
                  << "\n";
        return kExitUsage;
    } catch (const tnfun::StructuralError& e) {
        std::cerr << json{{"error", e.what()}, {"code", kExitUsage}}.dump()
                  << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << json{{"error", e.what()}, {"code", kExitNumerical}}.dump()
                  << "\n";
        return kExitNumerical;
    }
    return kExitUsage;
}
