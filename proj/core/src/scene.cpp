#include "ruledlab/scene.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "ruledlab/errors.hpp"

namespace ruledlab::scene {

namespace {

using nlohmann::json;

const char* kHelicoid = R"json({
  "name": "helicoid",
  "invariants": {"kappa": "0", "delta": "1", "lambda": "0"},
  "support": {"kind": "conoidal", "f": "1"},
  "domain": {"u_min": 0.0, "u_max": 6.283185307179586, "v_min": -2.0, "v_max": 2.0, "nu": 25, "nv": 25},
  "seed": 1
})json";

const char* kExample1 = R"json({
  "name": "example1",
  "invariants": {"kappa": "0", "delta": "1", "lambda": "0"},
  "support": {"kind": "conoidal", "f": "c/cos(u)"},
  "constants": {"c": 1.0},
  "domain": {"u_min": -1.0, "u_max": 1.0, "v_min": -2.0, "v_max": 2.0, "nu": 25, "nv": 25},
  "seed": 2
})json";

const char* kExample2 = R"json({
  "name": "example2",
  "invariants": {"kappa": "0", "delta": "sin(u)^2", "lambda": "0"},
  "support": {"kind": "conoidal", "f": "c*sin(u)^3/cos(2*u)"},
  "constants": {"c": 1.0},
  "domain": {"u_min": 0.2, "u_max": 0.7, "v_min": -2.0, "v_max": 2.0, "nu": 25, "nv": 25},
  "seed": 3
})json";

const char* kProp2 = R"json({
  "name": "prop2",
  "invariants": {"kappa": "0", "delta": "1/cos(u)^2", "lambda": "0"},
  "support": {"kind": "conoidal", "f": "1/cos(u)"},
  "domain": {"u_min": 0.0, "u_max": 0.6, "v_min": -3.0, "v_max": 3.0, "nu": 25, "nv": 25},
  "seed": 4
})json";

const char* kProp6f = R"json({
  "name": "prop6f",
  "invariants": {"kappa": "c3/(c1+c2*u)", "delta": "1", "lambda": "0.2"},
  "support": {"kind": "conoidal", "f": "c1+c2*u"},
  "constants": {"c1": 1.0, "c2": 0.5, "c3": 1.0},
  "domain": {"u_min": 0.0, "u_max": 1.0, "v_min": -2.0, "v_max": 2.0, "nu": 25, "nv": 25},
  "seed": 5
})json";

const char* kSect4c = R"json({
  "name": "sect4c",
  "invariants": {"kappa": "c1", "delta": "1", "lambda": "0"},
  "support": {"kind": "conoidal", "f": "cos(c2*u)"},
  "constants": {"c1": 1.0, "c2": 1.4142135623730951},
  "domain": {"u_min": 0.0, "u_max": 1.0, "v_min": -2.0, "v_max": 2.0, "nu": 25, "nv": 25},
  "seed": 6
})json";

const std::vector<std::pair<std::string, const char*>>& builtin_table() {
    static const std::vector<std::pair<std::string, const char*>> table = {
        {"helicoid", kHelicoid}, {"example1", kExample1}, {"example2", kExample2},
        {"prop2", kProp2},       {"prop6f", kProp6f},     {"sect4c", kSect4c},
    };
    return table;
}

expr::Expression parse_field(const json& obj, const char* key, const char* what) {
    if (!obj.contains(key) || !obj[key].is_string())
        throw Error(std::string("config: ") + what + " must be an expression string '" + key +
                    "'");
    return expr::parse(obj[key].get<std::string>());
}

void require_u_only(const expr::Expression& e, const char* what) {
    if (e.uses(expr::Var::V) || e.uses(expr::Var::W))
        throw Error(std::string("config: ") + what + " may depend on u only");
}

} // namespace

SceneConfig parse_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw Error(std::string("config: invalid JSON: ") + e.what());
    }

    SceneConfig cfg;
    cfg.name = doc.value("name", "");

    if (!doc.contains("invariants") || !doc["invariants"].is_object())
        throw Error("config: missing 'invariants' object");
    const json& inv = doc["invariants"];
    cfg.invariants.kappa = parse_field(inv, "kappa", "invariants.kappa");
    cfg.invariants.delta = parse_field(inv, "delta", "invariants.delta");
    cfg.invariants.lambda = parse_field(inv, "lambda", "invariants.lambda");
    require_u_only(cfg.invariants.kappa, "invariants.kappa");
    require_u_only(cfg.invariants.delta, "invariants.delta");
    require_u_only(cfg.invariants.lambda, "invariants.lambda");

    if (!doc.contains("support") || !doc["support"].is_object())
        throw Error("config: missing 'support' object");
    const json& sup = doc["support"];
    const std::string kind = sup.value("kind", "");
    if (kind == "conoidal") {
        expr::Expression f = parse_field(sup, "f", "support.f");
        require_u_only(f, "support.f");
        cfg.support = relnorm::SupportField::conoidal(std::move(f));
    } else if (kind == "general") {
        cfg.support = relnorm::SupportField::general(parse_field(sup, "q", "support.q"));
    } else {
        throw Error("config: support.kind must be \"general\" or \"conoidal\"");
    }

    if (doc.contains("constants")) {
        if (!doc["constants"].is_object())
            throw Error("config: 'constants' must be an object of numbers");
        for (const auto& [key, value] : doc["constants"].items()) {
            if (!value.is_number())
                throw Error("config: constant '" + key + "' must be a number");
            cfg.invariants.constants[key] = value.get<double>();
        }
    }

    if (!doc.contains("domain") || !doc["domain"].is_object())
        throw Error("config: missing 'domain' object");
    const json& dom = doc["domain"];
    for (const char* key : {"u_min", "u_max", "v_min", "v_max", "nu", "nv"})
        if (!dom.contains(key))
            throw Error(std::string("config: domain.") + key + " is required");
    cfg.domain.u_min = dom["u_min"].get<double>();
    cfg.domain.u_max = dom["u_max"].get<double>();
    cfg.domain.v_min = dom["v_min"].get<double>();
    cfg.domain.v_max = dom["v_max"].get<double>();
    cfg.domain.nu = dom["nu"].get<int>();
    cfg.domain.nv = dom["nv"].get<int>();
    if (cfg.domain.nu < 2 || cfg.domain.nv < 2)
        throw Error("config: domain.nu and domain.nv must be at least 2");
    if (!(cfg.domain.u_min < cfg.domain.u_max))
        throw Error("config: domain.u_min must be below domain.u_max");
    if (!(cfg.domain.v_min < cfg.domain.v_max))
        throw Error("config: domain.v_min must be below domain.v_max");
    cfg.invariants.u_min = cfg.domain.u_min;
    cfg.invariants.u_max = cfg.domain.u_max;

    if (doc.contains("tolerances")) {
        const json& tol = doc["tolerances"];
        cfg.tolerances.classify_rel = tol.value("classify_rel", cfg.tolerances.classify_rel);
        cfg.tolerances.fd_step = tol.value("fd_step", cfg.tolerances.fd_step);
        cfg.tolerances.richardson = tol.value("richardson", cfg.tolerances.richardson);
        cfg.tolerances.svd_tol = tol.value("svd_tol", cfg.tolerances.svd_tol);
        cfg.tolerances.frame_step = tol.value("frame_step", cfg.tolerances.frame_step);
        if (cfg.tolerances.fd_step <= 0.0 || cfg.tolerances.frame_step <= 0.0)
            throw Error("config: steps in 'tolerances' must be positive");
    }

    cfg.seed = doc.value("seed", std::uint64_t{0});
    return cfg;
}

SceneConfig load_config(const std::string& path_or_name) {
    std::error_code ec;
    if (std::filesystem::exists(path_or_name, ec)) {
        std::ifstream in(path_or_name);
        if (!in)
            throw Error("cannot read config file '" + path_or_name + "'");
        std::ostringstream buf;
        buf << in.rdbuf();
        return parse_config(buf.str());
    }
    if (is_builtin(path_or_name))
        return builtin(path_or_name);
    throw Error("no such config file or builtin scene: '" + path_or_name + "'");
}

const std::vector<std::string>& builtin_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& [name, text] : builtin_table())
            out.push_back(name);
        return out;
    }();
    return names;
}

bool is_builtin(const std::string& name) {
    for (const auto& [n, text] : builtin_table())
        if (n == name)
            return true;
    return false;
}

std::string builtin_json(const std::string& name) {
    for (const auto& [n, text] : builtin_table())
        if (n == name)
            return text;
    throw Error("no builtin scene named '" + name + "'");
}

SceneConfig builtin(const std::string& name) { return parse_config(builtin_json(name)); }

} // namespace ruledlab::scene
