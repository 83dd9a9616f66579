#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ruledlab/laplace.hpp"
#include "ruledlab/oracle.hpp"
#include "ruledlab/relnorm.hpp"

namespace ruledlab::scene {

struct Domain {
    double u_min = 0.0;
    double u_max = 1.0;
    double v_min = -2.0;
    double v_max = 2.0;
    int nu = 25;
    int nv = 25;
};

struct Tolerances {
    double classify_rel = 1e-6;
    double fd_step = 1e-4;
    bool richardson = true;
    double svd_tol = 1e-6;
    double frame_step = 1e-3;
};

/// One declarative experiment: invariants, support function, evaluation
/// domain, tolerances and a seed. Reports derived from a config are
/// deterministic for a fixed config and seed.
struct SceneConfig {
    std::string name;
    surface::InvariantTriple invariants;
    relnorm::SupportField support;
    Domain domain;
    Tolerances tolerances;
    std::uint64_t seed = 0;

    laplace::Grid classify_grid() const {
        return {domain.v_min, domain.v_max, domain.nu, domain.nv};
    }
    laplace::Tolerances classify_tolerances() const {
        return {tolerances.classify_rel, tolerances.frame_step};
    }
    oracle::OracleConfig oracle_config() const {
        return {tolerances.fd_step, tolerances.richardson, tolerances.svd_tol};
    }
};

/// Parses a JSON config document. Throws Error with a description on
/// malformed documents and ParseError on bad embedded expressions.
SceneConfig parse_config(const std::string& json_text);

/// Loads a config from a file path, or from the builtin registry when the
/// argument names a builtin scene and no such file exists.
SceneConfig load_config(const std::string& path_or_name);

const std::vector<std::string>& builtin_names();
bool is_builtin(const std::string& name);
std::string builtin_json(const std::string& name);
SceneConfig builtin(const std::string& name);

} // namespace ruledlab::scene
