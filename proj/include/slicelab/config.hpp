#pragma once

#include <json.hpp>

#include <fstream>
#include <string>

#include "slicelab/errors.hpp"
#include "slicelab/types.hpp"

namespace slicelab {

/// Top-level run configuration: {seed, constants, experiment}. The experiment
/// object is free-form and interpreted by the campaign runners.
struct RunConfig {
    std::uint64_t seed = 1;
    ConstantsConfig constants;
    nlohmann::json experiment = nlohmann::json::object();
};

inline nlohmann::json constants_to_json(const ConstantsConfig& c) {
    nlohmann::json j;
    j["c_lkr"] = c.c_lkr;
    j["l_threshold"] = c.l_threshold;
    j["c_round_upper"] = c.c_round_upper;
    j["c_round_lower"] = c.c_round_lower;
    j["k_opnorm"] = c.k_opnorm;
    j["tolerances"] = {{"rank_zero_tol", c.tolerances.rank_zero_tol},
                       {"unit_norm_tol", c.tolerances.unit_norm_tol},
                       {"ci_z", c.tolerances.ci_z}};
    return j;
}

inline ConstantsConfig constants_from_json(const nlohmann::json& j) {
    ConstantsConfig c;
    c.c_lkr = j.value("c_lkr", c.c_lkr);
    c.l_threshold = j.value("l_threshold", c.l_threshold);
    c.c_round_upper = j.value("c_round_upper", c.c_round_upper);
    c.c_round_lower = j.value("c_round_lower", c.c_round_lower);
    c.k_opnorm = j.value("k_opnorm", c.k_opnorm);
    if (j.contains("tolerances")) {
        const auto& t = j.at("tolerances");
        c.tolerances.rank_zero_tol = t.value("rank_zero_tol", c.tolerances.rank_zero_tol);
        c.tolerances.unit_norm_tol = t.value("unit_norm_tol", c.tolerances.unit_norm_tol);
        c.tolerances.ci_z = t.value("ci_z", c.tolerances.ci_z);
    }
    c.validate();
    return c;
}

inline nlohmann::json model_to_json(const WeightModel& m) {
    nlohmann::json j;
    switch (m.kind) {
        case WeightModel::Kind::IidBernoulli:
            j["kind"] = "iid";
            j["p"] = m.p;
            break;
        case WeightModel::Kind::Slice:
            j["kind"] = "slice";
            j["m"] = m.m;
            break;
        case WeightModel::Kind::SliceWindow:
            j["kind"] = "window";
            j["p"] = m.p;
            j["gamma"] = m.gamma;
            break;
    }
    return j;
}

inline WeightModel model_from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "iid") return WeightModel::iid(j.at("p").get<double>());
    if (kind == "slice") return WeightModel::slice(j.at("m").get<int>());
    if (kind == "window")
        return WeightModel::slice_window(j.at("p").get<double>(), j.at("gamma").get<double>());
    throw ParameterError("model_from_json: unknown kind " + kind);
}

inline nlohmann::json config_to_json(const RunConfig& cfg) {
    nlohmann::json j;
    j["seed"] = cfg.seed;
    j["constants"] = constants_to_json(cfg.constants);
    j["experiment"] = cfg.experiment;
    return j;
}

inline RunConfig config_from_json(const nlohmann::json& j) {
    RunConfig cfg;
    cfg.seed = j.value("seed", std::uint64_t{1});
    if (j.contains("constants")) cfg.constants = constants_from_json(j.at("constants"));
    if (j.contains("experiment")) cfg.experiment = j.at("experiment");
    return cfg;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParameterError("load_config: cannot open " + path);
    nlohmann::json j = nlohmann::json::parse(in);
    return config_from_json(j);
}

inline void save_config(const RunConfig& cfg, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParameterError("save_config: cannot open " + path);
    out << config_to_json(cfg).dump(2) << '\n';
}

}  // namespace slicelab
