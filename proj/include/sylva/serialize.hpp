// Copyright (c) 2026 the sylva authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SYLVA_SERIALIZE_HPP
#define SYLVA_SERIALIZE_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "sylva/core.hpp"
#include "sylva/fitting.hpp"
#include "sylva/models.hpp"

namespace sylva {

/// Parameter values in the canonical order of parameter_names(kind).
inline std::vector<double> extract_slots(const ModelParams& params) {
    switch (kind_of(params)) {
        case ModelKind::fspl:
        case ModelKind::wmed: return {};
        case ModelKind::af: return {std::get<AfParams>(params).loss_per_tree_db};
        case ModelKind::itu: {
            const auto& p = std::get<ItuParams>(params);
            return {p.max_attenuation_db, p.specific_attenuation_db_per_m};
        }
        case ModelKind::b: {
            const auto& p = std::get<BParams>(params);
            return {p.max_attenuation_db, p.specific_attenuation_db_per_m};
        }
        case ModelKind::a1: {
            const auto& p = std::get<A1Params>(params);
            return {p.l1_db_per_m, p.l2_db_per_m, p.breakpoint_m};
        }
        case ModelKind::a2: {
            const auto& p = std::get<A2Params>(params);
            return {p.l1_db_per_m, p.breakpoint_m};
        }
        case ModelKind::c: {
            const auto& p = std::get<CParams>(params);
            return {p.jump_db, p.l1_db_per_m2, p.l2_db_per_m2, p.breakpoint_m2};
        }
    }
    throw error("extract_slots: unknown model kind");
}

/// {"model": "ITU", "max_attenuation_db": 34.5, ...}
inline nlohmann::json params_to_json(const ModelParams& params) {
    const ModelKind kind = kind_of(params);
    nlohmann::json doc;
    doc["model"] = std::string(model_name(kind));
    const auto names = parameter_names(kind);
    const auto slots = extract_slots(params);
    for (std::size_t i = 0; i < names.size(); ++i)
        doc[names[i]] = slots[i];
    return doc;
}

inline ModelParams params_from_json(const nlohmann::json& doc) {
    if (!doc.is_object())
        throw error("model parameters: expected a JSON object");
    if (!doc.contains("model") || !doc["model"].is_string())
        throw error("model parameters: missing string field 'model'");
    const ModelKind kind = parse_model_name(doc["model"].get<std::string>());
    std::vector<double> slots;
    for (const std::string& name : parameter_names(kind)) {
        if (!doc.contains(name) || !doc[name].is_number())
            throw error("model parameters: missing numeric field '" + name + "' for " +
                        std::string(model_name(kind)));
        slots.push_back(doc[name].get<double>());
    }
    ModelParams params = assemble_params(kind, slots);
    validate_params(params);
    return params;
}

inline ModelParams load_params(const std::string& path) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(detail::slurp(path));
    } catch (const nlohmann::json::exception& e) {
        throw error(path + ": " + e.what());
    }
    try {
        return params_from_json(doc);
    } catch (const error& e) {
        throw error(path + ": " + e.what());
    }
}

inline void save_params(const std::string& path, const ModelParams& params) {
    detail::spill(path, params_to_json(params).dump(2) + "\n");
}

/// Fit result document: the parameter fields plus the fit diagnostics.
inline nlohmann::json fit_result_to_json(const FitResult& result) {
    nlohmann::json doc = params_to_json(result.params);
    doc["rmse_db"] = result.rmse_db;
    doc["objective_evaluations"] = result.objective_evaluations;
    doc["converged"] = result.converged;
    if (!result.warnings.empty())
        doc["warnings"] = result.warnings;
    return doc;
}

}  // namespace sylva

#endif  // SYLVA_SERIALIZE_HPP
