// Copyright (c) 2026 the sylva authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SYLVA_CONFIG_HPP
#define SYLVA_CONFIG_HPP

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "sylva/core.hpp"
#include "sylva/fitting.hpp"
#include "sylva/geometry.hpp"
#include "sylva/models.hpp"
#include "sylva/records.hpp"

namespace sylva {

inline WmedMode parse_wmed_mode(std::string_view text) {
    if (text == "strict") return WmedMode::strict;
    if (text == "extrapolate") return WmedMode::extrapolate;
    throw error("wmed_mode must be 'strict' or 'extrapolate', got '" + std::string(text) + "'");
}

inline std::string_view wmed_mode_name(WmedMode mode) {
    return mode == WmedMode::strict ? "strict" : "extrapolate";
}

inline CModelMode parse_c_mode(std::string_view text) {
    if (text == "continuous") return CModelMode::continuous;
    if (text == "paper_literal") return CModelMode::paper_literal;
    throw error("model_c_mode must be 'continuous' or 'paper_literal', got '" + std::string(text) + "'");
}

inline std::string_view c_mode_name(CModelMode mode) {
    return mode == CModelMode::continuous ? "continuous" : "paper_literal";
}

/// Run-level settings for the CLI pipeline. Keys in the JSON document are
/// exactly these field names.
struct ProjectConfig {
    std::string terrain_grid;
    std::string lidar_grid;
    std::string trunks_csv;
    std::string measurements_csv;
    std::string output_dir = ".";
    Point3 tx_position;
    double carrier_frequency_ghz = 28.0;
    double woodland_edge_offset_m = 15.0;
    double foliage_height_threshold_m = 2.0;
    std::size_t samples_per_cell = 4;
    double window_width = 10.0;
    WmedMode wmed_mode = WmedMode::strict;
    CModelMode model_c_mode = CModelMode::continuous;
    std::vector<ModelKind> models{ModelKind::fspl, ModelKind::af,  ModelKind::itu, ModelKind::wmed,
                                  ModelKind::a1,   ModelKind::a2, ModelKind::b,   ModelKind::c};
    std::vector<std::string> baselines{"ITU", "WMED"};
    std::map<std::string, std::map<std::string, ParameterBounds>> fit_bounds;
    std::size_t jobs = 1;

    void validate() const {
        if (!(carrier_frequency_ghz > 0.0))
            throw error("config: carrier_frequency_ghz must be positive");
        if (!(woodland_edge_offset_m >= 0.0))
            throw error("config: woodland_edge_offset_m must be non-negative");
        if (!std::isfinite(foliage_height_threshold_m))
            throw error("config: foliage_height_threshold_m must be finite");
        if (samples_per_cell < 2)
            throw error("config: samples_per_cell must be at least 2");
        if (!(window_width > 0.0))
            throw error("config: window_width must be positive");
        if (jobs < 1)
            throw error("config: jobs must be at least 1");
    }

    SiteGeometry site_geometry() const {
        return SiteGeometry{tx_position, carrier_frequency_ghz, woodland_edge_offset_m};
    }

    PredictOptions predict_options() const { return {wmed_mode, model_c_mode}; }
};

inline nlohmann::json config_to_json(const ProjectConfig& c) {
    nlohmann::json doc;
    doc["terrain_grid"] = c.terrain_grid;
    doc["lidar_grid"] = c.lidar_grid;
    doc["trunks_csv"] = c.trunks_csv;
    doc["measurements_csv"] = c.measurements_csv;
    doc["output_dir"] = c.output_dir;
    doc["tx_position"] = {c.tx_position.x, c.tx_position.y, c.tx_position.z};
    doc["carrier_frequency_ghz"] = c.carrier_frequency_ghz;
    doc["woodland_edge_offset_m"] = c.woodland_edge_offset_m;
    doc["foliage_height_threshold_m"] = c.foliage_height_threshold_m;
    doc["samples_per_cell"] = c.samples_per_cell;
    doc["window_width"] = c.window_width;
    doc["wmed_mode"] = std::string(wmed_mode_name(c.wmed_mode));
    doc["model_c_mode"] = std::string(c_mode_name(c.model_c_mode));
    std::vector<std::string> names;
    for (ModelKind kind : c.models) names.emplace_back(model_name(kind));
    doc["models"] = names;
    doc["baselines"] = c.baselines;
    if (!c.fit_bounds.empty()) {
        nlohmann::json bounds = nlohmann::json::object();
        for (const auto& [model, params] : c.fit_bounds) {
            for (const auto& [name, b] : params)
                bounds[model][name] = {b.lower, b.upper};
        }
        doc["fit_bounds"] = bounds;
    }
    doc["jobs"] = c.jobs;
    return doc;
}

inline ProjectConfig config_from_json(const nlohmann::json& doc) {
    if (!doc.is_object())
        throw error("config: expected a JSON object");
    ProjectConfig c;
    const auto get_string = [&](const char* key, std::string& out) {
        if (!doc[key].is_string()) throw error(std::string("config: '") + key + "' must be a string");
        out = doc[key].get<std::string>();
    };
    const auto get_number = [&](const char* key, double& out) {
        if (!doc[key].is_number()) throw error(std::string("config: '") + key + "' must be a number");
        out = doc[key].get<double>();
    };
    for (const auto& [key, value] : doc.items()) {
        if (key == "terrain_grid") get_string("terrain_grid", c.terrain_grid);
        else if (key == "lidar_grid") get_string("lidar_grid", c.lidar_grid);
        else if (key == "trunks_csv") get_string("trunks_csv", c.trunks_csv);
        else if (key == "measurements_csv") get_string("measurements_csv", c.measurements_csv);
        else if (key == "output_dir") get_string("output_dir", c.output_dir);
        else if (key == "tx_position") {
            if (!value.is_array() || value.size() != 3 || !value[0].is_number() ||
                !value[1].is_number() || !value[2].is_number())
                throw error("config: 'tx_position' must be an array of three numbers");
            c.tx_position = {value[0].get<double>(), value[1].get<double>(), value[2].get<double>()};
        } else if (key == "carrier_frequency_ghz") get_number(key.c_str(), c.carrier_frequency_ghz);
        else if (key == "woodland_edge_offset_m") get_number(key.c_str(), c.woodland_edge_offset_m);
        else if (key == "foliage_height_threshold_m") get_number(key.c_str(), c.foliage_height_threshold_m);
        else if (key == "samples_per_cell") {
            if (!value.is_number_unsigned()) throw error("config: 'samples_per_cell' must be a non-negative integer");
            c.samples_per_cell = value.get<std::size_t>();
        } else if (key == "window_width") get_number(key.c_str(), c.window_width);
        else if (key == "wmed_mode") {
            if (!value.is_string()) throw error("config: 'wmed_mode' must be a string");
            c.wmed_mode = parse_wmed_mode(value.get<std::string>());
        } else if (key == "model_c_mode") {
            if (!value.is_string()) throw error("config: 'model_c_mode' must be a string");
            c.model_c_mode = parse_c_mode(value.get<std::string>());
        } else if (key == "models") {
            if (!value.is_array()) throw error("config: 'models' must be an array of model names");
            c.models.clear();
            for (const auto& name : value) {
                if (!name.is_string()) throw error("config: 'models' must contain strings");
                c.models.push_back(parse_model_name(name.get<std::string>()));
            }
        } else if (key == "baselines") {
            if (!value.is_array()) throw error("config: 'baselines' must be an array of model names");
            c.baselines.clear();
            for (const auto& name : value) {
                if (!name.is_string()) throw error("config: 'baselines' must contain strings");
                parse_model_name(name.get<std::string>());  // validates the name
                c.baselines.push_back(name.get<std::string>());
            }
        } else if (key == "fit_bounds") {
            if (!value.is_object()) throw error("config: 'fit_bounds' must be an object");
            for (const auto& [model, params] : value.items()) {
                parse_model_name(model);
                if (!params.is_object()) throw error("config: fit_bounds." + model + " must be an object");
                for (const auto& [name, b] : params.items()) {
                    if (!b.is_array() || b.size() != 2 || !b[0].is_number() || !b[1].is_number())
                        throw error("config: fit_bounds." + model + "." + name +
                                    " must be [lower, upper]");
                    c.fit_bounds[model][name] = {b[0].get<double>(), b[1].get<double>()};
                }
            }
        } else if (key == "jobs") {
            if (!value.is_number_unsigned()) throw error("config: 'jobs' must be a non-negative integer");
            c.jobs = value.get<std::size_t>();
        } else {
            throw error("config: unknown key '" + key + "'");
        }
    }
    c.validate();
    return c;
}

/// Loads a config document; relative paths inside it are resolved against the
/// config file's directory.
inline ProjectConfig load_project_config(const std::string& path) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(detail::slurp(path));
    } catch (const nlohmann::json::exception& e) {
        throw error(path + ": " + e.what());
    }
    ProjectConfig c;
    try {
        c = config_from_json(doc);
    } catch (const error& e) {
        throw error(path + ": " + e.what());
    }
    const std::filesystem::path base = std::filesystem::path(path).parent_path();
    const auto resolve = [&](std::string& p) {
        if (!p.empty() && std::filesystem::path(p).is_relative())
            p = (base / p).lexically_normal().string();
    };
    resolve(c.terrain_grid);
    resolve(c.lidar_grid);
    resolve(c.trunks_csv);
    resolve(c.measurements_csv);
    resolve(c.output_dir);
    return c;
}

inline void save_project_config(const std::string& path, const ProjectConfig& config) {
    detail::spill(path, config_to_json(config).dump(2) + "\n");
}

}  // namespace sylva

#endif  // SYLVA_CONFIG_HPP
