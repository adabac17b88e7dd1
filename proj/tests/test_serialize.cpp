// Copyright (c) 2026 the sylva authors
// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include "sylva/serialize.hpp"
#include "test_util.hpp"

using namespace sylva;
using Catch::Matchers::ContainsSubstring;

namespace {

std::vector<ModelParams> sample_params() {
    return {
        FsplParams{},
        AfParams{6.47},
        ItuParams{34.5, 6.0},
        WmedParams{},
        A1Params{2.39, 0.12, 14.0},
        A2Params{2.09, 17.87},
        BParams{38.04, 4.47},
        CParams{19.14, 2.09, 0.06, 18.02},
    };
}

}  // namespace

TEST_CASE("parameter documents round-trip for every model", "[serialize]") {
    for (const ModelParams& p : sample_params()) {
        const nlohmann::json doc = params_to_json(p);
        CHECK(doc.at("model").get<std::string>() == model_name(kind_of(p)));
        const ModelParams back = params_from_json(doc);
        CHECK(kind_of(back) == kind_of(p));
        CHECK(extract_slots(back) == extract_slots(p));
    }
}

TEST_CASE("parameter JSON uses the documented field names", "[serialize]") {
    const nlohmann::json itu = params_to_json(ItuParams{34.5, 6.0});
    CHECK(itu.at("max_attenuation_db").get<double>() == 34.5);
    CHECK(itu.at("specific_attenuation_db_per_m").get<double>() == 6.0);
    const nlohmann::json c = params_to_json(CParams{19.14, 2.09, 0.06, 18.02});
    CHECK(c.at("jump_db").get<double>() == 19.14);
    CHECK(c.at("l1_db_per_m2").get<double>() == 2.09);
    CHECK(c.at("l2_db_per_m2").get<double>() == 0.06);
    CHECK(c.at("breakpoint_m2").get<double>() == 18.02);
}

TEST_CASE("malformed parameter documents are rejected", "[serialize]") {
    REQUIRE_THROWS_AS(params_from_json(nlohmann::json{{"mdl", "ITU"}}), error);
    REQUIRE_THROWS_AS(params_from_json(nlohmann::json{{"model", "NOPE"}}), error);
    nlohmann::json missing{{"model", "ITU"}, {"max_attenuation_db", 34.5}};
    REQUIRE_THROWS_AS(params_from_json(missing), error);
    nlohmann::json wrong_type{{"model", "AF"}, {"loss_per_tree_db", "six"}};
    REQUIRE_THROWS_AS(params_from_json(wrong_type), error);
    nlohmann::json invalid{{"model", "ITU"},
                           {"max_attenuation_db", -1.0},
                           {"specific_attenuation_db_per_m", 6.0}};
    REQUIRE_THROWS_AS(params_from_json(invalid), error);
}

TEST_CASE("parameter files round-trip through disk", "[serialize]") {
    testutil::TempDir dir("params");
    const std::string path = dir.file("itu.json");
    save_params(path, ItuParams{34.5, 6.0});
    const ModelParams back = load_params(path);
    CHECK(std::get<ItuParams>(back).max_attenuation_db == 34.5);
    REQUIRE_THROWS_WITH(load_params(dir.file("absent.json")), ContainsSubstring("absent.json"));

    const std::string garbled = dir.file("garbled.json");
    detail::spill(garbled, "{not json");
    REQUIRE_THROWS_WITH(load_params(garbled), ContainsSubstring("garbled.json"));
}

TEST_CASE("fit results serialize the metadata alongside the parameters", "[serialize]") {
    FitResult result;
    result.params = BParams{38.04, 4.47};
    result.rmse_db = 2.5;
    result.objective_evaluations = 321;
    result.converged = true;
    result.warnings = {"fit: objective surface is flat"};
    const nlohmann::json doc = fit_result_to_json(result);
    CHECK(doc.at("model").get<std::string>() == "B");
    CHECK(doc.at("rmse_db").get<double>() == 2.5);
    CHECK(doc.at("objective_evaluations").get<std::size_t>() == 321);
    CHECK(doc.at("converged").get<bool>() == true);
    REQUIRE(doc.contains("warnings"));
    CHECK(doc.at("warnings").size() == 1);

    FitResult clean = result;
    clean.warnings.clear();
    CHECK_FALSE(fit_result_to_json(clean).contains("warnings"));
}
