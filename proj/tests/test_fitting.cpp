// Copyright (c) 2026 the sylva authors
// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "sylva/fitting.hpp"
#include "sylva/synth.hpp"

using namespace sylva;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

/// Noiseless dataset drawn from a ground-truth model. The feature mix keeps
/// every blockage descriptor populated so any model can be evaluated on it.
std::vector<FeatureSample> noiseless_dataset(const ModelParams& truth, std::size_t n,
                                             std::uint64_t seed, double df_max = 60.0) {
    detail::SynthRng rng(seed);
    std::vector<FeatureSample> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        FeatureSample s;
        s.features.distance_3d = rng.uniform(20.0, 150.0);
        s.features.woodland_depth = s.features.distance_3d - 15.0;
        s.features.foliage_depth = rng.uniform(0.0, df_max);
        s.features.foliage_area = rng.uniform(0.2, 60.0);
        s.features.trunk_count = static_cast<std::size_t>(rng.uniform(0.0, 9.0));
        s.path_loss_db = predict(s.features, truth, 28.0).total_db;
        out.push_back(s);
    }
    return out;
}

std::vector<double> free_values(const FitResult& result) { return extract_slots(result.params); }

}  // namespace

TEST_CASE("rmse of paired values", "[fitting]") {
    const std::vector<double> a{3.0, 4.0};
    const std::vector<double> b{0.0, 0.0};
    CHECK_THAT(rmse(a, b), WithinAbs(3.53553391, 1e-8));
    CHECK(rmse(a, a) == 0.0);
    REQUIRE_THROWS_AS(rmse(a, std::vector<double>{1.0}), error);
    REQUIRE_THROWS_AS(rmse(std::vector<double>{}, std::vector<double>{}), error);
}

TEST_CASE("sanitize drops non-finite records with a warning", "[fitting]") {
    reset_warning_count();
    std::vector<FeatureSample> data(3);
    for (auto& s : data) {
        s.features.distance_3d = 50.0;
        s.path_loss_db = 100.0;
    }
    data[1].path_loss_db = std::nan("");
    data[2].features.foliage_depth = std::numeric_limits<double>::infinity();
    const auto clean = sanitize_dataset(data);
    CHECK(clean.size() == 1);
    CHECK(warning_count() == 2);

    FeatureSample zero_d;
    zero_d.features.distance_3d = 0.0;
    zero_d.path_loss_db = 90.0;
    CHECK_FALSE(finite_sample(zero_d));
}

TEST_CASE("parameter names and default bounds", "[fitting]") {
    CHECK(parameter_names(ModelKind::af) == std::vector<std::string>{"loss_per_tree_db"});
    CHECK(parameter_names(ModelKind::itu) ==
          std::vector<std::string>{"max_attenuation_db", "specific_attenuation_db_per_m"});
    CHECK(parameter_names(ModelKind::a1) ==
          std::vector<std::string>{"l1_db_per_m", "l2_db_per_m", "breakpoint_m"});
    CHECK(parameter_names(ModelKind::c) ==
          std::vector<std::string>{"jump_db", "l1_db_per_m2", "l2_db_per_m2", "breakpoint_m2"});
    CHECK(parameter_names(ModelKind::fspl).empty());

    const ParameterBounds gamma = default_bounds("specific_attenuation_db_per_m");
    CHECK(gamma.lower > 0.0);
    CHECK(gamma.lower < gamma.upper);
    REQUIRE_THROWS_AS(default_bounds("no_such_parameter"), error);
}

TEST_CASE("assemble_params mirrors extract_slots", "[fitting]") {
    const std::vector<std::pair<ModelKind, std::vector<double>>> cases = {
        {ModelKind::af, {6.47}},
        {ModelKind::itu, {34.5, 6.0}},
        {ModelKind::a1, {2.39, 0.12, 14.0}},
        {ModelKind::a2, {2.09, 17.87}},
        {ModelKind::b, {38.04, 4.47}},
        {ModelKind::c, {19.14, 2.09, 0.06, 18.02}},
    };
    for (const auto& [kind, slots] : cases) {
        const ModelParams p = assemble_params(kind, slots);
        CHECK(kind_of(p) == kind);
        CHECK(extract_slots(p) == slots);
    }
    REQUIRE_THROWS_AS(assemble_params(ModelKind::itu, std::vector<double>{34.5}), error);
}

TEST_CASE("fit spec validation catches malformed declarations", "[fitting]") {
    std::vector<FeatureSample> data(4);
    for (auto& s : data) {
        s.features.distance_3d = 40.0;
        s.path_loss_db = 100.0;
    }
    FitSpec spec;
    spec.kind = ModelKind::itu;
    spec.dataset = data;
    spec.free_parameters = {{"max_attenuation_db", 1.0, 100.0}};
    REQUIRE_THROWS_WITH(spec.validate(), ContainsSubstring("exactly once"));

    spec.free_parameters.push_back({"specific_attenuation_db_per_m", 1e-3, 20.0});
    CHECK_NOTHROW(spec.validate());

    FitSpec twice = spec;
    twice.fixed_parameters.push_back({"max_attenuation_db", 34.5});
    REQUIRE_THROWS_WITH(twice.validate(), ContainsSubstring("exactly once"));

    FitSpec bad_bounds = spec;
    bad_bounds.free_parameters[0].lower = 5.0;
    bad_bounds.free_parameters[0].upper = 5.0;
    REQUIRE_THROWS_WITH(bad_bounds.validate(), ContainsSubstring("lower < upper"));

    FitSpec empty = spec;
    empty.dataset.clear();
    REQUIRE_THROWS_WITH(empty.validate(), ContainsSubstring("dataset is empty"));

    FitSpec tainted = spec;
    tainted.dataset[0].path_loss_db = std::nan("");
    REQUIRE_THROWS_WITH(tainted.validate(), ContainsSubstring("sanitize_dataset"));

    FitSpec foreign = spec;
    foreign.free_parameters[0].name = "jump_db";
    REQUIRE_THROWS_AS(foreign.validate(), error);
}

TEST_CASE("noiseless saturating-law data is recovered to high accuracy", "[fitting]") {
    const ItuParams truth{34.5, 6.0};
    const auto data = noiseless_dataset(truth, 200, 1001);
    const FitResult result = fit_params(default_fit_spec(ModelKind::itu, data), 28.0);
    CHECK(result.converged);
    CHECK(result.rmse_db < 0.05);
    const auto fitted = free_values(result);
    CHECK_THAT(fitted[0], WithinRel(34.5, 0.01));
    CHECK_THAT(fitted[1], WithinRel(6.0, 0.01));
}

TEST_CASE("noiseless depth-law data is recovered to high accuracy", "[fitting]") {
    const BParams truth{38.04, 4.47};
    const auto data = noiseless_dataset(truth, 200, 1002, 80.0);
    const FitResult result = fit_params(default_fit_spec(ModelKind::b, data), 28.0);
    CHECK(result.converged);
    CHECK(result.rmse_db < 0.05);
    const auto fitted = free_values(result);
    CHECK_THAT(fitted[0], WithinRel(38.04, 0.01));
    CHECK_THAT(fitted[1], WithinRel(4.47, 0.01));
}

TEST_CASE("saturating linear law recovers slope and breakpoint", "[fitting]") {
    const A2Params truth{2.09, 17.87};
    const auto data = noiseless_dataset(truth, 200, 1003, 60.0);
    const FitResult result = fit_params(default_fit_spec(ModelKind::a2, data), 28.0);
    CHECK(result.converged);
    const auto fitted = free_values(result);
    CHECK_THAT(fitted[0], WithinRel(2.09, 0.01));
    CHECK_THAT(fitted[1], WithinRel(17.87, 0.01));
}

TEST_CASE("two-slope law with pinned breakpoint recovers both slopes", "[fitting]") {
    const A1Params truth{2.39, 0.12, 14.0};
    const auto data = noiseless_dataset(truth, 200, 1004, 60.0);
    const FitSpec spec = default_fit_spec(ModelKind::a1, data);
    REQUIRE(spec.fixed_parameters.size() == 1);
    CHECK(spec.fixed_parameters[0].name == "breakpoint_m");
    CHECK(spec.fixed_parameters[0].value == 14.0);
    const FitResult result = fit_params(spec, 28.0);
    CHECK(result.converged);
    const auto fitted = free_values(result);
    CHECK_THAT(fitted[0], WithinRel(2.39, 0.01));
    CHECK_THAT(fitted[1], WithinRel(0.12, 0.01));
    CHECK(fitted[2] == 14.0);
}

TEST_CASE("a flat objective is reported and not claimed converged", "[fitting]") {
    // Zero woodland depth everywhere: the saturating law's parameters never
    // touch the objective.
    detail::SynthRng rng(1005);
    std::vector<FeatureSample> data;
    for (int i = 0; i < 50; ++i) {
        FeatureSample s;
        s.features.distance_3d = rng.uniform(5.0, 14.0);
        s.features.woodland_depth = 0.0;
        s.path_loss_db = fspl_db(s.features.distance_3d, 28.0);
        data.push_back(s);
    }
    const FitResult result = fit_params(default_fit_spec(ModelKind::itu, data), 28.0);
    CHECK_FALSE(result.converged);
    REQUIRE_FALSE(result.warnings.empty());
    CHECK_THAT(result.warnings.front(), ContainsSubstring("flat"));
}

TEST_CASE("a saturated breakpoint search range is flagged", "[fitting]") {
    // Every sample sits past the largest breakpoint candidate, so the
    // breakpoint slides along a ridge.
    const A2Params truth{2.0, 150.0};
    detail::SynthRng rng(1006);
    std::vector<FeatureSample> data;
    for (int i = 0; i < 60; ++i) {
        FeatureSample s;
        s.features.distance_3d = rng.uniform(150.0, 250.0);
        s.features.foliage_depth = rng.uniform(120.0, 200.0);
        s.path_loss_db = predict(s.features, truth, 28.0).total_db;
        data.push_back(s);
    }
    const FitResult result = fit_params(default_fit_spec(ModelKind::a2, data), 28.0);
    CHECK_FALSE(result.converged);
    bool flagged = false;
    for (const std::string& w : result.warnings)
        if (w.find("breakpoint") != std::string::npos) flagged = true;
    CHECK(flagged);
}

TEST_CASE("an unreachable deep-branch slope is flagged", "[fitting]") {
    // All depths below the pinned 14 m breakpoint: the second slope never
    // enters the objective.
    const A1Params truth{2.39, 0.12, 14.0};
    detail::SynthRng rng(1007);
    std::vector<FeatureSample> data;
    for (int i = 0; i < 60; ++i) {
        FeatureSample s;
        s.features.distance_3d = rng.uniform(20.0, 80.0);
        s.features.foliage_depth = rng.uniform(0.0, 13.0);
        s.path_loss_db = predict(s.features, truth, 28.0).total_db;
        data.push_back(s);
    }
    const FitResult result = fit_params(default_fit_spec(ModelKind::a1, data), 28.0);
    CHECK_FALSE(result.converged);
    bool flagged = false;
    for (const std::string& w : result.warnings)
        if (w.find("l2_db_per_m") != std::string::npos) flagged = true;
    CHECK(flagged);
}

TEST_CASE("an evaluation budget below the grid size is refused", "[fitting]") {
    const auto data = noiseless_dataset(ItuParams{34.5, 6.0}, 30, 1008);
    FitOptions options;
    options.max_evaluations = 10;
    REQUIRE_THROWS_WITH(fit_params(default_fit_spec(ModelKind::itu, data), 28.0, options),
                        ContainsSubstring("budget too small"));
}

TEST_CASE("fitting is deterministic across repeated runs", "[fitting]") {
    const auto data = noiseless_dataset(BParams{38.04, 4.47}, 120, 1009, 80.0);
    const FitResult a = fit_params(default_fit_spec(ModelKind::b, data), 28.0);
    const FitResult b = fit_params(default_fit_spec(ModelKind::b, data), 28.0);
    CHECK(extract_slots(a.params) == extract_slots(b.params));
    CHECK(a.rmse_db == b.rmse_db);
    CHECK(a.objective_evaluations == b.objective_evaluations);
}

TEST_CASE("closed-form trunk loss matches the least-squares identity", "[fitting]") {
    const AfParams truth{6.47};
    auto data = noiseless_dataset(truth, 100, 1010);
    const FitResult result = fit_af_closed_form(data, 28.0);
    CHECK(result.converged);
    CHECK(result.objective_evaluations == 1);
    CHECK_THAT(std::get<AfParams>(result.params).loss_per_tree_db, WithinAbs(6.47, 1e-9));
    CHECK_THAT(result.rmse_db, WithinAbs(0.0, 1e-9));
}

TEST_CASE("closed-form trunk loss is a strict optimum under perturbation", "[fitting]") {
    detail::SynthRng rng(1011);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<FeatureSample> data;
        bool any_trunks = false;
        for (int i = 0; i < 40; ++i) {
            FeatureSample s;
            s.features.distance_3d = rng.uniform(10.0, 200.0);
            s.features.trunk_count = static_cast<std::size_t>(rng.uniform(0.0, 7.0));
            any_trunks = any_trunks || s.features.trunk_count > 0;
            s.path_loss_db = fspl_db(s.features.distance_3d, 28.0) +
                             6.0 * static_cast<double>(s.features.trunk_count) + rng.normal() * 2.0;
            data.push_back(s);
        }
        if (!any_trunks) continue;
        const FitResult fit = fit_af_closed_form(data, 28.0);
        const double l0 = std::get<AfParams>(fit.params).loss_per_tree_db;
        const auto rmse_at = [&](double candidate) {
            std::vector<double> predicted, measured;
            for (const FeatureSample& s : data) {
                predicted.push_back(predict(s.features, AfParams{candidate}, 28.0).total_db);
                measured.push_back(s.path_loss_db);
            }
            return rmse(predicted, measured);
        };
        CHECK(rmse_at(l0) <= rmse_at(l0 + 0.01));
        if (l0 >= 0.01) CHECK(rmse_at(l0) <= rmse_at(l0 - 0.01));
    }
}

TEST_CASE("closed-form trunk loss clamps negative solutions to zero", "[fitting]") {
    reset_warning_count();
    std::vector<FeatureSample> data;
    detail::SynthRng rng(1012);
    for (int i = 0; i < 30; ++i) {
        FeatureSample s;
        s.features.distance_3d = rng.uniform(10.0, 100.0);
        s.features.trunk_count = 1 + static_cast<std::size_t>(rng.uniform(0.0, 4.0));
        // Measurements sit below free space: the unconstrained optimum is negative.
        s.path_loss_db = fspl_db(s.features.distance_3d, 28.0) -
                         2.0 * static_cast<double>(s.features.trunk_count);
        data.push_back(s);
    }
    const FitResult result = fit_af_closed_form(data, 28.0);
    CHECK(std::get<AfParams>(result.params).loss_per_tree_db == 0.0);
    REQUIRE_FALSE(result.warnings.empty());
    CHECK_THAT(result.warnings.front(), ContainsSubstring("clamped"));
    CHECK(warning_count() >= 1);

    std::vector<FeatureSample> no_trunks(5);
    for (auto& s : no_trunks) {
        s.features.distance_3d = 50.0;
        s.path_loss_db = 100.0;
    }
    REQUIRE_THROWS_WITH(fit_af_closed_form(no_trunks, 28.0), ContainsSubstring("zero trunks"));
}

TEST_CASE("fixed models evaluate their RMSE without fitting", "[fitting]") {
    auto data = noiseless_dataset(FsplParams{}, 50, 1013);
    const FitResult fspl = evaluate_fixed_model(ModelKind::fspl, data, 28.0);
    CHECK_THAT(fspl.rmse_db, WithinAbs(0.0, 1e-12));
    CHECK(fspl.converged);

    for (auto& s : data) s.path_loss_db += 3.0;  // constant offset
    const FitResult shifted = evaluate_fixed_model(ModelKind::fspl, data, 28.0);
    CHECK_THAT(shifted.rmse_db, WithinAbs(3.0, 1e-12));

    const auto wmed_data = noiseless_dataset(WmedParams{}, 50, 1014);
    const FitResult wmed = evaluate_fixed_model(ModelKind::wmed, wmed_data, 28.0);
    CHECK_THAT(wmed.rmse_db, WithinAbs(0.0, 1e-12));
    REQUIRE_THROWS_AS(evaluate_fixed_model(ModelKind::fspl, {}, 28.0), error);
}

TEST_CASE("fit_all runs every requested model and records failures", "[fitting]") {
    const BParams truth{38.04, 4.47};
    auto data = noiseless_dataset(truth, 120, 1015, 80.0);
    const std::vector<ModelKind> models(std::begin(all_model_kinds), std::end(all_model_kinds));
    const auto outcomes = fit_all(data, models, 28.0);
    REQUIRE(outcomes.size() == models.size());
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        CHECK(outcomes[i].kind == models[i]);
        INFO(model_name(outcomes[i].kind) << ": " << outcomes[i].failure);
        CHECK(outcomes[i].result.has_value());
        CHECK(outcomes[i].failure.empty());
    }
    // The generator should win the RMSE comparison on its own data.
    double b_rmse = 0.0;
    for (const auto& o : outcomes)
        if (o.kind == ModelKind::b) b_rmse = o.result->rmse_db;
    for (const auto& o : outcomes)
        CHECK(b_rmse <= o.result->rmse_db + 1e-9);

    CHECK(fit_all(data, {}, 28.0).empty());
    REQUIRE_THROWS_AS(fit_all({}, models, 28.0), error);
}

TEST_CASE("per-model failures leave the other models standing", "[fitting]") {
    auto data = noiseless_dataset(BParams{38.04, 4.47}, 60, 1016, 80.0);
    for (auto& s : data) s.features.trunk_count = 0;  // starves the trunk model
    reset_warning_count();
    const auto outcomes = fit_all(data, {ModelKind::af, ModelKind::b}, 28.0);
    REQUIRE(outcomes.size() == 2);
    CHECK_FALSE(outcomes[0].result.has_value());
    CHECK_THAT(outcomes[0].failure, ContainsSubstring("zero trunks"));
    CHECK(outcomes[1].result.has_value());
    CHECK(warning_count() >= 1);
}

TEST_CASE("bound overrides reach the generated fit spec", "[fitting]") {
    FitAllOptions options;
    options.bounds_overrides["B"]["max_attenuation_db"] = {5.0, 50.0};
    const auto data = noiseless_dataset(BParams{38.04, 4.47}, 20, 1017, 80.0);
    const FitSpec spec = default_fit_spec(ModelKind::b, data, options);
    REQUIRE(spec.free_parameters.size() == 2);
    CHECK(spec.free_parameters[0].name == "max_attenuation_db");
    CHECK(spec.free_parameters[0].lower == 5.0);
    CHECK(spec.free_parameters[0].upper == 50.0);
    CHECK(spec.free_parameters[1].lower == default_bounds("specific_attenuation_db_per_m").lower);
}
