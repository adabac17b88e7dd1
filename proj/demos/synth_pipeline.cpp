// Copyright (c) 2026 the sylva authors
// SPDX-License-Identifier: Apache-2.0
//
// End-to-end library walkthrough on a generated scene: build a synthetic
// forest, compute features for every measurement, fit all eight models and
// print the overall comparison table.

#include <cstdio>
#include <vector>

#include "sylva/sylva.hpp"

int main() {
    using namespace sylva;

    SynthSpec spec;
    spec.seed = 7;
    spec.n_records = 400;
    const SynthScene scene = generate_scene(spec);
    std::printf("scene: %zu trunks, %zu measurements\n", scene.trunks.trunks.size(),
                scene.measurements.size());

    std::vector<FeatureSample> dataset;
    dataset.reserve(scene.measurements.size());
    for (const MeasurementRecord& m : scene.measurements) {
        const SiteFeatures f =
            compute_features(scene.geometry, m.position, scene.mask, scene.trunks);
        dataset.push_back({f, m.path_loss_db});
    }

    const std::vector<ModelKind> models(std::begin(all_model_kinds), std::end(all_model_kinds));
    const auto outcomes = fit_all(dataset, models, spec.carrier_frequency_ghz);

    std::printf("%-6s %10s\n", "model", "rmse_db");
    for (const ModelFitOutcome& o : outcomes) {
        if (o.result)
            std::printf("%-6s %10.4f\n", std::string(model_name(o.kind)).c_str(), o.result->rmse_db);
        else
            std::printf("%-6s %10s\n", std::string(model_name(o.kind)).c_str(), "failed");
    }
    return 0;
}
