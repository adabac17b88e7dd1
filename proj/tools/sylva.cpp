// Copyright (c) 2026 the sylva authors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end for the sylva foliage path-loss pipeline:
// foliage -> features -> fit -> evaluate, plus predict, fetch-dem and the
// synthetic scene generator. Logs go to stderr, data to files.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "sylva/sylva.hpp"

namespace fs = std::filesystem;

namespace {

constexpr const char* mask_filename = "foliage_mask.asc";
constexpr const char* features_filename = "features.csv";
constexpr const char* fit_results_filename = "fit_results.json";

/// Advisory lock against concurrent runs writing the same output directory.
class DirLock {
  public:
    explicit DirLock(const fs::path& dir) : path_(dir / ".sylva.lock") {
        fs::create_directories(dir);
        std::FILE* f = std::fopen(path_.string().c_str(), "wx");
        if (f == nullptr)
            throw sylva::error("output directory is locked by another run: " + path_.string() +
                               " (remove the lock file if it is stale)");
        std::fclose(f);
    }
    ~DirLock() {
        std::error_code ec;
        fs::remove(path_, ec);
    }
    DirLock(const DirLock&) = delete;
    DirLock& operator=(const DirLock&) = delete;

  private:
    fs::path path_;
};

void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& body) {
    jobs = std::max<std::size_t>(1, std::min(jobs, count));
    if (jobs <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (std::size_t w = 0; w < jobs; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> hold(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    }
    for (std::thread& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

struct GlobalArgs {
    std::string config_path = "config.json";
    std::string output_override;
    std::size_t jobs_override = 0;
};

sylva::ProjectConfig load_config(const GlobalArgs& args, bool required) {
    sylva::ProjectConfig config;
    if (fs::exists(args.config_path))
        config = sylva::load_project_config(args.config_path);
    else if (required)
        throw sylva::error("config file not found: " + args.config_path);
    if (!args.output_override.empty()) config.output_dir = args.output_override;
    if (args.jobs_override > 0) config.jobs = args.jobs_override;
    return config;
}

sylva::RasterGrid load_mask(const sylva::ProjectConfig& config) {
    const fs::path path = fs::path(config.output_dir) / mask_filename;
    if (!fs::exists(path))
        throw sylva::error("foliage mask not found: " + path.string() + " (run 'sylva foliage' first)");
    return sylva::load_ascii_grid(path.string());
}

sylva::SiteFeatures error_features() {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    return sylva::SiteFeatures{nan, nan, nan, nan, 0};
}

int cmd_foliage(const sylva::ProjectConfig& config) {
    DirLock lock{config.output_dir};
    const sylva::RasterGrid terrain = sylva::load_ascii_grid(config.terrain_grid);
    const sylva::RasterGrid lidar = sylva::load_ascii_grid(config.lidar_grid);
    const sylva::MaskExtraction extraction =
        sylva::extract_foliage_mask(lidar, terrain, config.foliage_height_threshold_m);
    const fs::path out = fs::path(config.output_dir) / mask_filename;
    sylva::save_ascii_grid(extraction.mask, out.string());
    std::cout << extraction.foliage_cells << " foliage cells, "
              << extraction.mask.values.size() << " total cells, "
              << extraction.nodata_cells << " nodata cells\n";
    std::cout << "wrote " << out.string() << "\n";
    return 0;
}

int cmd_features(const sylva::ProjectConfig& config) {
    DirLock lock{config.output_dir};
    const sylva::RasterGrid mask = load_mask(config);
    const sylva::TrunkSet trunks = sylva::load_trunks(config.trunks_csv);
    const std::vector<sylva::MeasurementRecord> measurements =
        sylva::load_measurements(config.measurements_csv);
    const sylva::SiteGeometry geometry = config.site_geometry();
    geometry.validate();

    std::vector<sylva::FeatureRecord> rows(measurements.size());
    parallel_for(measurements.size(), config.jobs, [&](std::size_t i) {
        const sylva::MeasurementRecord& m = measurements[i];
        sylva::FeatureRecord rec;
        rec.track_id = m.track_id;
        rec.position = m.position;
        rec.path_loss_db = m.path_loss_db;
        try {
            rec.features =
                sylva::compute_features(geometry, m.position, mask, trunks, config.samples_per_cell);
        } catch (const std::exception& e) {
            sylva::warn("features", "record " + std::to_string(i + 1) + ": " + e.what());
            rec.features = error_features();
        }
        rows[i] = rec;
    });

    const fs::path out = fs::path(config.output_dir) / features_filename;
    sylva::save_features(rows, out.string());
    std::cout << "wrote " << out.string() << " (" << rows.size() << " rows)\n";
    return 0;
}

int cmd_fit(const sylva::ProjectConfig& config) {
    DirLock lock{config.output_dir};
    if (config.models.empty())
        throw sylva::error("no models configured");
    const fs::path features_path = fs::path(config.output_dir) / features_filename;
    if (!fs::exists(features_path))
        throw sylva::error("features not found: " + features_path.string() +
                           " (run 'sylva features' first)");
    const auto records = sylva::load_features(features_path.string());
    const auto dataset = sylva::samples_from_records(records);

    sylva::FitAllOptions options;
    options.fit.predict = config.predict_options();
    options.bounds_overrides = config.fit_bounds;
    const auto outcomes = sylva::fit_all(dataset, config.models, config.carrier_frequency_ghz, options);

    nlohmann::json doc;
    doc["carrier_frequency_ghz"] = config.carrier_frequency_ghz;
    doc["models"] = nlohmann::json::array();
    nlohmann::json failures = nlohmann::json::array();
    std::printf("%-6s %10s %9s\n", "model", "rmse_db", "converged");
    for (const sylva::ModelFitOutcome& o : outcomes) {
        if (o.result) {
            doc["models"].push_back(sylva::fit_result_to_json(*o.result));
            std::printf("%-6s %10.4f %9s\n", std::string(sylva::model_name(o.kind)).c_str(),
                        o.result->rmse_db, o.result->converged ? "yes" : "no");
        } else {
            failures.push_back({{"model", std::string(sylva::model_name(o.kind))}, {"error", o.failure}});
            std::printf("%-6s %10s %9s\n", std::string(sylva::model_name(o.kind)).c_str(), "failed", "-");
        }
    }
    if (!failures.empty()) doc["failures"] = failures;

    const fs::path out = fs::path(config.output_dir) / fit_results_filename;
    sylva::detail::spill(out.string(), doc.dump(2) + "\n");
    std::cout << "wrote " << out.string() << "\n";
    return 0;
}

std::vector<sylva::ModelFitOutcome> outcomes_from_json(const nlohmann::json& doc) {
    if (!doc.is_object() || !doc.contains("models") || !doc["models"].is_array())
        throw sylva::error("fit results: expected an object with a 'models' array");
    std::vector<sylva::ModelFitOutcome> outcomes;
    for (const nlohmann::json& entry : doc["models"]) {
        sylva::FitResult result;
        result.params = sylva::params_from_json(entry);
        if (entry.contains("rmse_db") && entry["rmse_db"].is_number())
            result.rmse_db = entry["rmse_db"].get<double>();
        if (entry.contains("converged") && entry["converged"].is_boolean())
            result.converged = entry["converged"].get<bool>();
        sylva::ModelFitOutcome outcome;
        outcome.kind = sylva::kind_of(result.params);
        outcome.result = std::move(result);
        outcomes.push_back(std::move(outcome));
    }
    return outcomes;
}

int cmd_evaluate(const sylva::ProjectConfig& config, const std::string& fit_results_path,
                 double window_step) {
    DirLock lock{config.output_dir};
    const fs::path features_path = fs::path(config.output_dir) / features_filename;
    if (!fs::exists(features_path))
        throw sylva::error("features not found: " + features_path.string() +
                           " (run 'sylva features' first)");
    fs::path results_path = fit_results_path.empty()
                                ? fs::path(config.output_dir) / fit_results_filename
                                : fs::path(fit_results_path);
    if (!fs::exists(results_path))
        throw sylva::error("fit results not found: " + results_path.string() +
                           " (run 'sylva fit' first)");

    const auto records = sylva::load_features(features_path.string());
    const auto dataset = sylva::sanitize_dataset(sylva::samples_from_records(records));
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(sylva::detail::slurp(results_path.string()));
    } catch (const nlohmann::json::exception& e) {
        throw sylva::error(results_path.string() + ": " + e.what());
    }
    const auto outcomes = outcomes_from_json(doc);
    if (outcomes.empty())
        throw sylva::error("fit results contain no models");

    sylva::EvalOptions options;
    options.predict = config.predict_options();
    options.window_step = window_step;
    const double f_c = config.carrier_frequency_ghz;
    const fs::path out_dir(config.output_dir);

    // Overall table.
    std::string overall = "model_name,overall_rmse_db,mean_error_db,sample_count\n";
    for (const sylva::ModelFitOutcome& o : outcomes) {
        const sylva::EvalReport report = sylva::evaluate_overall(dataset, o.result->params, f_c, options);
        overall += report.model_name;
        overall += ',' + sylva::format_fixed(report.overall_rmse_db, 4);
        overall += ',' + sylva::format_fixed(report.mean_error_db, 4);
        overall += ',' + std::to_string(report.sample_count);
        overall += '\n';
    }
    sylva::detail::spill((out_dir / "overall.csv").string(), overall);
    std::cout << "wrote " << (out_dir / "overall.csv").string() << "\n";

    // Axes: woodland and foliage depth always, foliage area when C is present.
    std::vector<sylva::BlockageAxis> axes{sylva::BlockageAxis::d_w, sylva::BlockageAxis::d_f};
    for (const sylva::ModelFitOutcome& o : outcomes)
        if (o.kind == sylva::ModelKind::c) {
            axes.push_back(sylva::BlockageAxis::a_f);
            break;
        }

    for (const sylva::ModelFitOutcome& o : outcomes) {
        const std::string name(sylva::model_name(o.kind));
        for (sylva::BlockageAxis axis : axes) {
            const sylva::EvalReport report = sylva::evaluate_regional(
                dataset, o.result->params, f_c, axis, config.window_width, options);
            const fs::path path =
                out_dir / ("regional_" + name + "_" + std::string(sylva::axis_name(axis)) + ".csv");
            sylva::detail::spill(path.string(), sylva::regional_csv(report));
        }
        const sylva::BlockageAxis scatter_axis = sylva::default_axis_for(o.kind);
        const fs::path scatter_path =
            out_dir / ("scatter_" + name + "_" + std::string(sylva::axis_name(scatter_axis)) + ".csv");
        sylva::detail::spill(scatter_path.string(),
                             sylva::scatter_csv(dataset, o.result->params, f_c, scatter_axis, options));
    }
    std::cout << "wrote regional and scatter data for " << outcomes.size() << " models\n";

    if (outcomes.size() >= 2) {
        for (const std::string& baseline : config.baselines) {
            for (sylva::BlockageAxis axis : axes) {
                const sylva::RegionalComparison cmp = sylva::compare_models(
                    dataset, outcomes, f_c, axis, config.window_width, baseline, options);
                const fs::path path =
                    out_dir /
                    ("comparison_" + baseline + "_" + std::string(sylva::axis_name(axis)) + ".csv");
                sylva::detail::spill(path.string(), sylva::comparison_csv(cmp));
            }
        }
        std::cout << "wrote comparison data against " << config.baselines.size() << " baselines\n";
    }
    return 0;
}

int cmd_predict(const sylva::ProjectConfig& config, const std::string& params_path,
                const std::string& rx_path) {
    DirLock lock{config.output_dir};
    const sylva::RasterGrid mask = load_mask(config);
    const sylva::TrunkSet trunks = sylva::load_trunks(config.trunks_csv);
    const std::vector<sylva::RxRecord> rx_list = sylva::load_rx_list(rx_path);
    const sylva::SiteGeometry geometry = config.site_geometry();
    geometry.validate();

    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(sylva::detail::slurp(params_path));
    } catch (const nlohmann::json::exception& e) {
        throw sylva::error(params_path + ": " + e.what());
    }
    std::vector<sylva::ModelParams> models;
    if (doc.is_object() && doc.contains("models"))
        for (const sylva::ModelFitOutcome& o : outcomes_from_json(doc)) models.push_back(o.result->params);
    else
        models.push_back(sylva::params_from_json(doc));

    std::string out = "track_id,easting_m,northing_m,altitude_m";
    for (const sylva::ModelParams& p : models)
        out += "," + std::string(sylva::model_name(sylva::kind_of(p))) + "_db";
    out += "\n";

    const sylva::PredictOptions options = config.predict_options();
    for (std::size_t i = 0; i < rx_list.size(); ++i) {
        const sylva::RxRecord& rx = rx_list[i];
        out += rx.track_id;
        out += ',' + sylva::format_fixed(rx.position.x, 4);
        out += ',' + sylva::format_fixed(rx.position.y, 4);
        out += ',' + sylva::format_fixed(rx.position.z, 4);
        try {
            const sylva::SiteFeatures features =
                sylva::compute_features(geometry, rx.position, mask, trunks, config.samples_per_cell);
            for (const sylva::ModelParams& p : models) {
                const sylva::Prediction pred =
                    sylva::predict(features, p, config.carrier_frequency_ghz, options);
                out += ',' + sylva::format_fixed(pred.total_db, 4);
            }
        } catch (const std::exception& e) {
            sylva::warn("predict", "record " + std::to_string(i + 1) + ": " + e.what());
            for (std::size_t m = 0; m < models.size(); ++m) out += ",nan";
        }
        out += '\n';
    }

    const fs::path path = fs::path(config.output_dir) / "predictions.csv";
    sylva::detail::spill(path.string(), out);
    std::cout << "wrote " << path.string() << " (" << rx_list.size() << " rows)\n";
    return 0;
}

int cmd_fetch_dem(const sylva::ProjectConfig& config, const std::string& url_template,
                  const std::vector<long>& tiles, int zoom, const std::vector<double>& bbox,
                  std::string dest, std::size_t retries) {
    if (dest.empty()) dest = (fs::path(config.output_dir) / "tiles").string();
    sylva::FetchOptions options;
    options.max_retries = retries;
    options.parallelism = config.jobs;

    sylva::FetchReport report;
    if (!tiles.empty()) {
        sylva::TileRange range{tiles[0], tiles[1], tiles[2], tiles[3], zoom};
        report = sylva::fetch_elevation_tiles(url_template, range, dest, options);
    } else {
        sylva::GeoBoundingBox box{bbox[0], bbox[1], bbox[2], bbox[3]};
        report = sylva::fetch_elevation_tiles(url_template, box, dest, options);
    }
    for (const std::string& path : report.saved_paths) std::cout << path << "\n";
    std::cerr << "downloaded " << report.downloaded << ", skipped " << report.skipped << "\n";
    return 0;
}

int cmd_synth(const sylva::ProjectConfig& config, std::uint64_t seed, std::size_t records,
              double sigma) {
    DirLock lock{config.output_dir};
    sylva::SynthSpec spec;
    spec.seed = seed;
    spec.n_records = records;
    spec.noise_sigma_db = sigma;
    const sylva::SynthScene scene = sylva::generate_scene(spec);
    sylva::write_scene(scene, config.output_dir, spec);
    std::cout << "wrote synthetic scene to " << config.output_dir << " (" << scene.measurements.size()
              << " measurements, " << scene.trunks.trunks.size() << " trunks)\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"site-specific foliage path-loss pipeline"};
    app.require_subcommand(1);

    GlobalArgs args;
    app.add_option("--config", args.config_path, "project config file")->capture_default_str();
    app.add_option("--output", args.output_override, "override the configured output directory");
    app.add_option("--jobs", args.jobs_override, "worker thread bound");

    CLI::App* foliage = app.add_subcommand("foliage", "extract the foliage mask from lidar minus terrain");
    CLI::App* features = app.add_subcommand("features", "compute per-receiver blockage features");
    CLI::App* fit = app.add_subcommand("fit", "fit model parameters to the features by RMSE");

    CLI::App* evaluate = app.add_subcommand("evaluate", "overall/regional reports and plot data");
    std::string fit_results_path;
    double window_step = 0.0;
    evaluate->add_option("--fit-results", fit_results_path, "fit results document (default from output dir)");
    evaluate->add_option("--window-step", window_step,
                         "slide regional windows by this step instead of tumbling");

    CLI::App* predict = app.add_subcommand("predict", "predict path loss at new receiver locations");
    std::string params_path;
    std::string rx_path;
    predict->add_option("--params", params_path, "model parameter or fit results document")->required();
    predict->add_option("--rx", rx_path, "receiver list csv")->required();

    CLI::App* fetch = app.add_subcommand("fetch-dem", "download elevation tiles");
    std::string url_template;
    std::vector<long> tiles;
    std::vector<double> bbox;
    int zoom = 0;
    std::string dest;
    std::size_t retries = 3;
    fetch->add_option("--url", url_template, "url template with {x}/{y}/{z} or bbox placeholders")
        ->required();
    CLI::Option* tiles_opt =
        fetch->add_option("--tiles", tiles, "tile range: x_min x_max y_min y_max")->expected(4);
    CLI::Option* bbox_opt =
        fetch->add_option("--bbox", bbox, "bounding box: xmin ymin xmax ymax")->expected(4);
    tiles_opt->excludes(bbox_opt);
    fetch->add_option("--zoom", zoom, "tile zoom level");
    fetch->add_option("--dest", dest, "destination directory (default <output>/tiles)");
    fetch->add_option("--retries", retries, "retries per tile")->capture_default_str();

    CLI::App* synth = app.add_subcommand("synth", "generate a synthetic forest scene");
    std::uint64_t seed = 28;
    std::size_t records = 1000;
    double sigma = 2.0;
    synth->add_option("--seed", seed, "rng seed")->capture_default_str();
    synth->add_option("--records", records, "measurement count")->capture_default_str();
    synth->add_option("--sigma", sigma, "noise standard deviation in dB")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    int rc = 1;
    try {
        if (*foliage) rc = cmd_foliage(load_config(args, true));
        else if (*features) rc = cmd_features(load_config(args, true));
        else if (*fit) rc = cmd_fit(load_config(args, true));
        else if (*evaluate) rc = cmd_evaluate(load_config(args, true), fit_results_path, window_step);
        else if (*predict) rc = cmd_predict(load_config(args, true), params_path, rx_path);
        else if (*fetch) {
            if (tiles.empty() && bbox.empty())
                throw sylva::error("fetch-dem needs --tiles or --bbox");
            rc = cmd_fetch_dem(load_config(args, false), url_template, tiles, zoom, bbox, dest, retries);
        } else if (*synth) {
            rc = cmd_synth(load_config(args, false), seed, records, sigma);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        rc = 1;
    }
    std::cerr << "warnings: " << sylva::warning_count() << "\n";
    return rc;
}
