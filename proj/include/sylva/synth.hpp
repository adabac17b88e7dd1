// Copyright (c) 2026 the sylva authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SYLVA_SYNTH_HPP
#define SYLVA_SYNTH_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "sylva/config.hpp"
#include "sylva/core.hpp"
#include "sylva/geometry.hpp"
#include "sylva/models.hpp"
#include "sylva/raster.hpp"
#include "sylva/records.hpp"
#include "sylva/serialize.hpp"

namespace sylva {

namespace detail {

/// Self-contained splitmix64 generator so synthetic fixtures are reproducible
/// regardless of standard-library distribution implementations.
class SynthRng {
  public:
    explicit SynthRng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller; one draw consumed per call pair.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        constexpr double two_pi = 6.283185307179586476925286766559;
        spare_ = r * std::sin(two_pi * u2);
        have_spare_ = true;
        return r * std::cos(two_pi * u2);
    }

  private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace detail

/// Shape of a generated forest scene. Defaults give a 220 m x 160 m flat site
/// with a woodland east of x = 35 m and the transmitter 15 m west of its edge.
struct SynthSpec {
    std::uint64_t seed = 28;
    std::size_t n_records = 1000;
    std::size_t n_cols = 220;
    std::size_t n_rows = 160;
    double cell_size = 1.0;
    double x_origin = 500000.0;
    double y_origin = 4420000.0;
    double ground_elevation_m = 1600.0;
    double forest_edge_x_m = 35.0;   // east of x_origin
    double tx_height_m = 3.0;
    double rx_height_m = 1.5;
    std::size_t n_blobs = 90;
    double blob_radius_min_m = 4.0;
    double blob_radius_max_m = 14.0;
    double blob_height_min_m = 4.0;
    double blob_height_max_m = 12.0;
    std::size_t n_trunks = 350;
    ModelParams generator = BParams{38.04, 4.47};
    double noise_sigma_db = 2.0;
    double carrier_frequency_ghz = 28.0;
    double woodland_edge_offset_m = 15.0;
    double foliage_height_threshold_m = 2.0;
    std::size_t samples_per_cell = 4;

    void validate() const {
        if (n_cols == 0 || n_rows == 0)
            throw error("synth: grid dimensions must be positive");
        if (!(cell_size > 0.0))
            throw error("synth: cell size must be positive");
        if (n_records == 0)
            throw error("synth: need at least one record");
        if (!(noise_sigma_db >= 0.0))
            throw error("synth: noise sigma must be non-negative");
        if (!(blob_radius_min_m > 0.0) || blob_radius_min_m > blob_radius_max_m)
            throw error("synth: blob radius range invalid");
    }
};

struct SynthScene {
    RasterGrid terrain;
    RasterGrid lidar;
    RasterGrid mask;
    TrunkSet trunks;
    std::vector<MeasurementRecord> measurements;
    SiteGeometry geometry;
    ModelParams truth;
    double noise_sigma_db = 0.0;
};

/// Builds a reproducible synthetic forest: flat terrain, paraboloid canopy
/// blobs, trunks rejection-sampled inside the canopy, and measurements
/// generated from the configured model through the real feature pipeline
/// plus Gaussian noise.
inline SynthScene generate_scene(const SynthSpec& spec) {
    spec.validate();
    detail::SynthRng rng(spec.seed);

    SynthScene scene;
    RasterGrid& terrain = scene.terrain;
    terrain.x_origin = spec.x_origin;
    terrain.y_origin = spec.y_origin;
    terrain.cell_size = spec.cell_size;
    terrain.n_cols = spec.n_cols;
    terrain.n_rows = spec.n_rows;
    terrain.nodata = -9999.0;
    terrain.values.assign(spec.n_cols * spec.n_rows, spec.ground_elevation_m);

    const double width = terrain.width_m();
    const double height = terrain.height_m();

    struct Blob {
        double x, y, radius, height;
    };
    std::vector<Blob> blobs;
    blobs.reserve(spec.n_blobs);
    for (std::size_t i = 0; i < spec.n_blobs; ++i) {
        Blob b;
        b.x = spec.x_origin + rng.uniform(spec.forest_edge_x_m, width);
        b.y = spec.y_origin + rng.uniform(0.0, height);
        b.radius = rng.uniform(spec.blob_radius_min_m, spec.blob_radius_max_m);
        b.height = rng.uniform(spec.blob_height_min_m, spec.blob_height_max_m);
        blobs.push_back(b);
    }

    RasterGrid& lidar = scene.lidar;
    lidar = terrain;
    for (std::size_t row = 0; row < lidar.n_rows; ++row) {
        for (std::size_t col = 0; col < lidar.n_cols; ++col) {
            const double cx = lidar.cell_center_x(col);
            const double cy = lidar.cell_center_y(row);
            double canopy = 0.0;
            for (const Blob& b : blobs) {
                const double dx = cx - b.x;
                const double dy = cy - b.y;
                const double d2 = dx * dx + dy * dy;
                if (d2 >= b.radius * b.radius) continue;
                canopy = std::max(canopy, b.height * (1.0 - d2 / (b.radius * b.radius)));
            }
            lidar.values[lidar.index(row, col)] = spec.ground_elevation_m + canopy;
        }
    }

    scene.mask = extract_foliage_mask(lidar, terrain, spec.foliage_height_threshold_m).mask;

    // Trunks live under the canopy.
    scene.trunks.trunks.reserve(spec.n_trunks);
    std::size_t guard = 0;
    while (scene.trunks.trunks.size() < spec.n_trunks) {
        if (++guard > spec.n_trunks * 1000)
            throw error("synth: canopy too sparse to place trunks");
        const double x = spec.x_origin + rng.uniform(0.0, width);
        const double y = spec.y_origin + rng.uniform(0.0, height);
        std::size_t row = 0, col = 0;
        if (!scene.mask.locate(x, y, row, col)) continue;
        if (scene.mask.values[scene.mask.index(row, col)] != 1.0) continue;
        scene.trunks.trunks.push_back({x, y});
    }

    scene.geometry.tx_position = {spec.x_origin + spec.forest_edge_x_m - spec.woodland_edge_offset_m,
                                  spec.y_origin + height / 2.0,
                                  spec.ground_elevation_m + spec.tx_height_m};
    scene.geometry.carrier_frequency_ghz = spec.carrier_frequency_ghz;
    scene.geometry.woodland_edge_offset_m = spec.woodland_edge_offset_m;
    scene.geometry.validate();

    scene.truth = spec.generator;
    validate_params(scene.truth);
    scene.noise_sigma_db = spec.noise_sigma_db;

    scene.measurements.reserve(spec.n_records);
    const PredictOptions predict_options{WmedMode::extrapolate, CModelMode::continuous};
    std::size_t placed = 0;
    while (placed < spec.n_records) {
        Point3 rx{spec.x_origin + rng.uniform(1.0, width - 1.0),
                  spec.y_origin + rng.uniform(1.0, height - 1.0),
                  spec.ground_elevation_m + spec.rx_height_m};
        if (distance_3d(scene.geometry.tx_position, rx) < 2.0) continue;

        const SiteFeatures features =
            compute_features(scene.geometry, rx, scene.mask, scene.trunks, spec.samples_per_cell);
        const Prediction p =
            predict(features, scene.truth, spec.carrier_frequency_ghz, predict_options);
        const double noise = spec.noise_sigma_db > 0.0 ? spec.noise_sigma_db * rng.normal() : 0.0;

        MeasurementRecord record;
        record.track_id = "T" + std::to_string(placed % 4 + 1);
        record.position = rx;
        record.path_loss_db = p.total_db + noise;
        scene.measurements.push_back(record);
        ++placed;
    }
    return scene;
}

/// File names written by write_scene under the output directory.
struct ScenePaths {
    std::string terrain = "terrain.asc";
    std::string lidar = "lidar.asc";
    std::string trunks = "trunks.csv";
    std::string measurements = "measurements.csv";
    std::string truth = "truth.json";
    std::string config = "config.json";
};

/// Writes the scene inputs plus a ready-to-run config document and the
/// generating truth parameters.
inline ProjectConfig write_scene(const SynthScene& scene, const std::string& directory,
                                 const SynthSpec& spec, const ScenePaths& names = {}) {
    std::filesystem::create_directories(directory);
    const std::filesystem::path dir(directory);
    save_ascii_grid(scene.terrain, (dir / names.terrain).string());
    save_ascii_grid(scene.lidar, (dir / names.lidar).string());
    detail::spill((dir / names.trunks).string(), write_trunks_csv(scene.trunks));
    detail::spill((dir / names.measurements).string(), write_measurements_csv(scene.measurements));

    nlohmann::json truth = params_to_json(scene.truth);
    truth["noise_sigma_db"] = scene.noise_sigma_db;
    truth["seed"] = spec.seed;
    detail::spill((dir / names.truth).string(), truth.dump(2) + "\n");

    ProjectConfig config;
    config.terrain_grid = names.terrain;
    config.lidar_grid = names.lidar;
    config.trunks_csv = names.trunks;
    config.measurements_csv = names.measurements;
    config.output_dir = ".";
    config.tx_position = scene.geometry.tx_position;
    config.carrier_frequency_ghz = spec.carrier_frequency_ghz;
    config.woodland_edge_offset_m = spec.woodland_edge_offset_m;
    config.foliage_height_threshold_m = spec.foliage_height_threshold_m;
    config.samples_per_cell = spec.samples_per_cell;
    save_project_config((dir / names.config).string(), config);

    ProjectConfig resolved = config;
    resolved.terrain_grid = (dir / names.terrain).string();
    resolved.lidar_grid = (dir / names.lidar).string();
    resolved.trunks_csv = (dir / names.trunks).string();
    resolved.measurements_csv = (dir / names.measurements).string();
    resolved.output_dir = directory;
    return resolved;
}

}  // namespace sylva

#endif  // SYLVA_SYNTH_HPP
