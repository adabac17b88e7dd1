// Copyright (c) 2026 the sylva authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SYLVA_GEOMETRY_HPP
#define SYLVA_GEOMETRY_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "sylva/core.hpp"
#include "sylva/raster.hpp"
#include "sylva/records.hpp"

namespace sylva {

/// Transmitter site description shared by every receiver location.
struct SiteGeometry {
    Point3 tx_position;
    double carrier_frequency_ghz = 28.0;
    double woodland_edge_offset_m = 15.0;  // TX stand-off from the forest edge

    void validate() const {
        if (!(carrier_frequency_ghz > 0.0))
            throw error("site geometry: carrier frequency must be positive");
        if (woodland_edge_offset_m < 0.0)
            throw error("site geometry: woodland edge offset must be nonnegative");
        if (!finite(tx_position))
            throw error("site geometry: TX position must be finite");
    }
};

/// Per-receiver blockage descriptors.
struct SiteFeatures {
    double distance_3d = 0.0;     // d   [m]
    double woodland_depth = 0.0;  // d_w [m]
    double foliage_depth = 0.0;   // d_f [m]
    double foliage_area = 0.0;    // a_f [m^2]
    std::size_t trunk_count = 0;  // N
};

/// Free-space wavelength in meters for a carrier in GHz.
inline double wavelength_m(double f_c_ghz) {
    if (!(f_c_ghz > 0.0))
        throw error("wavelength: frequency must be positive");
    return speed_of_light_m_s / (f_c_ghz * 1e9);
}

/// First Fresnel zone radius at distances d1 and d2 from the endpoints:
/// r = sqrt(lambda * d1 * d2 / (d1 + d2)). Zero at either endpoint.
inline double fresnel_radius_m(double d1, double d2, double f_c_ghz) {
    if (d1 < 0.0 || d2 < 0.0)
        throw error("fresnel_radius: distances must be nonnegative");
    if (d1 + d2 <= 0.0)
        throw error("fresnel_radius: both endpoint distances are zero");
    return std::sqrt(wavelength_m(f_c_ghz) * (d1 * d2) / (d1 + d2));
}

inline double distance_3d(const Point3& a, const Point3& b) {
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    const double dz = b.z - a.z;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

/// Path length inside the woodland: 3D distance minus the edge offset,
/// clipped at zero.
inline double woodland_depth(double distance_3d_m, double edge_offset_m) {
    if (distance_3d_m < 0.0 || edge_offset_m < 0.0)
        throw error("woodland_depth: inputs must be nonnegative");
    return std::max(0.0, distance_3d_m - edge_offset_m);
}

namespace detail {

/// Along-path fraction and lateral distance of a horizontal point relative
/// to the TX-RX segment projected to the ground plane.
struct PathStation {
    double fraction;  // 0 at TX, 1 at RX
    double lateral;   // horizontal distance to the projected segment line [m]
};

inline PathStation horizontal_station(const Point3& tx, const Point3& rx, double px, double py) {
    const double ux = rx.x - tx.x;
    const double uy = rx.y - tx.y;
    const double len_sq = ux * ux + uy * uy;
    const double wx = px - tx.x;
    const double wy = py - tx.y;
    if (len_sq == 0.0) {
        // Vertical link: the ground projection collapses to one point.
        return {0.5, std::sqrt(wx * wx + wy * wy)};
    }
    const double fraction = (wx * ux + wy * uy) / len_sq;
    const double cross = wx * uy - wy * ux;
    return {fraction, std::abs(cross) / std::sqrt(len_sq)};
}

inline double horizontal_length(const Point3& tx, const Point3& rx) {
    const double ux = rx.x - tx.x;
    const double uy = rx.y - tx.y;
    return std::sqrt(ux * ux + uy * uy);
}

}  // namespace detail

/// Number of trunks whose vertical line passes inside the first Fresnel
/// ellipsoid. Each trunk is tested at the station of its perpendicular foot:
/// counted iff its lateral offset is strictly less than the Fresnel radius
/// there and the foot lies strictly between the endpoints.
inline std::size_t count_trunks_in_fresnel(const Point3& tx, const Point3& rx, const TrunkSet& trunks,
                                           double f_c_ghz) {
    const double d = distance_3d(tx, rx);
    if (!(d > 0.0))
        throw error("count_trunks_in_fresnel: TX and RX coincide");
    std::size_t count = 0;
    for (const Trunk& t : trunks.trunks) {
        const auto st = detail::horizontal_station(tx, rx, t.easting, t.northing);
        if (st.fraction <= 0.0 || st.fraction >= 1.0)
            continue;
        const double d1 = st.fraction * d;
        if (st.lateral < fresnel_radius_m(d1, d - d1, f_c_ghz))
            ++count;
    }
    return count;
}

/// Foliage depth along the line-of-sight path: the fraction of path samples
/// that land on foliage cells, times the 3D TX-RX distance. Samples are the
/// midpoints of equal subsegments spaced cell_size / samples_per_cell along
/// the horizontal projection; samples off the grid count as clear.
inline double foliage_depth(const Point3& tx, const Point3& rx, const RasterGrid& mask,
                            std::size_t samples_per_cell) {
    const double d = distance_3d(tx, rx);
    if (!(d > 0.0))
        throw error("foliage_depth: zero-length path");
    if (samples_per_cell < 2)
        throw error("foliage_depth: samples_per_cell must be at least 2");
    mask.validate();

    const double horiz = detail::horizontal_length(tx, rx);
    const double spacing = mask.cell_size / static_cast<double>(samples_per_cell);
    const std::size_t n = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(horiz / spacing)));

    std::size_t foliage_hits = 0;
    std::size_t off_grid = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double s = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
        const double px = tx.x + s * (rx.x - tx.x);
        const double py = tx.y + s * (rx.y - tx.y);
        std::size_t row = 0, col = 0;
        if (!mask.locate(px, py, row, col)) {
            ++off_grid;
            continue;
        }
        if (mask.at(row, col) == 1.0)
            ++foliage_hits;
    }
    if (off_grid > 0)
        warn("path-coverage", std::to_string(off_grid) + " of " + std::to_string(n) +
                                  " path samples fall outside the foliage mask; treated as clear");
    return static_cast<double>(foliage_hits) / static_cast<double>(n) * d;
}

/// Foliage area inside the first Fresnel zone footprint: the ground-plane
/// ellipse with foci at the projected endpoints and half-width equal to the
/// Fresnel radius at each station, rasterized by cell-center inclusion.
inline double foliage_area(const Point3& tx, const Point3& rx, const RasterGrid& mask, double f_c_ghz) {
    const double d = distance_3d(tx, rx);
    if (!(d > 0.0))
        throw error("foliage_area: zero-length path");
    mask.validate();

    const double horiz = detail::horizontal_length(tx, rx);
    if (horiz == 0.0)
        return 0.0;  // footprint degenerates to a point

    const double r_max = fresnel_radius_m(d / 2.0, d / 2.0, f_c_ghz);
    const double x_lo = std::min(tx.x, rx.x) - r_max;
    const double x_hi = std::max(tx.x, rx.x) + r_max;
    const double y_lo = std::min(tx.y, rx.y) - r_max;
    const double y_hi = std::max(tx.y, rx.y) + r_max;

    const auto col_of = [&](double x) { return std::floor((x - mask.x_origin) / mask.cell_size); };
    const auto row_of = [&](double y) { return std::floor((y - mask.y_origin) / mask.cell_size); };
    const double c0 = std::max(0.0, col_of(x_lo));
    const double c1 = std::min(static_cast<double>(mask.n_cols) - 1.0, col_of(x_hi));
    const double r0 = std::max(0.0, row_of(y_lo));
    const double r1 = std::min(static_cast<double>(mask.n_rows) - 1.0, row_of(y_hi));
    if (c1 < c0 || r1 < r0)
        return 0.0;  // footprint entirely off the grid

    std::size_t cells = 0;
    for (std::size_t row = static_cast<std::size_t>(r0); row <= static_cast<std::size_t>(r1); ++row) {
        const double cy = mask.cell_center_y(row);
        for (std::size_t col = static_cast<std::size_t>(c0); col <= static_cast<std::size_t>(c1); ++col) {
            if (mask.at(row, col) != 1.0)
                continue;
            const auto st = detail::horizontal_station(tx, rx, mask.cell_center_x(col), cy);
            if (st.fraction <= 0.0 || st.fraction >= 1.0)
                continue;
            const double d1 = st.fraction * d;
            if (st.lateral < fresnel_radius_m(d1, d - d1, f_c_ghz))
                ++cells;
        }
    }
    return static_cast<double>(cells) * mask.cell_size * mask.cell_size;
}

/// All per-receiver blockage features in one record.
inline SiteFeatures compute_features(const SiteGeometry& geometry, const Point3& rx, const RasterGrid& mask,
                                     const TrunkSet& trunks, std::size_t samples_per_cell = 4) {
    geometry.validate();
    if (!finite(rx))
        throw error("compute_features: RX position must be finite");
    SiteFeatures f;
    f.distance_3d = distance_3d(geometry.tx_position, rx);
    if (!(f.distance_3d > 0.0))
        throw error("compute_features: RX coincides with TX");
    f.woodland_depth = woodland_depth(f.distance_3d, geometry.woodland_edge_offset_m);
    f.trunk_count = count_trunks_in_fresnel(geometry.tx_position, rx, trunks, geometry.carrier_frequency_ghz);
    f.foliage_depth = foliage_depth(geometry.tx_position, rx, mask, samples_per_cell);
    f.foliage_area = foliage_area(geometry.tx_position, rx, mask, geometry.carrier_frequency_ghz);
    return f;
}

// ---------------------------------------------------------------------------
// features.csv: one row per measurement, measurement columns followed by the
// computed features, 4 decimal places.

/// A measurement joined with its computed blockage features.
struct FeatureRecord {
    std::string track_id;
    Point3 position;
    double path_loss_db = 0.0;
    SiteFeatures features;
};

inline constexpr std::string_view features_csv_header =
    "track_id,easting_m,northing_m,altitude_m,path_loss_db,d_m,dw_m,df_m,af_m2,n_trunks";

inline std::string write_features_csv(const std::vector<FeatureRecord>& records) {
    std::string out{features_csv_header};
    out += '\n';
    for (const FeatureRecord& r : records) {
        out += r.track_id;
        out += ',' + format_fixed(r.position.x, 4) + ',' + format_fixed(r.position.y, 4) + ',' +
               format_fixed(r.position.z, 4) + ',' + format_fixed(r.path_loss_db, 4) + ',' +
               format_fixed(r.features.distance_3d, 4) + ',' + format_fixed(r.features.woodland_depth, 4) +
               ',' + format_fixed(r.features.foliage_depth, 4) + ',' + format_fixed(r.features.foliage_area, 4) +
               ',' + std::to_string(r.features.trunk_count) + '\n';
    }
    return out;
}

/// Parses features.csv. Rows with unparseable numerics are accepted as NaN
/// fields (failed feature computations are exported that way); consumers
/// decide whether to drop them.
inline std::vector<FeatureRecord> parse_features_csv(std::string_view text) {
    std::vector<FeatureRecord> records;
    detail::for_each_csv_row(text, features_csv_header, [&](std::size_t line_no, const auto& fields) {
        if (fields.size() != 10)
            throw error("line " + std::to_string(line_no) + ": expected 10 columns, got " +
                        std::to_string(fields.size()));
        FeatureRecord r;
        r.track_id = std::string(fields[0]);
        if (r.track_id.empty())
            throw error("line " + std::to_string(line_no) + ": empty track_id");
        auto lenient = [&](std::string_view field) {
            double v = std::numeric_limits<double>::quiet_NaN();
            parse_double(field, v);
            return v;
        };
        r.position.x = lenient(fields[1]);
        r.position.y = lenient(fields[2]);
        r.position.z = lenient(fields[3]);
        r.path_loss_db = lenient(fields[4]);
        r.features.distance_3d = lenient(fields[5]);
        r.features.woodland_depth = lenient(fields[6]);
        r.features.foliage_depth = lenient(fields[7]);
        r.features.foliage_area = lenient(fields[8]);
        long n = 0;
        r.features.trunk_count = parse_long(fields[9], n) && n >= 0 ? static_cast<std::size_t>(n) : 0;
        records.push_back(std::move(r));
    });
    return records;
}

inline std::vector<FeatureRecord> load_features(const std::string& path) {
    try {
        return parse_features_csv(detail::slurp(path));
    } catch (const error& e) {
        throw error(path + ": " + e.what());
    }
}

inline void save_features(const std::vector<FeatureRecord>& records, const std::string& path) {
    detail::spill(path, write_features_csv(records));
}

}  // namespace sylva

#endif  // SYLVA_GEOMETRY_HPP
