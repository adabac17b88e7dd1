// Copyright (c) 2026 the sylva authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SYLVA_RASTER_HPP
#define SYLVA_RASTER_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "sylva/core.hpp"

namespace sylva {

/// Georeferenced 2D scalar field with square cells.
///
/// Storage is row-major, bottom-up: row 0 is the southernmost row, so the
/// center of cell (row, col) sits at
///   x = x_origin + (col + 0.5) * cell_size
///   y = y_origin + (row + 0.5) * cell_size
/// The on-disk ASCII format lists rows north to south; parse/write flip
/// between the two orderings.
struct RasterGrid {
    double x_origin = 0.0;   // easting of the lower-left corner [m]
    double y_origin = 0.0;   // northing of the lower-left corner [m]
    double cell_size = 1.0;  // [m], > 0, square cells
    std::size_t n_cols = 0;
    std::size_t n_rows = 0;
    double nodata = -9999.0;
    std::vector<double> values;  // n_rows * n_cols entries

    std::size_t index(std::size_t row, std::size_t col) const { return row * n_cols + col; }
    double at(std::size_t row, std::size_t col) const { return values[index(row, col)]; }
    double& at(std::size_t row, std::size_t col) { return values[index(row, col)]; }

    bool is_nodata(double v) const { return v == nodata; }

    double cell_center_x(std::size_t col) const { return x_origin + (static_cast<double>(col) + 0.5) * cell_size; }
    double cell_center_y(std::size_t row) const { return y_origin + (static_cast<double>(row) + 0.5) * cell_size; }

    double width_m() const { return static_cast<double>(n_cols) * cell_size; }
    double height_m() const { return static_cast<double>(n_rows) * cell_size; }

    /// Cell indices of the point (x, y), or false when outside the grid.
    bool locate(double x, double y, std::size_t& row, std::size_t& col) const {
        const double fx = std::floor((x - x_origin) / cell_size);
        const double fy = std::floor((y - y_origin) / cell_size);
        if (fx < 0.0 || fy < 0.0 || fx >= static_cast<double>(n_cols) || fy >= static_cast<double>(n_rows))
            return false;
        col = static_cast<std::size_t>(fx);
        row = static_cast<std::size_t>(fy);
        return true;
    }

    void validate() const {
        if (n_cols < 1 || n_rows < 1)
            throw error("raster: n_cols and n_rows must be at least 1");
        if (!(cell_size > 0.0) || !std::isfinite(cell_size))
            throw error("raster: cell_size must be positive");
        if (!std::isfinite(x_origin) || !std::isfinite(y_origin) || !std::isfinite(nodata))
            throw error("raster: origin and nodata must be finite");
        if (values.size() != n_cols * n_rows)
            throw error("raster: values length does not match n_rows * n_cols");
    }
};

inline bool operator==(const RasterGrid& a, const RasterGrid& b) {
    return a.x_origin == b.x_origin && a.y_origin == b.y_origin && a.cell_size == b.cell_size &&
           a.n_cols == b.n_cols && a.n_rows == b.n_rows && a.nodata == b.nodata && a.values == b.values;
}

/// True when every non-nodata cell is exactly 0 or 1.
inline bool is_binary_mask(const RasterGrid& g) {
    for (double v : g.values)
        if (!g.is_nodata(v) && v != 0.0 && v != 1.0)
            return false;
    return true;
}

// ---------------------------------------------------------------------------
// ASCII grid I/O. Six header lines (ncols, nrows, xllcorner, yllcorner,
// cellsize, NODATA_value) followed by n_rows whitespace-separated rows,
// top row northernmost.

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

inline bool iequals(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::tolower(static_cast<unsigned char>(a[i])) != std::tolower(static_cast<unsigned char>(b[i])))
            return false;
    return true;
}

}  // namespace detail

inline RasterGrid parse_ascii_grid(std::string_view text) {
    RasterGrid grid;
    std::size_t line_no = 0;
    std::size_t pos = 0;

    auto next_line = [&](std::string_view& line) -> bool {
        if (pos >= text.size()) return false;
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        return true;
    };

    const char* header_keys[6] = {"ncols", "nrows", "xllcorner", "yllcorner", "cellsize", "NODATA_value"};
    double header_vals[6] = {0, 0, 0, 0, 0, 0};
    for (int k = 0; k < 6; ++k) {
        std::string_view line;
        if (!next_line(line))
            throw error("line " + std::to_string(line_no + 1) + ": missing header line '" + header_keys[k] + "'");
        auto tokens = detail::split_ws(line);
        if (tokens.size() != 2 || !detail::iequals(tokens[0], header_keys[k]))
            throw error("line " + std::to_string(line_no) + ": expected header '" + header_keys[k] + " <value>'");
        if (!parse_double(tokens[1], header_vals[k]) || !std::isfinite(header_vals[k]))
            throw error("line " + std::to_string(line_no) + ": non-numeric value for '" + header_keys[k] + "'");
    }
    if (header_vals[0] < 1.0 || header_vals[0] != std::floor(header_vals[0]))
        throw error("line 1: ncols must be a positive integer");
    if (header_vals[1] < 1.0 || header_vals[1] != std::floor(header_vals[1]))
        throw error("line 2: nrows must be a positive integer");
    if (!(header_vals[4] > 0.0))
        throw error("line 5: cellsize must be positive");

    grid.n_cols = static_cast<std::size_t>(header_vals[0]);
    grid.n_rows = static_cast<std::size_t>(header_vals[1]);
    grid.x_origin = header_vals[2];
    grid.y_origin = header_vals[3];
    grid.cell_size = header_vals[4];
    grid.nodata = header_vals[5];
    grid.values.assign(grid.n_rows * grid.n_cols, grid.nodata);

    // File rows run north to south; storage row 0 is the southern edge.
    for (std::size_t file_row = 0; file_row < grid.n_rows; ++file_row) {
        std::string_view line;
        if (!next_line(line))
            throw error("line " + std::to_string(line_no + 1) + ": expected " + std::to_string(grid.n_rows) +
                        " data rows, got " + std::to_string(file_row));
        auto tokens = detail::split_ws(line);
        if (tokens.size() != grid.n_cols)
            throw error("line " + std::to_string(line_no) + ": expected " + std::to_string(grid.n_cols) +
                        " values, got " + std::to_string(tokens.size()));
        const std::size_t row = grid.n_rows - 1 - file_row;
        for (std::size_t col = 0; col < grid.n_cols; ++col) {
            double v = 0.0;
            if (!parse_double(tokens[col], v) || !std::isfinite(v))
                throw error("line " + std::to_string(line_no) + ": non-numeric cell value '" +
                            std::string(tokens[col]) + "'");
            grid.at(row, col) = v;
        }
    }

    // Anything after the data block other than whitespace is a format error.
    std::string_view line;
    while (next_line(line)) {
        if (!detail::split_ws(line).empty())
            throw error("line " + std::to_string(line_no) + ": unexpected trailing content");
    }

    grid.validate();
    return grid;
}

inline std::string write_ascii_grid(const RasterGrid& grid) {
    grid.validate();
    std::string out;
    out.reserve(grid.values.size() * 8 + 128);
    out += "ncols " + std::to_string(grid.n_cols) + "\n";
    out += "nrows " + std::to_string(grid.n_rows) + "\n";
    out += "xllcorner " + format_double(grid.x_origin) + "\n";
    out += "yllcorner " + format_double(grid.y_origin) + "\n";
    out += "cellsize " + format_double(grid.cell_size) + "\n";
    out += "NODATA_value " + format_double(grid.nodata) + "\n";
    for (std::size_t file_row = 0; file_row < grid.n_rows; ++file_row) {
        const std::size_t row = grid.n_rows - 1 - file_row;
        for (std::size_t col = 0; col < grid.n_cols; ++col) {
            if (col) out += ' ';
            out += format_double(grid.at(row, col));
        }
        out += '\n';
    }
    return out;
}

inline RasterGrid load_ascii_grid(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw error("cannot open raster file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_ascii_grid(buf.str());
    } catch (const error& e) {
        throw error(path + ": " + e.what());
    }
}

inline void save_ascii_grid(const RasterGrid& grid, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw error("cannot write raster file: " + path);
    out << write_ascii_grid(grid);
    if (!out)
        throw error("write failed: " + path);
}

// ---------------------------------------------------------------------------

/// True iff both grids share origin, cell size, and dimensions (1e-6 m).
inline bool check_alignment(const RasterGrid& a, const RasterGrid& b) {
    constexpr double tol = 1e-6;
    return std::abs(a.x_origin - b.x_origin) <= tol && std::abs(a.y_origin - b.y_origin) <= tol &&
           std::abs(a.cell_size - b.cell_size) <= tol && a.n_cols == b.n_cols && a.n_rows == b.n_rows;
}

/// Nearest-neighbor resampling of src onto the template's grid spec.
/// Template cells whose centers fall outside src become nodata.
inline RasterGrid resample_nearest(const RasterGrid& src, const RasterGrid& templ) {
    src.validate();
    templ.validate();

    const bool overlap = src.x_origin < templ.x_origin + templ.width_m() &&
                         templ.x_origin < src.x_origin + src.width_m() &&
                         src.y_origin < templ.y_origin + templ.height_m() &&
                         templ.y_origin < src.y_origin + src.height_m();
    if (!overlap)
        throw error("resample_nearest: grids do not overlap spatially");

    RasterGrid out;
    out.x_origin = templ.x_origin;
    out.y_origin = templ.y_origin;
    out.cell_size = templ.cell_size;
    out.n_cols = templ.n_cols;
    out.n_rows = templ.n_rows;
    out.nodata = src.nodata;
    out.values.assign(out.n_rows * out.n_cols, out.nodata);

    for (std::size_t row = 0; row < out.n_rows; ++row) {
        const double y = out.cell_center_y(row);
        for (std::size_t col = 0; col < out.n_cols; ++col) {
            std::size_t src_row = 0, src_col = 0;
            if (src.locate(out.cell_center_x(col), y, src_row, src_col))
                out.at(row, col) = src.at(src_row, src_col);
        }
    }
    return out;
}

/// Result of a mask extraction, with the count of cells forced clear
/// because either input lacked data there.
struct MaskExtraction {
    RasterGrid mask;
    std::size_t foliage_cells = 0;
    std::size_t nodata_cells = 0;
};

/// Binary foliage mask: 1 where (lidar - terrain) exceeds the threshold,
/// strictly, and both inputs carry data; 0 otherwise.
inline MaskExtraction extract_foliage_mask(const RasterGrid& lidar, const RasterGrid& terrain,
                                           double height_threshold) {
    lidar.validate();
    terrain.validate();
    if (!(height_threshold > 0.0))
        throw error("extract_foliage_mask: height_threshold must be positive");
    if (!check_alignment(lidar, terrain))
        throw error("extract_foliage_mask: grids are not aligned; resample one onto the other first "
                    "(resample_nearest)");

    MaskExtraction result;
    result.mask.x_origin = lidar.x_origin;
    result.mask.y_origin = lidar.y_origin;
    result.mask.cell_size = lidar.cell_size;
    result.mask.n_cols = lidar.n_cols;
    result.mask.n_rows = lidar.n_rows;
    result.mask.nodata = -9999.0;
    result.mask.values.assign(lidar.values.size(), 0.0);

    for (std::size_t i = 0; i < lidar.values.size(); ++i) {
        const double top = lidar.values[i];
        const double ground = terrain.values[i];
        if (lidar.is_nodata(top) || terrain.is_nodata(ground)) {
            ++result.nodata_cells;  // absent data never becomes foliage
            continue;
        }
        if (top - ground > height_threshold) {
            result.mask.values[i] = 1.0;
            ++result.foliage_cells;
        }
    }
    if (result.nodata_cells > 0)
        warn("mask-coverage", std::to_string(result.nodata_cells) +
                                  " cells lacked elevation data and were treated as clear");
    return result;
}

}  // namespace sylva

#endif  // SYLVA_RASTER_HPP
