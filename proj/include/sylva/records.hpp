// Copyright (c) 2026 the sylva authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SYLVA_RECORDS_HPP
#define SYLVA_RECORDS_HPP

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "sylva/core.hpp"

namespace sylva {

/// One labeled tree trunk, modeled as a vertical line at (easting, northing).
struct Trunk {
    double easting = 0.0;
    double northing = 0.0;
};

inline bool operator==(const Trunk& a, const Trunk& b) {
    return a.easting == b.easting && a.northing == b.northing;
}

/// Trunk inventory. Duplicates are allowed (clustered trees).
struct TrunkSet {
    std::vector<Trunk> trunks;
};

/// One receiver location with its measured basic transmission loss.
struct MeasurementRecord {
    std::string track_id;
    Point3 position;  // easting, northing, altitude [m]
    double path_loss_db = 0.0;
};

inline bool operator==(const MeasurementRecord& a, const MeasurementRecord& b) {
    return a.track_id == b.track_id && a.position.x == b.position.x && a.position.y == b.position.y &&
           a.position.z == b.position.z && a.path_loss_db == b.path_loss_db;
}

/// Receiver location without a measurement (forward prediction input).
struct RxRecord {
    std::string track_id;
    Point3 position;
};

// ---------------------------------------------------------------------------
// CSV plumbing. The formats are small and fixed, so this is a plain splitter:
// no quoting, no embedded commas.

namespace detail {

inline std::vector<std::string_view> split_csv_line(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return out;
}

/// Iterates lines of `text`, calling row_fn(line_no, fields) per non-empty
/// data row after validating the header.
template <typename RowFn>
void for_each_csv_row(std::string_view text, std::string_view expected_header, RowFn&& row_fn) {
    std::size_t pos = 0;
    std::size_t line_no = 0;
    bool saw_header = false;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (!saw_header) {
            if (line != expected_header)
                throw error("line 1: expected header '" + std::string(expected_header) + "'");
            saw_header = true;
        } else if (!line.empty()) {
            row_fn(line_no, split_csv_line(line));
        }
        if (end == text.size()) break;
    }
    if (!saw_header)
        throw error("line 1: expected header '" + std::string(expected_header) + "'");
}

inline double parse_field(std::string_view field, std::size_t line_no, const char* column) {
    double v = 0.0;
    if (!parse_double(field, v) || !std::isfinite(v))
        throw error("line " + std::to_string(line_no) + ": non-finite or non-numeric value for " +
                    std::string(column));
    return v;
}

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw error("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void spill(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw error("cannot write file: " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out)
        throw error("write failed: " + path);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// trunks.csv: header `easting_m,northing_m`, one trunk per row.

inline constexpr std::string_view trunks_csv_header = "easting_m,northing_m";

inline TrunkSet parse_trunks_csv(std::string_view text) {
    TrunkSet set;
    detail::for_each_csv_row(text, trunks_csv_header, [&](std::size_t line_no, const auto& fields) {
        if (fields.size() != 2)
            throw error("line " + std::to_string(line_no) + ": expected 2 columns, got " +
                        std::to_string(fields.size()));
        Trunk t;
        t.easting = detail::parse_field(fields[0], line_no, "easting_m");
        t.northing = detail::parse_field(fields[1], line_no, "northing_m");
        set.trunks.push_back(t);
    });
    return set;
}

inline std::string write_trunks_csv(const TrunkSet& set) {
    std::string out{trunks_csv_header};
    out += '\n';
    for (const Trunk& t : set.trunks)
        out += format_double(t.easting) + "," + format_double(t.northing) + "\n";
    return out;
}

inline TrunkSet load_trunks(const std::string& path) {
    try {
        return parse_trunks_csv(detail::slurp(path));
    } catch (const error& e) {
        throw error(path + ": " + e.what());
    }
}

// ---------------------------------------------------------------------------
// measurements.csv: header `track_id,easting_m,northing_m,altitude_m,path_loss_db`.

inline constexpr std::string_view measurements_csv_header =
    "track_id,easting_m,northing_m,altitude_m,path_loss_db";

inline std::vector<MeasurementRecord> parse_measurements_csv(std::string_view text) {
    std::vector<MeasurementRecord> records;
    detail::for_each_csv_row(text, measurements_csv_header, [&](std::size_t line_no, const auto& fields) {
        if (fields.size() != 5)
            throw error("line " + std::to_string(line_no) + ": expected 5 columns, got " +
                        std::to_string(fields.size()));
        MeasurementRecord r;
        r.track_id = std::string(fields[0]);
        if (r.track_id.empty())
            throw error("line " + std::to_string(line_no) + ": empty track_id");
        r.position.x = detail::parse_field(fields[1], line_no, "easting_m");
        r.position.y = detail::parse_field(fields[2], line_no, "northing_m");
        r.position.z = detail::parse_field(fields[3], line_no, "altitude_m");
        r.path_loss_db = detail::parse_field(fields[4], line_no, "path_loss_db");
        if (!(r.path_loss_db > 0.0))
            throw error("line " + std::to_string(line_no) + ": path_loss_db must be positive");
        records.push_back(std::move(r));
    });
    return records;
}

inline std::string write_measurements_csv(const std::vector<MeasurementRecord>& records) {
    std::string out{measurements_csv_header};
    out += '\n';
    for (const MeasurementRecord& r : records) {
        out += r.track_id;
        out += ',' + format_double(r.position.x) + ',' + format_double(r.position.y) + ',' +
               format_double(r.position.z) + ',' + format_double(r.path_loss_db) + '\n';
    }
    return out;
}

inline std::vector<MeasurementRecord> load_measurements(const std::string& path) {
    try {
        return parse_measurements_csv(detail::slurp(path));
    } catch (const error& e) {
        throw error(path + ": " + e.what());
    }
}

// ---------------------------------------------------------------------------
// rx.csv: receiver list for forward prediction.

inline constexpr std::string_view rx_csv_header = "track_id,easting_m,northing_m,altitude_m";

inline std::vector<RxRecord> parse_rx_csv(std::string_view text) {
    std::vector<RxRecord> records;
    detail::for_each_csv_row(text, rx_csv_header, [&](std::size_t line_no, const auto& fields) {
        if (fields.size() != 4)
            throw error("line " + std::to_string(line_no) + ": expected 4 columns, got " +
                        std::to_string(fields.size()));
        RxRecord r;
        r.track_id = std::string(fields[0]);
        if (r.track_id.empty())
            throw error("line " + std::to_string(line_no) + ": empty track_id");
        r.position.x = detail::parse_field(fields[1], line_no, "easting_m");
        r.position.y = detail::parse_field(fields[2], line_no, "northing_m");
        r.position.z = detail::parse_field(fields[3], line_no, "altitude_m");
        records.push_back(std::move(r));
    });
    return records;
}

inline std::vector<RxRecord> load_rx_list(const std::string& path) {
    try {
        return parse_rx_csv(detail::slurp(path));
    } catch (const error& e) {
        throw error(path + ": " + e.what());
    }
}

}  // namespace sylva

#endif  // SYLVA_RECORDS_HPP
