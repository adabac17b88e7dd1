// Copyright (c) 2026 the sylva authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SYLVA_FETCH_HPP
#define SYLVA_FETCH_HPP

#include <atomic>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>

#include "sylva/core.hpp"

namespace sylva {

/// Inclusive tile index range at one zoom level.
struct TileRange {
    long x_min = 0;
    long x_max = 0;
    long y_min = 0;
    long y_max = 0;
    int zoom = 0;

    void validate() const {
        if (x_min > x_max || y_min > y_max)
            throw error("tile range: min indices must not exceed max indices");
    }
};

struct GeoBoundingBox {
    double x_min = 0.0;
    double y_min = 0.0;
    double x_max = 0.0;
    double y_max = 0.0;

    void validate() const {
        if (!(x_min < x_max) || !(y_min < y_max))
            throw error("bounding box: min coordinates must be below max coordinates");
    }
};

struct FetchOptions {
    std::size_t max_retries = 3;   // attempts per tile = 1 + max_retries
    std::size_t parallelism = 1;   // concurrent requests
};

struct FetchReport {
    std::vector<std::string> saved_paths;  // every tile, downloaded or already present
    std::size_t downloaded = 0;
    std::size_t skipped = 0;
};

namespace detail {

inline bool replace_all(std::string& text, std::string_view token, const std::string& value) {
    bool found = false;
    std::size_t pos = 0;
    while ((pos = text.find(token, pos)) != std::string::npos) {
        text.replace(pos, token.size(), value);
        pos += value.size();
        found = true;
    }
    return found;
}

struct SplitUrl {
    std::string origin;  // scheme://host[:port]
    std::string path;    // /rest including query
};

inline SplitUrl split_url(const std::string& url) {
    const std::size_t scheme = url.find("://");
    if (scheme == std::string::npos)
        throw error("fetch: url '" + url + "' has no scheme");
    const std::size_t path_start = url.find('/', scheme + 3);
    if (path_start == std::string::npos)
        return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

/// Stable on-disk name derived from the request path.
inline std::string tile_filename(const std::string& url_path) {
    std::string name;
    for (char c : url_path) {
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-')
            name.push_back(c);
        else if (!name.empty() && name.back() != '_')
            name.push_back('_');
    }
    while (!name.empty() && (name.front() == '_' || name.front() == '.'))
        name.erase(name.begin());
    if (name.empty())
        name = "tile";
    return name;
}

/// GET with retries; returns true and fills body on success.
inline bool fetch_once(const std::string& url, std::size_t max_retries, std::string& body,
                       std::string& fail_reason) {
    const SplitUrl parts = split_url(url);
    for (std::size_t attempt = 0; attempt <= max_retries; ++attempt) {
        httplib::Client client(parts.origin);
        client.set_connection_timeout(5, 0);
        client.set_read_timeout(30, 0);
        auto res = client.Get(parts.path);
        if (res && res->status == 200) {
            body = res->body;
            return true;
        }
        fail_reason = res ? "http status " + std::to_string(res->status)
                          : "connection failed (" + httplib::to_string(res.error()) + ")";
    }
    return false;
}

}  // namespace detail

namespace detail {

/// Plain decimal for URLs: servers rarely accept scientific notation.
inline std::string format_coordinate(double v) {
    std::string s = format_fixed(v, 6);
    s.erase(s.find_last_not_of('0') + 1);
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
}

}  // namespace detail

/// Expands a bbox-style template: {xmin} {ymin} {xmax} {ymax}.
inline std::string expand_bbox_template(std::string url_template, const GeoBoundingBox& bbox) {
    bbox.validate();
    bool any = false;
    any |= detail::replace_all(url_template, "{xmin}", detail::format_coordinate(bbox.x_min));
    any |= detail::replace_all(url_template, "{ymin}", detail::format_coordinate(bbox.y_min));
    any |= detail::replace_all(url_template, "{xmax}", detail::format_coordinate(bbox.x_max));
    any |= detail::replace_all(url_template, "{ymax}", detail::format_coordinate(bbox.y_max));
    if (!any)
        throw error("fetch: url template has no bbox placeholders ({xmin}/{ymin}/{xmax}/{ymax})");
    return url_template;
}

/// Expands a tile-style template: {x} {y} and {z} or {zoom}.
inline std::string expand_tile_template(std::string url_template, long x, long y, int zoom) {
    const bool has_x = detail::replace_all(url_template, "{x}", std::to_string(x));
    const bool has_y = detail::replace_all(url_template, "{y}", std::to_string(y));
    detail::replace_all(url_template, "{z}", std::to_string(zoom));
    detail::replace_all(url_template, "{zoom}", std::to_string(zoom));
    if (!has_x || !has_y)
        throw error("fetch: url template needs both {x} and {y} placeholders");
    return url_template;
}

/// Downloads every tile in the range into destination_dir, skipping files that
/// already exist. All tiles are attempted; if any fail after retries, the
/// error lists them.
inline FetchReport fetch_elevation_tiles(const std::string& url_template, const TileRange& range,
                                         const std::string& destination_dir,
                                         const FetchOptions& options = {}) {
    range.validate();
    std::filesystem::create_directories(destination_dir);

    struct Job {
        std::string url;
        std::filesystem::path path;
        bool downloaded = false;
        bool skipped = false;
        std::string failure;
    };
    std::vector<Job> jobs;
    for (long y = range.y_min; y <= range.y_max; ++y) {
        for (long x = range.x_min; x <= range.x_max; ++x) {
            Job job;
            job.url = expand_tile_template(url_template, x, y, range.zoom);
            job.path = std::filesystem::path(destination_dir) /
                       detail::tile_filename(detail::split_url(job.url).path);
            jobs.push_back(std::move(job));
        }
    }

    const auto run_job = [&](Job& job) {
        if (std::filesystem::exists(job.path)) {
            job.skipped = true;
            return;
        }
        std::string body;
        std::string reason;
        if (!detail::fetch_once(job.url, options.max_retries, body, reason)) {
            job.failure = job.url + ": " + reason;
            return;
        }
        std::ofstream out(job.path, std::ios::binary);
        out.write(body.data(), static_cast<std::streamsize>(body.size()));
        if (!out)
            throw error("fetch: cannot write " + job.path.string());
        job.downloaded = true;
    };

    const std::size_t workers = std::max<std::size_t>(1, std::min(options.parallelism, jobs.size()));
    if (workers <= 1) {
        for (Job& job : jobs) run_job(job);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < jobs.size(); i = next.fetch_add(1))
                    run_job(jobs[i]);
            });
        }
        for (std::thread& t : pool) t.join();
    }

    FetchReport report;
    std::string failures;
    for (const Job& job : jobs) {
        if (!job.failure.empty()) {
            if (!failures.empty()) failures += "; ";
            failures += job.failure;
            continue;
        }
        report.saved_paths.push_back(job.path.string());
        if (job.downloaded) ++report.downloaded;
        if (job.skipped) ++report.skipped;
    }
    if (!failures.empty())
        throw error("fetch: tiles failed after retries: " + failures);
    return report;
}

/// Single-request bbox variant.
inline FetchReport fetch_elevation_tiles(const std::string& url_template, const GeoBoundingBox& bbox,
                                         const std::string& destination_dir,
                                         const FetchOptions& options = {}) {
    std::filesystem::create_directories(destination_dir);
    const std::string url = expand_bbox_template(url_template, bbox);
    const std::filesystem::path path =
        std::filesystem::path(destination_dir) / detail::tile_filename(detail::split_url(url).path);

    FetchReport report;
    if (std::filesystem::exists(path)) {
        report.skipped = 1;
        report.saved_paths.push_back(path.string());
        return report;
    }
    std::string body;
    std::string reason;
    if (!detail::fetch_once(url, options.max_retries, body, reason))
        throw error("fetch: tiles failed after retries: " + url + ": " + reason);
    std::ofstream out(path, std::ios::binary);
    out.write(body.data(), static_cast<std::streamsize>(body.size()));
    if (!out)
        throw error("fetch: cannot write " + path.string());
    report.downloaded = 1;
    report.saved_paths.push_back(path.string());
    return report;
}

}  // namespace sylva

#endif  // SYLVA_FETCH_HPP
