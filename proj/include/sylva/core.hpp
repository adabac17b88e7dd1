// Copyright (c) 2026 the sylva authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SYLVA_CORE_HPP
#define SYLVA_CORE_HPP

#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>

namespace sylva {

inline constexpr double speed_of_light_m_s = 299'792'458.0;

/// Error type thrown by every operation in this library.
class error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Easting, northing, altitude in meters (one planar metric CRS assumed).
struct Point3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

inline bool finite(const Point3& p) {
    return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z);
}

// ---------------------------------------------------------------------------
// Warning sink. Library code never writes data to stderr, only diagnostics;
// callers can read/reset the counter to surface a warning total.

namespace detail {
inline std::atomic<std::size_t>& warning_counter() {
    static std::atomic<std::size_t> n{0};
    return n;
}
inline std::mutex& warning_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace detail

/// Count a warning and print the first few per category to stderr.
inline void warn(std::string_view category, std::string_view message) {
    detail::warning_counter().fetch_add(1, std::memory_order_relaxed);
    static constexpr int per_category_print_limit = 5;
    std::lock_guard<std::mutex> lock(detail::warning_mutex());
    static std::string last_category;
    static int printed_in_category = 0;
    if (category != last_category) {
        last_category.assign(category);
        printed_in_category = 0;
    }
    if (printed_in_category < per_category_print_limit) {
        ++printed_in_category;
        std::fprintf(stderr, "warning [%.*s]: %.*s\n", static_cast<int>(category.size()),
                     category.data(), static_cast<int>(message.size()), message.data());
        if (printed_in_category == per_category_print_limit)
            std::fprintf(stderr, "warning [%.*s]: further warnings in this category suppressed\n",
                         static_cast<int>(category.size()), category.data());
    }
}

inline std::size_t warning_count() {
    return detail::warning_counter().load(std::memory_order_relaxed);
}

inline void reset_warning_count() {
    detail::warning_counter().store(0, std::memory_order_relaxed);
}

// ---------------------------------------------------------------------------
// Numeric text helpers. All file formats in this project round-trip doubles,
// so writing uses the shortest representation that parses back bit-exact.

/// Shortest decimal form of v that round-trips through parse_double.
inline std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{})
        throw error("format_double: value not representable");
    return std::string(buf, ptr);
}

/// Fixed-point form with the given number of decimals (report outputs).
inline std::string format_fixed(double v, int decimals) {
    char buf[512];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, decimals);
    if (ec != std::errc{})
        throw error("format_fixed: value not representable");
    return std::string(buf, ptr);
}

/// Parse a full token as a double. Returns false on trailing garbage.
inline bool parse_double(std::string_view token, double& out) {
    const char* first = token.data();
    const char* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last;
}

inline bool parse_long(std::string_view token, long& out) {
    const char* first = token.data();
    const char* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last;
}

}  // namespace sylva

#endif  // SYLVA_CORE_HPP
