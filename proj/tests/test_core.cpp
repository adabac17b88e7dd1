// Copyright (c) 2026 the sylva authors
// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "sylva/core.hpp"

using namespace sylva;

TEST_CASE("format_double round-trips arbitrary doubles", "[core]") {
    const double cases[] = {0.0,   -0.0,       1.0,       -1.5,     1e-300,
                            1e300, 1.0 / 3.0,  3.141592653589793, 1234567.875, -9999.0};
    for (double v : cases) {
        double back = 0.0;
        REQUIRE(parse_double(format_double(v), back));
        REQUIRE(back == v);
    }
}

TEST_CASE("format_double picks the shortest representation", "[core]") {
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(-9999.0) == "-9999");
}

TEST_CASE("format_fixed pins decimal places", "[core]") {
    CHECK(format_fixed(1.0, 4) == "1.0000");
    CHECK(format_fixed(2.567891, 4) == "2.5679");
    CHECK(format_fixed(-0.00004, 4) == "-0.0000");
    CHECK(format_fixed(85.0, 4) == "85.0000");
}

TEST_CASE("format_fixed handles non-finite markers", "[core]") {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    CHECK(format_fixed(nan, 4) == "nan");
}

TEST_CASE("parse_double rejects garbage and trailing junk", "[core]") {
    double v = 0.0;
    CHECK_FALSE(parse_double("", v));
    CHECK_FALSE(parse_double("abc", v));
    CHECK_FALSE(parse_double("1.5x", v));
    CHECK(parse_double("-12.25", v));
    CHECK(v == -12.25);
}

TEST_CASE("parse_long handles integers only", "[core]") {
    long v = 0;
    CHECK(parse_long("42", v));
    CHECK(v == 42);
    CHECK_FALSE(parse_long("4.2", v));
    CHECK_FALSE(parse_long("", v));
}

TEST_CASE("warning counter accumulates and resets", "[core]") {
    reset_warning_count();
    CHECK(warning_count() == 0);
    warn("test-category", "first");
    warn("test-category", "second");
    CHECK(warning_count() == 2);
    reset_warning_count();
    CHECK(warning_count() == 0);
}

TEST_CASE("finite rejects NaN points", "[core]") {
    CHECK(finite(Point3{1.0, 2.0, 3.0}));
    CHECK_FALSE(finite(Point3{std::numeric_limits<double>::quiet_NaN(), 0.0, 0.0}));
    CHECK_FALSE(finite(Point3{0.0, std::numeric_limits<double>::infinity(), 0.0}));
}
