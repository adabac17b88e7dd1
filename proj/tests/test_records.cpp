// Copyright (c) 2026 the sylva authors
// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include <string>

#include "sylva/records.hpp"
#include "test_util.hpp"

using namespace sylva;
using Catch::Matchers::ContainsSubstring;

TEST_CASE("empty trunks body parses to an empty set", "[records]") {
    const TrunkSet set = parse_trunks_csv("easting_m,northing_m\n");
    CHECK(set.trunks.empty());
}

TEST_CASE("one trunk row parses and round-trips", "[records]") {
    const TrunkSet set = parse_trunks_csv("easting_m,northing_m\n500100.5,4420050.25\n");
    REQUIRE(set.trunks.size() == 1);
    CHECK(set.trunks[0].easting == 500100.5);
    CHECK(set.trunks[0].northing == 4420050.25);
    const TrunkSet again = parse_trunks_csv(write_trunks_csv(set));
    REQUIRE(again.trunks.size() == 1);
    CHECK(again.trunks[0].easting == set.trunks[0].easting);
    CHECK(again.trunks[0].northing == set.trunks[0].northing);
}

TEST_CASE("trunk parsing rejects a wrong header", "[records]") {
    REQUIRE_THROWS_AS(parse_trunks_csv("x,y\n1,2\n"), error);
}

TEST_CASE("trunk parsing names the offending row", "[records]") {
    REQUIRE_THROWS_WITH(parse_trunks_csv("easting_m,northing_m\n1,2\n3,oops\n"),
                        ContainsSubstring("line 3"));
}

TEST_CASE("duplicate trunks are permitted", "[records]") {
    const TrunkSet set = parse_trunks_csv("easting_m,northing_m\n1,2\n1,2\n");
    CHECK(set.trunks.size() == 2);
}

TEST_CASE("measurement rows parse in order", "[records]") {
    const auto records = parse_measurements_csv(
        "track_id,easting_m,northing_m,altitude_m,path_loss_db\n"
        "T1,500100,4420050,1601.5,112.25\n"
        "T2,500101,4420051,1601.5,113.5\n");
    REQUIRE(records.size() == 2);
    CHECK(records[0].track_id == "T1");
    CHECK(records[0].position.x == 500100.0);
    CHECK(records[0].path_loss_db == 112.25);
    CHECK(records[1].track_id == "T2");
}

TEST_CASE("empty measurements body gives an empty list", "[records]") {
    CHECK(parse_measurements_csv("track_id,easting_m,northing_m,altitude_m,path_loss_db\n").empty());
}

TEST_CASE("NaN path loss is rejected at its row", "[records]") {
    REQUIRE_THROWS_WITH(
        parse_measurements_csv("track_id,easting_m,northing_m,altitude_m,path_loss_db\n"
                               "T1,0,0,0,NaN\n"),
        ContainsSubstring("line 2"));
}

TEST_CASE("nonpositive path loss is rejected", "[records]") {
    REQUIRE_THROWS_AS(
        parse_measurements_csv("track_id,easting_m,northing_m,altitude_m,path_loss_db\n"
                               "T1,0,0,0,-5\n"),
        error);
}

TEST_CASE("missing measurement column is rejected", "[records]") {
    REQUIRE_THROWS_AS(
        parse_measurements_csv("track_id,easting_m,northing_m,altitude_m,path_loss_db\n"
                               "T1,0,0,112.5\n"),
        error);
}

TEST_CASE("measurements round-trip losslessly", "[records]") {
    const std::string text =
        "track_id,easting_m,northing_m,altitude_m,path_loss_db\n"
        "A,500123.125,4420456.75,1603.0625,99.875\n";
    const auto records = parse_measurements_csv(text);
    CHECK(write_measurements_csv(records) == text);
}

TEST_CASE("crlf line endings are tolerated", "[records]") {
    const auto records = parse_measurements_csv(
        "track_id,easting_m,northing_m,altitude_m,path_loss_db\r\nT1,1,2,3,4\r\n");
    REQUIRE(records.size() == 1);
    CHECK(records[0].path_loss_db == 4.0);
}

TEST_CASE("rx lists parse and load from disk", "[records]") {
    testutil::TempDir dir("records");
    const std::string text = "track_id,easting_m,northing_m,altitude_m\nR1,10,20,30\n";
    detail::spill(dir.file("rx.csv"), text);
    const auto rx = load_rx_list(dir.file("rx.csv"));
    REQUIRE(rx.size() == 1);
    CHECK(rx[0].track_id == "R1");
    CHECK(rx[0].position.z == 30.0);
}

TEST_CASE("file loaders name the missing path", "[records]") {
    REQUIRE_THROWS_WITH(load_trunks("/nonexistent/trunks.csv"), ContainsSubstring("trunks.csv"));
    REQUIRE_THROWS_WITH(load_measurements("/nonexistent/m.csv"), ContainsSubstring("m.csv"));
}
