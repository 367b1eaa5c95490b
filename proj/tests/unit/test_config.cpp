// SPDX-License-Identifier: Apache-2.0
//
// relaysim: relay attack simulator for multi-carrier phase-based ranging
// Copyright (C) 2026 The relaysim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "doctest.h"

#include "relaysim/config.hpp"
#include "relaysim/error.hpp"

#include <filesystem>

using namespace relaysim;

TEST_CASE("values, comments and defaults")
{
    const auto kv = KeyValueConfig::parse("# header\nseed = 42\nlist = 1, 2.5 ,3\nflag = on  # trailing\n");
    CHECK(kv.get_u64("seed", 0) == 42);
    CHECK(kv.get_doubles("list", {}) == std::vector<double>{1.0, 2.5, 3.0});
    CHECK(kv.get_bool("flag", false));
    CHECK(kv.get_double("missing", 1.5) == 1.5);
    CHECK(kv.resolved() == "flag = true\nlist = 1,2.5,3\nmissing = 1.5\nseed = 42\n");
}

TEST_CASE("auto values")
{
    const auto kv = KeyValueConfig::parse("a = auto\nb = 3\n");
    CHECK_FALSE(kv.get_auto_double("a"));
    CHECK(*kv.get_auto_double("b") == 3.0);
    CHECK_FALSE(kv.get_auto_double("c"));
}

TEST_CASE("errors")
{
    CHECK_THROWS_AS(KeyValueConfig::parse("a = 1\na = 2\n"), Error);
    CHECK_THROWS_AS(KeyValueConfig::parse("novalue\n"), Error);
    const auto kv = KeyValueConfig::parse("n = -3\nx = abc\nb = maybe\ntypo = 1\n");
    CHECK_THROWS_AS(kv.get_u64("n", 0), Error);
    CHECK_THROWS_AS(kv.get_double("x", 0.0), Error);
    CHECK_THROWS_AS(kv.get_bool("b", false), Error);
    try {
        kv.reject_unused();
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Config);
        CHECK(std::string(e.what()).find("typo") != std::string::npos);
    }
}

TEST_CASE("missing file is an i/o error")
{
    try {
        KeyValueConfig::load("/nonexistent/scenario.cfg");
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Io);
    }
}

TEST_CASE("set overrides file values")
{
    auto kv = KeyValueConfig::parse("seed = 1\n");
    kv.set("seed", "9");
    CHECK(kv.get_u64("seed", 0) == 9);
}

TEST_CASE("number formatting is shortest round trip")
{
    CHECK(format_shortest(0.1) == "0.1");
    CHECK(parse_double(format_shortest(2.402e9 + 0.5), "x") == 2.402e9 + 0.5);
    CHECK(parse_double(" 1e6 ", "x") == 1e6);
}
