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

#include "relaysim/detection.hpp"
#include "relaysim/error.hpp"

#include <numeric>
#include <vector>

using namespace relaysim;

TEST_CASE("euclidean dissimilarity in both domains")
{
    const std::vector<double> a{1.0, 0.5, 0.25, 2.0};
    const std::vector<double> b{1.0, 1.0, 0.5, 1.0};
    CHECK(reciprocity_dissimilarity(a, b, MetricDomain::Db) == doctest::Approx(10.427984941845086));
    CHECK(reciprocity_dissimilarity(a, b, MetricDomain::Linear) == doctest::Approx(1.14564392373896));
    CHECK(reciprocity_dissimilarity(a, a, MetricDomain::Db) == 0.0);
}

TEST_CASE("dB dissimilarity ignores a common scale")
{
    const std::vector<double> a{1.0, 0.5, 0.25, 2.0};
    const std::vector<double> b{1.0, 1.0, 0.5, 1.0};
    std::vector<double> a2, b2;
    for (std::size_t i = 0; i < a.size(); ++i) {
        a2.push_back(a[i] * 1e-3);
        b2.push_back(b[i] * 1e-3);
    }
    CHECK(reciprocity_dissimilarity(a2, b2, MetricDomain::Db)
          == doctest::Approx(reciprocity_dissimilarity(a, b, MetricDomain::Db)));
}

TEST_CASE("verdict compares against epsilon")
{
    const std::vector<double> a{1.0, 2.0};
    const std::vector<double> b{1.0, 1.0};
    CHECK(detect(a, b, 5.0, MetricDomain::Db).attack);
    CHECK_FALSE(detect(a, b, 7.0, MetricDomain::Db).attack);
}

TEST_CASE("epsilon is the nearest-rank quantile")
{
    std::vector<double> s(100);
    std::iota(s.begin(), s.end(), 1.0);
    CHECK(calibrate_epsilon(s, 0.99) == 99.0);
    CHECK(calibrate_epsilon(s, 0.5) == 50.0);
    CHECK_THROWS_AS(calibrate_epsilon(std::vector<double>(10, 1.0), 0.9), Error);
    CHECK_THROWS_WITH(calibrate_epsilon(s, 1.0), "degenerate quantile");
}

TEST_CASE("two-sample KS statistic and critical value")
{
    const std::vector<double> a{0.1, 0.5, 0.9, 1.3, 2.0, 2.2};
    const std::vector<double> b{0.4, 0.6, 1.5, 2.5, 3.0};
    CHECK(ks_statistic(a, b) == doctest::Approx(0.4));
    CHECK(ks_statistic(a, a) == 0.0);
    CHECK(ks_critical_value(200, 200) == doctest::Approx(0.13581015157406195));
    CHECK(ks_critical_value(30, 50) == doctest::Approx(0.3136401102798742));
}

TEST_CASE("median and domain names")
{
    CHECK(median({3.0, 1.0, 4.0, 1.0, 5.0, 9.0}) == 3.5);
    CHECK(median({2.0}) == 2.0);
    CHECK_THROWS_AS(median({}), Error);
    CHECK(metric_domain_from_string("linear") == MetricDomain::Linear);
    CHECK_THROWS_AS(metric_domain_from_string("log"), Error);
}

TEST_CASE("length mismatch is rejected")
{
    const std::vector<double> a{1.0, 2.0};
    const std::vector<double> b{1.0};
    CHECK_THROWS_AS(reciprocity_dissimilarity(a, b, MetricDomain::Db), Error);
}
