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

#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace relaysim {

enum class MetricDomain { Db, Linear };

std::string_view to_string(MetricDomain d);
MetricDomain metric_domain_from_string(std::string_view s);

struct ReciprocityReport {
    double dissimilarity = 0.0;
    MetricDomain domain = MetricDomain::Db;
    double epsilon = 0.0;
    bool attack = false;
    std::vector<double> mag_ab;
    std::vector<double> mag_ba;
};

/// Euclidean distance between the two magnitude responses (linear
/// magnitudes in, compared in dB or linear units).
double reciprocity_dissimilarity(std::span<const double> mag_ab, std::span<const double> mag_ba,
                                 MetricDomain domain = MetricDomain::Db);

/// Flags an attack when the dissimilarity exceeds epsilon.
ReciprocityReport detect(std::span<const double> mag_ab, std::span<const double> mag_ba,
                         double epsilon, MetricDomain domain = MetricDomain::Db);

/// Nearest-rank empirical quantile of clean-run dissimilarities.
double calibrate_epsilon(std::span<const double> clean_samples, double quantile);

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|.
double ks_statistic(std::span<const double> a, std::span<const double> b);

/// Asymptotic two-sample critical value c(α) sqrt((n+m)/(n m)).
double ks_critical_value(std::size_t n, std::size_t m, double alpha = 0.05);

double median(std::vector<double> values);

} // namespace relaysim
