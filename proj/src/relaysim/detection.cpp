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

#include "detection.hpp"

#include "error.hpp"
#include "units.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace relaysim {

std::string_view to_string(MetricDomain d)
{
    return d == MetricDomain::Db ? "db" : "linear";
}

MetricDomain metric_domain_from_string(std::string_view s)
{
    if (s == "db")
        return MetricDomain::Db;
    if (s == "linear")
        return MetricDomain::Linear;
    fail(ErrorKind::Config, "unknown metric domain '" + std::string(s) + "'");
}

double reciprocity_dissimilarity(std::span<const double> mag_ab, std::span<const double> mag_ba,
                                 MetricDomain domain)
{
    if (mag_ab.size() != mag_ba.size())
        fail(ErrorKind::InvalidArgument, "magnitude vectors differ in length");
    if (mag_ab.empty())
        fail(ErrorKind::InvalidArgument, "magnitude vectors are empty");

    double sum = 0.0;
    for (std::size_t i = 0; i < mag_ab.size(); ++i) {
        const double diff = domain == MetricDomain::Db
                                ? amplitude_to_db(mag_ab[i]) - amplitude_to_db(mag_ba[i])
                                : mag_ab[i] - mag_ba[i];
        sum += diff * diff;
    }
    return std::sqrt(sum);
}

ReciprocityReport detect(std::span<const double> mag_ab, std::span<const double> mag_ba,
                         double epsilon, MetricDomain domain)
{
    if (!(epsilon >= 0.0))
        fail(ErrorKind::InvalidArgument, "detection threshold must be non-negative");
    ReciprocityReport r;
    r.dissimilarity = reciprocity_dissimilarity(mag_ab, mag_ba, domain);
    r.domain = domain;
    r.epsilon = epsilon;
    r.attack = r.dissimilarity > epsilon;
    r.mag_ab.assign(mag_ab.begin(), mag_ab.end());
    r.mag_ba.assign(mag_ba.begin(), mag_ba.end());
    return r;
}

double calibrate_epsilon(std::span<const double> clean_samples, double quantile)
{
    if (!(quantile > 0.0 && quantile < 1.0))
        fail(ErrorKind::InvalidArgument, "degenerate quantile");
    if (clean_samples.size() < 30)
        fail(ErrorKind::InvalidArgument, "need at least 30 clean samples to calibrate");

    std::vector<double> sorted(clean_samples.begin(), clean_samples.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    // nearest rank; the slack absorbs q*n landing a hair above an integer
    const auto rank = static_cast<std::size_t>(std::ceil(quantile * n - 1e-9));
    return sorted[std::clamp<std::size_t>(rank, 1, sorted.size()) - 1];
}

double ks_statistic(std::span<const double> a, std::span<const double> b)
{
    if (a.empty() || b.empty())
        fail(ErrorKind::InvalidArgument, "KS statistic needs two non-empty samples");
    std::vector<double> x(a.begin(), a.end());
    std::vector<double> y(b.begin(), b.end());
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());

    const double n = static_cast<double>(x.size());
    const double m = static_cast<double>(y.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double d = 0.0;
    while (i < x.size() && j < y.size()) {
        const double v = std::min(x[i], y[j]);
        while (i < x.size() && x[i] == v)
            ++i;
        while (j < y.size() && y[j] == v)
            ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
    }
    return d;
}

double ks_critical_value(std::size_t n, std::size_t m, double alpha)
{
    if (n == 0 || m == 0 || !(alpha > 0.0 && alpha < 1.0))
        fail(ErrorKind::InvalidArgument, "invalid KS critical value request");
    const double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
    const double nn = static_cast<double>(n);
    const double mm = static_cast<double>(m);
    return c * std::sqrt((nn + mm) / (nn * mm));
}

double median(std::vector<double> values)
{
    if (values.empty())
        fail(ErrorKind::InvalidArgument, "median of an empty sample");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

} // namespace relaysim
