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

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace relaysim {

/// Flat `key = value` scenario file with dotted namespaces and `#` comments.
///
/// Every getter records the value it resolved (including defaults), so
/// `resolved()` echoes the complete effective configuration, and
/// `reject_unused()` catches misspelled keys.
class KeyValueConfig {
public:
    static KeyValueConfig parse(std::string_view text, std::string_view origin = "<string>");
    static KeyValueConfig load(const std::filesystem::path& path);

    void set(const std::string& key, const std::string& value);
    bool contains(const std::string& key) const { return values_.count(key) != 0; }

    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<double> get_doubles(const std::string& key, const std::vector<double>& fallback) const;
    /// Number or the literal `auto` (returned as nullopt).
    std::optional<double> get_auto_double(const std::string& key) const;

    void reject_unused() const;
    std::string resolved() const;

private:
    const std::string* raw(const std::string& key) const;
    void record(const std::string& key, const std::string& value) const;

    std::string origin_;
    std::map<std::string, std::string> values_;
    mutable std::set<std::string> used_;
    mutable std::map<std::string, std::string> resolved_;
};

double parse_double(std::string_view text, std::string_view what);
std::string format_shortest(double v);

} // namespace relaysim
