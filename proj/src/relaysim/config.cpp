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

#include "config.hpp"

#include "error.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

namespace relaysim {

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_list(std::string_view s)
{
    std::vector<std::string_view> items;
    while (!s.empty()) {
        const auto comma = s.find(',');
        items.push_back(trim(s.substr(0, comma)));
        if (comma == std::string_view::npos)
            break;
        s.remove_prefix(comma + 1);
    }
    return items;
}

} // namespace

double parse_double(std::string_view text, std::string_view what)
{
    text = trim(text);
    if (!text.empty() && text.front() == '+')
        text.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
        fail(ErrorKind::Config, std::string(what) + ": '" + std::string(text) + "' is not a number");
    return v;
}

std::string format_shortest(double v)
{
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return ec == std::errc{} ? std::string(buf.data(), end) : std::string("nan");
}

KeyValueConfig KeyValueConfig::parse(std::string_view text, std::string_view origin)
{
    KeyValueConfig cfg;
    cfg.origin_ = std::string(origin);
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        const std::string where = cfg.origin_ + ":" + std::to_string(line_no);
        if (eq == std::string_view::npos)
            fail(ErrorKind::Config, where + ": expected 'key = value'");
        const std::string key(trim(line.substr(0, eq)));
        if (key.empty())
            fail(ErrorKind::Config, where + ": empty key");
        if (cfg.values_.count(key))
            fail(ErrorKind::Config, where + ": duplicate key '" + key + "'");
        cfg.values_[key] = std::string(trim(line.substr(eq + 1)));
    }
    return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        fail(ErrorKind::Io, "cannot open scenario file '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path.string());
}

void KeyValueConfig::set(const std::string& key, const std::string& value)
{
    values_[key] = value;
}

const std::string* KeyValueConfig::raw(const std::string& key) const
{
    auto it = values_.find(key);
    if (it == values_.end())
        return nullptr;
    used_.insert(key);
    return &it->second;
}

void KeyValueConfig::record(const std::string& key, const std::string& value) const
{
    resolved_[key] = value;
}

std::string KeyValueConfig::get_string(const std::string& key, const std::string& fallback) const
{
    const std::string* v = raw(key);
    const std::string out = v ? *v : fallback;
    record(key, out);
    return out;
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const
{
    const std::string* v = raw(key);
    const double out = v ? parse_double(*v, key) : fallback;
    record(key, format_shortest(out));
    return out;
}

std::uint64_t KeyValueConfig::get_u64(const std::string& key, std::uint64_t fallback) const
{
    const std::string* v = raw(key);
    std::uint64_t out = fallback;
    if (v) {
        const std::string_view s = trim(*v);
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
        if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
            fail(ErrorKind::Config, key + ": '" + *v + "' is not a non-negative integer");
    }
    record(key, std::to_string(out));
    return out;
}

bool KeyValueConfig::get_bool(const std::string& key, bool fallback) const
{
    const std::string* v = raw(key);
    bool out = fallback;
    if (v) {
        if (*v == "true" || *v == "1" || *v == "on")
            out = true;
        else if (*v == "false" || *v == "0" || *v == "off")
            out = false;
        else
            fail(ErrorKind::Config, key + ": '" + *v + "' is not a boolean");
    }
    record(key, out ? "true" : "false");
    return out;
}

std::vector<double> KeyValueConfig::get_doubles(const std::string& key,
                                                const std::vector<double>& fallback) const
{
    const std::string* v = raw(key);
    std::vector<double> out = fallback;
    if (v) {
        out.clear();
        for (std::string_view item : split_list(*v))
            if (!item.empty())
                out.push_back(parse_double(item, key));
    }
    std::string echo;
    for (std::size_t i = 0; i < out.size(); ++i)
        echo += (i ? "," : "") + format_shortest(out[i]);
    record(key, echo);
    return out;
}

std::optional<double> KeyValueConfig::get_auto_double(const std::string& key) const
{
    const std::string* v = raw(key);
    if (!v || trim(*v) == "auto") {
        record(key, "auto");
        return std::nullopt;
    }
    const double out = parse_double(*v, key);
    record(key, format_shortest(out));
    return out;
}

void KeyValueConfig::reject_unused() const
{
    std::string unknown;
    for (const auto& [key, value] : values_)
        if (!used_.count(key))
            unknown += (unknown.empty() ? "" : ", ") + key;
    if (!unknown.empty())
        fail(ErrorKind::Config, origin_ + ": unknown key(s): " + unknown);
}

std::string KeyValueConfig::resolved() const
{
    std::string out;
    for (const auto& [key, value] : resolved_)
        out += key + " = " + value + "\n";
    return out;
}

} // namespace relaysim
