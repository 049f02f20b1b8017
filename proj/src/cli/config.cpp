// Copyright 2026 The superres Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "superres/cli/config.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "superres/errors.hpp"

namespace superres::cli {

namespace {

const TomlValue& lookup(const TomlTable& t, const std::string& key) {
    const auto it = t.find(key);
    if (it == t.end()) {
        throw InputError("config: no parameter '" + key + "'");
    }
    return it->second;
}

// Coerces v to the type of the declared fallback: integers widen to floats
// and scalars wrap into one-element arrays.
TomlValue coerce(const ParamSpec& spec, const TomlValue& v, const std::string& where) {
    const auto fail = [&] {
        throw InputError(where + ": field '" + spec.key + "' expects " + toml_type_name(spec.fallback) + ", got " +
                         toml_type_name(v));
    };
    if (v.index() == spec.fallback.index()) {
        return v;
    }
    if (std::holds_alternative<double>(spec.fallback) && std::holds_alternative<std::int64_t>(v)) {
        return static_cast<double>(std::get<std::int64_t>(v));
    }
    if (std::holds_alternative<TomlArray>(spec.fallback)) {
        if (const auto* arr = std::get_if<TomlArray>(&v)) {
            TomlArray out;
            for (const auto& s : *arr) {
                if (const auto* i = std::get_if<std::int64_t>(&s)) {
                    out.emplace_back(static_cast<double>(*i));
                } else if (std::holds_alternative<double>(s)) {
                    out.push_back(s);
                } else {
                    fail();
                }
            }
            return out;
        }
        if (const auto* d = std::get_if<double>(&v)) {
            return TomlArray{*d};
        }
        if (const auto* i = std::get_if<std::int64_t>(&v)) {
            return TomlArray{static_cast<double>(*i)};
        }
    }
    fail();
    return v;
}

double parse_real(const std::string& text, const std::string& what) {
    double d = 0.0;
    const char* first = text.data() + (!text.empty() && text[0] == '+' ? 1 : 0);
    const auto r = std::from_chars(first, text.data() + text.size(), d);
    if (text.empty() || r.ec != std::errc() || r.ptr != text.data() + text.size()) {
        throw InputError(what + ": cannot parse '" + text + "' as a number");
    }
    return d;
}

std::int64_t parse_int(const std::string& text, const std::string& what) {
    std::int64_t i = 0;
    const auto r = std::from_chars(text.data(), text.data() + text.size(), i);
    if (text.empty() || r.ec != std::errc() || r.ptr != text.data() + text.size()) {
        // Allow 1e6-style shot counts when they are exact integers.
        const double d = parse_real(text, what);
        if (d != std::floor(d) || std::abs(d) > 9.0e15) {
            throw InputError(what + ": '" + text + "' is not an integer");
        }
        return static_cast<std::int64_t>(d);
    }
    return i;
}

}  // namespace

const ParamSpec* CommandSpec::find(const std::string& key) const noexcept {
    for (const auto& p : params) {
        if (p.key == key) {
            return &p;
        }
    }
    return nullptr;
}

RunConfig RunConfig::defaults(const CommandSpec& spec) {
    RunConfig c;
    c.command = spec.name;
    for (const auto& p : spec.params) {
        c.params[p.key] = p.fallback;
    }
    return c;
}

void RunConfig::merge(const TomlDoc& layer, const CommandSpec& spec, const std::string& source) {
    for (const auto& [key, v] : layer.root) {
        const std::string where = source + " field '" + key + "'";
        if (key == "command") {
            const auto* s = std::get_if<std::string>(&v);
            if (s == nullptr || *s != spec.name) {
                throw InputError(where + ": names a different subcommand than '" + spec.name + "'");
            }
        } else if (key == "seed") {
            const auto* i = std::get_if<std::int64_t>(&v);
            if (i == nullptr || *i < 0) {
                throw InputError(where + ": expects a non-negative integer");
            }
            seed = static_cast<std::uint64_t>(*i);
        } else if (key == "threads") {
            const auto* i = std::get_if<std::int64_t>(&v);
            if (i == nullptr || *i < 1 || *i > 1024) {
                throw InputError(where + ": expects an integer in [1, 1024]");
            }
            threads = static_cast<int>(*i);
        } else if (key == "format") {
            const auto* s = std::get_if<std::string>(&v);
            if (s == nullptr) {
                throw InputError(where + ": expects a string");
            }
            format = *s;
        } else if (key == "out") {
            const auto* s = std::get_if<std::string>(&v);
            if (s == nullptr) {
                throw InputError(where + ": expects a string");
            }
            out = *s;
        } else {
            throw InputError(source + ": unknown top-level field '" + key + "'");
        }
    }
    for (const auto& [name, table] : layer.tables) {
        if (name != spec.name) {
            throw InputError(source + ": section [" + name + "] does not belong to subcommand '" + spec.name + "'");
        }
        for (const auto& [key, v] : table) {
            const ParamSpec* p = spec.find(key);
            if (p == nullptr) {
                throw InputError(source + ": unknown field '" + key + "' in [" + name + "]");
            }
            params[key] = coerce(*p, v, source);
        }
    }
    validate();
}

void RunConfig::set_from_text(const CommandSpec& spec, const std::string& key, const std::string& text) {
    const ParamSpec* p = spec.find(key);
    if (p == nullptr) {
        throw InputError("unknown field '" + key + "'");
    }
    const std::string what = "flag for field '" + key + "'";
    TomlValue v;
    switch (p->fallback.index()) {
        case 0:
            if (text != "true" && text != "false") {
                throw InputError(what + ": expects true or false");
            }
            v = text == "true";
            break;
        case 1: v = parse_int(text, what); break;
        case 2: v = parse_real(text, what); break;
        case 3: v = text; break;
        default: {
            TomlArray arr;
            std::stringstream ss(text);
            std::string item;
            while (std::getline(ss, item, ',')) {
                arr.emplace_back(parse_real(item, what));
            }
            v = arr;
        }
    }
    params[key] = v;
}

void RunConfig::validate() const {
    if (format != "csv" && format != "json") {
        throw InputError("field 'format' must be csv or json, got '" + format + "'");
    }
    if (threads < 1) {
        throw InputError("field 'threads' must be at least 1");
    }
}

TomlDoc RunConfig::to_toml() const {
    TomlDoc d;
    d.root["command"] = command;
    if (seed) {
        d.root["seed"] = static_cast<std::int64_t>(*seed);
    }
    d.root["threads"] = static_cast<std::int64_t>(threads);
    d.root["format"] = format;
    if (!out.empty()) {
        d.root["out"] = out;
    }
    d.tables[command] = params;
    return d;
}

RunConfig RunConfig::from_toml(const TomlDoc& doc, const CommandSpec& spec) {
    RunConfig c = defaults(spec);
    c.merge(doc, spec, "config");
    return c;
}

double RunConfig::real(const std::string& key) const {
    const TomlValue& v = lookup(params, key);
    if (const auto* d = std::get_if<double>(&v)) {
        return *d;
    }
    if (const auto* i = std::get_if<std::int64_t>(&v)) {
        return static_cast<double>(*i);
    }
    throw InputError("field '" + key + "' is not a number");
}

std::int64_t RunConfig::integer(const std::string& key) const {
    const TomlValue& v = lookup(params, key);
    if (const auto* i = std::get_if<std::int64_t>(&v)) {
        return *i;
    }
    throw InputError("field '" + key + "' is not an integer");
}

const std::string& RunConfig::text(const std::string& key) const {
    const TomlValue& v = lookup(params, key);
    if (const auto* s = std::get_if<std::string>(&v)) {
        return *s;
    }
    throw InputError("field '" + key + "' is not a string");
}

bool RunConfig::flag(const std::string& key) const {
    const TomlValue& v = lookup(params, key);
    if (const auto* b = std::get_if<bool>(&v)) {
        return *b;
    }
    throw InputError("field '" + key + "' is not a boolean");
}

std::vector<double> RunConfig::reals(const std::string& key) const {
    const TomlValue& v = lookup(params, key);
    const auto* arr = std::get_if<TomlArray>(&v);
    if (arr == nullptr) {
        throw InputError("field '" + key + "' is not an array");
    }
    std::vector<double> out;
    for (const auto& s : *arr) {
        if (const auto* d = std::get_if<double>(&s)) {
            out.push_back(*d);
        } else if (const auto* i = std::get_if<std::int64_t>(&s)) {
            out.push_back(static_cast<double>(*i));
        } else {
            throw InputError("field '" + key + "' must hold numbers only");
        }
    }
    return out;
}

std::uint64_t RunConfig::require_seed() const {
    if (!seed) {
        throw InputError("field 'seed' is required for stochastic runs: pass --seed or set seed in the config");
    }
    return *seed;
}

std::vector<double> parse_grid(const std::string& text) {
    const auto a = text.find(':');
    const auto b = a == std::string::npos ? a : text.find(':', a + 1);
    if (a == std::string::npos || b == std::string::npos || text.find(':', b + 1) != std::string::npos) {
        throw InputError("grid '" + text + "' must have the form start:stop:count");
    }
    const double lo = parse_real(text.substr(0, a), "grid start");
    const double hi = parse_real(text.substr(a + 1, b - a - 1), "grid stop");
    const std::int64_t n = parse_int(text.substr(b + 1), "grid count");
    if (n < 1 || n > 10'000'000) {
        throw InputError("grid '" + text + "': count must be in [1, 1e7]");
    }
    if (n == 1) {
        if (lo != hi) {
            throw InputError("grid '" + text + "': a single point needs start == stop");
        }
        return {lo};
    }
    std::vector<double> g(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) {
        g[static_cast<std::size_t>(i)] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    g.back() = hi;
    return g;
}

}  // namespace superres::cli
