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


#ifndef SUPERRES_CLI_TOML_LITE_HPP
#define SUPERRES_CLI_TOML_LITE_HPP

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace superres::cli {

// The subset of TOML the configs need: bare keys, one level of [tables],
// strings, booleans, integers, floats and single-line arrays of scalars.

using TomlScalar = std::variant<bool, std::int64_t, double, std::string>;
using TomlArray = std::vector<TomlScalar>;
using TomlValue = std::variant<bool, std::int64_t, double, std::string, TomlArray>;
using TomlTable = std::map<std::string, TomlValue>;

struct TomlDoc {
    TomlTable root;
    std::map<std::string, TomlTable> tables;

    friend bool operator==(const TomlDoc&, const TomlDoc&) = default;
};

/// Throws InputError with the offending line number.
TomlDoc parse_toml(const std::string& text);

/// Canonical form: root keys, then tables, each sorted by key.
std::string serialize_toml(const TomlDoc& doc);

std::string format_toml_value(const TomlValue& v);

/// Human-readable type name for error messages.
std::string toml_type_name(const TomlValue& v);

}  // namespace superres::cli

#endif
