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


#ifndef SUPERRES_CLI_CONFIG_HPP
#define SUPERRES_CLI_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "superres/cli/toml_lite.hpp"

namespace superres::cli {

struct ParamSpec {
    std::string key;
    TomlValue fallback;  // also fixes the accepted type
    std::string help;
};

struct CommandSpec {
    std::string name;
    std::string summary;
    std::vector<ParamSpec> params;

    const ParamSpec* find(const std::string& key) const noexcept;
};

/// Fully resolved parameters of one subcommand run.
struct RunConfig {
    std::string command;
    TomlTable params;
    std::optional<std::uint64_t> seed;
    int threads = 1;
    std::string format = "csv";
    std::string out;  // empty means stdout

    /// Defaults of the command.
    static RunConfig defaults(const CommandSpec& spec);

    /// Overlays a parsed file; unknown keys and wrong types throw InputError naming the field.
    void merge(const TomlDoc& layer, const CommandSpec& spec, const std::string& source);

    /// Sets one parameter from command-line text, parsed per the declared type.
    void set_from_text(const CommandSpec& spec, const std::string& key, const std::string& text);

    void validate() const;

    TomlDoc to_toml() const;
    static RunConfig from_toml(const TomlDoc& doc, const CommandSpec& spec);

    double real(const std::string& key) const;
    std::int64_t integer(const std::string& key) const;
    const std::string& text(const std::string& key) const;
    bool flag(const std::string& key) const;
    std::vector<double> reals(const std::string& key) const;

    /// Throws InputError when neither --seed nor the config supplies one.
    std::uint64_t require_seed() const;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// "start:stop:count" with inclusive endpoints.
std::vector<double> parse_grid(const std::string& text);

}  // namespace superres::cli

#endif
