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

#include "superres/cli/record.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "superres/errors.hpp"

namespace superres::cli {

namespace {

constexpr const char* kFormat = "superres-record/1";

nlohmann::json counts_json(const std::vector<CountEntry>& counts) {
    auto arr = nlohmann::json::array();
    for (const auto& c : counts) {
        arr.push_back({{"setting", c.setting}, {"n_shots", c.n_shots}, {"n_ones", c.n_ones}});
    }
    return arr;
}

}  // namespace

std::string counts_text(const std::vector<CountEntry>& counts) { return counts_json(counts).dump(); }

std::string ExperimentRecord::to_json() const {
    nlohmann::ordered_json j;
    j["format"] = kFormat;
    j["version"] = version;
    j["command"] = command;
    j["master_seed"] = master_seed;
    j["created_utc"] = created_utc;
    j["wall_clock_seconds"] = wall_clock_seconds;
    j["config"] = config_toml;
    j["counts"] = counts_json(counts);
    j["output_digest"] = output_digest;
    return j.dump(2) + "\n";
}

ExperimentRecord ExperimentRecord::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("record: not valid JSON: ") + e.what());
    }
    if (!j.is_object() || j.value("format", "") != kFormat) {
        throw InputError(std::string("record: field 'format' must be ") + kFormat);
    }
    ExperimentRecord r;
    try {
        r.version = j.at("version").get<std::string>();
        r.command = j.at("command").get<std::string>();
        r.master_seed = j.at("master_seed").get<std::uint64_t>();
        r.created_utc = j.value("created_utc", "");
        r.wall_clock_seconds = j.value("wall_clock_seconds", 0.0);
        r.config_toml = j.at("config").get<std::string>();
        r.output_digest = j.value("output_digest", "");
        for (const auto& c : j.at("counts")) {
            r.counts.push_back({c.at("setting").get<std::string>(), c.at("n_shots").get<std::int64_t>(),
                                c.at("n_ones").get<std::int64_t>()});
        }
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("record: missing or mistyped field: ") + e.what());
    }
    return r;
}

void ExperimentRecord::save(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw InputError("record: cannot write '" + path + "'");
    }
    f << to_json();
}

ExperimentRecord ExperimentRecord::load(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw InputError("record: cannot read '" + path + "'");
    }
    std::ostringstream ss;
    ss << f.rdbuf();
    return from_json(ss.str());
}

}  // namespace superres::cli
