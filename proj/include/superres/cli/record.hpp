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


#ifndef SUPERRES_CLI_RECORD_HPP
#define SUPERRES_CLI_RECORD_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace superres::cli {

struct CountEntry {
    std::string setting;
    std::int64_t n_shots = 0;
    std::int64_t n_ones = 0;

    friend bool operator==(const CountEntry&, const CountEntry&) = default;
};

/// Everything needed to rerun an experiment and check its outcome counts.
struct ExperimentRecord {
    std::string version;
    std::string command;
    std::uint64_t master_seed = 0;
    std::string config_toml;
    double wall_clock_seconds = 0.0;
    std::string created_utc;
    std::vector<CountEntry> counts;
    std::string output_digest;  // of the rendered output

    std::string to_json() const;
    static ExperimentRecord from_json(const std::string& text);

    void save(const std::string& path) const;
    static ExperimentRecord load(const std::string& path);
};

/// Canonical text of the counts block; equal text means byte-identical counts.
std::string counts_text(const std::vector<CountEntry>& counts);

}  // namespace superres::cli

#endif
