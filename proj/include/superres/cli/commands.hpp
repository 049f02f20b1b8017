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


#ifndef SUPERRES_CLI_COMMANDS_HPP
#define SUPERRES_CLI_COMMANDS_HPP

#include <string>
#include <vector>

#include "superres/cli/config.hpp"
#include "superres/cli/record.hpp"
#include "superres/tabular.hpp"

namespace superres::cli {

struct CommandOutput {
    Table table{{"empty"}};
    std::string summary_json;  // one JSON object
    std::vector<CountEntry> counts;
};

const std::vector<CommandSpec>& command_specs();
const CommandSpec& command_spec(const std::string& name);

/// Runs a resolved config. Output is independent of cfg.threads.
CommandOutput execute(const RunConfig& cfg);

/// CSV table, or a JSON document holding the summary and the table.
std::string render(const CommandOutput& out, const std::string& format);

/// 64-bit FNV-1a of the text, as 16 hex digits.
std::string digest(const std::string& text);

ExperimentRecord make_record(const RunConfig& cfg, const CommandOutput& out, double seconds);

/// Reruns a record; returns an empty string when counts and output match,
/// otherwise a description of the first difference.
std::string replay_record(const ExperimentRecord& rec, int threads);

/// Command-line entry point. Exit codes: 0 ok, 2 configuration error, 3 numerical failure.
int run(int argc, char** argv);

}  // namespace superres::cli

#endif
