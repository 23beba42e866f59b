// Copyright 2026 The latticegate Authors
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

#ifndef LATTICEGATE_CLI_H
#define LATTICEGATE_CLI_H

#include <filesystem>
#include <iosfwd>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "latticegate/config.h"

namespace latticegate {

struct RunReport {
    std::vector<std::filesystem::path> files;  ///< in write order, sidecars included
    nlohmann::json summary;                    ///< per-artifact results, keyed by artifact stem
};

/// Runs one configured command and writes its CSV artifacts, each with a JSON sidecar, into
/// `out_dir`. If anything fails, every file written so far is removed before the exception
/// propagates.
RunReport run_experiment(const ExperimentConfig &cfg, const std::filesystem::path &out_dir);

/// The recipe behind `latticegate figures` when no --config is given.
std::string_view bundled_figures_recipe();

/// `latticegate <command> --config <path> [--seed S] [--out DIR]`.
/// Exit status: 0 on success, 1 when a run fails, 2 for usage or config errors.
int cli_main(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace latticegate

#endif
