/*
 * Copyright 2026 The outpaint Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef OUTPAINT_CLI_HPP
#define OUTPAINT_CLI_HPP

#include <string>

#include <nlohmann/json.hpp>

#include "outpaint/train.hpp"

namespace outpaint {

/// Everything a run can be configured with, merged from defaults, an
/// optional JSON config file, and command-line flags (in that precedence
/// order, flags strongest). The JSON form uses flat dotted keys
/// ("train.batch_size"), contains every field, and round-trips losslessly.
struct RunConfig {
    TrainConfig train;        // carries seed, schedule, canny, weights
    std::string stage = "both"; // train subcommand: edge | completion | both
    std::string dataset_dir;  // empty selects the built-in synthetic set
    int synthetic_count = 200;
    std::uint64_t dataset_seed = 11;
    int infer_out_width = 0;  // 0 means "must come from --width"
    std::string out_path;
    std::string checkpoint_dir;
    std::string brisque_model_path;
};

nlohmann::json config_to_json(const RunConfig& cfg);

/// Inverse of config_to_json. Unknown keys and type mismatches are
/// DataErrors so config-file typos cannot silently fall back to defaults.
RunConfig config_from_json(const nlohmann::json& j);

/// Pairs same-named image files from the two directories (sorted order) and
/// reports per-file PSNR, grayscale SSIM, and the no-reference quality of
/// the prediction: a score when a model file is given, the raw 36 features
/// otherwise. Infinite PSNR serializes as the JSON string "inf". Name
/// mismatches or an empty pairing raise DataError listing the offenders.
nlohmann::json evaluate_directory(const std::string& pred_dir,
                                  const std::string& gt_dir,
                                  const std::string& brisque_model_path = "");

/// Full command-line entry point. Exit codes: 0 success, 1 usage error
/// (unknown subcommand/flag or malformed flag value; usage text on stderr),
/// 2 broken input data or configuration, 3 numeric failure.
int run_cli(int argc, const char* const* argv);

} // namespace outpaint

#endif // OUTPAINT_CLI_HPP
