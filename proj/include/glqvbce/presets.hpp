// SPDX-License-Identifier: Apache-2.0
//
// glqvbce - gridless quantized variational Bayesian channel estimation
// Copyright (C) 2026 The glqvbce authors
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

#ifndef GLQVBCE_PRESETS_HPP
#define GLQVBCE_PRESETS_HPP

#include "glqvbce/experiment_config.hpp"

#include <string>
#include <vector>

namespace glqvbce
{
    // $GLQVBCE_PRESET_DIR if set, otherwise the presets/ folder of the source tree
    std::string preset_directory();

    // Sorted names of the *.json files in the preset directory
    std::vector<std::string> list_presets(const std::string &dir = preset_directory());

    ExperimentConfig load_preset(const std::string &name, const std::string &dir = preset_directory());

    // A readable file path is loaded directly, anything else is looked up as a preset name
    ExperimentConfig resolve_config(const std::string &path_or_name);
}

#endif
