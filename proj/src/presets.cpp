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

#include "glqvbce/presets.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <stdexcept>

#ifndef GLQVBCE_PRESET_DIR
#define GLQVBCE_PRESET_DIR "presets"
#endif

namespace fs = std::filesystem;

namespace glqvbce
{
    std::string preset_directory()
    {
        if (const char *env = std::getenv("GLQVBCE_PRESET_DIR"); env && *env)
            return env;
        return GLQVBCE_PRESET_DIR;
    }

    std::vector<std::string> list_presets(const std::string &dir)
    {
        std::vector<std::string> names;
        std::error_code ec;
        for (const auto &entry : fs::directory_iterator(dir, ec))
            if (entry.is_regular_file() && entry.path().extension() == ".json")
                names.push_back(entry.path().stem().string());
        std::sort(names.begin(), names.end());
        return names;
    }

    ExperimentConfig load_preset(const std::string &name, const std::string &dir)
    {
        const fs::path p = fs::path(dir) / (name + ".json");
        if (!fs::is_regular_file(p))
            throw std::invalid_argument("unknown preset '" + name + "'.");
        return load_config(p.string());
    }

    ExperimentConfig resolve_config(const std::string &path_or_name)
    {
        if (fs::is_regular_file(path_or_name))
            return load_config(path_or_name);
        return load_preset(path_or_name);
    }
}
