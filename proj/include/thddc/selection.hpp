/*
 * Copyright 2026 The thddc Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "thddc/criteria.hpp"
#include "thddc/ecm.hpp"
#include "thddc/model_space.hpp"

namespace thddc
{
struct GridRequest
{
    std::vector<ModelSpec> specs;
    std::vector<int> g_values;
    FitConfig config;
    // Cells fitted concurrently; results do not depend on this.
    int jobs = 1;
};

struct GridEntry
{
    ModelSpec spec;
    int groups = 0;
    bool ok = false;
    double bic = 0.0;
    std::optional<double> ari;
    std::optional<FitResult> fit;
    std::string failure;
    double seconds = 0.0;
};

struct GridResult
{
    std::vector<GridEntry> entries;
    std::size_t best = 0;

    const GridEntry& best_entry() const { return entries.at(best); }
    // Entry indices by decreasing BIC (ties to the lower index), failures last.
    std::vector<std::size_t> ranking() const;
};

// Free parameter count used as the BIC penalty.
int total_param_count(const ModelSpec& spec, int groups, int p, const DimensionAssignment& dims,
                      RhoConvention rho = RhoConvention::standard);

// Fits every (spec, G) cell, spec-major. Each cell's seed is derived from
// (config.seed, spec index, G). truth, when non-empty, adds an ARI per cell.
// GridFailedError when no cell succeeds.
GridResult grid_search(const Matrix& data, const GridRequest& request,
                       const std::vector<int>& truth = {});
}  // namespace thddc
