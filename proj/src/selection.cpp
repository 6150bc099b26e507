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

#include "thddc/selection.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "thddc/error.hpp"
#include "thddc/evaluation.hpp"

namespace thddc
{
int total_param_count(const ModelSpec& spec, int groups, int p, const DimensionAssignment& dims,
                      RhoConvention rho)
{
    return free_param_count(spec, groups, p, dims, rho);
}

namespace
{
// BIC values closer than the printed resolution count as ties, so models
// that coincide (for example a per-group or per-dimension a with d = 1)
// fall back to canonical order instead of rounding noise.
constexpr double kBicResolution = 1e-6;

double ranked_bic(double bic) { return std::round(bic / kBicResolution); }
}  // namespace

std::vector<std::size_t> GridResult::ranking() const
{
    std::vector<std::size_t> order(entries.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [this](std::size_t l, std::size_t r) {
        const auto& a = entries[l];
        const auto& b = entries[r];
        if (a.ok != b.ok)
        {
            return a.ok;
        }
        return a.ok && ranked_bic(a.bic) > ranked_bic(b.bic);
    });
    return order;
}

GridResult grid_search(const Matrix& data, const GridRequest& request,
                       const std::vector<int>& truth)
{
    if (request.specs.empty() || request.g_values.empty())
    {
        throw UsageError("grid_search: need at least one model and one G");
    }
    if (!truth.empty() && static_cast<Eigen::Index>(truth.size()) != data.rows())
    {
        throw ShapeError("grid_search: label count differs from the number of rows");
    }
    validate(request.config);

    GridResult out;
    for (std::size_t s = 0; s < request.specs.size(); ++s)
    {
        for (int g : request.g_values)
        {
            GridEntry e;
            e.spec = request.specs[s];
            e.groups = g;
            out.entries.push_back(std::move(e));
        }
    }

    const auto cells = static_cast<long>(out.entries.size());
    const auto per_spec = request.g_values.size();
#pragma omp parallel for schedule(dynamic) num_threads(std::max(request.jobs, 1))
    for (long c = 0; c < cells; ++c)
    {
        auto& e = out.entries[static_cast<std::size_t>(c)];
        FitConfig cfg = request.config;
        cfg.seed = derive_seed(request.config.seed,
                               static_cast<std::uint64_t>(static_cast<std::size_t>(c) / per_spec),
                               static_cast<std::uint64_t>(e.groups));
        const auto start = std::chrono::steady_clock::now();
        try
        {
            e.fit = fit(data, e.spec, e.groups, cfg);
            e.ok = true;
            e.bic = e.fit->bic;
            if (!truth.empty())
            {
                e.ari = ari(truth, e.fit->labels);
            }
        }
        catch (const std::exception& ex)
        {
            e.ok = false;
            e.failure = ex.what();
        }
        e.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }

    const auto order = out.ranking();
    if (order.empty() || !out.entries[order.front()].ok)
    {
        throw GridFailedError("grid_search: every cell failed");
    }
    out.best = order.front();
    return out;
}
}  // namespace thddc
