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

#include "thddc/model_space.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <string>

#include "thddc/error.hpp"

namespace thddc
{
const std::array<std::string_view, 28>& model_codes()
{
    static constexpr std::array<std::string_view, 28> codes = {
        "UUUUU", "UCUUU", "DUUUU", "CUUUU", "DCUUU", "CCUUU", "UUUCU",
        "UCUCU", "DUUCU", "CUUCU", "DCUCU", "CCUCU", "GCCCU", "CCCCU",
        "UUUUC", "UCUUC", "DUUUC", "CUUUC", "DCUUC", "CCUUC", "UUUCC",
        "UCUCC", "DUUCC", "CUUCC", "DCUCC", "CCUCC", "GCCCC", "CCCCC"};
    return codes;
}

int DimensionAssignment::sum() const { return std::accumulate(dims.begin(), dims.end(), 0); }

int DimensionAssignment::max() const
{
    return dims.empty() ? 0 : *std::max_element(dims.begin(), dims.end());
}

namespace
{
Sharing sharing_letter(char c) { return c == 'C' ? Sharing::C : Sharing::U; }

AConstraint a_letter(char c)
{
    switch (c)
    {
        case 'D':
            return AConstraint::D;
        case 'G':
            return AConstraint::G;
        case 'C':
            return AConstraint::C;
        default:
            return AConstraint::U;
    }
}
}  // namespace

ModelSpec parse_model(std::string_view code)
{
    const auto& codes = model_codes();
    if (std::find(codes.begin(), codes.end(), code) == codes.end())
    {
        const std::string shown(code);
        if (code.size() != 5)
        {
            throw InvalidModelError("invalid model code '" + shown +
                                    "': expected 5 letters, got " + std::to_string(code.size()));
        }
        // Report the first position where no implemented model shares the prefix.
        std::size_t pos = 0;
        for (; pos < code.size(); ++pos)
        {
            const auto prefix = code.substr(0, pos + 1);
            const bool any = std::any_of(codes.begin(), codes.end(), [&](std::string_view c) {
                return c.substr(0, pos + 1) == prefix;
            });
            if (!any)
            {
                break;
            }
        }
        static constexpr std::array<const char*, 5> slot = {"a", "b", "orientation",
                                                            "dimension", "nu"};
        throw InvalidModelError("invalid model code '" + shown + "': letter '" +
                                std::string(1, code[pos]) + "' at position " +
                                std::to_string(pos + 1) + " (" + slot[pos] +
                                ") does not form one of the 28 implemented models");
    }
    ModelSpec spec;
    spec.a = a_letter(code[0]);
    spec.b = sharing_letter(code[1]);
    spec.orient = sharing_letter(code[2]);
    spec.dim = sharing_letter(code[3]);
    spec.nu = sharing_letter(code[4]);
    spec.code = std::string(code);
    return spec;
}

std::vector<ModelSpec> enumerate_models()
{
    std::vector<ModelSpec> out;
    out.reserve(model_codes().size());
    for (auto code : model_codes())
    {
        out.push_back(parse_model(code));
    }
    return out;
}

void check_dims(const ModelSpec& spec, int groups, int p, const DimensionAssignment& dims)
{
    if (groups < 1 || p < 2)
    {
        throw ConstraintViolationError("parameter count needs G >= 1 and p >= 2");
    }
    if (static_cast<int>(dims.dims.size()) != groups)
    {
        throw ConstraintViolationError("expected " + std::to_string(groups) +
                                       " intrinsic dimensions, got " +
                                       std::to_string(dims.dims.size()));
    }
    for (int d : dims.dims)
    {
        if (d < 1 || d > p - 1)
        {
            throw ConstraintViolationError("intrinsic dimension " + std::to_string(d) +
                                           " outside [1, " + std::to_string(p - 1) + "]");
        }
    }
    const bool common_d = spec.dim == Sharing::C || spec.orient == Sharing::C;
    if (common_d && std::adjacent_find(dims.dims.begin(), dims.dims.end(),
                                       std::not_equal_to<>()) != dims.dims.end())
    {
        throw ConstraintViolationError("model " + spec.code +
                                       " requires a common intrinsic dimension");
    }
}

int orientation_params(int d, int p) { return d * p - d * (d + 1) / 2; }

int free_param_count(const ModelSpec& spec, int groups, int p, const DimensionAssignment& dims,
                     RhoConvention rho)
{
    check_dims(spec, groups, p, dims);
    const int g = groups;
    const int d = dims.dims.front();
    const int s = dims.sum();

    int count = g * p + (rho == RhoConvention::standard ? g - 1 : g + 1);

    // Orientation of the subspaces.
    if (spec.orient == Sharing::C)
    {
        count += orientation_params(d, p);
    }
    else
    {
        for (int dg : dims.dims)
        {
            count += orientation_params(dg, p);
        }
    }

    // Subspace eigenvalues.
    switch (spec.a)
    {
        case AConstraint::U:
            count += s;
            break;
        case AConstraint::D:
            count += g;
            break;
        case AConstraint::G:
            count += d;
            break;
        case AConstraint::C:
            count += 1;
            break;
    }

    count += spec.b == Sharing::U ? g : 1;
    count += spec.dim == Sharing::U ? g : 1;
    count += spec.nu == Sharing::U ? g : 1;
    return count;
}
}  // namespace thddc
