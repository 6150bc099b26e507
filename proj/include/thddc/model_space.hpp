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

#include <array>
#include <string>
#include <string_view>
#include <vector>

namespace thddc
{
// Constraint on the subspace eigenvalues a_jg.
//   U  free in j and g
//   D  common across the d_g dimensions of a group (a_g)
//   G  common across groups, free across dimensions (a_j)
//   C  one value for every dimension and group
enum class AConstraint
{
    U,
    D,
    G,
    C
};

// Binary free (U) / common-across-groups (C) constraint.
enum class Sharing
{
    U,
    C
};

// A parsed five-letter model code over (a, b, orientation, dimension, nu).
struct ModelSpec
{
    AConstraint a = AConstraint::U;
    Sharing b = Sharing::U;
    Sharing orient = Sharing::U;
    Sharing dim = Sharing::U;
    Sharing nu = Sharing::U;
    std::string code;

    bool operator==(const ModelSpec& other) const { return code == other.code; }
};

// Per-group intrinsic dimensions d_g.
struct DimensionAssignment
{
    std::vector<int> dims;

    int sum() const;
    int max() const;
};

// How the mean/proportion block of the parameter count is evaluated.
//   standard   Gp + (G - 1)
//   literal    Gp + G + 1
enum class RhoConvention
{
    standard,
    literal
};

// The 28 implemented codes in canonical order.
const std::array<std::string_view, 28>& model_codes();

// InvalidModelError naming the first offending position and letter.
ModelSpec parse_model(std::string_view code);

std::vector<ModelSpec> enumerate_models();

// Throws ConstraintViolationError when dims does not fit the spec, p or G.
void check_dims(const ModelSpec& spec, int groups, int p, const DimensionAssignment& dims);

// Free parameters of a fitted model, including means, proportions and nu.
int free_param_count(const ModelSpec& spec, int groups, int p, const DimensionAssignment& dims,
                     RhoConvention rho = RhoConvention::standard);

// d[p - (d + 1)/2], the free parameters of a p x d orthonormal basis.
int orientation_params(int d, int p);
}  // namespace thddc
