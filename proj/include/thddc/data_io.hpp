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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "thddc/ecm.hpp"
#include "thddc/numerics.hpp"

namespace thddc
{
// n x p feature matrix with optional labels and column names.
struct Dataset
{
    Matrix x;
    std::optional<std::vector<std::string>> labels;
    std::vector<std::string> names;
    std::string label_name = "label";
};

void validate(const Dataset& ds);

// Comma-separated, '.' decimal separator. label_column is a header name or
// a 0-based column index; every other column must be numeric.
Dataset read_csv(const std::filesystem::path& path, bool has_header,
                 const std::optional<std::string>& label_column = std::nullopt);

// Writes features with 17 significant digits, labels last when present.
void write_csv(const Dataset& ds, const std::filesystem::path& path);

// Centers each column and scales it to unit variance (n - 1 convention).
Dataset standardize(const Dataset& ds);

// One column of labels, optionally under a header.
std::vector<std::string> read_labels(const std::filesystem::path& path,
                                     const std::optional<std::string>& column = std::nullopt,
                                     bool has_header = true);
void write_labels(const std::vector<int>& labels, const std::filesystem::path& path);

// Integer codes of string labels in order of first appearance.
std::vector<int> encode_labels(const std::vector<std::string>& labels);

struct SimComponent
{
    Vector mu;
    Matrix sigma;
    double nu = 1.0;
};

struct SimSpec
{
    int n = 500;
    Vector proportions;
    std::vector<SimComponent> components;
    int datasets = 10;
    std::uint64_t seed = 2017;

    int groups() const { return static_cast<int>(components.size()); }
    int p() const { return components.empty() ? 0 : static_cast<int>(components.front().mu.size()); }
};

// Two components in p = 10 with identity scales, nu = (2, 3), equal
// proportions, means 0 and `separation` times the first axis.
SimSpec default_sim_spec(std::uint64_t seed = 2017, double separation = 10.0);

// Dataset k is drawn with the seed derived from (spec.seed, k); labels are
// the 1-based component index.
std::vector<Dataset> simulate_study(const SimSpec& spec);

nlohmann::json sim_manifest(const SimSpec& spec);

inline constexpr const char* kModelSchemaVersion = "1";

nlohmann::json model_to_json(const FitResult& result);
FitResult model_from_json(const nlohmann::json& doc);

void save_model(const FitResult& result, const std::filesystem::path& path);
FitResult load_model(const std::filesystem::path& path);
}  // namespace thddc
