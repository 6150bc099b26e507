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
#include <string>
#include <vector>

namespace thddc
{
// Contingency counts of two partitions. Rows follow the first appearance
// of each true label, columns the first appearance of each predicted one.
struct ConfusionTable
{
    std::vector<std::string> row_labels;
    std::vector<std::string> col_labels;
    std::vector<std::vector<std::int64_t>> counts;

    std::int64_t total() const;
    std::string to_text() const;
    std::string to_csv() const;
};

ConfusionTable confusion(const std::vector<std::string>& truth,
                         const std::vector<std::string>& pred);
ConfusionTable confusion(const std::vector<int>& truth, const std::vector<int>& pred);

// Builds a table directly from counts (row/column labels are 1..k).
ConfusionTable table_from_counts(const std::vector<std::vector<std::int64_t>>& counts);

// Hubert-Arabie adjusted Rand index. Returns 1 when both partitions are
// trivially identical and the chance correction is undefined.
double ari(const ConfusionTable& table);
double ari(const std::vector<std::string>& truth, const std::vector<std::string>& pred);
double ari(const std::vector<int>& truth, const std::vector<int>& pred);

// Fraction of concordant pairs.
double rand_index(const ConfusionTable& table);
double rand_index(const std::vector<std::string>& truth, const std::vector<std::string>& pred);
double rand_index(const std::vector<int>& truth, const std::vector<int>& pred);
}  // namespace thddc
