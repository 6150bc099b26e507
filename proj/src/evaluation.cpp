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

#include "thddc/evaluation.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>
#include <unordered_map>

#include "thddc/error.hpp"

namespace thddc
{
namespace
{
std::int64_t pairs(std::int64_t k) { return k * (k - 1) / 2; }

template <class Label>
ConfusionTable build(const std::vector<Label>& truth, const std::vector<Label>& pred,
                     auto&& to_string)
{
    if (truth.size() != pred.size())
    {
        throw ShapeError("confusion: partitions have different lengths (" +
                         std::to_string(truth.size()) + " vs " + std::to_string(pred.size()) +
                         ")");
    }
    ConfusionTable t;
    std::unordered_map<Label, std::size_t> rows;
    std::unordered_map<Label, std::size_t> cols;
    auto slot = [&](auto& index, auto& names, const Label& v) {
        auto [it, inserted] = index.try_emplace(v, index.size());
        if (inserted)
        {
            names.push_back(to_string(v));
        }
        return it->second;
    };
    std::vector<std::pair<std::size_t, std::size_t>> cells;
    cells.reserve(truth.size());
    for (std::size_t i = 0; i < truth.size(); ++i)
    {
        const std::size_t r = slot(rows, t.row_labels, truth[i]);
        const std::size_t c = slot(cols, t.col_labels, pred[i]);
        cells.emplace_back(r, c);
    }
    t.counts.assign(t.row_labels.size(), std::vector<std::int64_t>(t.col_labels.size(), 0));
    for (auto [r, c] : cells)
    {
        ++t.counts[r][c];
    }
    return t;
}

struct PairSums
{
    std::int64_t n = 0;
    std::int64_t both = 0;
    std::int64_t rows = 0;
    std::int64_t cols = 0;
};

PairSums pair_sums(const ConfusionTable& table)
{
    PairSums s;
    std::vector<std::int64_t> col_totals(table.col_labels.size(), 0);
    for (const auto& row : table.counts)
    {
        std::int64_t row_total = 0;
        for (std::size_t c = 0; c < row.size(); ++c)
        {
            s.both += pairs(row[c]);
            row_total += row[c];
            col_totals[c] += row[c];
        }
        s.rows += pairs(row_total);
        s.n += row_total;
    }
    for (auto c : col_totals)
    {
        s.cols += pairs(c);
    }
    if (s.n < 2)
    {
        throw DomainError("pair-counting index is degenerate for n < 2");
    }
    return s;
}
}  // namespace

std::int64_t ConfusionTable::total() const
{
    std::int64_t n = 0;
    for (const auto& row : counts)
    {
        for (auto v : row)
        {
            n += v;
        }
    }
    return n;
}

std::string ConfusionTable::to_text() const
{
    std::size_t width = 5;
    for (const auto& l : row_labels)
    {
        width = std::max(width, l.size());
    }
    std::size_t cell = 6;
    for (const auto& l : col_labels)
    {
        cell = std::max(cell, l.size() + 1);
    }
    std::ostringstream os;
    os << std::left << std::setw(static_cast<int>(width)) << "" << std::right;
    for (const auto& l : col_labels)
    {
        os << std::setw(static_cast<int>(cell)) << l;
    }
    os << '\n';
    for (std::size_t r = 0; r < counts.size(); ++r)
    {
        os << std::left << std::setw(static_cast<int>(width)) << row_labels[r] << std::right;
        for (auto v : counts[r])
        {
            os << std::setw(static_cast<int>(cell)) << v;
        }
        os << '\n';
    }
    return os.str();
}

std::string ConfusionTable::to_csv() const
{
    std::ostringstream os;
    os << "truth";
    for (const auto& l : col_labels)
    {
        os << ',' << l;
    }
    os << '\n';
    for (std::size_t r = 0; r < counts.size(); ++r)
    {
        os << row_labels[r];
        for (auto v : counts[r])
        {
            os << ',' << v;
        }
        os << '\n';
    }
    return os.str();
}

ConfusionTable confusion(const std::vector<std::string>& truth,
                         const std::vector<std::string>& pred)
{
    return build(truth, pred, [](const std::string& s) { return s; });
}

ConfusionTable confusion(const std::vector<int>& truth, const std::vector<int>& pred)
{
    return build(truth, pred, [](int v) { return std::to_string(v); });
}

ConfusionTable table_from_counts(const std::vector<std::vector<std::int64_t>>& counts)
{
    ConfusionTable t;
    t.counts = counts;
    const std::size_t cols = counts.empty() ? 0 : counts.front().size();
    for (std::size_t r = 0; r < counts.size(); ++r)
    {
        if (counts[r].size() != cols)
        {
            throw ShapeError("confusion counts must be rectangular");
        }
        t.row_labels.push_back(std::to_string(r + 1));
    }
    for (std::size_t c = 0; c < cols; ++c)
    {
        t.col_labels.push_back(std::to_string(c + 1));
    }
    return t;
}

double ari(const ConfusionTable& table)
{
    const PairSums s = pair_sums(table);
    const double total = static_cast<double>(pairs(s.n));
    const double expected = static_cast<double>(s.rows) * static_cast<double>(s.cols) / total;
    const double maximum = 0.5 * static_cast<double>(s.rows + s.cols);
    if (maximum == expected)
    {
        return 1.0;
    }
    return (static_cast<double>(s.both) - expected) / (maximum - expected);
}

double rand_index(const ConfusionTable& table)
{
    const PairSums s = pair_sums(table);
    const std::int64_t total = pairs(s.n);
    // Agreements: pairs together in both plus pairs apart in both.
    const std::int64_t agree = total + 2 * s.both - s.rows - s.cols;
    return static_cast<double>(agree) / static_cast<double>(total);
}

double ari(const std::vector<std::string>& truth, const std::vector<std::string>& pred)
{
    return ari(confusion(truth, pred));
}

double ari(const std::vector<int>& truth, const std::vector<int>& pred)
{
    return ari(confusion(truth, pred));
}

double rand_index(const std::vector<std::string>& truth, const std::vector<std::string>& pred)
{
    return rand_index(confusion(truth, pred));
}

double rand_index(const std::vector<int>& truth, const std::vector<int>& pred)
{
    return rand_index(confusion(truth, pred));
}
}  // namespace thddc
