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

#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "thddc/error.hpp"
#include "thddc/selection.hpp"

using namespace thddc;

namespace
{
Matrix two_blobs(int per)
{
    std::mt19937_64 rng(13);
    Matrix x = fixture::gaussian_matrix(rng, 2 * per, 4);
    x.bottomRows(per).col(0).array() += 8.0;
    return x;
}
}  // namespace

TEST_CASE("grid cells are spec-major and ranked by BIC")
{
    const Matrix x = two_blobs(40);
    std::vector<int> truth(80, 0);
    std::fill(truth.begin() + 40, truth.end(), 1);
    GridRequest req;
    req.specs = {parse_model("UUUUU"), parse_model("CCCCC")};
    req.g_values = {1, 2, 3};
    const GridResult g = grid_search(x, req, truth);
    REQUIRE(g.entries.size() == 6);
    CHECK(g.entries[0].spec.code == "UUUUU");
    CHECK(g.entries[2].groups == 3);
    CHECK(g.entries[3].spec.code == "CCCCC");
    const auto rank = g.ranking();
    CHECK(rank.front() == g.best);
    for (std::size_t k = 1; k < rank.size(); ++k)
    {
        CHECK(g.entries[rank[k - 1]].bic >= g.entries[rank[k]].bic);
    }
    CHECK(g.best_entry().groups == 2);
    CHECK(*g.best_entry().ari == doctest::Approx(1.0));
}

TEST_CASE("grid results do not depend on the job count")
{
    const Matrix x = two_blobs(30);
    GridRequest req;
    req.specs = enumerate_models();
    req.g_values = {2};
    req.config.init = InitMethod::random;
    req.config.seed = 4;
    const GridResult one = grid_search(x, req);
    req.jobs = 3;
    const GridResult three = grid_search(x, req);
    for (std::size_t k = 0; k < one.entries.size(); ++k)
    {
        CHECK(one.entries[k].bic == three.entries[k].bic);
        CHECK(one.entries[k].fit->labels == three.entries[k].fit->labels);
    }
}

TEST_CASE("failed cells are reported, not thrown")
{
    const Matrix x = two_blobs(3);
    GridRequest req;
    req.specs = {parse_model("UUUUU")};
    req.g_values = {1, 6};
    const GridResult g = grid_search(x, req);
    CHECK(g.entries[0].ok);
    CHECK_FALSE(g.entries[1].ok);
    CHECK_FALSE(g.entries[1].failure.empty());
    CHECK(g.ranking().back() == 1);

    req.g_values = {6};
    CHECK_THROWS_AS(grid_search(x, req), GridFailedError);
}

TEST_CASE("total_param_count matches free_param_count")
{
    CHECK(total_param_count(parse_model("UUUUU"), 2, 4, {{2, 2}}) == 29);
    CHECK(total_param_count(parse_model("UUUUU"), 2, 4, {{2, 2}}, RhoConvention::literal) == 31);
}
