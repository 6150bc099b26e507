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

#include "thddc/criteria.hpp"

#include <cmath>
#include <string>

#include "thddc/error.hpp"

namespace thddc
{
double bic(double loglik, int n_params, int n)
{
    if (n < 1)
    {
        throw DomainError("bic: n must be at least 1, got " + std::to_string(n));
    }
    return 2.0 * loglik - static_cast<double>(n_params) * std::log(static_cast<double>(n));
}

AitkenResult aitken_check(double prev2, double prev, double current, double epsilon)
{
    const double step = current - prev;
    const double last = prev - prev2;
    AitkenResult out;
    if (last > 0.0)
    {
        const double a = step / last;
        if (a < 1.0)
        {
            out.l_inf = prev + step / (1.0 - a);
            const double gap = out.l_inf - prev;
            out.converged = gap >= 0.0 && gap < epsilon;
            return out;
        }
    }
    out.fallback = true;
    out.l_inf = current;
    out.converged = std::abs(step) < epsilon;
    return out;
}
}  // namespace thddc
