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

namespace thddc
{
// 2 * loglik - n_params * log(n). Larger is better.
double bic(double loglik, int n_params, int n);

struct AitkenResult
{
    bool converged = false;
    double l_inf = 0.0;
    // True when the raw-difference rule was used instead of the extrapolation.
    bool fallback = false;
};

// Aitken stopping rule over three consecutive log-likelihoods
// prev2 = l(k-1), prev = l(k), current = l(k+1):
//   a     = (l(k+1) - l(k)) / (l(k) - l(k-1))
//   l_inf = l(k) + (l(k+1) - l(k)) / (1 - a)
// converged iff 0 <= l_inf - l(k) < epsilon. When l(k) - l(k-1) <= 0 or
// a >= 1 the rule falls back to |l(k+1) - l(k)| < epsilon.
AitkenResult aitken_check(double prev2, double prev, double current, double epsilon);
}  // namespace thddc
