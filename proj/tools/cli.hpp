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

#include <ostream>
#include <string>
#include <vector>

namespace thddc::cli
{
// Runs one invocation and returns the process exit code: 0 on success,
// 1 on usage, parse or I/O errors, 2 on numerical failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// "3", "1,2,4" or "1..4". Throws UsageError on anything else or on G < 1.
std::vector<int> parse_groups(const std::string& text);
}  // namespace thddc::cli
