/*
 * Copyright 2026 The sqlbias Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef SQLBIAS_UTIL_HPP
#define SQLBIAS_UTIL_HPP

#include <cstddef>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>

namespace sqlbias::util {

/// Hex-encoded SHA-256 of `data`.
std::string sha256_hex(std::string_view data);

/// Round a percentage to 2 decimal places, half away from zero.
double round_pct(double value);

/// Read a whole file into a string. Throws IoFailure.
std::string read_file(const std::filesystem::path& path);

/// Write `content` to `path`, creating parent directories. Throws IoFailure.
void write_file(const std::filesystem::path& path, std::string_view content);

/// Run `fn(i)` for i in [0, n) on up to `jobs` threads. Results must be
/// written to per-index slots; iteration order is unspecified.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);

}  // namespace sqlbias::util

#endif  // SQLBIAS_UTIL_HPP
