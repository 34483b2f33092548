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

#ifndef SQLBIAS_TEXT_HPP
#define SQLBIAS_TEXT_HPP

#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace sqlbias::text {

std::string to_lower(std::string_view s);
bool iequals(std::string_view a, std::string_view b);

/// Token with byte offsets into the source string. `text` is lowercased.
struct TokenSpan {
  std::string text;
  std::size_t begin = 0;
  std::size_t end = 0;  // one past the last byte
  bool is_word = false;
};

/// Deterministic question tokenization: lowercase, split on whitespace and
/// punctuation, punctuation kept as single-character tokens. Word characters
/// are ASCII alphanumerics and '_'.
std::vector<std::string> tokenize(std::string_view s);
std::vector<TokenSpan> tokenize_spans(std::string_view s);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

/// Whole-token lexicon membership: exact match or plural formed by a trailing
/// 's'. `token` must already be lowercase.
bool lexicon_has(const std::set<std::string>& lexicon, std::string_view token);

}  // namespace sqlbias::text

#endif  // SQLBIAS_TEXT_HPP
