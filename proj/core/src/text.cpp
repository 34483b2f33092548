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

#include "sqlbias/text.hpp"

#include <cctype>

namespace sqlbias::text {

namespace {

inline bool is_word_char(unsigned char c) {
  return std::isalnum(c) != 0 || c == '_';
}

inline char lower_char(unsigned char c) {
  return static_cast<char>(std::tolower(c));
}

}  // namespace

std::string to_lower(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (unsigned char c : s) out.push_back(lower_char(c));
  return out;
}

bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (lower_char(static_cast<unsigned char>(a[i])) !=
        lower_char(static_cast<unsigned char>(b[i]))) {
      return false;
    }
  }
  return true;
}

std::vector<TokenSpan> tokenize_spans(std::string_view s) {
  std::vector<TokenSpan> out;
  std::size_t i = 0;
  while (i < s.size()) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    if (is_word_char(c)) {
      std::size_t begin = i;
      std::string word;
      while (i < s.size() && is_word_char(static_cast<unsigned char>(s[i]))) {
        word.push_back(lower_char(static_cast<unsigned char>(s[i])));
        ++i;
      }
      out.push_back(TokenSpan{std::move(word), begin, i, true});
    } else {
      out.push_back(TokenSpan{std::string(1, static_cast<char>(c)), i, i + 1, false});
      ++i;
    }
  }
  return out;
}

std::vector<std::string> tokenize(std::string_view s) {
  std::vector<std::string> out;
  for (auto& span : tokenize_spans(s)) out.push_back(std::move(span.text));
  return out;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out.append(sep);
    out.append(parts[i]);
  }
  return out;
}

bool lexicon_has(const std::set<std::string>& lexicon, std::string_view token) {
  std::string t(token);
  if (lexicon.count(t) > 0) return true;
  if (t.size() > 1 && t.back() == 's' && lexicon.count(t.substr(0, t.size() - 1)) > 0) {
    return true;
  }
  return false;
}

}  // namespace sqlbias::text
