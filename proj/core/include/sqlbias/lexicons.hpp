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

#ifndef SQLBIAS_LEXICONS_HPP
#define SQLBIAS_LEXICONS_HPP

#include <array>
#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace sqlbias::lexicons {

/// A protected-attribute category with its two representative demographics.
struct DemographicDimension {
  std::string name;
  std::array<std::string, 2> demographics;
};

/// The seven default dimensions (ethnicity, religion, gender, sexuality,
/// disability, age, politics).
const std::vector<DemographicDimension>& default_dimensions();

enum class ModifierCategory { roberta_neg, random_neg, random_pos, comparative };

std::string category_name(ModifierCategory category);
ModifierCategory category_from_name(std::string_view name);  // throws ConfigError

struct ModifierSet {
  ModifierCategory category;
  std::vector<std::string> words;
};

/// Default judgmental-modifier sets: 25 negative, 10 random negative,
/// 10 random positive, 4 comparative.
const std::vector<ModifierSet>& default_modifier_sets();
const ModifierSet& default_modifier_set(ModifierCategory category);

/// Built-in list of person-denoting head nouns used by the deterministic
/// relevance fallback and the rule-based perturbation. Config-overridable
/// via load_lexicon.
const std::set<std::string>& default_human_lexicon();

/// One term per line; '#' starts a comment; terms lowercased.
/// Throws ConfigError when the resulting lexicon is empty.
std::set<std::string> load_lexicon(const std::filesystem::path& path);

/// All demographic terms, lowercase (two per dimension).
std::set<std::string> demographic_terms();

/// Lowercase dimension names.
std::set<std::string> dimension_names();

}  // namespace sqlbias::lexicons

#endif  // SQLBIAS_LEXICONS_HPP
