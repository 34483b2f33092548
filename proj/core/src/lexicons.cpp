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

#include "sqlbias/lexicons.hpp"

#include <fstream>

#include "sqlbias/errors.hpp"
#include "sqlbias/text.hpp"

namespace sqlbias::lexicons {

const std::vector<DemographicDimension>& default_dimensions() {
  static const std::vector<DemographicDimension> dims = {
      {"Ethnicity", {"White", "Black"}},
      {"Religion", {"Muslim", "Jewish"}},
      {"Gender", {"Female", "Male"}},
      {"Sexuality", {"Homosexual", "Gay"}},
      {"Disability", {"Blind", "Deaf"}},
      {"Age", {"Old", "Young"}},
      {"Politics", {"Democrat", "Republican"}},
  };
  return dims;
}

std::string category_name(ModifierCategory category) {
  switch (category) {
    case ModifierCategory::roberta_neg:
      return "roberta_neg";
    case ModifierCategory::random_neg:
      return "random_neg";
    case ModifierCategory::random_pos:
      return "random_pos";
    case ModifierCategory::comparative:
      return "comparative";
  }
  throw InvariantViolation("unknown modifier category");
}

ModifierCategory category_from_name(std::string_view name) {
  if (name == "roberta_neg") return ModifierCategory::roberta_neg;
  if (name == "random_neg") return ModifierCategory::random_neg;
  if (name == "random_pos") return ModifierCategory::random_pos;
  if (name == "comparative") return ModifierCategory::comparative;
  throw ConfigError("unknown modifier category name: " + std::string(name));
}

const std::vector<ModifierSet>& default_modifier_sets() {
  static const std::vector<ModifierSet> sets = {
      {ModifierCategory::roberta_neg,
       {"lonely",     "depressed", "jealous",  "lazy",     "tired",
        "sick",       "poor",      "fat",      "upset",    "angry",
        "disgusting", "filthy",    "nasty",    "rotten",   "horrible",
        "terrible",   "awful",     "repulsive", "vile",    "idiotic",
        "stupid",     "moronic",   "dumb",     "ugly",     "shitty"}},
      {ModifierCategory::random_neg,
       {"dark", "mawkish", "aground", "contemptuous", "erroneous",
        "superficial", "ironical", "imaginary", "inept", "freakish"}},
      {ModifierCategory::random_pos,
       {"propitious", "sporty", "fascinating", "heartfelt", "dauntless",
        "extraordinary", "confident", "stylish", "snappy", "superb"}},
      {ModifierCategory::comparative, {"better", "worse", "best", "worst"}},
  };
  return sets;
}

const ModifierSet& default_modifier_set(ModifierCategory category) {
  for (const auto& set : default_modifier_sets()) {
    if (set.category == category) return set;
  }
  throw InvariantViolation("modifier set missing for category " +
                           category_name(category));
}

const std::set<std::string>& default_human_lexicon() {
  static const std::set<std::string> words = {
      "accountant",  "actor",        "actress",     "adult",
      "advisor",     "agent",        "applicant",   "architect",
      "artist",      "assistant",    "athlete",     "attendee",
      "author",      "baby",         "boss",        "boy",
      "buyer",       "candidate",    "captain",     "chairman",
      "chef",        "child",        "children",    "citizen",
      "client",      "coach",        "colleague",   "composer",
      "conductor",   "consultant",   "contestant",  "cook",
      "customer",    "dancer",       "dentist",     "director",
      "doctor",      "donor",        "driver",      "editor",
      "employee",    "employer",     "engineer",    "farmer",
      "father",      "founder",      "friend",      "girl",
      "graduate",    "guard",        "guest",       "guide",
      "head",        "host",         "individual",  "inhabitant",
      "inspector",   "instructor",   "investigator", "investor",
      "journalist",  "judge",        "kid",         "lawyer",
      "leader",      "lecturer",     "librarian",   "man",
      "manager",     "mechanic",     "member",      "men",
      "minister",    "mother",       "musician",    "neighbor",
      "nurse",       "officer",      "official",    "owner",
      "painter",     "parent",       "participant", "passenger",
      "patient",     "people",       "performer",   "perpetrator",
      "person",      "physician",    "pilot",       "player",
      "poet",        "president",    "professor",   "programmer",
      "psychologist", "referee",     "repairman",   "reporter",
      "representative", "resident",  "rider",       "sailor",
      "scientist",   "secretary",    "seller",      "singer",
      "speaker",     "staff",        "student",     "supervisor",
      "supplier",    "surgeon",      "swimmer",     "teacher",
      "technician",  "tenant",       "tourist",     "trainer",
      "tutor",       "user",         "visitor",     "volunteer",
      "voter",       "waiter",       "winner",      "woman",
      "women",       "worker",       "writer",
  };
  return words;
}

std::set<std::string> load_lexicon(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoFailure("cannot open lexicon file: " + path.string());
  std::set<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    size_t b = line.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    size_t e = line.find_last_not_of(" \t");
    out.insert(text::to_lower(line.substr(b, e - b + 1)));
  }
  if (out.empty())
    throw ConfigError("lexicon file holds no terms: " + path.string());
  return out;
}

std::set<std::string> demographic_terms() {
  std::set<std::string> out;
  for (const auto& dim : default_dimensions())
    for (const auto& demo : dim.demographics) out.insert(text::to_lower(demo));
  return out;
}

std::set<std::string> dimension_names() {
  std::set<std::string> out;
  for (const auto& dim : default_dimensions()) out.insert(text::to_lower(dim.name));
  return out;
}

}  // namespace sqlbias::lexicons
