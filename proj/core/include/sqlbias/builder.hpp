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

#ifndef SQLBIAS_BUILDER_HPP
#define SQLBIAS_BUILDER_HPP

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "sqlbias/lexicons.hpp"
#include "sqlbias/relevance.hpp"
#include "sqlbias/spider_model.hpp"

namespace sqlbias::builder {

using spider::ColType;
using spider::ColumnSchema;
using spider::TableSchema;
using spider::DatabaseSchema;
using spider::Example;

/// Benchmark versions add one, two, or three columns per demographic
/// dimension to each human-relevant table: the dimension column itself,
/// then an indicator column per demographic.
enum class BenchmarkVersion { v1, v2, v3 };

std::string version_name(BenchmarkVersion version);
BenchmarkVersion version_from_name(std::string_view name);  // throws ConfigError

/// 7, 14, or 21.
int injected_per_table(BenchmarkVersion version);

struct InjectedColumn {
  std::string column;     // lowercase SQL identifier
  std::string dimension;  // owning dimension's display name
  ColType type = ColType::text;
};

/// Canonical injection order: the seven dimension columns, then the seven
/// first-demographic indicators, then the seven second-demographic
/// indicators, all in dimension order. Indicators are named
/// "is_<demographic lowercase>".
std::vector<InjectedColumn> injected_columns(
    BenchmarkVersion version,
    const std::vector<lexicons::DemographicDimension>& dimensions);

enum class PerturbStructure { attributive, relative_clause };
std::string structure_name(PerturbStructure structure);
PerturbStructure structure_from_name(std::string_view name);  // ConfigError

enum class Provenance { rule, llm };
std::string provenance_name(Provenance provenance);

struct PerturbedExample {
  std::string item_id;  // "<base_example_id>#<category>#<modifier>#<structure>"
  std::string base_example_id;
  std::string db_id;
  std::string base_question;
  std::string question;
  std::string gold_sql;  // byte-equal to the base example's gold SQL
  std::string modifier;
  lexicons::ModifierCategory category = lexicons::ModifierCategory::roberta_neg;
  PerturbStructure structure = PerturbStructure::attributive;
  Provenance provenance = Provenance::rule;
};

struct AugmentationLog {
  std::vector<std::string> augmented_tables;  // "db_id.table"
  std::vector<std::string> collisions;        // "db_id.table.column"
};

/// Appends the version's injected columns to every human-relevant table of
/// the schema; judgment keys are "db_id.table". A case-insensitive name
/// collision skips that one column and records it. Non-human tables pass
/// through untouched. Throws MissingJudgment for an uncovered table.
DatabaseSchema augment_schema(const DatabaseSchema& schema,
                              BenchmarkVersion version,
                              const std::map<std::string, bool>& table_judgments,
                              const std::vector<lexicons::DemographicDimension>&
                                  dimensions,
                              AugmentationLog& log);

/// "ADJ; QUERY? Paraphrase into a new sentence given the token and the
/// sentence." The question's own terminal punctuation is dropped first.
/// Throws PreconditionViolation on an empty modifier or question.
std::string build_paraphrase_prompt(const std::string& modifier,
                                    const std::string& question);

/// Inserts the modifier at the question's first human head noun: attributive
/// puts the bare modifier before it, relative_clause puts "who are
/// <modifier>" after it. Every other byte of the question is preserved.
/// Throws NoHumanHeadNoun when no lexicon noun occurs.
PerturbedExample perturb_query_rule(const Example& base,
                                    const std::string& modifier,
                                    lexicons::ModifierCategory category,
                                    const std::set<std::string>& human_lexicon,
                                    PerturbStructure structure);

/// Asks the client for a paraphrase and accepts it only when it contains the
/// modifier as a whole token and stays within 4 tokens of the source length;
/// any rejection or client failure falls back to perturb_query_rule.
PerturbedExample perturb_query_llm(const Example& base,
                                   const std::string& modifier,
                                   lexicons::ModifierCategory category,
                                   const std::set<std::string>& human_lexicon,
                                   PerturbStructure structure,
                                   relevance::JudgeClient& client);

struct BuildConfig {
  BenchmarkVersion version = BenchmarkVersion::v1;
  std::vector<lexicons::ModifierCategory> categories = {
      lexicons::ModifierCategory::roberta_neg,
      lexicons::ModifierCategory::random_neg,
      lexicons::ModifierCategory::random_pos,
      lexicons::ModifierCategory::comparative};
  std::vector<PerturbStructure> structures = {PerturbStructure::attributive};
  std::set<std::string> human_lexicon;           // empty selects the default
  relevance::JudgeClient* paraphrase_client = nullptr;  // null: rule only
  unsigned jobs = 1;
};

struct Benchmark {
  BenchmarkVersion version = BenchmarkVersion::v1;
  std::vector<DatabaseSchema> augmented_schemas;
  std::vector<PerturbedExample> items;
  AugmentationLog log;
  std::size_t human_tables = 0;
  std::size_t human_databases = 0;
  std::size_t human_examples = 0;
  std::size_t skipped_no_head_noun = 0;
  std::size_t rule_items = 0;
  std::size_t llm_items = 0;
  std::string config_hash;
};

/// Deterministic construction: schemas augmented in corpus order; one item
/// per (human example, enabled category, word, structure), nested in that
/// order. Judgments must cover every table and example.
Benchmark build_benchmark(const std::vector<DatabaseSchema>& schemas,
                          const std::vector<Example>& examples,
                          const relevance::CorpusJudgments& judgments,
                          const std::vector<lexicons::ModifierSet>& sets,
                          const BuildConfig& config);

/// Emits tables.json, examples.json, metadata.jsonl, manifest.json into the
/// directory. Byte-identical across runs for equal benchmarks.
void write_benchmark(const Benchmark& benchmark,
                     const std::filesystem::path& directory);

struct BenchmarkManifest {
  BenchmarkVersion version = BenchmarkVersion::v1;
  std::string config_hash;
  std::map<std::string, std::size_t> counts;
  double avg_columns_human_tables = 0.0;
  std::vector<std::string> human_tables;
  std::vector<std::string> collisions;
};

struct LoadedBenchmark {
  BenchmarkVersion version = BenchmarkVersion::v1;
  std::vector<DatabaseSchema> schemas;  // augmented
  std::vector<PerturbedExample> items;
  BenchmarkManifest manifest;
};

LoadedBenchmark load_benchmark(const std::filesystem::path& directory);

}  // namespace sqlbias::builder

#endif  // SQLBIAS_BUILDER_HPP
