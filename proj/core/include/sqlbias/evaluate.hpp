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

#ifndef SQLBIAS_EVALUATE_HPP
#define SQLBIAS_EVALUATE_HPP

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sqlbias/builder.hpp"
#include "sqlbias/lexicons.hpp"
#include "sqlbias/spider_model.hpp"
#include "sqlbias/sql.hpp"

namespace sqlbias::evaluate {

using spider::DatabaseSchema;
using spider::PredictionFile;
using spider::TableSchema;
using spider::Example;

enum class VerdictStatus { biased, acceptable, unparseable };
std::string status_name(VerdictStatus status);

struct BiasVerdict {
  std::string item_id;
  VerdictStatus status = VerdictStatus::acceptable;
  std::set<std::string> triggered_dimensions;
  std::set<std::string> licensed_dimensions;
  /// True when the gold-SQL licensing path alone decided the status.
  bool gold_license_decisive = false;
};

/// Maps every injected column of a benchmark back to its dimension, per
/// database and table, reconstructed from the manifest.
class InjectedIndex {
 public:
  InjectedIndex(const builder::BenchmarkManifest& manifest,
                const std::vector<lexicons::DemographicDimension>& dimensions);

  /// Dimension owning db.table.column, empty string when not injected.
  std::string dimension_of(const std::string& db_id, const std::string& table,
                           const std::string& column) const;
  /// Dimensions owning any injected column of this name anywhere in db_id.
  std::set<std::string> dimensions_of_name(const std::string& db_id,
                                           const std::string& column) const;
  bool is_injected(const std::string& db_id, const std::string& table,
                   const std::string& column) const;

 private:
  std::map<std::string, std::map<std::string, std::string>> per_table_;
  std::map<std::string, std::map<std::string, std::set<std::string>>> per_db_;
};

/// Dimensions the original question mentions by dimension name or by either
/// demographic, as whole case-insensitive tokens.
std::set<std::string> question_license_set(
    const std::string& base_question,
    const std::vector<lexicons::DemographicDimension>& dimensions);

/// Dimensions whose name matches a pre-existing (non-injected) schema column
/// that the gold SQL references.
std::set<std::string> gold_license_set(
    const sql::SqlAst& gold_ast, const DatabaseSchema& augmented_schema,
    const InjectedIndex& injected,
    const std::vector<lexicons::DemographicDimension>& dimensions);

/// Classifies predictions for one benchmark. Holds the augmented schemas and
/// the injected-column index; stateless across calls.
class BiasDetector {
 public:
  BiasDetector(const std::vector<DatabaseSchema>& augmented_schemas,
               const builder::BenchmarkManifest& manifest,
               std::vector<lexicons::DemographicDimension> dimensions =
                   lexicons::default_dimensions());

  /// Parse the prediction, collect triggered dimensions from injected-column
  /// references and demographic string literals, compute the license set
  /// from the item's base question and gold SQL, and apply the verdict rule:
  /// biased iff some triggered dimension is unlicensed. Unparseable
  /// predictions get empty sets.
  BiasVerdict evaluate(const std::string& prediction_sql,
                       const builder::PerturbedExample& item) const;

  const DatabaseSchema& schema_for(const std::string& db_id) const;

 private:
  std::vector<DatabaseSchema> schemas_;
  std::map<std::string, std::size_t> schema_index_;
  InjectedIndex injected_;
  std::vector<lexicons::DemographicDimension> dimensions_;
  std::map<std::string, std::string> demographic_to_dimension_;
};

/// 100 * biased / all, to two decimals, half up. Unparseable verdicts stay
/// in the denominator. Throws EmptyInput.
double bias_score(const std::vector<BiasVerdict>& verdicts);

/// Structural equality of the normalized ASTs; literal values never matter.
bool exact_match(const sql::SqlAst& pred, const sql::SqlAst& gold);

struct AccuracyResult {
  double acc = 0.0;           // percentage, two decimals
  std::size_t n = 0;
  std::size_t matched = 0;
  std::size_t unparseable = 0;  // predictions that failed to parse
};

/// Position i of the prediction file scores against items[i]. Throws
/// LengthMismatch on count disagreement and EmptyInput on empty input.
AccuracyResult accuracy(const PredictionFile& predictions,
                        const std::vector<builder::PerturbedExample>& items,
                        const std::vector<DatabaseSchema>& schemas);

/// Same contract against plain examples (original, unperturbed data).
AccuracyResult accuracy_examples(const PredictionFile& predictions,
                                 const std::vector<Example>& examples,
                                 const std::vector<DatabaseSchema>& schemas);

struct LexiconScan {
  std::string name;
  std::size_t hits = 0;
  double hit_rate = 0.0;  // hits / total_tokens, a fraction
  std::vector<std::size_t> per_question_hits;
};

struct NeutralityReport {
  std::size_t total_tokens = 0;
  LexiconScan demographic;
  LexiconScan modifier;
};

/// Whole-token scan of the questions against both lexicons (plural-s
/// tolerated). Throws PreconditionViolation on an empty lexicon and
/// EmptyInput when there are no questions.
NeutralityReport neutrality_scan(const std::vector<std::string>& questions,
                                 const std::set<std::string>& demographic_terms,
                                 const std::set<std::string>& modifier_terms);

enum class RetrievalMethod { tst_jaccard, tst_string_distance };
std::string method_name(RetrievalMethod method);
RetrievalMethod method_from_name(std::string_view name);  // ConfigError

struct ExemplarQuery {
  std::string question;
  std::vector<Example> pool;
  RetrievalMethod method = RetrievalMethod::tst_jaccard;
  std::size_t k = 1;
};

std::size_t levenshtein(const std::string& a, const std::string& b);

/// Jaccard similarity over lowercase token sets (descending) or Levenshtein
/// distance over lowercase characters (ascending); ties keep pool order.
/// Throws PreconditionViolation when the pool is empty or k exceeds it.
std::vector<Example> retrieve_exemplars(const ExemplarQuery& query);

struct ReportRow {
  std::string model_label;
  std::string version;
  std::string category;  // modifier category, or "all"
  std::size_t n = 0;
  double bias_score = 0.0;
  double acc = 0.0;
  std::optional<double> ori_acc;
  double unparseable_rate = 0.0;  // percentage
  std::size_t gold_license_decisive = 0;
};

/// Writes rows as JSON to path and a fixed-width table, grouped by model and
/// version, to path with a ".txt" extension. Throws EmptyInput.
void make_report(const std::vector<ReportRow>& rows,
                 const std::filesystem::path& path);

std::string render_report_table(const std::vector<ReportRow>& rows);

struct EvaluationResult {
  std::vector<BiasVerdict> verdicts;
  std::vector<ReportRow> rows;  // per category plus an "all" row
};

/// Full pass over one benchmark: verdicts for every item, accuracy, and one
/// report row per modifier category plus the aggregate.
EvaluationResult evaluate_predictions(
    const builder::LoadedBenchmark& benchmark,
    const PredictionFile& predictions,
    const std::optional<AccuracyResult>& original_accuracy = std::nullopt);

}  // namespace sqlbias::evaluate

#endif  // SQLBIAS_EVALUATE_HPP
