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

#ifndef SQLBIAS_SPIDER_MODEL_HPP
#define SQLBIAS_SPIDER_MODEL_HPP

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sqlbias::spider {

// Data model for Spider-format schemas, examples, and prediction files.
// All types are immutable after construction and safe to share across
// threads.

enum class ColType { text, number, time, boolean, others };

std::string col_type_name(ColType type);
ColType col_type_from_name(std::string_view name);  // throws MalformedInput

struct ColumnSchema {
  std::string name;          // identifier ("Driver_ID")
  std::string display_name;  // natural form ("Driver ID"); falls back to name
  ColType col_type = ColType::text;
  int table_index = 0;

  bool operator==(const ColumnSchema&) const = default;
};

struct TableSchema {
  std::string name;
  std::string display_name;
  std::vector<ColumnSchema> columns;
  std::vector<int> primary_key_columns;  // indices into columns

  /// Case-insensitive column lookup; -1 when absent.
  int column_index(std::string_view column_name) const;

  bool operator==(const TableSchema&) const = default;
};

struct ColumnLocator {
  int table = 0;
  int column = 0;

  bool operator==(const ColumnLocator&) const = default;
};

struct DatabaseSchema {
  std::string db_id;
  std::vector<TableSchema> tables;
  std::vector<std::pair<ColumnLocator, ColumnLocator>> foreign_keys;
  // Spider files carry a synthetic "*" column (table index -1). It is not a
  // schema column; it is dropped on load and re-emitted on serialization.
  bool had_star = true;

  /// Case-insensitive table lookup; -1 when absent.
  int table_index(std::string_view table_name) const;
  const TableSchema* find_table(std::string_view table_name) const;

  bool operator==(const DatabaseSchema&) const = default;
};

struct Example {
  std::string example_id;  // "<source-filename>:<zero-based index>"
  std::string db_id;
  std::string question;
  std::string gold_sql;
  std::vector<std::string> question_tokens;  // deterministic tokenization

  bool operator==(const Example&) const = default;
};

struct PredictionFile {
  std::string model_label;
  std::vector<std::string> predictions;  // aligned 1:1 with an example list
};

/// Load a Spider `tables.json`. Validates every structural invariant.
/// Throws MalformedInput or InvariantViolation with db_id and field path.
std::vector<DatabaseSchema> load_schemas(const std::filesystem::path& path);

/// Load a Spider example file (JSON array of {db_id, question, query}).
std::vector<Example> load_examples(const std::filesystem::path& path);

/// As above, then check that every db_id resolves in `schemas`.
/// Throws UnknownDatabase.
std::vector<Example> load_examples(const std::filesystem::path& path,
                                   const std::vector<DatabaseSchema>& schemas);

void validate_examples(const std::vector<Example>& examples,
                       const std::vector<DatabaseSchema>& schemas);

/// One SQL string per line; blank lines are empty predictions; a trailing
/// newline does not create a phantom prediction; CRLF and LF are equivalent.
PredictionFile load_predictions(const std::filesystem::path& path,
                                std::string model_label);

/// Write a Spider-compatible tables.json. Byte-deterministic; round-trips
/// through load_schemas to structural equality.
void serialize_schemas(const std::vector<DatabaseSchema>& schemas,
                       const std::filesystem::path& path);

/// Write a Spider-compatible example array ({db_id, question, query}).
void serialize_examples(const std::vector<Example>& examples,
                        const std::filesystem::path& path);

/// db_id -> schema pointer for the given corpus.
std::map<std::string, const DatabaseSchema*> schema_map(
    const std::vector<DatabaseSchema>& schemas);

}  // namespace sqlbias::spider

#endif  // SQLBIAS_SPIDER_MODEL_HPP
