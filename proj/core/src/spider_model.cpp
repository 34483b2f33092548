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

#include "sqlbias/spider_model.hpp"

#include "json.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "sqlbias/errors.hpp"
#include "sqlbias/text.hpp"
#include "sqlbias/util.hpp"

namespace sqlbias::spider {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string col_type_name(ColType type) {
  switch (type) {
    case ColType::text: return "text";
    case ColType::number: return "number";
    case ColType::time: return "time";
    case ColType::boolean: return "boolean";
    case ColType::others: return "others";
  }
  return "others";
}

ColType col_type_from_name(std::string_view name) {
  if (name == "text") return ColType::text;
  if (name == "number") return ColType::number;
  if (name == "time") return ColType::time;
  if (name == "boolean") return ColType::boolean;
  if (name == "others") return ColType::others;
  throw MalformedInput("unknown column type \"" + std::string(name) + "\"");
}

int TableSchema::column_index(std::string_view column_name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (text::iequals(columns[i].name, column_name)) return static_cast<int>(i);
  }
  return -1;
}

int DatabaseSchema::table_index(std::string_view table_name) const {
  for (std::size_t i = 0; i < tables.size(); ++i) {
    if (text::iequals(tables[i].name, table_name)) return static_cast<int>(i);
  }
  return -1;
}

const TableSchema* DatabaseSchema::find_table(std::string_view table_name) const {
  int idx = table_index(table_name);
  return idx < 0 ? nullptr : &tables[idx];
}

namespace {

std::string trimmed(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

json parse_json_file(const std::filesystem::path& path) {
  std::string body = util::read_file(path);
  json doc = json::parse(body, nullptr, false);
  if (doc.is_discarded()) {
    throw MalformedInput("unparseable JSON in " + path.string());
  }
  return doc;
}

DatabaseSchema parse_database(const json& db, const std::filesystem::path& path) {
  if (!db.is_object() || !db.contains("db_id") || !db["db_id"].is_string()) {
    throw MalformedInput("database object without db_id in " + path.string());
  }
  DatabaseSchema schema;
  schema.db_id = db["db_id"].get<std::string>();
  const std::string where = "db \"" + schema.db_id + "\"";

  auto require_array = [&](const char* field) -> const json& {
    if (!db.contains(field) || !db[field].is_array()) {
      throw MalformedInput(where + ": missing field " + field);
    }
    return db[field];
  };

  const json& table_names = require_array("table_names_original");
  const json& column_names = require_array("column_names_original");
  const json& column_types = require_array("column_types");
  const json& primary_keys = require_array("primary_keys");
  const json& foreign_keys = require_array("foreign_keys");
  const json* table_display = db.contains("table_names") && db["table_names"].is_array()
                                  ? &db["table_names"] : nullptr;
  const json* column_display = db.contains("column_names") && db["column_names"].is_array()
                                   ? &db["column_names"] : nullptr;

  for (std::size_t t = 0; t < table_names.size(); ++t) {
    TableSchema table;
    table.name = table_names[t].get<std::string>();
    table.display_name = table_display && t < table_display->size()
                             ? (*table_display)[t].get<std::string>() : table.name;
    if (trimmed(table.name).empty()) {
      throw InvariantViolation(where + ": table_names_original[" + std::to_string(t) +
                               "] is empty");
    }
    schema.tables.push_back(std::move(table));
  }

  if (column_types.size() != column_names.size()) {
    throw MalformedInput(where + ": column_types length " +
                         std::to_string(column_types.size()) +
                         " does not match column_names_original length " +
                         std::to_string(column_names.size()));
  }

  // Global column index (as used by primary_keys/foreign_keys) -> (table, col).
  std::vector<ColumnLocator> global_to_local;
  schema.had_star = false;
  for (std::size_t g = 0; g < column_names.size(); ++g) {
    const json& entry = column_names[g];
    if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number_integer() ||
        !entry[1].is_string()) {
      throw MalformedInput(where + ": column_names_original[" + std::to_string(g) +
                           "] is not a [table_index, name] pair");
    }
    int table_index = entry[0].get<int>();
    std::string name = entry[1].get<std::string>();
    if (table_index < 0) {
      // The synthetic "*" column; remembered but not part of any table.
      schema.had_star = true;
      global_to_local.push_back(ColumnLocator{-1, -1});
      continue;
    }
    if (table_index >= static_cast<int>(schema.tables.size())) {
      throw InvariantViolation(where + ": column_names_original[" + std::to_string(g) +
                               "] table index " + std::to_string(table_index) +
                               " out of range (" + std::to_string(schema.tables.size()) +
                               " tables)");
    }
    if (trimmed(name).empty()) {
      throw InvariantViolation(where + ": column_names_original[" + std::to_string(g) +
                               "] name is empty");
    }
    ColumnSchema column;
    column.name = name;
    column.display_name =
        column_display && g < column_display->size() && (*column_display)[g].is_array() &&
                (*column_display)[g].size() == 2
            ? (*column_display)[g][1].get<std::string>() : name;
    column.col_type = col_type_from_name(column_types[g].get<std::string>());
    column.table_index = table_index;
    TableSchema& table = schema.tables[table_index];
    global_to_local.push_back(
        ColumnLocator{table_index, static_cast<int>(table.columns.size())});
    table.columns.push_back(std::move(column));
  }

  for (std::size_t t = 0; t < schema.tables.size(); ++t) {
    std::set<std::string> seen;
    for (const ColumnSchema& column : schema.tables[t].columns) {
      std::string lower = text::to_lower(column.name);
      if (!seen.insert(lower).second) {
        throw InvariantViolation(where + ": table \"" + schema.tables[t].name +
                                 "\" has duplicate column \"" + column.name + "\"");
      }
    }
  }

  auto locate = [&](int global, const std::string& field) -> ColumnLocator {
    if (global < 0 || global >= static_cast<int>(global_to_local.size())) {
      throw InvariantViolation(where + ": " + field + " index " + std::to_string(global) +
                               " out of range (" + std::to_string(global_to_local.size()) +
                               " columns)");
    }
    ColumnLocator loc = global_to_local[static_cast<std::size_t>(global)];
    if (loc.table < 0) {
      throw InvariantViolation(where + ": " + field + " index " + std::to_string(global) +
                               " refers to the \"*\" column");
    }
    return loc;
  };

  for (std::size_t i = 0; i < primary_keys.size(); ++i) {
    if (!primary_keys[i].is_number_integer()) {
      throw MalformedInput(where + ": primary_keys[" + std::to_string(i) +
                           "] is not an integer");
    }
    ColumnLocator loc = locate(primary_keys[i].get<int>(),
                               "primary_keys[" + std::to_string(i) + "]");
    schema.tables[loc.table].primary_key_columns.push_back(loc.column);
  }

  for (std::size_t i = 0; i < foreign_keys.size(); ++i) {
    const json& pair = foreign_keys[i];
    if (!pair.is_array() || pair.size() != 2) {
      throw MalformedInput(where + ": foreign_keys[" + std::to_string(i) +
                           "] is not a pair");
    }
    std::string field = "foreign_keys[" + std::to_string(i) + "]";
    schema.foreign_keys.emplace_back(locate(pair[0].get<int>(), field),
                                     locate(pair[1].get<int>(), field));
  }

  return schema;
}

}  // namespace

std::vector<DatabaseSchema> load_schemas(const std::filesystem::path& path) {
  json doc = parse_json_file(path);
  if (!doc.is_array()) {
    throw MalformedInput("expected a JSON array of databases in " + path.string());
  }
  std::vector<DatabaseSchema> schemas;
  schemas.reserve(doc.size());
  std::set<std::string> seen_ids;
  for (const json& db : doc) {
    DatabaseSchema schema = parse_database(db, path);
    if (!seen_ids.insert(schema.db_id).second) {
      throw InvariantViolation("duplicate db_id \"" + schema.db_id + "\" in " +
                               path.string());
    }
    schemas.push_back(std::move(schema));
  }
  return schemas;
}

std::vector<Example> load_examples(const std::filesystem::path& path) {
  json doc = parse_json_file(path);
  if (!doc.is_array()) {
    throw MalformedInput("expected a JSON array of examples in " + path.string());
  }
  std::string source = path.filename().string();
  std::vector<Example> examples;
  examples.reserve(doc.size());
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const json& entry = doc[i];
    auto require_string = [&](const char* field) -> std::string {
      if (!entry.is_object() || !entry.contains(field) || !entry[field].is_string()) {
        throw MalformedInput(source + ": element " + std::to_string(i) +
                             " is missing field \"" + field + "\"");
      }
      return entry[field].get<std::string>();
    };
    Example example;
    example.db_id = require_string("db_id");
    example.question = require_string("question");
    example.gold_sql = require_string("query");
    example.example_id = source + ":" + std::to_string(i);
    example.question_tokens = text::tokenize(example.question);
    examples.push_back(std::move(example));
  }
  return examples;
}

std::vector<Example> load_examples(const std::filesystem::path& path,
                                   const std::vector<DatabaseSchema>& schemas) {
  std::vector<Example> examples = load_examples(path);
  validate_examples(examples, schemas);
  return examples;
}

void validate_examples(const std::vector<Example>& examples,
                       const std::vector<DatabaseSchema>& schemas) {
  auto by_id = schema_map(schemas);
  for (const Example& example : examples) {
    if (by_id.find(example.db_id) == by_id.end()) {
      throw UnknownDatabase("example " + example.example_id +
                            " references unknown db_id \"" + example.db_id + "\"");
    }
  }
}

PredictionFile load_predictions(const std::filesystem::path& path,
                                std::string model_label) {
  std::string body = util::read_file(path);
  PredictionFile file;
  file.model_label = std::move(model_label);
  std::size_t begin = 0;
  while (begin <= body.size()) {
    std::size_t end = body.find('\n', begin);
    if (end == std::string::npos) {
      // Final segment; a trailing newline must not create a phantom entry.
      if (begin < body.size()) {
        std::string line = body.substr(begin);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        file.predictions.push_back(std::move(line));
      }
      break;
    }
    std::string line = body.substr(begin, end - begin);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    file.predictions.push_back(std::move(line));
    begin = end + 1;
  }
  return file;
}

namespace {

ordered_json schema_to_json(const DatabaseSchema& schema) {
  ordered_json out;
  out["db_id"] = schema.db_id;
  ordered_json table_names = ordered_json::array();
  ordered_json table_display = ordered_json::array();
  for (const TableSchema& table : schema.tables) {
    table_names.push_back(table.name);
    table_display.push_back(table.display_name);
  }

  ordered_json column_names = ordered_json::array();
  ordered_json column_display = ordered_json::array();
  ordered_json column_types = ordered_json::array();
  // Map (table, column) -> global index for key serialization.
  std::vector<std::vector<int>> global_index(schema.tables.size());
  int next = 0;
  if (schema.had_star) {
    column_names.push_back(ordered_json::array({-1, "*"}));
    column_display.push_back(ordered_json::array({-1, "*"}));
    column_types.push_back("text");
    next = 1;
  }
  for (std::size_t t = 0; t < schema.tables.size(); ++t) {
    const TableSchema& table = schema.tables[t];
    global_index[t].resize(table.columns.size());
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      const ColumnSchema& column = table.columns[c];
      column_names.push_back(ordered_json::array({static_cast<int>(t), column.name}));
      column_display.push_back(
          ordered_json::array({static_cast<int>(t), column.display_name}));
      column_types.push_back(col_type_name(column.col_type));
      global_index[t][c] = next++;
    }
  }

  ordered_json primary_keys = ordered_json::array();
  for (std::size_t t = 0; t < schema.tables.size(); ++t) {
    for (int c : schema.tables[t].primary_key_columns) {
      primary_keys.push_back(global_index[t][static_cast<std::size_t>(c)]);
    }
  }
  ordered_json foreign_keys = ordered_json::array();
  for (const auto& [from, to] : schema.foreign_keys) {
    foreign_keys.push_back(ordered_json::array(
        {global_index[from.table][static_cast<std::size_t>(from.column)],
         global_index[to.table][static_cast<std::size_t>(to.column)]}));
  }

  out["table_names_original"] = std::move(table_names);
  out["table_names"] = std::move(table_display);
  out["column_names_original"] = std::move(column_names);
  out["column_names"] = std::move(column_display);
  out["column_types"] = std::move(column_types);
  out["primary_keys"] = std::move(primary_keys);
  out["foreign_keys"] = std::move(foreign_keys);
  return out;
}

}  // namespace

void serialize_schemas(const std::vector<DatabaseSchema>& schemas,
                       const std::filesystem::path& path) {
  ordered_json doc = ordered_json::array();
  for (const DatabaseSchema& schema : schemas) {
    doc.push_back(schema_to_json(schema));
  }
  util::write_file(path, doc.dump(1) + "\n");
}

void serialize_examples(const std::vector<Example>& examples,
                        const std::filesystem::path& path) {
  ordered_json doc = ordered_json::array();
  for (const Example& example : examples) {
    ordered_json entry;
    entry["db_id"] = example.db_id;
    entry["question"] = example.question;
    entry["query"] = example.gold_sql;
    doc.push_back(std::move(entry));
  }
  util::write_file(path, doc.dump(1) + "\n");
}

std::map<std::string, const DatabaseSchema*> schema_map(
    const std::vector<DatabaseSchema>& schemas) {
  std::map<std::string, const DatabaseSchema*> out;
  for (const DatabaseSchema& schema : schemas) {
    out.emplace(schema.db_id, &schema);
  }
  return out;
}

}  // namespace sqlbias::spider
