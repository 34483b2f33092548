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

#include "sqlbias/corpusgen.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <utility>

#include "sqlbias/errors.hpp"
#include "sqlbias/text.hpp"
#include "sqlbias/util.hpp"

namespace sqlbias::corpusgen {

using spider::ColType;
using spider::ColumnLocator;
using spider::ColumnSchema;
using spider::DatabaseSchema;
using spider::Example;
using spider::TableSchema;

namespace {

// Every noun pluralizes with a bare "s"; questions rely on that.
const std::vector<std::string>& human_nouns() {
  static const std::vector<std::string> nouns = {
      "driver",     "teacher",   "student",    "customer",  "singer",
      "doctor",     "nurse",     "employee",   "worker",    "manager",
      "lawyer",     "engineer",  "farmer",     "pilot",     "athlete",
      "journalist", "librarian", "painter",    "dancer",    "scientist",
      "waiter",     "tutor",     "guest",      "member",    "resident",
      "voter",      "passenger", "tenant",     "volunteer", "musician",
      "officer",    "inspector", "surgeon",    "professor", "reporter",
      "head",       "perpetrator", "swimmer",  "trainer",   "editor"};
  return nouns;
}

const std::vector<std::string>& object_nouns() {
  static const std::vector<std::string> nouns = {
      "airport",   "flight",   "airplane", "river",    "mountain",
      "bridge",    "vehicle",  "machine",  "product",  "warehouse",
      "satellite", "planet",   "forest",   "highway",  "museum",
      "theater",   "stadium",  "harbor",   "island",   "tunnel",
      "engine",    "sensor",   "pipeline", "billboard", "canal"};
  return nouns;
}

const std::vector<std::string>& filler_columns() {
  static const std::vector<std::string> names = {
      "email", "phone", "years_active", "status", "level", "score"};
  return names;
}

const std::vector<std::string>& object_fillers() {
  static const std::vector<std::string> names = {"status", "code", "length",
                                                 "width", "grade"};
  return names;
}

const std::vector<std::string>& cities() {
  static const std::vector<std::string> names = {
      "Ashford",  "Brookfield", "Crestwood", "Dunmore",
      "Eastvale", "Fairholm",   "Glenora",   "Hartwell"};
  return names;
}

ColumnSchema make_column(const std::string& name, ColType type,
                         int table_index) {
  ColumnSchema column;
  column.name = name;
  column.display_name = name;
  column.col_type = type;
  column.table_index = table_index;
  return column;
}

struct Allocation {
  std::size_t human_table_serial = 0;
  std::size_t object_table_serial = 0;
};

/// Human tables alternate 6/5 columns starting at 6; object tables alternate
/// 5/6 starting at 5. Over 607 and 413 tables this lands the corpus-wide
/// mean at exactly 5.5 columns per table.
bool human_table_gets_extra(std::size_t serial) { return serial % 2 == 0; }
bool object_table_gets_extra(std::size_t serial) { return serial % 2 == 1; }

enum class Plant { none, age, gender };

TableSchema make_human_table(const std::string& noun, int table_index,
                             const std::string& root_noun, bool is_root,
                             Allocation& alloc, Plant plant) {
  TableSchema table;
  table.name = noun;
  table.display_name = noun;
  bool extra = human_table_gets_extra(alloc.human_table_serial);
  std::size_t serial = alloc.human_table_serial++;

  table.columns.push_back(
      make_column(noun + "_id", ColType::number, table_index));
  table.columns.push_back(make_column("name", ColType::text, table_index));
  table.columns.push_back(make_column("home_city", ColType::text, table_index));
  table.columns.push_back(make_column("salary", ColType::number, table_index));
  if (is_root) {
    if (plant == Plant::age)
      table.columns.push_back(make_column("age", ColType::number, table_index));
    else if (plant == Plant::gender)
      table.columns.push_back(
          make_column("gender", ColType::text, table_index));
    else
      table.columns.push_back(
          make_column(filler_columns()[serial % filler_columns().size()],
                      ColType::text, table_index));
  } else {
    table.columns.push_back(
        make_column(root_noun + "_id", ColType::number, table_index));
  }
  // offset 3 never collides with the slot-4 filler pick modulo 6
  if (extra)
    table.columns.push_back(
        make_column(filler_columns()[(serial + 3) % filler_columns().size()],
                    ColType::text, table_index));
  table.primary_key_columns = {0};
  return table;
}

TableSchema make_object_table(const std::string& noun, int table_index,
                              Allocation& alloc) {
  TableSchema table;
  table.name = noun;
  table.display_name = noun;
  bool extra = object_table_gets_extra(alloc.object_table_serial);
  std::size_t serial = alloc.object_table_serial++;

  table.columns.push_back(
      make_column(noun + "_id", ColType::number, table_index));
  table.columns.push_back(make_column("title", ColType::text, table_index));
  table.columns.push_back(make_column("location", ColType::text, table_index));
  table.columns.push_back(make_column("capacity", ColType::number, table_index));
  table.columns.push_back(
      make_column("built_year", ColType::number, table_index));
  if (extra)
    table.columns.push_back(make_column(
        object_fillers()[serial % object_fillers().size()], ColType::text,
        table_index));
  table.primary_key_columns = {0};
  return table;
}

struct QuestionTemplate {
  // human: operates on one or two people tables of the database
  std::function<std::pair<std::string, std::string>(
      const DatabaseSchema&, std::size_t, std::size_t, std::size_t)>
      build;  // (db, primary_table, secondary_table, salt) -> question, sql
};

std::string city_at(std::size_t salt) { return cities()[salt % cities().size()]; }
std::string other_city_at(std::size_t salt) {
  return cities()[(salt + 3) % cities().size()];
}

std::vector<QuestionTemplate> human_templates() {
  using R = std::pair<std::string, std::string>;
  std::vector<QuestionTemplate> out;
  auto noun = [](const DatabaseSchema& db, std::size_t t) {
    return db.tables[t].name;
  };
  out.push_back({[noun](const DatabaseSchema& db, std::size_t a, std::size_t,
                        std::size_t) -> R {
    return {"How many " + noun(db, a) + "s are there?",
            "SELECT count(*) FROM " + noun(db, a)};
  }});
  out.push_back({[noun](const DatabaseSchema& db, std::size_t a, std::size_t,
                        std::size_t) -> R {
    return {"List the names of all " + noun(db, a) + "s.",
            "SELECT name FROM " + noun(db, a)};
  }});
  out.push_back({[noun](const DatabaseSchema& db, std::size_t a, std::size_t,
                        std::size_t) -> R {
    return {"What is the average salary of all " + noun(db, a) + "s?",
            "SELECT avg(salary) FROM " + noun(db, a)};
  }});
  out.push_back({[noun](const DatabaseSchema& db, std::size_t a, std::size_t,
                        std::size_t) -> R {
    return {"Show the distinct home cities of " + noun(db, a) + "s.",
            "SELECT DISTINCT home_city FROM " + noun(db, a)};
  }});
  out.push_back({[noun](const DatabaseSchema& db, std::size_t a, std::size_t,
                        std::size_t) -> R {
    return {"Which " + noun(db, a) + "s have names starting with M?",
            "SELECT name FROM " + noun(db, a) + " WHERE name LIKE 'M%'"};
  }});
  out.push_back({[noun](const DatabaseSchema& db, std::size_t a, std::size_t,
                        std::size_t salt) -> R {
    std::string c = city_at(salt);
    return {"What are the names of " + noun(db, a) + "s from " + c +
                " with a salary higher than 3000?",
            "SELECT name FROM " + noun(db, a) + " WHERE home_city = '" + c +
                "' AND salary > 3000"};
  }});
  out.push_back({[noun](const DatabaseSchema& db, std::size_t a, std::size_t,
                        std::size_t) -> R {
    return {"What is the name of the " + noun(db, a) +
                " with the highest salary among all " + noun(db, a) + "s?",
            "SELECT name FROM " + noun(db, a) +
                " ORDER BY salary DESC LIMIT 1"};
  }});
  out.push_back({[noun](const DatabaseSchema& db, std::size_t a, std::size_t b,
                        std::size_t) -> R {
    return {"List the names of " + noun(db, a) + "s that do not have any " +
                noun(db, b) + "s in the records.",
            "SELECT name FROM " + noun(db, a) + " WHERE " + noun(db, a) +
                "_id NOT IN (SELECT " + noun(db, a) + "_id FROM " +
                noun(db, b) + ")"};
  }});
  out.push_back({[noun](const DatabaseSchema& db, std::size_t a, std::size_t,
                        std::size_t) -> R {
    return {"Show the names of all " + noun(db, a) +
                "s whose salary is between 2000 and 5000.",
            "SELECT name FROM " + noun(db, a) +
                " WHERE salary BETWEEN 2000 AND 5000"};
  }});
  out.push_back({[noun](const DatabaseSchema& db, std::size_t a, std::size_t,
                        std::size_t) -> R {
    return {"For each home city, how many " + noun(db, a) +
                "s live there? Show the city and the count.",
            "SELECT home_city, count(*) FROM " + noun(db, a) +
                " GROUP BY home_city"};
  }});
  out.push_back({[noun](const DatabaseSchema& db, std::size_t a, std::size_t b,
                        std::size_t) -> R {
    return {"Show the names of " + noun(db, a) +
                "s together with the names of their " + noun(db, b) + "s.",
            "SELECT T1.name, T2.name FROM " + noun(db, a) + " AS T1 JOIN " +
                noun(db, b) + " AS T2 ON T1." + noun(db, a) + "_id = T2." +
                noun(db, a) + "_id"};
  }});
  out.push_back({[noun](const DatabaseSchema& db, std::size_t a, std::size_t,
                        std::size_t) -> R {
    return {"Which home cities have more than 3 " + noun(db, a) +
                "s? Show each home city.",
            "SELECT home_city FROM " + noun(db, a) +
                " GROUP BY home_city HAVING count(*) > 3"};
  }});
  out.push_back({[noun](const DatabaseSchema& db, std::size_t a, std::size_t,
                        std::size_t salt) -> R {
    std::string x = city_at(salt), y = other_city_at(salt);
    return {"Show the names of " + noun(db, a) + "s from " + x + " or " + y +
                " ordered by name.",
            "SELECT name FROM " + noun(db, a) + " WHERE home_city = '" + x +
                "' OR home_city = '" + y + "' ORDER BY name"};
  }});
  out.push_back({[noun](const DatabaseSchema& db, std::size_t a, std::size_t b,
                        std::size_t) -> R {
    return {"List all home cities of " + noun(db, a) +
                "s and also all home cities of " + noun(db, b) + "s.",
            "SELECT home_city FROM " + noun(db, a) +
                " UNION SELECT home_city FROM " + noun(db, b)};
  }});
  out.push_back({[noun](const DatabaseSchema& db, std::size_t a, std::size_t b,
                        std::size_t) -> R {
    return {"Show the name of each " + noun(db, a) + " and the number of " +
                noun(db, b) + "s they have.",
            "SELECT T1.name, count(*) FROM " + noun(db, a) + " AS T1 JOIN " +
                noun(db, b) + " AS T2 ON T1." + noun(db, a) + "_id = T2." +
                noun(db, a) + "_id GROUP BY T1.name"};
  }});
  return out;
}

std::vector<QuestionTemplate> object_templates() {
  using R = std::pair<std::string, std::string>;
  std::vector<QuestionTemplate> out;
  auto noun = [](const DatabaseSchema& db, std::size_t t) {
    return db.tables[t].name;
  };
  out.push_back({[noun](const DatabaseSchema& db, std::size_t a, std::size_t,
                        std::size_t) -> R {
    return {"How many " + noun(db, a) + "s are there?",
            "SELECT count(*) FROM " + noun(db, a)};
  }});
  out.push_back({[noun](const DatabaseSchema& db, std::size_t a, std::size_t,
                        std::size_t) -> R {
    return {"List the titles of all " + noun(db, a) + "s.",
            "SELECT title FROM " + noun(db, a)};
  }});
  out.push_back({[noun](const DatabaseSchema& db, std::size_t a, std::size_t,
                        std::size_t) -> R {
    return {"What is the average capacity of all " + noun(db, a) + "s?",
            "SELECT avg(capacity) FROM " + noun(db, a)};
  }});
  out.push_back({[noun](const DatabaseSchema& db, std::size_t a, std::size_t,
                        std::size_t) -> R {
    return {"Show the distinct locations of " + noun(db, a) + "s.",
            "SELECT DISTINCT location FROM " + noun(db, a)};
  }});
  out.push_back({[noun](const DatabaseSchema& db, std::size_t a, std::size_t,
                        std::size_t salt) -> R {
    std::string c = city_at(salt);
    return {"What are the titles of " + noun(db, a) + "s from " + c +
                " with a capacity higher than 3000?",
            "SELECT title FROM " + noun(db, a) + " WHERE location = '" + c +
                "' AND capacity > 3000"};
  }});
  out.push_back({[noun](const DatabaseSchema& db, std::size_t a, std::size_t,
                        std::size_t) -> R {
    return {"What is the title of the " + noun(db, a) +
                " with the highest capacity among all " + noun(db, a) + "s?",
            "SELECT title FROM " + noun(db, a) +
                " ORDER BY capacity DESC LIMIT 1"};
  }});
  out.push_back({[noun](const DatabaseSchema& db, std::size_t a, std::size_t,
                        std::size_t) -> R {
    return {"Show the titles of all " + noun(db, a) +
                "s whose capacity is between 2000 and 5000.",
            "SELECT title FROM " + noun(db, a) +
                " WHERE capacity BETWEEN 2000 AND 5000"};
  }});
  out.push_back({[noun](const DatabaseSchema& db, std::size_t a, std::size_t,
                        std::size_t) -> R {
    return {"For each location, how many " + noun(db, a) +
                "s are listed there? Show the location and the count.",
            "SELECT location, count(*) FROM " + noun(db, a) +
                " GROUP BY location"};
  }});
  out.push_back({[noun](const DatabaseSchema& db, std::size_t a, std::size_t,
                        std::size_t salt) -> R {
    std::string x = city_at(salt), y = other_city_at(salt);
    return {"Show the titles of " + noun(db, a) + "s from " + x + " or " + y +
                " ordered by title.",
            "SELECT title FROM " + noun(db, a) + " WHERE location = '" + x +
                "' OR location = '" + y + "' ORDER BY title"};
  }});
  return out;
}

struct Steering {
  double sum = 0;
  std::size_t count = 0;
};

}  // namespace

GeneratedCorpus generate_corpus(const CorpusSpec& spec) {
  if (spec.human_databases < 0 || spec.other_databases < 0)
    throw PreconditionViolation("database counts must be non-negative");
  if (spec.human_databases + spec.other_databases == 0 &&
      spec.train_examples + spec.dev_examples > 0)
    throw PreconditionViolation("examples need at least one database");

  GeneratedCorpus corpus;
  Allocation alloc;

  const auto& people = human_nouns();
  const auto& objects = object_nouns();

  for (int h = 0; h < spec.human_databases; ++h) {
    DatabaseSchema db;
    char buf[16];
    std::snprintf(buf, sizeof buf, "hdb_%03d", h);
    db.db_id = buf;
    int human_count = h < 12 ? 6 : 5;
    std::string root = people[(static_cast<std::size_t>(h) * 5) % people.size()];
    for (int k = 0; k < human_count; ++k) {
      std::string noun =
          people[(static_cast<std::size_t>(h) * 5 + static_cast<std::size_t>(k)) %
                 people.size()];
      Plant plant = Plant::none;
      if (k == 0 && h < 12) plant = Plant::age;
      if (k == 0 && h >= 12 && h < 18) plant = Plant::gender;
      db.tables.push_back(
          make_human_table(noun, k, root, k == 0, alloc, plant));
      if (k > 0) {
        // column 4 of every non-root people table references the root table
        ColumnLocator from{k, 4};
        ColumnLocator to{0, 0};
        db.foreign_keys.emplace_back(from, to);
      }
    }
    db.tables.push_back(make_object_table(
        objects[static_cast<std::size_t>(h) % objects.size()], human_count,
        alloc));
    corpus.schemas.push_back(std::move(db));
  }

  for (int o = 0; o < spec.other_databases; ++o) {
    DatabaseSchema db;
    char buf[16];
    std::snprintf(buf, sizeof buf, "ndb_%03d", o);
    db.db_id = buf;
    int table_count = o < 51 ? 4 : 3;
    for (int k = 0; k < table_count; ++k)
      db.tables.push_back(make_object_table(
          objects[(static_cast<std::size_t>(o) * 4 +
                   static_cast<std::size_t>(k)) %
                  objects.size()],
          k, alloc));
    corpus.schemas.push_back(std::move(db));
  }

  // relevance fixture: a table is human iff it sits in the people block
  for (const auto& db : corpus.schemas) {
    bool human_db = db.db_id.rfind("hdb_", 0) == 0;
    int human_count = 0;
    if (human_db)
      human_count = static_cast<int>(db.tables.size()) - 1;  // last is object
    for (std::size_t t = 0; t < db.tables.size(); ++t) {
      relevance::RelevanceJudgment judgment;
      judgment.subject_id = db.db_id + "." + db.tables[t].name;
      judgment.is_human_relevant = human_db && static_cast<int>(t) < human_count;
      judgment.source = relevance::JudgmentSource::fixture;
      corpus.judgments.push_back(std::move(judgment));
    }
  }

  const auto h_templates = human_templates();
  const auto o_templates = object_templates();

  auto generate_split = [&](const std::string& filename, std::size_t total,
                            std::size_t db_offset) {
    std::vector<Example> split;
    Steering human_steer, object_steer;
    for (std::size_t i = 0; i < total; ++i) {
      const DatabaseSchema& db =
          corpus.schemas[(i * 7 + db_offset) % corpus.schemas.size()];
      bool human_db = db.db_id.rfind("hdb_", 0) == 0;
      std::size_t people_tables = human_db ? db.tables.size() - 1 : 0;

      const auto& templates = human_db ? h_templates : o_templates;
      Steering& steer = human_db ? human_steer : object_steer;

      std::size_t primary =
          human_db ? i % people_tables : i % db.tables.size();
      std::size_t secondary = 0;
      if (human_db) {
        // two-table templates join the root people table to another one
        secondary = 1 + i % (people_tables - 1);
      }

      double best_delta = 0;
      std::size_t best = templates.size();
      std::pair<std::string, std::string> best_result;
      for (std::size_t r = 0; r < templates.size(); ++r) {
        std::size_t t = (r + i) % templates.size();
        // templates 7, 10, 13, 14 of the human list need the join pair
        bool needs_pair = human_db && (t == 7 || t == 10 || t == 13 || t == 14);
        std::size_t a = needs_pair ? 0 : primary;
        auto result = templates[t].build(db, a, secondary, i);
        double tokens =
            static_cast<double>(text::tokenize(result.first).size());
        double target =
            spec.target_question_tokens * static_cast<double>(steer.count + 1);
        double delta = std::fabs(steer.sum + tokens - target);
        if (best == templates.size() || delta < best_delta - 1e-9) {
          best = t;
          best_delta = delta;
          best_result = std::move(result);
        }
      }

      Example example;
      example.example_id = filename + ":" + std::to_string(i);
      example.db_id = db.db_id;
      example.question = best_result.first;
      example.gold_sql = best_result.second;
      example.question_tokens = text::tokenize(example.question);
      steer.sum += static_cast<double>(example.question_tokens.size());
      ++steer.count;

      relevance::RelevanceJudgment judgment;
      judgment.subject_id = example.example_id;
      judgment.is_human_relevant = human_db;
      judgment.source = relevance::JudgmentSource::fixture;
      corpus.judgments.push_back(std::move(judgment));

      split.push_back(std::move(example));
    }
    return split;
  };

  corpus.train = generate_split("train.json", spec.train_examples, 0);
  corpus.dev = generate_split("dev.json", spec.dev_examples, 3);
  return corpus;
}

void write_corpus(const GeneratedCorpus& corpus,
                  const std::filesystem::path& directory) {
  std::filesystem::create_directories(directory);
  spider::serialize_schemas(corpus.schemas, directory / "tables.json");
  spider::serialize_examples(corpus.train, directory / "train.json");
  spider::serialize_examples(corpus.dev, directory / "dev.json");
  relevance::write_fixture(directory / "relevance.jsonl", corpus.judgments);
}

}  // namespace sqlbias::corpusgen
