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

#include <filesystem>
#include <string>
#include <vector>

#include "doctest.h"
#include "sqlbias/errors.hpp"
#include "sqlbias/spider_model.hpp"
#include "sqlbias/util.hpp"

namespace {

namespace fs = std::filesystem;
using namespace sqlbias;
using namespace sqlbias::spider;

const fs::path kDataDir = SQLBIAS_DATA_DIR;

fs::path temp_dir(const std::string& leaf) {
  fs::path dir = fs::temp_directory_path() / ("sqlbias_spider_test_" + leaf);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// A minimal but complete tables.json with one two-table database.
const char* kTinySchema = R"([
  {
    "db_id": "tiny",
    "table_names_original": ["driver", "bus"],
    "table_names": ["driver", "bus"],
    "column_names_original": [
      [-1, "*"],
      [0, "Driver_ID"], [0, "Name"],
      [1, "Bus_ID"], [1, "Driver_ID"]
    ],
    "column_names": [
      [-1, "*"],
      [0, "Driver ID"], [0, "Name"],
      [1, "Bus ID"], [1, "Driver ID"]
    ],
    "column_types": ["text", "number", "text", "number", "number"],
    "primary_keys": [1, 3],
    "foreign_keys": [[4, 1]]
  }
])";

fs::path write_tiny(const fs::path& dir, const std::string& body) {
  fs::path p = dir / "tables.json";
  util::write_file(p, body);
  return p;
}

}  // namespace

TEST_CASE("col_type names round-trip") {
  for (ColType t : {ColType::text, ColType::number, ColType::time,
                    ColType::boolean, ColType::others}) {
    CHECK(col_type_from_name(col_type_name(t)) == t);
  }
  CHECK_THROWS_AS(col_type_from_name("varchar"), MalformedInput);
}

TEST_CASE("load_schemas maps global column indices onto per-table columns") {
  auto dir = temp_dir("tiny");
  auto schemas = load_schemas(write_tiny(dir, kTinySchema));
  REQUIRE(schemas.size() == 1);
  const DatabaseSchema& db = schemas[0];
  CHECK(db.db_id == "tiny");
  CHECK(db.had_star);
  REQUIRE(db.tables.size() == 2);

  const TableSchema& driver = db.tables[0];
  CHECK(driver.name == "driver");
  REQUIRE(driver.columns.size() == 2);
  CHECK(driver.columns[0].name == "Driver_ID");
  CHECK(driver.columns[0].display_name == "Driver ID");
  CHECK(driver.columns[0].col_type == ColType::number);
  CHECK(driver.primary_key_columns == std::vector<int>{0});

  const TableSchema& bus = db.tables[1];
  REQUIRE(bus.columns.size() == 2);
  CHECK(bus.primary_key_columns == std::vector<int>{0});

  // Global fk [4, 1] is bus.Driver_ID -> driver.Driver_ID.
  REQUIRE(db.foreign_keys.size() == 1);
  CHECK(db.foreign_keys[0].first == ColumnLocator{1, 1});
  CHECK(db.foreign_keys[0].second == ColumnLocator{0, 0});

  CHECK(db.table_index("BUS") == 1);
  CHECK(db.table_index("nope") == -1);
  CHECK(db.find_table("driver") == &db.tables[0]);
  CHECK(driver.column_index("driver_id") == 0);
  CHECK(driver.column_index("missing") == -1);
  fs::remove_all(dir);
}

TEST_CASE("load_schemas rejects structural corruption") {
  auto dir = temp_dir("corrupt");
  std::string body = kTinySchema;

  SUBCASE("unparseable json") {
    CHECK_THROWS_AS(load_schemas(write_tiny(dir, "{not json")), MalformedInput);
  }
  SUBCASE("column_types length mismatch") {
    auto pos = body.find("\"number\"]");
    body.replace(pos, 9, "\"number\", \"text\"]");
    CHECK_THROWS_AS(load_schemas(write_tiny(dir, body)), MalformedInput);
  }
  SUBCASE("column table index out of range") {
    auto pos = body.find("[1, \"Bus_ID\"]");
    body.replace(pos, 13, "[7, \"Bus_ID\"]");
    CHECK_THROWS_AS(load_schemas(write_tiny(dir, body)), Error);
  }
  SUBCASE("foreign key index out of range") {
    auto pos = body.find("[[4, 1]]");
    body.replace(pos, 8, "[[4, 99]]");
    CHECK_THROWS_AS(load_schemas(write_tiny(dir, body)), InvariantViolation);
  }
  SUBCASE("duplicate db_id") {
    std::string twice = body;
    twice.insert(twice.rfind(']'), ", " + body.substr(body.find('{'),
                 body.rfind('}') - body.find('{') + 1));
    CHECK_THROWS_AS(load_schemas(write_tiny(dir, twice)), InvariantViolation);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_schemas(dir / "absent.json"), IoFailure);
  }
  fs::remove_all(dir);
}

TEST_CASE("serialize_schemas round-trips and is byte-deterministic") {
  auto schemas = load_schemas(kDataDir / "corpus" / "tables.json");
  CHECK(schemas.size() == 200);

  auto dir = temp_dir("roundtrip");
  serialize_schemas(schemas, dir / "a.json");
  serialize_schemas(schemas, dir / "b.json");
  CHECK(util::read_file(dir / "a.json") == util::read_file(dir / "b.json"));

  auto reloaded = load_schemas(dir / "a.json");
  REQUIRE(reloaded.size() == schemas.size());
  for (std::size_t i = 0; i < schemas.size(); ++i) {
    CHECK(reloaded[i] == schemas[i]);
  }
  fs::remove_all(dir);
}

TEST_CASE("load_examples parses and validates against schemas") {
  auto dir = temp_dir("examples");
  util::write_file(dir / "dev.json", R"([
    {"db_id": "tiny", "question": "How many drivers are there?",
     "query": "SELECT count(*) FROM driver"},
    {"db_id": "ghost", "question": "x?", "query": "SELECT 1"}
  ])");
  auto examples = load_examples(dir / "dev.json");
  REQUIRE(examples.size() == 2);
  CHECK(examples[0].example_id == "dev.json:0");
  CHECK(examples[0].db_id == "tiny");
  CHECK(examples[0].question_tokens ==
        std::vector<std::string>{"how", "many", "drivers", "are", "there", "?"});
  CHECK(examples[1].example_id == "dev.json:1");

  auto schemas = load_schemas(write_tiny(dir, kTinySchema));
  CHECK_THROWS_AS(validate_examples(examples, schemas), UnknownDatabase);
  examples.pop_back();
  CHECK_NOTHROW(validate_examples(examples, schemas));

  serialize_examples(examples, dir / "out.json");
  auto back = load_examples(dir / "out.json", schemas);
  REQUIRE(back.size() == 1);
  CHECK(back[0].question == examples[0].question);
  CHECK(back[0].gold_sql == examples[0].gold_sql);
  fs::remove_all(dir);
}

TEST_CASE("load_predictions handles newline conventions") {
  auto dir = temp_dir("preds");

  SUBCASE("trailing newline does not add a phantom row") {
    util::write_file(dir / "p.sql", "SELECT 1\nSELECT 2\n");
    auto preds = load_predictions(dir / "p.sql", "m");
    CHECK(preds.model_label == "m");
    CHECK(preds.predictions == std::vector<std::string>{"SELECT 1", "SELECT 2"});
  }
  SUBCASE("no trailing newline") {
    util::write_file(dir / "p.sql", "SELECT 1\nSELECT 2");
    CHECK(load_predictions(dir / "p.sql", "m").predictions.size() == 2);
  }
  SUBCASE("crlf equals lf and interior blanks survive") {
    util::write_file(dir / "p.sql", "SELECT 1\r\n\r\nSELECT 3\r\n");
    auto preds = load_predictions(dir / "p.sql", "m");
    CHECK(preds.predictions ==
          std::vector<std::string>{"SELECT 1", "", "SELECT 3"});
  }
  fs::remove_all(dir);
}

TEST_CASE("schema_map indexes by db_id") {
  auto dir = temp_dir("map");
  auto schemas = load_schemas(write_tiny(dir, kTinySchema));
  auto map = schema_map(schemas);
  REQUIRE(map.count("tiny") == 1);
  CHECK(map.at("tiny") == &schemas[0]);
  fs::remove_all(dir);
}
