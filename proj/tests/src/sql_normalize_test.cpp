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

#include <cctype>
#include <string>
#include <vector>

#include "doctest.h"
#include "sqlbias/spider_model.hpp"
#include "sqlbias/sql.hpp"

namespace {

using namespace sqlbias;
using namespace sqlbias::sql;

spider::DatabaseSchema bus_schema() {
  spider::DatabaseSchema db;
  db.db_id = "bus";
  spider::TableSchema driver;
  driver.name = "driver";
  driver.columns = {{"Driver_ID", "Driver ID", spider::ColType::number, 0},
                    {"Name", "Name", spider::ColType::text, 0},
                    {"Age", "Age", spider::ColType::number, 0}};
  driver.primary_key_columns = {0};
  spider::TableSchema bus;
  bus.name = "school_bus";
  bus.columns = {{"School_ID", "School ID", spider::ColType::number, 1},
                 {"Driver_ID", "Driver ID", spider::ColType::number, 1},
                 {"Years_Working", "Years Working", spider::ColType::number, 1}};
  bus.primary_key_columns = {0};
  db.tables = {driver, bus};
  db.foreign_keys = {{{1, 1}, {0, 0}}};
  return db;
}

std::string canon(const std::string& sql_text) {
  return canonical_text(parse_sql(sql_text, bus_schema()));
}

}  // namespace

TEST_CASE("normalize renames aliases to positional t1..tn") {
  auto text = canon("SELECT d.Name FROM driver AS d JOIN school_bus AS b "
                    "ON d.Driver_ID = b.Driver_ID");
  CHECK(text.find("as t1") != std::string::npos);
  CHECK(text.find("as t2") != std::string::npos);
  CHECK(text.find("t1.name") != std::string::npos);
  CHECK(text.find(" d.") == std::string::npos);
}

TEST_CASE("alias spelling does not affect the canonical key") {
  auto a = canon("SELECT T1.Name FROM driver AS T1 JOIN school_bus AS T2 "
                 "ON T1.Driver_ID = T2.Driver_ID");
  auto b = canon("SELECT x.Name FROM driver AS x JOIN school_bus AS y "
                 "ON x.Driver_ID = y.Driver_ID");
  CHECK(a == b);
}

TEST_CASE("keyword and identifier case do not affect the canonical key") {
  CHECK(canon("select name from driver where age > 40") ==
        canon("SELECT Name FROM Driver WHERE AGE > 40"));
}

TEST_CASE("conjunct order does not affect the canonical key") {
  CHECK(canon("SELECT Name FROM driver WHERE Age > 30 AND Name = 'x'") ==
        canon("SELECT Name FROM driver WHERE Name = 'x' AND Age > 30"));
}

TEST_CASE("symmetric join comparisons are operand-ordered") {
  CHECK(canon("SELECT T1.Name FROM driver AS T1 JOIN school_bus AS T2 "
              "ON T1.Driver_ID = T2.Driver_ID") ==
        canon("SELECT T1.Name FROM driver AS T1 JOIN school_bus AS T2 "
              "ON T2.Driver_ID = T1.Driver_ID"));
}

TEST_CASE("literal values do not affect the canonical key") {
  CHECK(canon("SELECT Name FROM driver WHERE Age > 40") ==
        canon("SELECT Name FROM driver WHERE Age > 55"));
  CHECK(canon("SELECT Name FROM driver WHERE Name LIKE 'M%'") ==
        canon("SELECT Name FROM driver WHERE Name LIKE 'Z%'"));
  // Operator and column still distinguish.
  CHECK(canon("SELECT Name FROM driver WHERE Age > 40") !=
        canon("SELECT Name FROM driver WHERE Age < 40"));
  CHECK(canon("SELECT Name FROM driver WHERE Age > 40") !=
        canon("SELECT Age FROM driver WHERE Age > 40"));
}

TEST_CASE("normalize is idempotent") {
  const char* queries[] = {
      "SELECT count(*) FROM driver",
      "SELECT d.Name FROM driver AS d JOIN school_bus AS b "
      "ON d.Driver_ID = b.Driver_ID WHERE b.Years_Working > 3",
      "SELECT Name FROM driver WHERE Age BETWEEN 30 AND 40 "
      "ORDER BY Name LIMIT 3",
      "SELECT Name, count(*) FROM driver GROUP BY Name HAVING count(*) > 2",
      "SELECT Name FROM driver UNION SELECT Name FROM driver WHERE Age > 50",
  };
  for (const char* q : queries) {
    auto ast = parse_sql(q, bus_schema());
    auto once = normalize(ast);
    auto twice = normalize(once);
    CHECK(serialize(once) == serialize(twice));
  }
}

TEST_CASE("serialized canonical text parses back to the same key") {
  const char* queries[] = {
      "SELECT count(*) FROM driver",
      "SELECT DISTINCT Name FROM driver WHERE Age IN (30, 40)",
      "SELECT T1.Name FROM driver AS T1 JOIN school_bus AS T2 "
      "ON T1.Driver_ID = T2.Driver_ID ORDER BY T2.Years_Working DESC LIMIT 1",
      "SELECT Name FROM driver WHERE Driver_ID NOT IN "
      "(SELECT Driver_ID FROM school_bus)",
      "SELECT Name FROM driver WHERE Age > (SELECT avg(Age) FROM driver)",
      "SELECT Name FROM driver EXCEPT SELECT Name FROM driver WHERE Age = 1",
      "SELECT T.Name FROM (SELECT Name FROM driver WHERE Age > 30) AS T",
      "SELECT Name FROM driver WHERE Age = 30 OR Name = 'x'",
  };
  for (const char* q : queries) {
    auto key = canon(q);
    auto reparsed = parse_sql(key, bus_schema());
    CHECK(canonical_text(reparsed) == key);
  }
}

TEST_CASE("ast_equal follows the canonical key") {
  auto a = parse_sql("SELECT Name FROM driver WHERE Age > 40 AND Name = 'x'",
                     bus_schema());
  auto b = parse_sql("select name from driver where name = 'y' and age > 99",
                     bus_schema());
  CHECK(ast_equal(a, b));
  auto c = parse_sql("SELECT Name FROM driver WHERE Age >= 40 AND Name = 'x'",
                     bus_schema());
  CHECK_FALSE(ast_equal(a, c));
}

TEST_CASE("serialized text is lowercase with explicit aliases") {
  auto ast = parse_sql("SELECT Name FROM driver WHERE Age > 40", bus_schema());
  auto text = canonical_text(ast);
  for (char ch : text) CHECK_FALSE(bool(std::isupper(static_cast<unsigned char>(ch))));
  CHECK(text.find("driver as t1") != std::string::npos);
}
