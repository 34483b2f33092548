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
#include <map>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "sqlbias/corpusgen.hpp"
#include "sqlbias/errors.hpp"
#include "sqlbias/relevance.hpp"
#include "sqlbias/spider_model.hpp"
#include "sqlbias/sql.hpp"
#include "sqlbias/util.hpp"

namespace {

namespace fs = std::filesystem;
using namespace sqlbias;
using namespace sqlbias::corpusgen;

CorpusSpec small_spec() {
  CorpusSpec spec;
  spec.human_databases = 6;
  spec.other_databases = 4;
  spec.train_examples = 40;
  spec.dev_examples = 12;
  return spec;
}

}  // namespace

TEST_CASE("generated corpus matches the requested shape") {
  auto corpus = generate_corpus(small_spec());
  REQUIRE(corpus.schemas.size() == 10);
  CHECK(corpus.schemas[0].db_id == "hdb_000");
  CHECK(corpus.schemas[5].db_id == "hdb_005");
  CHECK(corpus.schemas[6].db_id == "ndb_000");
  CHECK(corpus.schemas[9].db_id == "ndb_003");
  CHECK(corpus.train.size() == 40);
  CHECK(corpus.dev.size() == 12);
  CHECK(corpus.train[0].example_id == "train.json:0");
  CHECK(corpus.dev[0].example_id == "dev.json:0");
}

TEST_CASE("judgments cover every table and every example") {
  auto corpus = generate_corpus(small_spec());
  std::set<std::string> covered;
  for (const auto& j : corpus.judgments) covered.insert(j.subject_id);
  for (const auto& db : corpus.schemas)
    for (const auto& table : db.tables)
      CHECK(covered.count(db.db_id + "." + table.name) == 1);
  for (const auto& ex : corpus.train) CHECK(covered.count(ex.example_id) == 1);
  for (const auto& ex : corpus.dev) CHECK(covered.count(ex.example_id) == 1);
  CHECK(covered.size() == corpus.judgments.size());
}

TEST_CASE("people databases hold people tables plus one object table") {
  auto corpus = generate_corpus(small_spec());
  std::map<std::string, bool> judged;
  for (const auto& j : corpus.judgments)
    judged[j.subject_id] = j.is_human_relevant;

  for (int h = 0; h < 6; ++h) {
    const auto& db = corpus.schemas[static_cast<std::size_t>(h)];
    REQUIRE(db.tables.size() == 7);
    for (std::size_t t = 0; t + 1 < db.tables.size(); ++t)
      CHECK(judged.at(db.db_id + "." + db.tables[t].name));
    CHECK_FALSE(judged.at(db.db_id + "." + db.tables.back().name));
    // Every secondary people table links back to the root table.
    CHECK(db.foreign_keys.size() >= db.tables.size() - 2);
  }
  for (std::size_t o = 6; o < corpus.schemas.size(); ++o) {
    for (const auto& table : corpus.schemas[o].tables)
      CHECK_FALSE(judged.at(corpus.schemas[o].db_id + "." + table.name));
  }
}

TEST_CASE("early people databases plant a demographic-named column") {
  auto corpus = generate_corpus(small_spec());
  // Index below 12 plants "age" on the root people table.
  for (int h = 0; h < 6; ++h) {
    const auto& root = corpus.schemas[static_cast<std::size_t>(h)].tables[0];
    CHECK(root.column_index("age") >= 0);
  }
}

TEST_CASE("every generated gold query parses against its schema") {
  auto corpus = generate_corpus(small_spec());
  auto by_id = spider::schema_map(corpus.schemas);
  auto check_all = [&](const std::vector<spider::Example>& examples) {
    for (const auto& ex : examples) {
      CHECK_NOTHROW(sql::parse_sql(ex.gold_sql, *by_id.at(ex.db_id)));
    }
  };
  check_all(corpus.train);
  check_all(corpus.dev);
}

TEST_CASE("question lengths steer toward the target mean") {
  auto corpus = generate_corpus(small_spec());
  std::size_t total = 0;
  for (const auto& ex : corpus.train) total += ex.question_tokens.size();
  double mean = static_cast<double>(total) /
                static_cast<double>(corpus.train.size());
  CHECK(mean == doctest::Approx(14.2).epsilon(0.08));
}

TEST_CASE("generation is deterministic and write_corpus byte-stable") {
  auto a = generate_corpus(small_spec());
  auto b = generate_corpus(small_spec());
  REQUIRE(a.schemas.size() == b.schemas.size());
  for (std::size_t i = 0; i < a.schemas.size(); ++i)
    CHECK(a.schemas[i] == b.schemas[i]);
  CHECK(a.train == b.train);
  CHECK(a.dev == b.dev);

  fs::path dir = fs::temp_directory_path() / "sqlbias_corpusgen_test";
  fs::remove_all(dir);
  write_corpus(a, dir / "x");
  write_corpus(b, dir / "y");
  for (const char* name :
       {"tables.json", "train.json", "dev.json", "relevance.jsonl"}) {
    CHECK(util::read_file(dir / "x" / name) == util::read_file(dir / "y" / name));
  }

  // The emitted files load back through the standard loaders.
  auto schemas = spider::load_schemas(dir / "x" / "tables.json");
  CHECK(schemas.size() == 10);
  auto train = spider::load_examples(dir / "x" / "train.json", schemas);
  CHECK(train.size() == 40);
  auto fixture = relevance::load_fixture(dir / "x" / "relevance.jsonl");
  CHECK(fixture.size() == a.judgments.size());
  fs::remove_all(dir);
}

TEST_CASE("invalid specs are rejected") {
  CorpusSpec negative = small_spec();
  negative.human_databases = -1;
  CHECK_THROWS_AS(generate_corpus(negative), PreconditionViolation);

  CorpusSpec empty = small_spec();
  empty.human_databases = 0;
  empty.other_databases = 0;
  CHECK_THROWS_AS(generate_corpus(empty), PreconditionViolation);
}

TEST_CASE("defaults describe the reference corpus") {
  CorpusSpec spec;
  CHECK(spec.human_databases == 119);
  CHECK(spec.other_databases == 81);
  CHECK(spec.train_examples == 8659);
  CHECK(spec.dev_examples == 1034);
  CHECK(spec.target_question_tokens == doctest::Approx(14.2));
}
