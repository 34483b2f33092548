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

// Micro-benchmarks for the per-item hot paths: one benchmark item costs one
// parse, one normalization, and a handful of token scans, repeated tens of
// thousands of times per corpus pass.

#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "sqlbias/builder.hpp"
#include "sqlbias/evaluate.hpp"
#include "sqlbias/lexicons.hpp"
#include "sqlbias/spider_model.hpp"
#include "sqlbias/sql.hpp"
#include "sqlbias/text.hpp"
#include "sqlbias/util.hpp"

namespace {

using namespace sqlbias;

spider::DatabaseSchema bus_schema() {
  spider::DatabaseSchema db;
  db.db_id = "school_bus";
  spider::TableSchema driver;
  driver.name = "driver";
  driver.display_name = "driver";
  driver.columns = {{"Driver_ID", "Driver ID", spider::ColType::number, 0},
                    {"Name", "Name", spider::ColType::text, 0},
                    {"Age", "Age", spider::ColType::number, 0},
                    {"Years_Working", "Years Working",
                     spider::ColType::number, 0}};
  driver.primary_key_columns = {0};
  spider::TableSchema bus;
  bus.name = "school_bus";
  bus.display_name = "school bus";
  bus.columns = {{"School_ID", "School ID", spider::ColType::number, 1},
                 {"Driver_ID", "Driver ID", spider::ColType::number, 1}};
  bus.primary_key_columns = {0};
  db.tables = {driver, bus};
  return db;
}

const std::string kJoinQuery =
    "SELECT T1.Name, T1.Age FROM driver AS T1 JOIN school_bus AS T2 ON "
    "T1.Driver_ID = T2.Driver_ID WHERE T1.Years_Working > 5 GROUP BY "
    "T1.Driver_ID ORDER BY count(*) DESC LIMIT 3";

const std::string kQuestion =
    "What are the names and ages of every driver who has been working for "
    "more than five years?";

void BM_ParseJoinQuery(benchmark::State& state) {
  auto schema = bus_schema();
  for (auto _ : state) {
    benchmark::DoNotOptimize(sql::parse_sql(kJoinQuery, schema));
  }
}
BENCHMARK(BM_ParseJoinQuery);

void BM_CanonicalText(benchmark::State& state) {
  auto schema = bus_schema();
  auto ast = sql::parse_sql(kJoinQuery, schema);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sql::canonical_text(ast));
  }
}
BENCHMARK(BM_CanonicalText);

void BM_TokenizeQuestion(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(text::tokenize(kQuestion));
  }
}
BENCHMARK(BM_TokenizeQuestion);

void BM_PerturbRule(benchmark::State& state) {
  spider::Example base;
  base.example_id = "bench:0";
  base.db_id = "school_bus";
  base.question = kQuestion;
  base.gold_sql = kJoinQuery;
  base.question_tokens = text::tokenize(base.question);
  const auto& lexicon = lexicons::default_human_lexicon();
  for (auto _ : state) {
    benchmark::DoNotOptimize(builder::perturb_query_rule(
        base, "dumb", lexicons::ModifierCategory::roberta_neg, lexicon,
        builder::PerturbStructure::attributive));
  }
}
BENCHMARK(BM_PerturbRule);

void BM_QuestionLicenseSet(benchmark::State& state) {
  const auto& dims = lexicons::default_dimensions();
  const std::string question =
      "How many female drivers older than 40 does each school employ?";
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate::question_license_set(question, dims));
  }
}
BENCHMARK(BM_QuestionLicenseSet);

void BM_Levenshtein(benchmark::State& state) {
  const std::string a = kQuestion;
  const std::string b =
      "What are the names and ages of all the drivers that worked for more "
      "than ten years?";
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate::levenshtein(a, b));
  }
}
BENCHMARK(BM_Levenshtein);

void BM_RetrievePool32(benchmark::State& state) {
  evaluate::ExemplarQuery query;
  query.question = kQuestion;
  for (int i = 0; i < 32; ++i) {
    spider::Example ex;
    ex.example_id = "bench:" + std::to_string(i);
    ex.db_id = "school_bus";
    ex.question = "How many drivers does school number " +
                  std::to_string(i) + " employ in total?";
    ex.gold_sql = "SELECT count(*) FROM driver";
    ex.question_tokens = text::tokenize(ex.question);
    query.pool.push_back(ex);
  }
  query.k = 4;
  query.method = evaluate::RetrievalMethod::tst_jaccard;
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate::retrieve_exemplars(query));
  }
}
BENCHMARK(BM_RetrievePool32);

void BM_Sha256Prompt(benchmark::State& state) {
  const std::string prompt =
      "The table name is driver, the primary key is Driver_ID, and the "
      "column names are Driver ID, Name, Age, Years Working. Is the main "
      "object of this table human?";
  for (auto _ : state) {
    benchmark::DoNotOptimize(util::sha256_hex(prompt));
  }
}
BENCHMARK(BM_Sha256Prompt);

}  // namespace

BENCHMARK_MAIN();
