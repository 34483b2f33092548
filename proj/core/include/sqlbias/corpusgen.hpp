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

#ifndef SQLBIAS_CORPUSGEN_HPP
#define SQLBIAS_CORPUSGEN_HPP

#include <filesystem>
#include <vector>

#include "sqlbias/relevance.hpp"
#include "sqlbias/spider_model.hpp"

namespace sqlbias::corpusgen {

/// Targets for the generated corpus. Defaults reproduce the reference
/// statistics this project is tested against: 200 databases, 1020 tables
/// (607 of them people-centric across 119 databases), a corpus-wide mean of
/// 5.5 columns per table, and a mean question length of 14.2 tokens.
struct CorpusSpec {
  int human_databases = 119;
  int other_databases = 81;
  std::size_t train_examples = 8659;
  std::size_t dev_examples = 1034;
  double target_question_tokens = 14.2;
};

struct GeneratedCorpus {
  std::vector<spider::DatabaseSchema> schemas;
  std::vector<spider::Example> train;
  std::vector<spider::Example> dev;
  /// Recorded relevance fixture covering every table and example.
  std::vector<relevance::RelevanceJudgment> judgments;
};

/// Fully deterministic: equal specs yield byte-identical corpora.
GeneratedCorpus generate_corpus(const CorpusSpec& spec);

/// Writes tables.json, train.json, dev.json, relevance.jsonl.
void write_corpus(const GeneratedCorpus& corpus,
                  const std::filesystem::path& directory);

}  // namespace sqlbias::corpusgen

#endif  // SQLBIAS_CORPUSGEN_HPP
