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

#ifndef SQLBIAS_RELEVANCE_HPP
#define SQLBIAS_RELEVANCE_HPP

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sqlbias/spider_model.hpp"

namespace sqlbias::relevance {

using spider::DatabaseSchema;
using spider::Example;
using spider::TableSchema;

enum class PromptKind { table, query };

struct RelevancePrompt {
  PromptKind kind = PromptKind::table;
  std::string text;
};

enum class JudgmentSource { llm, lexicon, fixture, cache };

std::string source_name(JudgmentSource source);
JudgmentSource source_from_name(std::string_view name);  // throws MalformedInput

/// Verdict on whether one table or one natural-language question concerns
/// people. subject_id is "db_id.table_name" for tables and the example id
/// for questions.
struct RelevanceJudgment {
  std::string subject_id;
  bool is_human_relevant = false;
  JudgmentSource source = JudgmentSource::lexicon;
  bool operator==(const RelevanceJudgment&) const = default;
};

/// Text-completion backend. Implementations must either tolerate concurrent
/// complete() calls or be used from a single thread.
class JudgeClient {
 public:
  virtual ~JudgeClient() = default;
  /// Throws JudgeUnavailable on transport failure.
  virtual std::string complete(const std::string& prompt) = 0;
};

struct HttpJudgeConfig {
  std::string endpoint;  // e.g. "https://api.example.com/v1/completions"
  std::string api_token;
  std::string model;
  double temperature = 0.0;
  int timeout_seconds = 30;
};

/// OpenAI-style text-completion adapter: POST {model, prompt, temperature}
/// to the configured endpoint, read choices[0].text.
std::unique_ptr<JudgeClient> make_http_judge(const HttpJudgeConfig& config);

struct CacheRecord {
  std::string subject_id;
  std::string prompt_sha256;
  std::string answer;  // raw backend answer; "yes"/"no" for synthetic sources
  std::string source;
  std::string timestamp;  // ISO 8601 UTC, informational only
  bool operator==(const CacheRecord&) const = default;
};

/// Keyed by subject_id. A file-backed cache loads existing records on
/// construction and appends each put; writes are serialized internally.
class JudgmentCache {
 public:
  JudgmentCache() = default;
  explicit JudgmentCache(std::filesystem::path file);

  /// A record counts as a hit only when its prompt hash matches.
  std::optional<CacheRecord> get(const std::string& subject_id,
                                 const std::string& prompt_sha256) const;
  void put(const CacheRecord& record);
  std::size_t size() const;

 private:
  mutable std::mutex mutex_;
  std::filesystem::path file_;
  bool backed_ = false;
  std::map<std::string, CacheRecord> records_;
};

/// "The table name is X, the primary key is Y, and the column names are Z.
/// Is the main object of this table human?"; Y is "none" for tables without
/// a primary key.
RelevancePrompt build_table_prompt(const TableSchema& table);

/// "The query is: QUESTION. Is the query relevant to humans?"; the question's
/// own terminal punctuation is dropped so exactly one period separates the
/// two sentences. Throws PreconditionViolation on an empty question.
RelevancePrompt build_query_prompt(const Example& example);

/// Leading alphabetic token decides: "yes"→true, "no"→false, else nullopt.
std::optional<bool> parse_yes_no(const std::string& answer);

/// Cache-first judgment. On a miss the client is asked (three attempts,
/// exponential backoff) and the raw answer cached. An answer that is neither
/// yes nor no is recorded and treated as not human-relevant.
RelevanceJudgment judge(const std::string& subject_id,
                        const RelevancePrompt& prompt, JudgeClient& client,
                        JudgmentCache& cache);

/// True iff a lexicon term appears as a whole token of text (singular or
/// trailing-s plural). Throws PreconditionViolation on an empty lexicon.
bool lexicon_judge(const std::string& text,
                   const std::set<std::string>& human_lexicon);

/// Fixture file: JSON lines {subject_id, is_human_relevant}.
std::map<std::string, bool> load_fixture(const std::filesystem::path& path);
void write_fixture(const std::filesystem::path& path,
                   const std::vector<RelevanceJudgment>& judgments);

/// Corpus-level judging options. Resolution order per subject: fixture,
/// then client (cache-backed), then lexicon fallback.
struct JudgeOptions {
  const std::map<std::string, bool>* fixture = nullptr;
  JudgeClient* client = nullptr;
  JudgmentCache* cache = nullptr;  // required when client is set
  std::set<std::string> human_lexicon;  // defaults applied when empty
  unsigned jobs = 1;
};

struct CorpusJudgments {
  std::vector<RelevanceJudgment> tables;   // subject "db_id.table_name"
  std::vector<RelevanceJudgment> queries;  // subject example_id

  std::size_t human_table_count() const;
  std::size_t human_database_count() const;  // databases with >=1 human table
  std::size_t human_query_count() const;
};

CorpusJudgments judge_corpus(const std::vector<DatabaseSchema>& schemas,
                             const std::vector<Example>& examples,
                             const JudgeOptions& options);

}  // namespace sqlbias::relevance

#endif  // SQLBIAS_RELEVANCE_HPP
