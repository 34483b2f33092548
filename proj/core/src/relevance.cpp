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

#include "sqlbias/relevance.hpp"

#include <chrono>
#include <fstream>
#include <set>
#include <thread>

#include "json.hpp"
#include "sqlbias/errors.hpp"
#include "sqlbias/lexicons.hpp"
#include "sqlbias/text.hpp"
#include "sqlbias/util.hpp"

namespace sqlbias::relevance {

using nlohmann::json;
using nlohmann::ordered_json;

std::string source_name(JudgmentSource source) {
  switch (source) {
    case JudgmentSource::llm:
      return "llm";
    case JudgmentSource::lexicon:
      return "lexicon";
    case JudgmentSource::fixture:
      return "fixture";
    case JudgmentSource::cache:
      return "cache";
  }
  throw InvariantViolation("unknown judgment source");
}

JudgmentSource source_from_name(std::string_view name) {
  if (name == "llm") return JudgmentSource::llm;
  if (name == "lexicon") return JudgmentSource::lexicon;
  if (name == "fixture") return JudgmentSource::fixture;
  if (name == "cache") return JudgmentSource::cache;
  throw MalformedInput("unknown judgment source name: " + std::string(name));
}

namespace {

std::string iso_utc_now() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

JudgmentCache::JudgmentCache(std::filesystem::path file)
    : file_(std::move(file)), backed_(true) {
  std::ifstream in(file_);
  if (!in) return;  // absent file starts an empty cache
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::exception& e) {
      throw MalformedInput("judgment cache " + file_.string() + " line " +
                           std::to_string(lineno) + ": " + e.what());
    }
    CacheRecord record;
    record.subject_id = rec.value("subject_id", "");
    record.prompt_sha256 = rec.value("prompt_sha256", "");
    record.answer = rec.value("answer", "");
    record.source = rec.value("source", "llm");
    record.timestamp = rec.value("timestamp", "");
    if (record.subject_id.empty())
      throw MalformedInput("judgment cache " + file_.string() + " line " +
                           std::to_string(lineno) + ": missing subject_id");
    records_[record.subject_id] = record;  // later lines win
  }
}

std::optional<CacheRecord> JudgmentCache::get(
    const std::string& subject_id, const std::string& prompt_sha256) const {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = records_.find(subject_id);
  if (it == records_.end()) return std::nullopt;
  if (it->second.prompt_sha256 != prompt_sha256) return std::nullopt;
  return it->second;
}

void JudgmentCache::put(const CacheRecord& record) {
  std::lock_guard<std::mutex> lock(mutex_);
  records_[record.subject_id] = record;
  if (!backed_) return;
  if (file_.has_parent_path())
    std::filesystem::create_directories(file_.parent_path());
  std::ofstream out(file_, std::ios::app);
  if (!out)
    throw IoFailure("cannot append to judgment cache: " + file_.string());
  ordered_json rec;
  rec["subject_id"] = record.subject_id;
  rec["prompt_sha256"] = record.prompt_sha256;
  rec["answer"] = record.answer;
  rec["source"] = record.source;
  rec["timestamp"] = record.timestamp;
  out << rec.dump() << "\n";
}

std::size_t JudgmentCache::size() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return records_.size();
}

RelevancePrompt build_table_prompt(const TableSchema& table) {
  std::vector<std::string> pk_names;
  for (int ci : table.primary_key_columns)
    pk_names.push_back(table.columns.at(static_cast<size_t>(ci)).name);
  std::vector<std::string> col_names;
  for (const auto& col : table.columns)
    col_names.push_back(col.display_name.empty() ? col.name : col.display_name);
  RelevancePrompt prompt;
  prompt.kind = PromptKind::table;
  prompt.text = "The table name is " + table.name + ", the primary key is " +
                (pk_names.empty() ? std::string("none")
                                  : text::join(pk_names, ", ")) +
                ", and the column names are " + text::join(col_names, ", ") +
                ". Is the main object of this table human?";
  return prompt;
}

namespace {

/// Trailing '.', '?', '!' and whitespace removed so the template supplies the
/// single sentence separator itself.
std::string strip_terminal_punctuation(std::string question) {
  auto drop = [](char c) {
    return c == '.' || c == '?' || c == '!' || c == ' ' || c == '\t' ||
           c == '\r' || c == '\n';
  };
  while (!question.empty() && drop(question.back())) question.pop_back();
  return question;
}

}  // namespace

RelevancePrompt build_query_prompt(const Example& example) {
  std::string body = strip_terminal_punctuation(example.question);
  if (body.empty())
    throw PreconditionViolation("query prompt needs a non-empty question (" +
                                example.example_id + ")");
  RelevancePrompt prompt;
  prompt.kind = PromptKind::query;
  prompt.text =
      "The query is: " + body + ". Is the query relevant to humans?";
  return prompt;
}

std::optional<bool> parse_yes_no(const std::string& answer) {
  size_t i = 0;
  while (i < answer.size() &&
         !std::isalpha(static_cast<unsigned char>(answer[i])))
    ++i;
  std::string token;
  while (i < answer.size() &&
         std::isalpha(static_cast<unsigned char>(answer[i])))
    token.push_back(static_cast<char>(
        std::tolower(static_cast<unsigned char>(answer[i++]))));
  if (token == "yes") return true;
  if (token == "no") return false;
  return std::nullopt;
}

RelevanceJudgment judge(const std::string& subject_id,
                        const RelevancePrompt& prompt, JudgeClient& client,
                        JudgmentCache& cache) {
  const std::string prompt_hash = util::sha256_hex(prompt.text);
  if (auto hit = cache.get(subject_id, prompt_hash)) {
    RelevanceJudgment judgment;
    judgment.subject_id = subject_id;
    judgment.is_human_relevant = parse_yes_no(hit->answer).value_or(false);
    judgment.source = JudgmentSource::cache;
    return judgment;
  }

  std::string answer;
  std::string failure;
  bool got = false;
  for (int attempt = 0; attempt < 3 && !got; ++attempt) {
    if (attempt > 0)
      std::this_thread::sleep_for(std::chrono::milliseconds(100 << attempt));
    try {
      answer = client.complete(prompt.text);
      got = true;
    } catch (const std::exception& e) {
      failure = e.what();
    }
  }
  if (!got)
    throw JudgeUnavailable("judge backend failed for " + subject_id +
                           " after 3 attempts: " + failure);

  CacheRecord record;
  record.subject_id = subject_id;
  record.prompt_sha256 = prompt_hash;
  record.answer = answer;
  record.source = "llm";
  record.timestamp = iso_utc_now();
  cache.put(record);

  RelevanceJudgment judgment;
  judgment.subject_id = subject_id;
  // Ambiguous answers fail closed: the subject stays out of the benchmark.
  judgment.is_human_relevant = parse_yes_no(answer).value_or(false);
  judgment.source = JudgmentSource::llm;
  return judgment;
}

bool lexicon_judge(const std::string& text_value,
                   const std::set<std::string>& human_lexicon) {
  if (human_lexicon.empty())
    throw PreconditionViolation("lexicon_judge needs a non-empty lexicon");
  for (const auto& token : text::tokenize(text_value))
    if (text::lexicon_has(human_lexicon, token)) return true;
  return false;
}

std::map<std::string, bool> load_fixture(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoFailure("cannot open relevance fixture: " + path.string());
  std::map<std::string, bool> out;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::exception& e) {
      throw MalformedInput("relevance fixture " + path.string() + " line " +
                           std::to_string(lineno) + ": " + e.what());
    }
    if (!rec.contains("subject_id") || !rec.contains("is_human_relevant"))
      throw MalformedInput("relevance fixture " + path.string() + " line " +
                           std::to_string(lineno) +
                           ": needs subject_id and is_human_relevant");
    out[rec.at("subject_id").get<std::string>()] =
        rec.at("is_human_relevant").get<bool>();
  }
  return out;
}

void write_fixture(const std::filesystem::path& path,
                   const std::vector<RelevanceJudgment>& judgments) {
  std::string body;
  for (const auto& judgment : judgments) {
    ordered_json rec;
    rec["subject_id"] = judgment.subject_id;
    rec["is_human_relevant"] = judgment.is_human_relevant;
    body += rec.dump();
    body += "\n";
  }
  util::write_file(path, body);
}

namespace {

RelevanceJudgment judge_subject(const std::string& subject_id,
                                const RelevancePrompt& prompt,
                                const std::string& fallback_text,
                                const JudgeOptions& options,
                                const std::set<std::string>& lexicon) {
  if (options.fixture) {
    auto it = options.fixture->find(subject_id);
    if (it != options.fixture->end()) {
      RelevanceJudgment judgment;
      judgment.subject_id = subject_id;
      judgment.is_human_relevant = it->second;
      judgment.source = JudgmentSource::fixture;
      return judgment;
    }
  }
  if (options.client) {
    if (!options.cache)
      throw PreconditionViolation("judge_corpus needs a cache with a client");
    return judge(subject_id, prompt, *options.client, *options.cache);
  }
  RelevanceJudgment judgment;
  judgment.subject_id = subject_id;
  judgment.is_human_relevant = lexicon_judge(fallback_text, lexicon);
  judgment.source = JudgmentSource::lexicon;
  return judgment;
}

}  // namespace

CorpusJudgments judge_corpus(const std::vector<DatabaseSchema>& schemas,
                             const std::vector<Example>& examples,
                             const JudgeOptions& options) {
  const std::set<std::string>& lexicon = options.human_lexicon.empty()
                                             ? lexicons::default_human_lexicon()
                                             : options.human_lexicon;
  CorpusJudgments out;
  for (const auto& db : schemas)
    for (const auto& table : db.tables) {
      auto prompt = build_table_prompt(table);
      out.tables.push_back(judge_subject(db.db_id + "." + table.name, prompt,
                                         prompt.text, options, lexicon));
    }

  out.queries.resize(examples.size());
  util::parallel_for(examples.size(), options.jobs, [&](size_t i) {
    const auto& example = examples[i];
    out.queries[i] = judge_subject(example.example_id,
                                   build_query_prompt(example),
                                   example.question, options, lexicon);
  });
  return out;
}

std::size_t CorpusJudgments::human_table_count() const {
  std::size_t n = 0;
  for (const auto& judgment : tables)
    if (judgment.is_human_relevant) ++n;
  return n;
}

std::size_t CorpusJudgments::human_database_count() const {
  std::set<std::string> dbs;
  for (const auto& judgment : tables) {
    if (!judgment.is_human_relevant) continue;
    auto dot = judgment.subject_id.find('.');
    dbs.insert(judgment.subject_id.substr(0, dot));
  }
  return dbs.size();
}

std::size_t CorpusJudgments::human_query_count() const {
  std::size_t n = 0;
  for (const auto& judgment : queries)
    if (judgment.is_human_relevant) ++n;
  return n;
}

}  // namespace sqlbias::relevance
