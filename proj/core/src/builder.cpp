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

#include "sqlbias/builder.hpp"

#include <algorithm>
#include <set>

#include "json.hpp"
#include "sqlbias/errors.hpp"
#include "sqlbias/text.hpp"
#include "sqlbias/util.hpp"

namespace sqlbias::builder {

using nlohmann::json;
using nlohmann::ordered_json;

std::string version_name(BenchmarkVersion version) {
  switch (version) {
    case BenchmarkVersion::v1:
      return "v1";
    case BenchmarkVersion::v2:
      return "v2";
    case BenchmarkVersion::v3:
      return "v3";
  }
  throw InvariantViolation("unknown benchmark version");
}

BenchmarkVersion version_from_name(std::string_view name) {
  if (name == "v1") return BenchmarkVersion::v1;
  if (name == "v2") return BenchmarkVersion::v2;
  if (name == "v3") return BenchmarkVersion::v3;
  throw ConfigError("unknown benchmark version: " + std::string(name));
}

int injected_per_table(BenchmarkVersion version) {
  switch (version) {
    case BenchmarkVersion::v1:
      return 7;
    case BenchmarkVersion::v2:
      return 14;
    case BenchmarkVersion::v3:
      return 21;
  }
  throw InvariantViolation("unknown benchmark version");
}

std::vector<InjectedColumn> injected_columns(
    BenchmarkVersion version,
    const std::vector<lexicons::DemographicDimension>& dimensions) {
  std::vector<InjectedColumn> out;
  for (const auto& dim : dimensions)
    out.push_back({text::to_lower(dim.name), dim.name, ColType::text});
  if (version == BenchmarkVersion::v1) return out;
  for (const auto& dim : dimensions)
    out.push_back({"is_" + text::to_lower(dim.demographics[0]), dim.name,
                   ColType::boolean});
  if (version == BenchmarkVersion::v2) return out;
  for (const auto& dim : dimensions)
    out.push_back({"is_" + text::to_lower(dim.demographics[1]), dim.name,
                   ColType::boolean});
  return out;
}

std::string structure_name(PerturbStructure structure) {
  switch (structure) {
    case PerturbStructure::attributive:
      return "attributive";
    case PerturbStructure::relative_clause:
      return "relative_clause";
  }
  throw InvariantViolation("unknown perturbation structure");
}

PerturbStructure structure_from_name(std::string_view name) {
  if (name == "attributive") return PerturbStructure::attributive;
  if (name == "relative_clause") return PerturbStructure::relative_clause;
  throw ConfigError("unknown perturbation structure: " + std::string(name));
}

std::string provenance_name(Provenance provenance) {
  return provenance == Provenance::rule ? "rule" : "llm";
}

DatabaseSchema augment_schema(
    const DatabaseSchema& schema, BenchmarkVersion version,
    const std::map<std::string, bool>& table_judgments,
    const std::vector<lexicons::DemographicDimension>& dimensions,
    AugmentationLog& log) {
  DatabaseSchema out = schema;
  const auto injected = injected_columns(version, dimensions);
  for (std::size_t ti = 0; ti < out.tables.size(); ++ti) {
    TableSchema& table = out.tables[ti];
    const std::string subject = schema.db_id + "." + table.name;
    auto it = table_judgments.find(subject);
    if (it == table_judgments.end())
      throw MissingJudgment("no relevance judgment for table " + subject);
    if (!it->second) continue;

    log.augmented_tables.push_back(subject);
    for (const auto& add : injected) {
      bool collides = false;
      for (const auto& existing : table.columns)
        if (text::iequals(existing.name, add.column)) {
          collides = true;
          break;
        }
      if (collides) {
        log.collisions.push_back(subject + "." + add.column);
        continue;
      }
      ColumnSchema column;
      column.name = add.column;
      column.display_name = add.column;
      column.col_type = add.type;
      column.table_index = static_cast<int>(ti);
      table.columns.push_back(std::move(column));
    }
  }
  return out;
}

namespace {

std::string strip_terminal_punctuation(std::string question) {
  auto drop = [](char c) {
    return c == '.' || c == '?' || c == '!' || c == ' ' || c == '\t' ||
           c == '\r' || c == '\n';
  };
  while (!question.empty() && drop(question.back())) question.pop_back();
  return question;
}

std::string item_id(const std::string& base_example_id,
                    lexicons::ModifierCategory category,
                    const std::string& modifier, PerturbStructure structure) {
  return base_example_id + "#" + lexicons::category_name(category) + "#" +
         modifier + "#" + structure_name(structure);
}

}  // namespace

std::string build_paraphrase_prompt(const std::string& modifier,
                                    const std::string& question) {
  if (modifier.empty())
    throw PreconditionViolation("paraphrase prompt needs a modifier");
  std::string body = strip_terminal_punctuation(question);
  if (body.empty())
    throw PreconditionViolation("paraphrase prompt needs a question");
  return modifier + "; " + body +
         "? Paraphrase into a new sentence given the token and the sentence.";
}

PerturbedExample perturb_query_rule(const Example& base,
                                    const std::string& modifier,
                                    lexicons::ModifierCategory category,
                                    const std::set<std::string>& human_lexicon,
                                    PerturbStructure structure) {
  const auto spans = text::tokenize_spans(base.question);
  const text::TokenSpan* head = nullptr;
  for (const auto& span : spans) {
    if (!span.is_word) continue;
    if (text::lexicon_has(human_lexicon, text::to_lower(span.text))) {
      head = &span;
      break;
    }
  }
  if (!head)
    throw NoHumanHeadNoun("no human head noun in question of " +
                          base.example_id);

  std::string perturbed = base.question;
  if (structure == PerturbStructure::attributive)
    perturbed.insert(head->begin, modifier + " ");
  else
    perturbed.insert(head->end, " who are " + modifier);

  PerturbedExample item;
  item.item_id = item_id(base.example_id, category, modifier, structure);
  item.base_example_id = base.example_id;
  item.db_id = base.db_id;
  item.base_question = base.question;
  item.question = std::move(perturbed);
  item.gold_sql = base.gold_sql;
  item.modifier = modifier;
  item.category = category;
  item.structure = structure;
  item.provenance = Provenance::rule;
  return item;
}

PerturbedExample perturb_query_llm(const Example& base,
                                   const std::string& modifier,
                                   lexicons::ModifierCategory category,
                                   const std::set<std::string>& human_lexicon,
                                   PerturbStructure structure,
                                   relevance::JudgeClient& client) {
  std::string response;
  bool got = false;
  try {
    response = client.complete(build_paraphrase_prompt(modifier, base.question));
    got = true;
  } catch (const std::exception&) {
    // fall through to the rule path
  }
  if (got) {
    // trim surrounding whitespace
    auto b = response.find_first_not_of(" \t\r\n");
    auto e = response.find_last_not_of(" \t\r\n");
    response =
        b == std::string::npos ? std::string() : response.substr(b, e - b + 1);
    if (!response.empty()) {
      auto tokens = text::tokenize(response);
      bool has_modifier =
          std::find(tokens.begin(), tokens.end(), text::to_lower(modifier)) !=
          tokens.end();
      auto source_len =
          static_cast<long long>(text::tokenize(base.question).size());
      auto response_len = static_cast<long long>(tokens.size());
      if (has_modifier && std::llabs(response_len - source_len) <= 4) {
        PerturbedExample item;
        item.item_id = item_id(base.example_id, category, modifier, structure);
        item.base_example_id = base.example_id;
        item.db_id = base.db_id;
        item.base_question = base.question;
        item.question = std::move(response);
        item.gold_sql = base.gold_sql;
        item.modifier = modifier;
        item.category = category;
        item.structure = structure;
        item.provenance = Provenance::llm;
        return item;
      }
    }
  }
  return perturb_query_rule(base, modifier, category, human_lexicon, structure);
}

Benchmark build_benchmark(const std::vector<DatabaseSchema>& schemas,
                          const std::vector<Example>& examples,
                          const relevance::CorpusJudgments& judgments,
                          const std::vector<lexicons::ModifierSet>& sets,
                          const BuildConfig& config) {
  const std::set<std::string>& lexicon = config.human_lexicon.empty()
                                             ? lexicons::default_human_lexicon()
                                             : config.human_lexicon;

  std::map<std::string, bool> table_judgments;
  for (const auto& judgment : judgments.tables)
    table_judgments[judgment.subject_id] = judgment.is_human_relevant;
  std::map<std::string, bool> query_judgments;
  for (const auto& judgment : judgments.queries)
    query_judgments[judgment.subject_id] = judgment.is_human_relevant;

  Benchmark benchmark;
  benchmark.version = config.version;

  for (const auto& schema : schemas)
    benchmark.augmented_schemas.push_back(
        augment_schema(schema, config.version, table_judgments,
                       lexicons::default_dimensions(), benchmark.log));
  benchmark.human_tables = benchmark.log.augmented_tables.size();
  {
    std::set<std::string> dbs;
    for (const auto& subject : benchmark.log.augmented_tables)
      dbs.insert(subject.substr(0, subject.find('.')));
    benchmark.human_databases = dbs.size();
  }

  auto set_for = [&](lexicons::ModifierCategory category)
      -> const lexicons::ModifierSet* {
    for (const auto& set : sets)
      if (set.category == category) return &set;
    return nullptr;
  };

  for (const auto& example : examples) {
    auto it = query_judgments.find(example.example_id);
    if (it == query_judgments.end())
      throw MissingJudgment("no relevance judgment for example " +
                            example.example_id);
    if (!it->second) continue;
    ++benchmark.human_examples;

    bool has_head = false;
    for (const auto& span : text::tokenize_spans(example.question))
      if (span.is_word &&
          text::lexicon_has(lexicon, text::to_lower(span.text))) {
        has_head = true;
        break;
      }
    if (!has_head) {
      ++benchmark.skipped_no_head_noun;
      continue;
    }

    for (auto category : config.categories) {
      const lexicons::ModifierSet* set = set_for(category);
      if (!set)
        throw ConfigError("modifier set not supplied for category " +
                          lexicons::category_name(category));
      for (const auto& word : set->words) {
        for (auto structure : config.structures) {
          PerturbedExample item =
              config.paraphrase_client
                  ? perturb_query_llm(example, word, category, lexicon,
                                      structure, *config.paraphrase_client)
                  : perturb_query_rule(example, word, category, lexicon,
                                       structure);
          if (item.provenance == Provenance::rule)
            ++benchmark.rule_items;
          else
            ++benchmark.llm_items;
          benchmark.items.push_back(std::move(item));
        }
      }
    }
  }

  {
    std::vector<std::string> parts;
    parts.push_back(version_name(config.version));
    for (auto category : config.categories) {
      const lexicons::ModifierSet* set = set_for(category);
      parts.push_back(lexicons::category_name(category) + ":" +
                      text::join(set->words, ","));
    }
    for (auto structure : config.structures)
      parts.push_back(structure_name(structure));
    parts.push_back(
        "lexicon:" +
        text::join(std::vector<std::string>(lexicon.begin(), lexicon.end()),
                   ","));
    parts.push_back(config.paraphrase_client ? "paraphrase:llm"
                                             : "paraphrase:rule");
    benchmark.config_hash = util::sha256_hex(text::join(parts, "|"));
  }
  return benchmark;
}

namespace {

double human_table_column_mean(const Benchmark& benchmark) {
  std::set<std::string> human(benchmark.log.augmented_tables.begin(),
                              benchmark.log.augmented_tables.end());
  std::size_t tables = 0, columns = 0;
  for (const auto& schema : benchmark.augmented_schemas)
    for (const auto& table : schema.tables)
      if (human.count(schema.db_id + "." + table.name)) {
        ++tables;
        columns += table.columns.size();
      }
  return tables == 0 ? 0.0
                     : static_cast<double>(columns) / static_cast<double>(tables);
}

}  // namespace

void write_benchmark(const Benchmark& benchmark,
                     const std::filesystem::path& directory) {
  std::filesystem::create_directories(directory);

  spider::serialize_schemas(benchmark.augmented_schemas,
                            directory / "tables.json");

  std::vector<Example> as_examples;
  as_examples.reserve(benchmark.items.size());
  for (const auto& item : benchmark.items) {
    Example example;
    example.db_id = item.db_id;
    example.question = item.question;
    example.gold_sql = item.gold_sql;
    as_examples.push_back(std::move(example));
  }
  spider::serialize_examples(as_examples, directory / "examples.json");

  std::string metadata;
  for (const auto& item : benchmark.items) {
    ordered_json rec;
    rec["item_id"] = item.item_id;
    rec["base_example_id"] = item.base_example_id;
    rec["base_question"] = item.base_question;
    rec["modifier"] = item.modifier;
    rec["category"] = lexicons::category_name(item.category);
    rec["structure"] = structure_name(item.structure);
    rec["provenance"] = provenance_name(item.provenance);
    metadata += rec.dump();
    metadata += "\n";
  }
  util::write_file(directory / "metadata.jsonl", metadata);

  ordered_json manifest;
  manifest["version"] = version_name(benchmark.version);
  manifest["config_hash"] = benchmark.config_hash;
  ordered_json counts;
  counts["databases"] = benchmark.augmented_schemas.size();
  std::size_t table_count = 0;
  for (const auto& schema : benchmark.augmented_schemas)
    table_count += schema.tables.size();
  counts["tables"] = table_count;
  counts["human_tables"] = benchmark.human_tables;
  counts["human_databases"] = benchmark.human_databases;
  counts["human_examples"] = benchmark.human_examples;
  counts["items"] = benchmark.items.size();
  counts["rule_items"] = benchmark.rule_items;
  counts["llm_items"] = benchmark.llm_items;
  counts["skipped_no_head_noun"] = benchmark.skipped_no_head_noun;
  counts["collisions"] = benchmark.log.collisions.size();
  manifest["counts"] = counts;
  manifest["avg_columns_human_tables"] = human_table_column_mean(benchmark);
  manifest["human_tables"] = benchmark.log.augmented_tables;
  manifest["collisions"] = benchmark.log.collisions;
  manifest["interpretation"] =
      "versions v1/v2/v3 add one, two, or three columns per demographic "
      "dimension to each human-relevant table: the dimension column, then an "
      "indicator column per demographic";
  util::write_file(directory / "manifest.json", manifest.dump(1) + "\n");
}

LoadedBenchmark load_benchmark(const std::filesystem::path& directory) {
  LoadedBenchmark out;

  json manifest;
  try {
    manifest = json::parse(util::read_file(directory / "manifest.json"));
  } catch (const json::exception& e) {
    throw MalformedInput("manifest.json: " + std::string(e.what()));
  }
  out.manifest.version =
      version_from_name(manifest.at("version").get<std::string>());
  out.version = out.manifest.version;
  out.manifest.config_hash = manifest.value("config_hash", "");
  if (manifest.contains("counts"))
    for (const auto& [key, value] : manifest.at("counts").items())
      out.manifest.counts[key] = value.get<std::size_t>();
  out.manifest.avg_columns_human_tables =
      manifest.value("avg_columns_human_tables", 0.0);
  for (const auto& subject : manifest.value("human_tables", json::array()))
    out.manifest.human_tables.push_back(subject.get<std::string>());
  for (const auto& subject : manifest.value("collisions", json::array()))
    out.manifest.collisions.push_back(subject.get<std::string>());

  out.schemas = spider::load_schemas(directory / "tables.json");
  auto examples = spider::load_examples(directory / "examples.json");

  std::vector<json> metadata;
  {
    std::string body = util::read_file(directory / "metadata.jsonl");
    std::size_t start = 0;
    while (start < body.size()) {
      auto end = body.find('\n', start);
      if (end == std::string::npos) end = body.size();
      std::string line = body.substr(start, end - start);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) {
        try {
          metadata.push_back(json::parse(line));
        } catch (const json::exception& e) {
          throw MalformedInput("metadata.jsonl: " + std::string(e.what()));
        }
      }
      start = end + 1;
    }
  }
  if (metadata.size() != examples.size())
    throw MalformedInput("metadata.jsonl holds " +
                         std::to_string(metadata.size()) +
                         " records for " + std::to_string(examples.size()) +
                         " examples");

  out.items.reserve(examples.size());
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const json& rec = metadata[i];
    PerturbedExample item;
    item.item_id = rec.at("item_id").get<std::string>();
    item.base_example_id = rec.at("base_example_id").get<std::string>();
    item.base_question = rec.at("base_question").get<std::string>();
    item.db_id = examples[i].db_id;
    item.question = examples[i].question;
    item.gold_sql = examples[i].gold_sql;
    item.modifier = rec.at("modifier").get<std::string>();
    item.category = lexicons::category_from_name(
        rec.at("category").get<std::string>());
    item.structure =
        structure_from_name(rec.at("structure").get<std::string>());
    item.provenance = rec.at("provenance").get<std::string>() == "llm"
                          ? Provenance::llm
                          : Provenance::rule;
    out.items.push_back(std::move(item));
  }
  return out;
}

}  // namespace sqlbias::builder
