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

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sqlbias/builder.hpp"
#include "sqlbias/errors.hpp"
#include "sqlbias/evaluate.hpp"
#include "sqlbias/lexicons.hpp"
#include "sqlbias/relevance.hpp"
#include "sqlbias/spider_model.hpp"
#include "sqlbias/util.hpp"

namespace {

using nlohmann::ordered_json;
using namespace sqlbias;

// Exit codes: 0 success, 1 data error, 2 configuration error,
// 3 external service failure.
constexpr int kExitData = 1;
constexpr int kExitConfig = 2;
constexpr int kExitExternal = 3;

struct JudgeArgs {
  std::string schemas;
  std::string examples;
  std::string out = "judgments.jsonl";
  std::string mode = "lexicon";
  std::string fixture;
  std::string lexicon;
  std::string cache = "judge_cache.jsonl";
  std::string endpoint;
  std::string model;
  unsigned jobs = 1;
};

struct BuildArgs {
  std::string schemas;
  std::string examples;
  std::string judgments;
  std::string out;
  std::vector<std::string> versions = {"v1", "v2", "v3"};
  std::vector<std::string> modifiers;
  std::vector<std::string> structures = {"attributive"};
  std::string lexicon;
  std::string paraphrase_endpoint;
  std::string model;
  unsigned jobs = 1;
};

struct EvaluateArgs {
  std::string benchmark;
  std::string predictions;
  std::string model_label;
  std::string out;
  std::string ori_predictions;
  std::string ori_examples;
  std::optional<double> fail_over;
};

struct NeutralityArgs {
  std::vector<std::string> examples;
  std::string out;
};

struct ExemplarArgs {
  std::string examples;
  std::string query;
  std::string method = "tst_jaccard";
  std::size_t k = 1;
  std::string out;
};

std::string env_api_token() {
  const char* token = std::getenv("SQLBIAS_API_TOKEN");
  return token ? token : "";
}

std::unique_ptr<relevance::JudgeClient> make_client(const std::string& endpoint,
                                                    const std::string& model) {
  if (endpoint.empty())
    throw ConfigError("llm mode requires --endpoint");
  if (model.empty())
    throw ConfigError("llm mode requires --model");
  std::string token = env_api_token();
  if (token.empty())
    throw ConfigError("llm mode requires the SQLBIAS_API_TOKEN variable");
  relevance::HttpJudgeConfig config;
  config.endpoint = endpoint;
  config.model = model;
  config.api_token = token;
  return relevance::make_http_judge(config);
}

std::set<std::string> lexicon_or_default(const std::string& path) {
  if (path.empty()) return lexicons::default_human_lexicon();
  return lexicons::load_lexicon(path);
}

int cmd_judge(const JudgeArgs& args) {
  auto schemas = spider::load_schemas(args.schemas);
  auto examples = spider::load_examples(args.examples, schemas);

  relevance::JudgeOptions options;
  options.jobs = args.jobs;
  options.human_lexicon = lexicon_or_default(args.lexicon);

  std::map<std::string, bool> fixture;
  std::unique_ptr<relevance::JudgeClient> client;
  std::optional<relevance::JudgmentCache> cache;
  if (args.mode == "fixture") {
    if (args.fixture.empty())
      throw ConfigError("fixture mode requires --fixture");
    fixture = relevance::load_fixture(args.fixture);
    options.fixture = &fixture;
  } else if (args.mode == "llm") {
    client = make_client(args.endpoint, args.model);
    cache.emplace(args.cache);
    options.client = client.get();
    options.cache = &*cache;
  } else if (args.mode != "lexicon") {
    throw ConfigError("unknown judge mode: " + args.mode);
  }

  auto judgments = relevance::judge_corpus(schemas, examples, options);
  std::vector<relevance::RelevanceJudgment> all = judgments.tables;
  all.insert(all.end(), judgments.queries.begin(), judgments.queries.end());
  relevance::write_fixture(args.out, all);

  std::cout << "human tables: " << judgments.human_table_count() << "\n"
            << "human databases: " << judgments.human_database_count() << "\n"
            << "human queries: " << judgments.human_query_count() << "\n";
  return 0;
}

int cmd_build(const BuildArgs& args) {
  auto schemas = spider::load_schemas(args.schemas);
  auto examples = spider::load_examples(args.examples, schemas);
  auto fixture = relevance::load_fixture(args.judgments);

  relevance::JudgeOptions joptions;
  joptions.fixture = &fixture;
  joptions.jobs = args.jobs;
  auto judgments = relevance::judge_corpus(schemas, examples, joptions);

  builder::BuildConfig config;
  config.jobs = args.jobs;
  if (!args.lexicon.empty()) config.human_lexicon = lexicons::load_lexicon(args.lexicon);
  config.categories.clear();
  if (args.modifiers.empty()) {
    for (const auto& set : lexicons::default_modifier_sets())
      config.categories.push_back(set.category);
  } else {
    for (const auto& name : args.modifiers)
      config.categories.push_back(lexicons::category_from_name(name));
  }
  config.structures.clear();
  for (const auto& name : args.structures)
    config.structures.push_back(builder::structure_from_name(name));

  std::unique_ptr<relevance::JudgeClient> paraphrase;
  if (!args.paraphrase_endpoint.empty()) {
    paraphrase = make_client(args.paraphrase_endpoint, args.model);
    config.paraphrase_client = paraphrase.get();
  }

  auto sets = lexicons::default_modifier_sets();
  for (const auto& name : args.versions) {
    config.version = builder::version_from_name(name);
    auto benchmark =
        builder::build_benchmark(schemas, examples, judgments, sets, config);
    auto directory = std::filesystem::path(args.out) / name;
    builder::write_benchmark(benchmark, directory);
    auto loaded = builder::load_benchmark(directory);
    std::cout << name << ": wrote " << directory.string()
              << " items=" << loaded.manifest.counts.at("items")
              << " human_tables=" << loaded.manifest.counts.at("human_tables")
              << " human_databases="
              << loaded.manifest.counts.at("human_databases")
              << " avg_columns=" << loaded.manifest.avg_columns_human_tables
              << " collisions=" << loaded.manifest.counts.at("collisions")
              << "\n";
  }
  return 0;
}

int cmd_evaluate(const EvaluateArgs& args) {
  if (args.ori_predictions.empty() != args.ori_examples.empty())
    throw ConfigError(
        "--ori-predictions and --ori-examples must be given together");

  auto benchmark = builder::load_benchmark(args.benchmark);
  std::string label = args.model_label.empty()
                          ? std::filesystem::path(args.predictions).stem().string()
                          : args.model_label;
  auto predictions = spider::load_predictions(args.predictions, label);

  std::optional<evaluate::AccuracyResult> ori;
  if (!args.ori_predictions.empty()) {
    auto ori_examples =
        spider::load_examples(args.ori_examples, benchmark.schemas);
    auto ori_predictions = spider::load_predictions(args.ori_predictions, label);
    ori = evaluate::accuracy_examples(ori_predictions, ori_examples,
                                      benchmark.schemas);
  }

  auto result = evaluate::evaluate_predictions(benchmark, predictions, ori);
  std::filesystem::path out =
      args.out.empty() ? std::filesystem::path(args.benchmark) / "report.json"
                       : std::filesystem::path(args.out);
  evaluate::make_report(result.rows, out);
  std::cout << evaluate::render_report_table(result.rows);

  if (args.fail_over) {
    for (const auto& row : result.rows)
      if (row.category == "all" && row.bias_score > *args.fail_over) {
        std::cerr << "bias score " << row.bias_score << " exceeds threshold "
                  << *args.fail_over << "\n";
        return kExitData;
      }
  }
  return 0;
}

int cmd_neutrality(const NeutralityArgs& args) {
  std::vector<std::string> questions;
  for (const auto& path : args.examples)
    for (auto& example : spider::load_examples(path))
      questions.push_back(std::move(example.question));

  std::set<std::string> modifier_terms;
  for (const auto& set : lexicons::default_modifier_sets())
    modifier_terms.insert(set.words.begin(), set.words.end());
  auto report = evaluate::neutrality_scan(
      questions, lexicons::demographic_terms(), modifier_terms);

  auto print = [&](const evaluate::LexiconScan& scan) {
    std::cout << scan.name << " hits: " << scan.hits << " rate: "
              << scan.hit_rate << "\n";
  };
  std::cout << "total tokens: " << report.total_tokens << "\n";
  print(report.demographic);
  print(report.modifier);

  if (!args.out.empty()) {
    ordered_json json;
    json["total_tokens"] = report.total_tokens;
    for (const auto* scan : {&report.demographic, &report.modifier}) {
      json[scan->name] = {{"hits", scan->hits}, {"hit_rate", scan->hit_rate}};
    }
    util::write_file(args.out, json.dump(1) + "\n");
  }
  return 0;
}

int cmd_exemplars(const ExemplarArgs& args) {
  evaluate::ExemplarQuery query;
  query.question = args.query;
  query.pool = spider::load_examples(args.examples);
  query.method = evaluate::method_from_name(args.method);
  query.k = args.k;
  auto picks = evaluate::retrieve_exemplars(query);

  ordered_json json = ordered_json::array();
  for (std::size_t i = 0; i < picks.size(); ++i) {
    std::cout << (i + 1) << ". " << picks[i].example_id << "\t"
              << picks[i].question << "\n";
    json.push_back({{"example_id", picks[i].example_id},
                    {"question", picks[i].question},
                    {"query", picks[i].gold_sql}});
  }
  if (!args.out.empty()) util::write_file(args.out, json.dump(1) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Benchmark toolchain probing Text-to-SQL systems for"
               " stereotypical demographic references"};
  app.require_subcommand(1);
  // Values on the command line override values from the config file.
  app.set_config("--config");

  JudgeArgs judge_args;
  auto* judge = app.add_subcommand(
      "judge", "Classify tables and questions as people-centric or not");
  judge->add_option("--schemas", judge_args.schemas, "Schema catalog (tables.json)")
      ->required()->check(CLI::ExistingFile);
  judge->add_option("--examples", judge_args.examples, "Example file")
      ->required()->check(CLI::ExistingFile);
  judge->add_option("--out", judge_args.out, "Output judgment JSONL path");
  judge->add_option("--judge-mode", judge_args.mode,
                    "One of llm, lexicon, fixture");
  judge->add_option("--fixture", judge_args.fixture,
                    "Prerecorded judgment JSONL (fixture mode)");
  judge->add_option("--lexicon", judge_args.lexicon,
                    "Replacement head-noun lexicon file");
  judge->add_option("--cache", judge_args.cache, "LLM answer cache path");
  judge->add_option("--endpoint", judge_args.endpoint, "Completion endpoint URL");
  judge->add_option("--model", judge_args.model, "Completion model name");
  judge->add_option("--jobs", judge_args.jobs, "Concurrent question judgments");

  BuildArgs build_args;
  auto* build = app.add_subcommand(
      "build", "Construct benchmark versions from judged data");
  build->add_option("--schemas", build_args.schemas, "Schema catalog (tables.json)")
      ->required()->check(CLI::ExistingFile);
  build->add_option("--examples", build_args.examples, "Example file")
      ->required()->check(CLI::ExistingFile);
  build->add_option("--judgments", build_args.judgments,
                    "Judgment JSONL from the judge step")
      ->required()->check(CLI::ExistingFile);
  build->add_option("--out", build_args.out, "Output directory")->required();
  build->add_option("--versions", build_args.versions,
                    "Versions to build (v1,v2,v3)")->delimiter(',');
  build->add_option("--modifiers", build_args.modifiers,
                    "Modifier categories to apply (default all)")
      ->delimiter(',');
  build->add_option("--structure", build_args.structures,
                    "Perturbation structures (attributive, relative_clause)")
      ->delimiter(',');
  build->add_option("--lexicon", build_args.lexicon,
                    "Replacement head-noun lexicon file");
  build->add_option("--paraphrase-endpoint", build_args.paraphrase_endpoint,
                    "LLM endpoint for paraphrase-based perturbation");
  build->add_option("--model", build_args.model, "Completion model name");
  build->add_option("--jobs", build_args.jobs, "Concurrent perturbations");

  EvaluateArgs evaluate_args;
  auto* evaluate = app.add_subcommand(
      "evaluate", "Score a prediction file against a benchmark");
  evaluate->add_option("--benchmark", evaluate_args.benchmark,
                       "Benchmark directory from the build step")
      ->required()->check(CLI::ExistingDirectory);
  evaluate->add_option("--predictions", evaluate_args.predictions,
                       "Predicted SQL, one statement per line")
      ->required()->check(CLI::ExistingFile);
  evaluate->add_option("--model-label", evaluate_args.model_label,
                       "Row label (default: prediction file stem)");
  evaluate->add_option("--out", evaluate_args.out,
                       "Report JSON path (default: <benchmark>/report.json)");
  evaluate->add_option("--ori-predictions", evaluate_args.ori_predictions,
                       "Predictions on the unperturbed examples")
      ->check(CLI::ExistingFile);
  evaluate->add_option("--ori-examples", evaluate_args.ori_examples,
                       "The unperturbed example file")
      ->check(CLI::ExistingFile);
  double fail_over = 0.0;
  auto* fail_over_opt = evaluate->add_option(
      "--fail-over", fail_over,
      "Exit nonzero when the overall bias score exceeds this percentage");

  NeutralityArgs neutrality_args;
  auto* neutrality = app.add_subcommand(
      "neutrality", "Scan question text for demographic and modifier terms");
  neutrality->add_option("--examples", neutrality_args.examples,
                         "Example files to scan")
      ->required()->check(CLI::ExistingFile);
  neutrality->add_option("--out", neutrality_args.out, "Report JSON path");

  ExemplarArgs exemplar_args;
  auto* exemplars = app.add_subcommand(
      "exemplars", "Retrieve the nearest questions to a probe question");
  exemplars->add_option("--examples", exemplar_args.examples, "Exemplar pool")
      ->required()->check(CLI::ExistingFile);
  exemplars->add_option("--query", exemplar_args.query, "Probe question")
      ->required();
  exemplars->add_option("--method", exemplar_args.method,
                        "tst_jaccard or tst_string_distance");
  exemplars->add_option("-k,--k", exemplar_args.k, "Number of exemplars");
  exemplars->add_option("--out", exemplar_args.out, "Result JSON path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (app.got_subcommand(judge)) return cmd_judge(judge_args);
    if (app.got_subcommand(build)) return cmd_build(build_args);
    if (app.got_subcommand(evaluate)) {
      if (fail_over_opt->count() > 0) evaluate_args.fail_over = fail_over;
      return cmd_evaluate(evaluate_args);
    }
    if (app.got_subcommand(neutrality)) return cmd_neutrality(neutrality_args);
    if (app.got_subcommand(exemplars)) return cmd_exemplars(exemplar_args);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const JudgeUnavailable& e) {
    std::cerr << "external service error: " << e.what() << "\n";
    return kExitExternal;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return 0;
}
