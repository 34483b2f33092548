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

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "sqlbias/corpusgen.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Generate a deterministic Spider-format corpus with known"
               " relevance statistics"};
  sqlbias::corpusgen::CorpusSpec spec;
  std::string out;
  app.add_option("--out", out, "Output directory")->required();
  app.add_option("--human-databases", spec.human_databases,
                 "People-centric database count");
  app.add_option("--other-databases", spec.other_databases,
                 "Remaining database count");
  app.add_option("--train-examples", spec.train_examples,
                 "Training example count");
  app.add_option("--dev-examples", spec.dev_examples,
                 "Development example count");
  app.add_option("--target-question-tokens", spec.target_question_tokens,
                 "Mean question length to steer toward");
  CLI11_PARSE(app, argc, argv);

  try {
    auto corpus = sqlbias::corpusgen::generate_corpus(spec);
    sqlbias::corpusgen::write_corpus(corpus, out);
    std::cout << "wrote " << out << ": databases=" << corpus.schemas.size()
              << " train=" << corpus.train.size()
              << " dev=" << corpus.dev.size()
              << " judgments=" << corpus.judgments.size() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
