// Copyright 2026 The cfair Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Subcommands that train, evaluate and compare classifiers.

#include <filesystem>
#include <iostream>
#include <nlohmann/json.hpp>
#include <unordered_map>

#include "cfair/classifier.h"
#include "cfair/dataset.h"
#include "cfair/errors.h"
#include "cfair/experiment.h"
#include "cfair/metrics.h"
#include "commands.h"

namespace cfair::tools {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

void AddTrainCommand(CLI::App& app) {
  struct Opts {
    std::string data, lexicon, policy = "all", scorer_model, external, cache,
        out;
    ClassifierHyper hyper;
  };
  auto o = std::make_shared<Opts>();
  auto* cmd = app.add_subcommand("train", "Train a classifier");
  cmd->add_option("--data", o->data, "Labelled dataset JSONL")->required();
  cmd->add_option("--lexicon", o->lexicon, "Lexicon JSON (default: bundled)");
  cmd->add_option("--policy", o->policy, "Pairing policy: all, neg, sc, asy")
      ->capture_default_str();
  cmd->add_option("--lambda", o->hyper.train.lambda, "Pairing weight")
      ->capture_default_str();
  cmd->add_option("--epochs", o->hyper.train.epochs)->capture_default_str();
  cmd->add_option("--lr", o->hyper.train.learning_rate, "Learning rate")
      ->capture_default_str();
  cmd->add_option("--batch-size", o->hyper.train.batch_size)
      ->capture_default_str();
  cmd->add_option("--pairs-per-example", o->hyper.train.pairs_per_example)
      ->capture_default_str();
  cmd->add_option("--seed", o->hyper.train.seed)->capture_default_str();
  cmd->add_option("--dim", o->hyper.features.dim, "Hashed feature dimension")
      ->capture_default_str();
  cmd->add_option("--hash-seed", o->hyper.features.hash_seed)
      ->capture_default_str();
  cmd->add_flag("--mask", o->hyper.masked, "Mask SGTs (no pairing)");
  auto* m = cmd->add_option("--scorer-model", o->scorer_model,
                            "N-gram model for asy pairing");
  auto* e = cmd->add_option("--external", o->external,
                            "External scorer command for asy pairing");
  m->excludes(e);
  cmd->add_option("--cache", o->cache, "Score cache TSV");
  cmd->add_option("--out", o->out, "Model JSON output")->required();
  cmd->callback([o] {
    const SgtLexicon lexicon = LoadLexicon(o->lexicon);
    const PairingPolicy policy = ParsePairingPolicy(o->policy);
    const std::vector<Document> docs =
        ReadDatasetJsonl(o->data, LabelRequirement::kRequired);
    std::unique_ptr<Scorer> scorer;
    if (!o->scorer_model.empty() || !o->external.empty()) {
      scorer = MakeScorer(o->scorer_model, o->external);
    }
    ScoreCache cache = o->cache.empty() ? ScoreCache{} : ScoreCache::Load(o->cache);
    const TrainedModel model =
        Train(docs, lexicon, scorer.get(), policy, o->hyper, &cache);
    if (!o->cache.empty()) cache.Save(o->cache);
    WriteFile(o->out, model.ToJson());
  });
}

// Pairs rows are either {"id", "variant_sgt", "text"} (cf generate) or
// {"id", "kept_sgts"} (filter); ids refer to documents in `docs`.
std::vector<CounterfactualPair> ReadPairs(const std::string& path,
                                          const std::vector<Document>& docs,
                                          const SgtLexicon& lexicon) {
  std::unordered_map<std::string, const Document*> by_id;
  for (const Document& d : docs) by_id[d.id] = &d;
  const std::string content = ReadFile(path);
  std::vector<CounterfactualPair> pairs;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < content.size()) {
    std::size_t end = content.find('\n', pos);
    if (end == std::string::npos) end = content.size();
    const std::string line = content.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto bad = [&](const std::string& why) {
      return ValidationError(path + " line " + std::to_string(line_no) + ": " +
                             why);
    };
    try {
      const json row = json::parse(line);
      const std::string id = row.at("id").get<std::string>();
      auto it = by_id.find(id);
      if (it == by_id.end()) throw bad("unknown document id '" + id + "'");
      const Document& doc = *it->second;
      if (row.contains("text")) {
        const auto entry =
            lexicon.FindTerm(row.at("variant_sgt").get<std::string>());
        if (!entry) throw bad("variant SGT is not in the lexicon");
        pairs.push_back(
            {doc, {*entry, Tokenize(row.at("text").get<std::string>())}});
        continue;
      }
      const std::vector<Mention> mentions = FindMentions(doc.tokens, lexicon);
      if (mentions.size() != 1) {
        throw bad("document '" + id + "' does not have exactly one mention");
      }
      for (const json& term : row.at("kept_sgts")) {
        const auto entry = lexicon.FindTerm(term.get<std::string>());
        if (!entry) throw bad("kept SGT is not in the lexicon");
        pairs.push_back({doc, Substitute(doc, mentions.front(),
                                         lexicon.entry(*entry), lexicon)});
      }
    } catch (const json::exception& ex) {
      throw bad(ex.what());
    }
  }
  return pairs;
}

void AddEvalCommand(CLI::App& app) {
  struct Opts {
    std::string model, data, lexicon, adjectives, pairs, out;
    bool sym = false;
    double threshold = 0.5;
  };
  auto o = std::make_shared<Opts>();
  auto* cmd = app.add_subcommand("eval", "Evaluate a classifier");
  cmd->add_option("--model", o->model, "Classifier JSON")->required();
  cmd->add_option("--data", o->data, "Labelled test JSONL")->required();
  cmd->add_option("--lexicon", o->lexicon, "Lexicon JSON (default: bundled)");
  cmd->add_flag("--sym", o->sym, "Compute CTF on the SYM template set");
  cmd->add_option("--adjectives", o->adjectives,
                  "Adjective list for --sym (default: bundled)");
  cmd->add_option("--pairs", o->pairs,
                  "Counterfactual pairs JSONL for CTF-ASYM");
  cmd->add_option("--threshold", o->threshold)->capture_default_str();
  cmd->add_option("--out", o->out, "Report JSON (default: stdout)");
  cmd->callback([o] {
    const SgtLexicon lexicon = LoadLexicon(o->lexicon);
    const TrainedModel model = TrainedModel::FromJson(ReadFile(o->model));
    const std::vector<Document> docs =
        ReadDatasetJsonl(o->data, LabelRequirement::kRequired);
    const PrfReport prf =
        ClassificationReport(model, docs, &lexicon, o->threshold);
    std::vector<Document> single;
    for (const auto& [doc, mention] : FilterSingleMention(docs, lexicon)) {
      single.push_back(doc);
    }
    if (single.size() != docs.size()) {
      std::cerr << docs.size() - single.size()
                << " documents without exactly one SGT mention are excluded "
                   "from equality of odds\n";
    }
    const OddsReport odds = EqualityOfOdds(model, single, lexicon, o->threshold);
    std::optional<double> ctf_sym;
    std::optional<double> ctf_asym;
    if (o->sym) {
      const std::vector<Adjective> adjectives =
          o->adjectives.empty() ? DefaultAdjectives()
                                : ParseAdjectives(ReadFile(o->adjectives));
      ctf_sym = Ctf(model,
                    std::span<const CounterfactualSet>(
                        GenerateSymTemplates(lexicon, adjectives)),
                    &lexicon)
                    .mean_abs_diff;
    }
    if (!o->pairs.empty()) {
      ctf_asym = Ctf(model,
                     std::span<const CounterfactualPair>(
                         ReadPairs(o->pairs, docs, lexicon)),
                     &lexicon)
                     .mean_abs_diff;
    }
    const std::string report =
        FairnessReportJson(prf, odds, ctf_sym, ctf_asym, o->threshold);
    if (o->out.empty()) {
      std::cout << report << "\n";
    } else {
      WriteFile(o->out, report);
    }
  });
}

void AddExperimentCommand(CLI::App& app) {
  auto* experiment = app.add_subcommand("experiment", "Variant comparison");
  experiment->require_subcommand(1);
  struct Opts {
    std::string config;
    bool no_cache = false;
    bool quiet = false;
  };
  auto o = std::make_shared<Opts>();
  auto* run = experiment->add_subcommand(
      "run", "Cross-validate every requested model variant");
  run->add_option("--config", o->config, "Run config JSON")->required();
  run->add_flag("--no-cache", o->no_cache, "Ignore and skip on-disk caches");
  run->add_flag("--quiet", o->quiet, "No progress output");
  run->callback([o] {
    const std::string base =
        fs::absolute(o->config).parent_path().string();
    const RunConfig config = RunConfigFromJson(ReadFile(o->config), base);
    ExperimentOptions options;
    options.use_cache = !o->no_cache;
    options.log = o->quiet ? nullptr : &std::cerr;
    const ExperimentReport report = RunExperiment(config, options);
    std::cout << ReportCsv(report);
  });
}

}  // namespace

void AddModelCommands(CLI::App& app) {
  AddTrainCommand(app);
  AddEvalCommand(app);
  AddExperimentCommand(app);
}

}  // namespace cfair::tools
