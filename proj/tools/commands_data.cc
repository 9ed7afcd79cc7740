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


// Subcommands over lexicons, corpora, language-model scores and ranks.

#include <filesystem>
#include <iostream>
#include <map>
#include <nlohmann/json.hpp>

#include "cfair/analysis.h"
#include "cfair/counterfactual.h"
#include "cfair/dataset.h"
#include "cfair/errors.h"
#include "cfair/external_scorer.h"
#include "cfair/filter.h"
#include "cfair/ngram.h"
#include "cfair/synth.h"
#include "commands.h"

namespace cfair::tools {

using nlohmann::json;
namespace fs = std::filesystem;

SgtLexicon LoadLexicon(const std::string& path) {
  if (path.empty()) return SgtLexicon::Default();
  return SgtLexicon::FromJson(ReadFile(path));
}

std::unique_ptr<Scorer> MakeScorer(const std::string& model_path,
                                   const std::string& command) {
  if (model_path.empty() == command.empty()) {
    throw ValidationError("give exactly one of --model or --external");
  }
  if (!model_path.empty()) {
    return std::make_unique<NgramScorer>(
        NgramModel::FromJson(ReadFile(model_path)));
  }
  auto scorer = std::make_unique<ExternalScorer>(command);
  scorer->Probe();
  return scorer;
}

namespace {

std::string ScoredSetsPath(const std::string& dir) {
  return (fs::path(dir) / kScoredSetsFile).string();
}

std::vector<CounterfactualSet> SingleMentionSets(
    const std::vector<Document>& docs, const SgtLexicon& lexicon,
    bool same_category) {
  std::vector<CounterfactualSet> sets;
  std::size_t skipped = 0;
  for (const auto& [doc, mention] : FilterSingleMention(docs, lexicon)) {
    CounterfactualSet set = GenerateAll(doc, mention, lexicon);
    sets.push_back(same_category ? RestrictSameCategory(set, lexicon)
                                 : std::move(set));
  }
  skipped = docs.size() - sets.size();
  if (skipped > 0) {
    std::cerr << skipped
              << " documents without exactly one SGT mention were skipped\n";
  }
  return sets;
}

void WriteScoredSets(const std::string& path,
                     const std::vector<ScoredSet>& scored,
                     const SgtLexicon& lexicon) {
  std::string out;
  for (const ScoredSet& s : scored) {
    json row = {{"id", s.cfset.original.id},
                {"text", JoinTokens(s.cfset.original.tokens)},
                {"sgt", lexicon.entry(s.cfset.mention.entry_id).term},
                {"logprob", s.original_ll}};
    if (s.cfset.original.label) row["label"] = *s.cfset.original.label;
    json variants = json::array();
    for (std::size_t v = 0; v < s.variant_lls.size(); ++v) {
      variants.push_back(
          {{"sgt", lexicon.entry(s.cfset.variants[v].entry_id).term},
           {"text", JoinTokens(s.cfset.variants[v].tokens)},
           {"logprob", s.variant_lls[v]}});
    }
    row["variants"] = std::move(variants);
    out += row.dump();
    out += '\n';
  }
  WriteFile(path, out);
}

std::vector<ScoredSet> ReadScoredSets(const std::string& path,
                                      const SgtLexicon& lexicon) {
  const std::string content = ReadFile(path);
  std::vector<ScoredSet> out;
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
      ScoredSet s;
      std::optional<int> label;
      if (row.contains("label")) label = row.at("label").get<int>();
      s.cfset.original = MakeDocument(row.at("id").get<std::string>(),
                                      row.at("text").get<std::string>(), label);
      const std::vector<Mention> mentions =
          FindMentions(s.cfset.original.tokens, lexicon);
      if (mentions.size() != 1) throw bad("original does not have one mention");
      s.cfset.mention = mentions.front();
      s.original_ll = row.at("logprob").get<double>();
      for (const json& v : row.at("variants")) {
        const auto entry = lexicon.FindTerm(v.at("sgt").get<std::string>());
        if (!entry) throw bad("variant SGT is not in the lexicon");
        s.cfset.variants.push_back(
            {*entry, Tokenize(v.at("text").get<std::string>())});
        s.variant_lls.push_back(v.at("logprob").get<double>());
      }
      out.push_back(std::move(s));
    } catch (const json::exception& e) {
      throw bad(e.what());
    }
  }
  return out;
}

void AddLexiconCommand(CLI::App& app) {
  auto* lexicon = app.add_subcommand("lexicon", "Lexicon utilities");
  lexicon->require_subcommand(1);
  auto* check = lexicon->add_subcommand("check", "Validate a lexicon file");
  auto path = std::make_shared<std::string>();
  check->add_option("path", *path, "Lexicon JSON (default: bundled)");
  check->callback([path] {
    const SgtLexicon lex = LoadLexicon(*path);
    std::size_t surfaces = lex.surface_index().size();
    std::cout << "entries: " << lex.size() << "\n"
              << "surfaces: " << surfaces << "\n";
    for (const std::string& category : lex.Categories()) {
      std::size_t count = 0;
      for (const SgtEntry& e : lex.entries()) count += e.category == category;
      std::cout << "category " << category << ": " << count << "\n";
    }
  });
}

void AddSynthCommand(CLI::App& app) {
  struct Opts {
    std::string config, lexicon, out, truth;
  };
  auto o = std::make_shared<Opts>();
  auto* cmd = app.add_subcommand("synth", "Generate a synthetic corpus");
  cmd->add_option("--config", o->config, "Synth config JSON")->required();
  cmd->add_option("--lexicon", o->lexicon, "Lexicon JSON (default: bundled)");
  cmd->add_option("--out", o->out, "Corpus JSONL output")->required();
  cmd->add_option("--truth", o->truth, "Ground-truth JSONL output");
  cmd->callback([o] {
    const SgtLexicon lexicon = LoadLexicon(o->lexicon);
    SynthDistribution dist(lexicon,
                           SynthConfigFromJson(ReadFile(o->config), lexicon));
    const SynthCorpus corpus = dist.Generate();
    WriteDatasetJsonl(o->out, corpus.docs);
    if (!o->truth.empty()) {
      WriteFile(o->truth, TruthToJsonl(corpus.truth, lexicon));
    }
    std::cerr << "wrote " << corpus.docs.size() << " documents\n";
  });
}

void AddLmCommands(CLI::App& app) {
  auto* lm = app.add_subcommand("lm", "Language-model scoring");
  lm->require_subcommand(1);

  struct TrainOpts {
    std::string data, out;
    NgramOptions ngram;
  };
  auto t = std::make_shared<TrainOpts>();
  auto* train = lm->add_subcommand("train", "Train an n-gram model");
  train->add_option("--data", t->data, "Dataset JSONL")->required();
  train->add_option("--order", t->ngram.order, "N-gram order (1-5)")
      ->capture_default_str();
  train->add_option("--discount", t->ngram.discount, "Absolute discount")
      ->capture_default_str();
  train->add_option("--min-count", t->ngram.min_count,
                    "Minimum frequency for the vocabulary")
      ->capture_default_str();
  train->add_option("--out", t->out, "Model JSON output")->required();
  train->callback([t] {
    const std::vector<Document> docs =
        ReadDatasetJsonl(t->data, LabelRequirement::kOptional);
    const NgramModel model =
        NgramModel::Train(std::span<const Document>(docs), t->ngram);
    WriteFile(t->out, model.ToJson());
    std::cerr << "vocabulary " << model.vocab_size() << ", order "
              << model.order() << "\n";
  });

  struct ScoreOpts {
    std::string model, external, data, cache, out, lexicon, sets;
    bool same_category = false;
  };
  auto s = std::make_shared<ScoreOpts>();
  auto* score = lm->add_subcommand("score", "Score documents");
  auto* model_opt = score->add_option("--model", s->model, "N-gram model JSON");
  auto* ext_opt =
      score->add_option("--external", s->external, "External scorer command");
  model_opt->excludes(ext_opt);
  score->add_option("--data", s->data, "Dataset JSONL")->required();
  score->add_option("--cache", s->cache, "Score cache TSV (read and updated)");
  score->add_option("--out", s->out, "Per-document TSV: id, logprob");
  score->add_option("--lexicon", s->lexicon, "Lexicon JSON (default: bundled)");
  score->add_option("--sets", s->sets,
                    "Directory for scored counterfactual sets");
  score->add_flag("--same-category", s->same_category,
                  "Only same-category counterfactuals in --sets");
  score->callback([s] {
    if (s->out.empty() && s->sets.empty()) {
      throw ValidationError("give --out and/or --sets");
    }
    const std::vector<Document> docs =
        ReadDatasetJsonl(s->data, LabelRequirement::kOptional);
    std::unique_ptr<Scorer> scorer = MakeScorer(s->model, s->external);
    ScoreCache cache = s->cache.empty() ? ScoreCache{} : ScoreCache::Load(s->cache);
    if (!s->out.empty()) {
      std::vector<CounterfactualSet> bare;
      for (const Document& d : docs) bare.push_back({d, {}, {}});
      const std::vector<ScoredSet> scored = ScoreSets(*scorer, bare, cache);
      std::string out;
      char buffer[64];
      for (const ScoredSet& x : scored) {
        std::snprintf(buffer, sizeof(buffer), "%.17g", x.original_ll);
        out += x.cfset.original.id + "\t" + buffer + "\n";
      }
      WriteFile(s->out, out);
    }
    if (!s->sets.empty()) {
      const SgtLexicon lexicon = LoadLexicon(s->lexicon);
      const std::vector<CounterfactualSet> sets =
          SingleMentionSets(docs, lexicon, s->same_category);
      const std::vector<ScoredSet> scored = ScoreSets(*scorer, sets, cache);
      fs::create_directories(s->sets);
      WriteScoredSets(ScoredSetsPath(s->sets), scored, lexicon);
    }
    if (!s->cache.empty()) cache.Save(s->cache);
  });
}

void AddCfCommand(CLI::App& app) {
  auto* cf = app.add_subcommand("cf", "Counterfactual generation");
  cf->require_subcommand(1);
  struct Opts {
    std::string data, lexicon, out;
    bool same_category = false;
  };
  auto o = std::make_shared<Opts>();
  auto* gen = cf->add_subcommand("generate", "Emit every counterfactual");
  gen->add_option("--data", o->data, "Dataset JSONL")->required();
  gen->add_option("--lexicon", o->lexicon, "Lexicon JSON (default: bundled)");
  gen->add_option("--out", o->out, "Output JSONL")->required();
  gen->add_flag("--same-category", o->same_category,
                "Only substitute SGTs of the mentioned category");
  gen->callback([o] {
    const SgtLexicon lexicon = LoadLexicon(o->lexicon);
    const std::vector<Document> docs =
        ReadDatasetJsonl(o->data, LabelRequirement::kOptional);
    std::string out;
    for (const CounterfactualSet& set :
         SingleMentionSets(docs, lexicon, o->same_category)) {
      for (const CounterfactualVariant& v : set.variants) {
        out += json{{"id", set.original.id},
                    {"variant_sgt", lexicon.entry(v.entry_id).term},
                    {"text", JoinTokens(v.tokens)}}
                   .dump();
        out += '\n';
      }
    }
    WriteFile(o->out, out);
  });
}

void AddAnalyzeCommand(CLI::App& app) {
  auto* analyze = app.add_subcommand("analyze", "Likelihood-rank analysis");
  analyze->require_subcommand(1);
  struct Opts {
    std::string scores, lexicon, out, csv;
  };
  auto o = std::make_shared<Opts>();
  auto* rank = analyze->add_subcommand(
      "rank", "Rank originals among their counterfactuals");
  rank->add_option("--scores", o->scores, "Directory written by lm score --sets")
      ->required();
  rank->add_option("--lexicon", o->lexicon, "Lexicon JSON (default: bundled)");
  rank->add_option("--out", o->out, "Report JSON")->required();
  rank->add_option("--csv", o->csv,
                   "Per-SGT median CSV (default: report path with .csv)");
  rank->callback([o] {
    const SgtLexicon lexicon = LoadLexicon(o->lexicon);
    const std::vector<ScoredSet> scored =
        ReadScoredSets(ScoredSetsPath(o->scores), lexicon);
    std::vector<RankResult> ranks;
    for (const ScoredSet& s : scored) ranks.push_back(RankOriginal(s));
    const RankAggregate agg = AggregateRanks(ranks, lexicon);
    WriteFile(o->out, RankAggregateToJson(agg, lexicon));
    const std::string csv =
        o->csv.empty() ? fs::path(o->out).replace_extension(".csv").string()
                       : o->csv;
    WriteFile(csv, PerSgtMediansCsv(agg, lexicon));
    std::cout << "documents " << agg.n_docs << ", rank one "
              << agg.pct_rank_one << "%, top decile " << agg.pct_top_decile
              << "%\n";
  });
}

void AddFilterCommand(CLI::App& app) {
  struct Opts {
    std::string scores, lexicon, policy = "asy", out;
  };
  auto o = std::make_shared<Opts>();
  auto* cmd = app.add_subcommand("filter", "Select pairing targets");
  cmd->add_option("--scores", o->scores, "Directory written by lm score --sets")
      ->required();
  cmd->add_option("--lexicon", o->lexicon, "Lexicon JSON (default: bundled)");
  cmd->add_option("--policy", o->policy, "all, neg, sc or asy")
      ->capture_default_str();
  cmd->add_option("--out", o->out, "Pairs JSONL")->required();
  cmd->callback([o] {
    const SgtLexicon lexicon = LoadLexicon(o->lexicon);
    const PairingPolicy policy = ParsePairingPolicy(o->policy);
    std::string out;
    for (const ScoredSet& s :
         ReadScoredSets(ScoredSetsPath(o->scores), lexicon)) {
      const SymmetricSet kept =
          SelectPairingTargets(s.cfset, &s, lexicon, policy);
      json terms = json::array();
      for (std::size_t v : kept.kept) {
        terms.push_back(lexicon.entry(s.cfset.variants[v].entry_id).term);
      }
      out += json{{"id", kept.doc_id}, {"kept_sgts", std::move(terms)}}.dump();
      out += '\n';
    }
    WriteFile(o->out, out);
  });
}

}  // namespace

void AddDataCommands(CLI::App& app) {
  AddLexiconCommand(app);
  AddSynthCommand(app);
  AddLmCommands(app);
  AddCfCommand(app);
  AddAnalyzeCommand(app);
  AddFilterCommand(app);
}

}  // namespace cfair::tools
