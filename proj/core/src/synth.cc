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


#include "cfair/synth.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <nlohmann/json.hpp>

#include "cfair/errors.h"
#include "cfair/random.h"

namespace cfair {

using nlohmann::json;

namespace {

using Pool = std::vector<std::string>;

const Pool kOpeners = {"everyone", "people", "folks", "neighbors"};
const Pool kClaimVerbs = {"says", "thinks", "knows", "claims"};
const Pool kSubjects = {"we", "they", "i", "he", "she"};
const Pool kMeals = {"coffee", "lunch", "dinner", "tea"};
const Pool kShareVerbs = {"shared", "ate", "had", "enjoyed"};
const Pool kActivityVerbs = {"talked", "walked", "worked", "played"};
const Pool kTimes = {"today", "recently", "later"};
const Pool kMotionVerbs = {"drove", "went", "came", "rode"};

const Pool kCueWords = {
    "praising",   "blaming",     "trusting",     "fearing",    "watching",
    "avoiding",   "hiring",      "helping",      "joining",    "visiting",
    "greeting",   "following",   "copying",      "funding",    "judging",
    "mocking",    "teaching",    "ignoring",     "doubting",   "envying",
    "admiring",   "resenting",   "hosting",      "tolerating", "welcoming",
    "banning",    "protecting",  "suspecting",   "thanking",   "questioning",
    "blocking",   "inviting",    "supporting",   "opposing",   "tracking",
    "tagging",    "rating",      "ranking",      "naming",     "quoting",
    "counting",   "hearing",     "meeting",      "seeing",     "calling",
    "paying",     "feeding",     "housing",      "training",   "coaching",
    "guiding",    "leading",     "serving",      "warning",    "suing",
    "arresting",  "fining",      "taxing",       "polling",    "surveying",
    "interviewing", "recruiting", "marrying",    "dating",     "befriending",
    "chasing",    "escorting",   "hugging",      "kissing",    "teasing",
    "pitying",    "forgiving",   "loving",       "hating",     "rescuing",
    "sheltering", "rewarding",   "punishing",    "praying",    "cheering"};

// A slot is a fixed word, a word pool, or (null pool, empty word) the SGT.
struct Slot {
  std::string word;
  const Pool* pool = nullptr;
  bool is_sgt() const { return pool == nullptr && word.empty(); }
};

Slot W(std::string w) { return Slot{std::move(w), nullptr}; }
Slot P(const Pool& p) { return Slot{"", &p}; }
Slot Sgt() { return Slot{}; }

const std::vector<std::vector<Slot>>& NeutralTemplates() {
  static const std::vector<std::vector<Slot>> templates = {
      {P(kSubjects), P(kShareVerbs), P(kMeals), W("with"), W("the"), Sgt()},
      {P(kSubjects), P(kActivityVerbs), W("yesterday"), W("with"), W("the"),
       Sgt()},
      {P(kTimes), P(kSubjects), P(kShareVerbs), P(kMeals), W("with"), W("the"),
       Sgt()},
      {P(kSubjects), P(kMotionVerbs), W("home"), W("with"), W("the"), Sgt()},
  };
  return templates;
}

std::vector<Slot> StereoTemplate(const std::string& cue) {
  return {P(kOpeners), P(kClaimVerbs), W(cue), W("the"), Sgt()};
}

// ln P of `tokens` under one template, with `sgt_logp(entry)` the log weight
// of the SGT slot. -inf when the template cannot produce the tokens.
template <typename SgtLogP>
double TemplateLogProb(const std::vector<Slot>& slots,
                       std::span<const std::string> tokens,
                       const SgtLexicon& lexicon, SgtLogP sgt_logp) {
  const double neg_inf = -std::numeric_limits<double>::infinity();
  const std::size_t prefix = slots.size() - 1;  // SGT is always last
  if (tokens.size() <= prefix) return neg_inf;
  double lp = 0.0;
  for (std::size_t i = 0; i < prefix; ++i) {
    const Slot& s = slots[i];
    if (s.pool == nullptr) {
      if (tokens[i] != s.word) return neg_inf;
    } else {
      if (std::find(s.pool->begin(), s.pool->end(), tokens[i]) ==
          s.pool->end()) {
        return neg_inf;
      }
      lp -= std::log(static_cast<double>(s.pool->size()));
    }
  }
  const auto entry =
      lexicon.FindTerm(JoinTokens(tokens.subspan(prefix)));
  if (!entry) return neg_inf;
  return lp + sgt_logp(*entry);
}

double LogAddExp(double a, double b) {
  if (std::isinf(a) && a < 0) return b;
  if (std::isinf(b) && b < 0) return a;
  const double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

}  // namespace

void SynthConfig::Validate(const SgtLexicon& lexicon) const {
  auto unit = [](double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw ValidationError(std::string(name) + " must lie in [0, 1]");
    }
  };
  unit(stereotyped_fraction, "stereotyped_fraction");
  unit(hate_rate_stereotyped, "hate_rate_stereotyped");
  unit(hate_rate_neutral, "hate_rate_neutral");
  if (n_docs == 0) throw ValidationError("n_docs must be positive");
  if (lexicon.size() == 0) throw ValidationError("lexicon is empty");
  double sum = 0.0;
  for (const auto& [entry, weight] : sgt_skew) {
    if (entry >= lexicon.size()) {
      throw ValidationError("sgt_skew names an entry outside the lexicon");
    }
    if (!(weight >= 0.0) || !std::isfinite(weight)) {
      throw ValidationError("sgt_skew weights must be finite and >= 0");
    }
    sum += weight;
  }
  if (!sgt_skew.empty() && !(sum > 0.0)) {
    throw ValidationError("sgt_skew weights must have a positive sum");
  }
}

SynthConfig SynthConfigFromJson(std::string_view content,
                                const SgtLexicon& lexicon) {
  SynthConfig config;
  try {
    const json root = json::parse(content);
    if (!root.is_object()) throw ValidationError("synth config must be an object");
    config.n_docs = root.value("n_docs", config.n_docs);
    config.stereotyped_fraction =
        root.value("stereotyped_fraction", config.stereotyped_fraction);
    config.hate_rate_stereotyped =
        root.value("hate_rate_stereotyped", config.hate_rate_stereotyped);
    config.hate_rate_neutral =
        root.value("hate_rate_neutral", config.hate_rate_neutral);
    config.seed = root.value("seed", config.seed);
    if (auto skew = root.find("sgt_skew"); skew != root.end()) {
      for (const auto& [term, weight] : skew->items()) {
        const auto entry = lexicon.FindTerm(term);
        if (!entry) {
          throw ValidationError("sgt_skew term '" + term +
                                "' is not in the lexicon");
        }
        config.sgt_skew[*entry] = weight.get<double>();
      }
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("invalid synth config: ") + e.what());
  }
  config.Validate(lexicon);
  return config;
}

SynthDistribution::SynthDistribution(const SgtLexicon& lexicon,
                                     SynthConfig config)
    : lexicon_(&lexicon), config_(std::move(config)) {
  config_.Validate(lexicon);
  stereo_weights_.assign(lexicon.size(), config_.sgt_skew.empty() ? 1.0 : 0.0);
  for (const auto& [entry, weight] : config_.sgt_skew) {
    stereo_weights_[entry] = weight;
  }
  for (double w : stereo_weights_) stereo_weight_sum_ += w;
}

std::size_t SynthDistribution::neutral_template_count() const {
  return NeutralTemplates().size();
}

std::string SynthDistribution::CueWord(EntryId k) const {
  if (k < kCueWords.size()) return kCueWords[k];
  return "cue" + std::to_string(k);
}

SynthCorpus SynthDistribution::Generate() const {
  const SgtLexicon& lexicon = *lexicon_;
  Rng rng(config_.seed);
  SynthCorpus corpus;
  corpus.docs.reserve(config_.n_docs);
  corpus.truth.reserve(config_.n_docs);
  const std::size_t n_entries = lexicon.size();
  const auto& neutral = NeutralTemplates();
  const int width = config_.n_docs > 1
                        ? static_cast<int>(std::to_string(config_.n_docs - 1).size())
                        : 1;

  for (std::size_t i = 0; i < config_.n_docs; ++i) {
    TruthRecord truth;
    char id[32];
    std::snprintf(id, sizeof(id), "synth-%0*zu", width, i);
    truth.id = id;
    truth.stereotyped = rng.Bernoulli(config_.stereotyped_fraction);

    std::vector<Slot> slots;
    if (truth.stereotyped) {
      truth.sgt = rng.Categorical(stereo_weights_);
      truth.template_id = "stereo-" + std::to_string(truth.sgt);
      slots = StereoTemplate(CueWord(truth.sgt));
    } else {
      const std::size_t t = static_cast<std::size_t>(rng.Uniform(neutral.size()));
      truth.sgt = static_cast<EntryId>(rng.Uniform(n_entries));
      truth.template_id = "neutral-" + std::to_string(t);
      slots = neutral[t];
    }
    Tokens tokens;
    for (const Slot& slot : slots) {
      if (slot.is_sgt()) {
        for (std::string& t : Tokenize(lexicon.entry(truth.sgt).term)) {
          tokens.push_back(std::move(t));
        }
      } else if (slot.pool != nullptr) {
        tokens.push_back((*slot.pool)[rng.Uniform(slot.pool->size())]);
      } else {
        tokens.push_back(slot.word);
      }
    }
    truth.label = rng.Bernoulli(truth.stereotyped
                                    ? config_.hate_rate_stereotyped
                                    : config_.hate_rate_neutral)
                      ? 1
                      : 0;

    const std::vector<Mention> mentions = FindMentions(tokens, lexicon);
    if (mentions.size() != 1 || mentions.front().entry_id != truth.sgt) {
      throw ValidationError("synthetic document '" + truth.id + "' (" +
                            JoinTokens(tokens) +
                            ") does not mention exactly its SGT; the lexicon "
                            "overlaps the template vocabulary");
    }
    corpus.docs.push_back(
        DocumentFromTokens(truth.id, std::move(tokens), truth.label));
    corpus.truth.push_back(std::move(truth));
  }
  return corpus;
}

double SynthDistribution::LogProb(std::span<const std::string> tokens) const {
  const SgtLexicon& lexicon = *lexicon_;
  const double neg_inf = -std::numeric_limits<double>::infinity();
  const double n_entries = static_cast<double>(lexicon.size());
  double total = neg_inf;

  if (config_.stereotyped_fraction > 0.0 && tokens.size() >= 3) {
    // The cue word fixes the only stereotyped template that can apply.
    for (EntryId k = 0; k < lexicon.size(); ++k) {
      if (tokens[2] != CueWord(k) || stereo_weights_[k] <= 0.0) continue;
      const double lp = TemplateLogProb(
          StereoTemplate(CueWord(k)), tokens, lexicon, [&](EntryId e) {
            return e == k ? std::log(stereo_weights_[k] / stereo_weight_sum_)
                          : neg_inf;
          });
      total = LogAddExp(total, std::log(config_.stereotyped_fraction) + lp);
    }
  }
  if (config_.stereotyped_fraction < 1.0) {
    const auto& neutral = NeutralTemplates();
    const double log_t = -std::log(static_cast<double>(neutral.size()));
    for (const auto& slots : neutral) {
      const double lp = TemplateLogProb(
          slots, tokens, lexicon, [&](EntryId) { return -std::log(n_entries); });
      total = LogAddExp(total,
                        std::log1p(-config_.stereotyped_fraction) + log_t + lp);
    }
  }
  return total;
}

std::string TruthToJsonl(const std::vector<TruthRecord>& truth,
                         const SgtLexicon& lexicon) {
  std::string out;
  for (const TruthRecord& t : truth) {
    json row = {{"id", t.id},
                {"stereotyped", t.stereotyped},
                {"sgt", lexicon.entry(t.sgt).term},
                {"template_id", t.template_id},
                {"label", t.label}};
    out += row.dump();
    out += '\n';
  }
  return out;
}

}  // namespace cfair
