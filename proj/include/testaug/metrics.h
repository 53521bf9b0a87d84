/* Copyright 2026 The TestAug Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef TESTAUG_METRICS_H_
#define TESTAUG_METRICS_H_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "testaug/jsonl.h"
#include "testaug/suite.h"

namespace testaug {

using Tokens = std::vector<std::string>;

// ---------------------------------------------------------------------------
// BLEU / Self-BLEU
// ---------------------------------------------------------------------------

enum class BleuSmoothing {
  // Zero n-gram precisions are floored at epsilon.
  kEpsilonFloor,
  // Any zero precision makes the score exactly 0.
  kNone,
};

struct BleuOptions {
  int max_n = 4;
  BleuSmoothing smoothing = BleuSmoothing::kEpsilonFloor;
  double epsilon = 1e-9;
};

// Sentence BLEU with clipped n-gram precision against the per-n-gram maximum
// reference count, uniform weights over n = 1..max_n, and brevity penalty
// exp(1 - r/c) for c < r with r the closest reference length (shorter wins
// ties). Errors: kEmptyInput.
double Bleu(const Tokens& candidate, const std::vector<Tokens>& references,
            const BleuOptions& options = {});

struct SentenceCollection {
  std::vector<Tokens> sentences;
  std::string tokenizer_version;
};

SentenceCollection MakeCollection(const std::vector<std::string>& sentences);

// Mean over i of Bleu(sentence_i, all others). Deterministic; the sum runs in
// index order. Errors: kTooFewSentences.
double SelfBleu(const SentenceCollection& collection,
                const BleuOptions& options = {}, int threads = 0);

// ---------------------------------------------------------------------------
// Dependency paths
// ---------------------------------------------------------------------------

struct DepNode {
  int index = 0;  // 1-based position in the sentence
  std::string surface;
  std::string upos;
};

// Nodes with their heads (0 = root). Construct through MakeDepTree, which
// validates the tree shape.
class DepTree {
 public:
  const std::vector<DepNode>& nodes() const { return nodes_; }
  // heads()[i] is the 1-based head of nodes()[i], 0 for the root.
  const std::vector<int>& heads() const { return heads_; }
  size_t size() const { return nodes_.size(); }

 private:
  friend DepTree MakeDepTree(std::vector<DepNode>, std::vector<int>);
  std::vector<DepNode> nodes_;
  std::vector<int> heads_;
};

// Errors: kMalformedTree (no or multiple roots, cycles, disconnected nodes,
// heads out of range, non-sequential indices).
DepTree MakeDepTree(std::vector<DepNode> nodes, std::vector<int> heads);

using PosPath = std::vector<std::string>;

// UPOS sequences along the simple path between every ordered pair of
// distinct nodes, unioned over all trees.
std::set<PosPath> UniqueDependencyPaths(const std::vector<DepTree>& trees);

std::string PathToString(const PosPath& path);

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

struct DiversityOptions {
  size_t per_test_cap = 100;
  uint64_t seed = 42;
  bool strict = false;  // missing parses become kMissingParses
  BleuOptions bleu;
  int threads = 0;
};

struct DiversityReport {
  double self_bleu4 = 0.0;
  std::optional<size_t> unique_path_count;
  size_t n_sentences = 0;
  size_t n_parsed = 0;
  uint64_t sampling_seed = 42;
  size_t per_test_cap = 100;
  std::vector<std::string> warnings;
};

// Sentences sampled from a suite: per test (in id order) up to per_test_cap
// unique texts, each text of a pair counted separately, drawn with one RNG
// seeded by `seed`.
std::vector<std::string> SampleSentences(const TestSuite& suite,
                                         size_t per_test_cap, uint64_t seed);

// `parses` maps sentence text to its dependency tree.
DiversityReport MakeDiversityReport(const TestSuite& suite,
                                    const std::map<std::string, DepTree>& parses,
                                    const DiversityOptions& options = {});

Json DiversityReportToJson(const DiversityReport& report);

struct SavingReport {
  size_t n_seed_sentences = 0;
  size_t n_new_sentences = 0;
  double sentence_ratio = 0.0;  // rounded to one decimal
  size_t n_seed_templates = 0;
  size_t n_new_templates = 0;
  double template_ratio = 0.0;  // rounded to one decimal
  double manual_saving_fraction = 0.0;
};

// Arithmetic only: ratio = new / seed (0 when seed is 0) rounded to one
// decimal; saving = new_templates / (new_templates + seed_templates).
SavingReport SavingFromCounts(size_t seed_sentences, size_t new_sentences,
                              size_t seed_templates, size_t new_templates);

// Seed counts are unique case texts and manual templates of `seed_suite`;
// new counts are unique generated/expanded case texts and expanded
// templates of `augmented` not already present in the seed suite.
SavingReport MakeSavingReport(const TestSuite& seed_suite,
                              const TestSuite& augmented);

Json SavingReportToJson(const SavingReport& report);

// "49.7x", "98.0%" style renderings used by the CLI.
std::string FormatRatio(double ratio);
std::string FormatPercent(double fraction);

}  // namespace testaug

#endif  // TESTAUG_METRICS_H_
