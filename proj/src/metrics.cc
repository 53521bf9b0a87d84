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

#include "testaug/metrics.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "testaug/error.h"
#include "testaug/rng.h"
#include "testaug/text.h"

namespace testaug {

namespace {

using NgramCounts = std::unordered_map<std::string, int>;

NgramCounts CountNgrams(const Tokens& tokens, int n) {
  NgramCounts counts;
  if (static_cast<int>(tokens.size()) < n) return counts;
  for (size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string key = tokens[i];
    for (int k = 1; k < n; ++k) {
      key += '\x1f';
      key += tokens[i + k];
    }
    ++counts[key];
  }
  return counts;
}

// Closest length to `c`; ties resolve to the shorter.
size_t ClosestLength(size_t c, const std::vector<size_t>& lengths) {
  size_t best = lengths.front();
  for (size_t r : lengths) {
    const size_t d = r > c ? r - c : c - r;
    const size_t best_d = best > c ? best - c : c - best;
    if (d < best_d || (d == best_d && r < best)) best = r;
  }
  return best;
}

// Shared closing formula so both BLEU routes agree bit-for-bit given the
// same counts.
double BleuFromStats(const std::vector<int>& matches,
                     const std::vector<int>& totals, size_t c, size_t r,
                     const BleuOptions& options) {
  double log_sum = 0.0;
  for (int n = 0; n < options.max_n; ++n) {
    double p = totals[n] > 0 ? static_cast<double>(matches[n]) / totals[n] : 0.0;
    if (p <= 0.0) {
      if (options.smoothing == BleuSmoothing::kNone) return 0.0;
      p = options.epsilon;
    }
    log_sum += std::log(p);
  }
  double score = std::exp(log_sum / options.max_n);
  if (c < r) {
    score *= std::exp(1.0 - static_cast<double>(r) / static_cast<double>(c));
  }
  return score;
}

}  // namespace

double Bleu(const Tokens& candidate, const std::vector<Tokens>& references,
            const BleuOptions& options) {
  if (candidate.empty() || references.empty()) {
    throw Error(ErrorCode::kEmptyInput, "BLEU needs a candidate and references");
  }
  if (options.max_n < 1) {
    throw Error(ErrorCode::kInvalidArgument, "max_n must be >= 1");
  }
  std::vector<int> matches(options.max_n, 0), totals(options.max_n, 0);
  for (int n = 1; n <= options.max_n; ++n) {
    NgramCounts max_ref;
    for (const Tokens& ref : references) {
      for (const auto& [g, count] : CountNgrams(ref, n)) {
        max_ref[g] = std::max(max_ref[g], count);
      }
    }
    for (const auto& [g, count] : CountNgrams(candidate, n)) {
      totals[n - 1] += count;
      auto it = max_ref.find(g);
      if (it != max_ref.end()) matches[n - 1] += std::min(count, it->second);
    }
  }
  std::vector<size_t> lengths;
  for (const Tokens& ref : references) lengths.push_back(ref.size());
  return BleuFromStats(matches, totals, candidate.size(),
                       ClosestLength(candidate.size(), lengths), options);
}

SentenceCollection MakeCollection(const std::vector<std::string>& sentences) {
  SentenceCollection c;
  c.tokenizer_version = std::string(kTokenizerVersion);
  for (const std::string& s : sentences) c.sentences.push_back(Tokenize(s));
  return c;
}

double SelfBleu(const SentenceCollection& collection,
                const BleuOptions& options, int threads) {
  const auto& sents = collection.sentences;
  const size_t n_sent = sents.size();
  if (n_sent < 2) {
    throw Error(ErrorCode::kTooFewSentences, "Self-BLEU needs >= 2 sentences");
  }
  for (const Tokens& s : sents) {
    if (s.empty()) throw Error(ErrorCode::kEmptyInput, "empty sentence");
  }

  // For every n-gram keep the two largest per-sentence counts with their
  // owners; the max over "all but i" is then the top entry unless i owns it.
  struct Top2 {
    int c1 = 0;
    size_t who1 = SIZE_MAX;
    int c2 = 0;
  };
  const int max_n = options.max_n;
  std::vector<std::vector<NgramCounts>> counts(n_sent);
  std::vector<std::unordered_map<std::string, Top2>> tops(max_n);
  for (size_t i = 0; i < n_sent; ++i) {
    counts[i].resize(max_n);
    for (int n = 1; n <= max_n; ++n) {
      counts[i][n - 1] = CountNgrams(sents[i], n);
      for (const auto& [g, c] : counts[i][n - 1]) {
        Top2& t = tops[n - 1][g];
        if (c > t.c1) {
          t.c2 = t.c1;
          t.c1 = c;
          t.who1 = i;
        } else if (c > t.c2) {
          t.c2 = c;
        }
      }
    }
  }
  std::vector<size_t> lengths(n_sent);
  for (size_t i = 0; i < n_sent; ++i) lengths[i] = sents[i].size();

  std::vector<double> scores(n_sent, 0.0);
  auto score_one = [&](size_t i) {
    std::vector<int> matches(max_n, 0), totals(max_n, 0);
    for (int n = 0; n < max_n; ++n) {
      for (const auto& [g, c] : counts[i][n]) {
        totals[n] += c;
        const Top2& t = tops[n].at(g);
        const int ref_max = t.who1 == i ? t.c2 : t.c1;
        matches[n] += std::min(c, ref_max);
      }
    }
    const size_t c = lengths[i];
    size_t best = SIZE_MAX;
    size_t best_d = SIZE_MAX;
    for (size_t j = 0; j < n_sent; ++j) {
      if (j == i) continue;
      const size_t r = lengths[j];
      const size_t d = r > c ? r - c : c - r;
      if (d < best_d || (d == best_d && r < best)) {
        best = r;
        best_d = d;
      }
    }
    scores[i] = BleuFromStats(matches, totals, c, best, options);
  };

  size_t n_threads = threads > 0 ? static_cast<size_t>(threads)
                                 : std::max(1u, std::thread::hardware_concurrency());
  n_threads = std::min(n_threads, n_sent);
  {
    std::vector<std::jthread> pool;
    for (size_t w = 0; w < n_threads; ++w) {
      pool.emplace_back([&, w] {
        for (size_t i = w; i < n_sent; i += n_threads) score_one(i);
      });
    }
  }
  double sum = 0.0;
  for (double s : scores) sum += s;
  return sum / static_cast<double>(n_sent);
}

DepTree MakeDepTree(std::vector<DepNode> nodes, std::vector<int> heads) {
  const int n = static_cast<int>(nodes.size());
  if (heads.size() != nodes.size()) {
    throw Error(ErrorCode::kMalformedTree, "heads/nodes length mismatch");
  }
  if (n == 0) throw Error(ErrorCode::kMalformedTree, "empty tree");
  int roots = 0;
  for (int i = 0; i < n; ++i) {
    if (nodes[i].index != i + 1) {
      throw Error(ErrorCode::kMalformedTree, "node indices must be 1..n");
    }
    if (heads[i] < 0 || heads[i] > n || heads[i] == i + 1) {
      throw Error(ErrorCode::kMalformedTree,
                  "bad head " + std::to_string(heads[i]) + " for node " +
                      std::to_string(i + 1));
    }
    if (heads[i] == 0) ++roots;
  }
  if (roots != 1) {
    throw Error(ErrorCode::kMalformedTree,
                "expected exactly one root, found " + std::to_string(roots));
  }
  // With one root and n-1 head edges, reaching the root from every node
  // rules out cycles and disconnected parts.
  for (int i = 0; i < n; ++i) {
    int cur = i + 1;
    for (int steps = 0; cur != 0; ++steps) {
      if (steps > n) throw Error(ErrorCode::kMalformedTree, "cycle in heads");
      cur = heads[cur - 1];
    }
  }
  DepTree tree;
  tree.nodes_ = std::move(nodes);
  tree.heads_ = std::move(heads);
  return tree;
}

std::set<PosPath> UniqueDependencyPaths(const std::vector<DepTree>& trees) {
  std::set<PosPath> paths;
  for (const DepTree& tree : trees) {
    const size_t n = tree.size();
    std::vector<std::vector<size_t>> adj(n);
    for (size_t i = 0; i < n; ++i) {
      if (tree.heads()[i] != 0) {
        const size_t h = static_cast<size_t>(tree.heads()[i] - 1);
        adj[i].push_back(h);
        adj[h].push_back(i);
      }
    }
    for (size_t src = 0; src < n; ++src) {
      // BFS parents from src give the unique path to every other node.
      std::vector<size_t> parent(n, SIZE_MAX);
      parent[src] = src;
      std::deque<size_t> queue{src};
      while (!queue.empty()) {
        size_t u = queue.front();
        queue.pop_front();
        for (size_t v : adj[u]) {
          if (parent[v] == SIZE_MAX) {
            parent[v] = u;
            queue.push_back(v);
          }
        }
      }
      for (size_t dst = 0; dst < n; ++dst) {
        if (dst == src) continue;
        PosPath path;
        for (size_t cur = dst; cur != src; cur = parent[cur]) {
          path.push_back(tree.nodes()[cur].upos);
        }
        path.push_back(tree.nodes()[src].upos);
        std::reverse(path.begin(), path.end());
        paths.insert(std::move(path));
      }
    }
  }
  return paths;
}

std::string PathToString(const PosPath& path) { return Join(path, "->"); }

std::vector<std::string> SampleSentences(const TestSuite& suite,
                                         size_t per_test_cap, uint64_t seed) {
  std::map<std::string, std::vector<std::string>> by_test;
  std::map<std::string, std::unordered_set<std::string>> seen;
  for (const TestCase& c : suite.cases) {
    for (const std::string& text : c.texts) {
      if (seen[c.test_id].insert(text).second) by_test[c.test_id].push_back(text);
    }
  }
  Rng rng(seed);
  std::vector<std::string> out;
  for (const auto& [test_id, sentences] : by_test) {
    const size_t k = std::min(per_test_cap, sentences.size());
    std::vector<size_t> picks = rng.SampleIndices(sentences.size(), k);
    std::sort(picks.begin(), picks.end());
    for (size_t i : picks) out.push_back(sentences[i]);
  }
  return out;
}

DiversityReport MakeDiversityReport(const TestSuite& suite,
                                    const std::map<std::string, DepTree>& parses,
                                    const DiversityOptions& options) {
  DiversityReport report;
  report.sampling_seed = options.seed;
  report.per_test_cap = options.per_test_cap;
  std::vector<std::string> sample =
      SampleSentences(suite, options.per_test_cap, options.seed);
  report.n_sentences = sample.size();
  report.self_bleu4 =
      SelfBleu(MakeCollection(sample), options.bleu, options.threads);

  if (parses.empty() && !options.strict) {
    report.warnings.push_back("no parses supplied; dependency paths skipped");
    return report;
  }
  std::vector<DepTree> trees;
  size_t missing = 0;
  for (const std::string& s : sample) {
    auto it = parses.find(s);
    if (it == parses.end()) {
      ++missing;
    } else {
      trees.push_back(it->second);
    }
  }
  if (missing > 0) {
    if (options.strict) {
      throw Error(ErrorCode::kMissingParses,
                  std::to_string(missing) + " sampled sentences lack parses");
    }
    report.warnings.push_back(std::to_string(missing) +
                              " sampled sentences lack parses; paths counted "
                              "over the parsed ones");
  }
  report.n_parsed = trees.size();
  report.unique_path_count = UniqueDependencyPaths(trees).size();
  return report;
}

Json DiversityReportToJson(const DiversityReport& r) {
  Json j;
  j["self_bleu4"] = r.self_bleu4;
  j["unique_path_count"] =
      r.unique_path_count ? Json(*r.unique_path_count) : Json(nullptr);
  j["n_sentences"] = r.n_sentences;
  j["n_parsed"] = r.n_parsed;
  j["sampling_seed"] = r.sampling_seed;
  j["per_test_cap"] = r.per_test_cap;
  j["warnings"] = r.warnings;
  return j;
}

namespace {
double RoundToTenth(double x) { return std::round(x * 10.0) / 10.0; }
}  // namespace

SavingReport SavingFromCounts(size_t seed_sentences, size_t new_sentences,
                              size_t seed_templates, size_t new_templates) {
  SavingReport r;
  r.n_seed_sentences = seed_sentences;
  r.n_new_sentences = new_sentences;
  r.n_seed_templates = seed_templates;
  r.n_new_templates = new_templates;
  r.sentence_ratio =
      seed_sentences ? RoundToTenth(static_cast<double>(new_sentences) /
                                    static_cast<double>(seed_sentences))
                     : 0.0;
  r.template_ratio =
      seed_templates ? RoundToTenth(static_cast<double>(new_templates) /
                                    static_cast<double>(seed_templates))
                     : 0.0;
  const size_t all_templates = new_templates + seed_templates;
  r.manual_saving_fraction =
      all_templates ? static_cast<double>(new_templates) /
                          static_cast<double>(all_templates)
                    : 0.0;
  return r;
}

SavingReport MakeSavingReport(const TestSuite& seed_suite,
                              const TestSuite& augmented) {
  std::unordered_set<std::string> seed_sentences;
  for (const TestCase& c : seed_suite.cases) {
    if (c.origin == Origin::kSeed) seed_sentences.insert(Join(c.texts, "\x1f"));
  }
  std::unordered_set<std::string> new_sentences;
  for (const TestCase& c : augmented.cases) {
    if (c.origin == Origin::kSeed) continue;
    std::string key = Join(c.texts, "\x1f");
    if (!seed_sentences.contains(key)) new_sentences.insert(std::move(key));
  }
  std::unordered_set<std::string> seed_templates;
  for (const Template& t : seed_suite.templates) {
    if (t.provenance == TemplateProvenance::kManual) {
      seed_templates.insert(t.test_id + "\x1e" + Join(t.patterns, "\x1f"));
    }
  }
  std::unordered_set<std::string> new_templates;
  for (const Template& t : augmented.templates) {
    if (t.provenance != TemplateProvenance::kExpanded) continue;
    std::string key = t.test_id + "\x1e" + Join(t.patterns, "\x1f");
    if (!seed_templates.contains(key)) new_templates.insert(std::move(key));
  }
  return SavingFromCounts(seed_sentences.size(), new_sentences.size(),
                          seed_templates.size(), new_templates.size());
}

Json SavingReportToJson(const SavingReport& r) {
  Json j;
  j["n_seed_sentences"] = r.n_seed_sentences;
  j["n_new_sentences"] = r.n_new_sentences;
  j["sentence_ratio"] = r.sentence_ratio;
  j["n_seed_templates"] = r.n_seed_templates;
  j["n_new_templates"] = r.n_new_templates;
  j["template_ratio"] = r.template_ratio;
  j["manual_saving_fraction"] = r.manual_saving_fraction;
  j["display"] = {{"sentences", FormatRatio(r.sentence_ratio)},
                  {"templates", FormatRatio(r.template_ratio)},
                  {"saving", FormatPercent(r.manual_saving_fraction)}};
  return j;
}

std::string FormatRatio(double ratio) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1fx", ratio);
  return buf;
}

std::string FormatPercent(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f%%", fraction * 100.0);
  return buf;
}

}  // namespace testaug
