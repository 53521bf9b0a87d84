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

#include <algorithm>
#include <random>
#include <set>

#include "gtest/gtest.h"
#include "test_util.h"
#include "testaug/jsonl.h"
#include "testaug/suite.h"
#include "testaug/template.h"

namespace testaug {
namespace {

using testing_util::AirlineLexicon;
using testing_util::AirlineSuite;
using testing_util::CaughtCode;
using testing_util::Desc;
using testing_util::MakeCase;
using testing_util::TempDir;

Template OneTemplate(std::vector<std::string> patterns,
                     const std::string& test_id = "t") {
  return {"tmpl", test_id, std::move(patterns), TemplateProvenance::kManual,
          Json::object()};
}

TEST(TaskTest, LabelSetsAndArity) {
  EXPECT_EQ(GetTask(TaskId::kSentiment).label_set,
            (std::vector<std::string>{"negative", "positive"}));
  EXPECT_EQ(GetTask(TaskId::kParaphrase).label_set,
            (std::vector<std::string>{"not_paraphrase", "paraphrase"}));
  EXPECT_EQ(GetTask(TaskId::kNli).label_set,
            (std::vector<std::string>{"entailment", "neutral", "contradiction"}));
  EXPECT_EQ(GetTask(TaskId::kSentiment).arity, 1);
  EXPECT_EQ(GetTask(TaskId::kParaphrase).arity, 2);
  EXPECT_EQ(GetTask(TaskId::kNli).arity, 2);
  EXPECT_DOUBLE_EQ(DefaultValidityThreshold(TaskId::kSentiment), 0.9);
  EXPECT_DOUBLE_EQ(DefaultValidityThreshold(TaskId::kParaphrase), 0.9);
  EXPECT_DOUBLE_EQ(DefaultValidityThreshold(TaskId::kNli), 0.8);
  EXPECT_EQ(CaughtCode([] { ParseTaskId("qa"); }), ErrorCode::kConfigError);
}

TEST(RenderTest, GluedSuffixSurvives) {
  Lexicon lex = AirlineLexicon();
  RenderedTexts r = RenderPatterns(
      {"No one [pos_verb_present]s [the] [air_noun]."}, lex,
      {{"pos_verb_present", "appreciate"}, {"the", "that"},
       {"air_noun", "airline"}});
  ASSERT_EQ(r.texts.size(), 1u);
  EXPECT_EQ(r.texts[0], "No one appreciates that airline.");
}

TEST(RenderTest, ArticleMarker) {
  Lexicon lex = AirlineLexicon();
  RenderedTexts r = RenderPatterns(
      {"Do I think [it] [be] [a:pos_adj] [air_noun]? No"}, lex,
      {{"it", "that"}, {"be", "is"}, {"pos_adj", "amazing"},
       {"air_noun", "aircraft"}});
  EXPECT_EQ(r.texts[0], "Do I think that is an amazing aircraft? No");
  r = RenderPatterns({"[a:pos_adj] day"}, lex, {{"pos_adj", "great"}});
  EXPECT_EQ(r.texts[0], "a great day");
}

TEST(RenderTest, NoSlotsIsIdentity) {
  RenderedTexts r = RenderPatterns({"hello world"}, Lexicon(), {});
  EXPECT_EQ(r.texts[0], "hello world");
  EXPECT_TRUE(r.spans.empty());
}

TEST(RenderTest, NonSlotBracketsAreLiteral) {
  RenderedTexts r = RenderPatterns({"see [note 1] and [x-y]"}, Lexicon(), {});
  EXPECT_EQ(r.texts[0], "see [note 1] and [x-y]");
}

TEST(RenderTest, Errors) {
  Lexicon lex = AirlineLexicon();
  EXPECT_EQ(CaughtCode([&] { RenderPatterns({"[nope]"}, lex, {{"nope", "x"}}); }),
            ErrorCode::kUnknownSlot);
  EXPECT_EQ(CaughtCode([&] { RenderPatterns({"[the] [air_noun]"}, lex,
                                            {{"the", "that"}}); }),
            ErrorCode::kMissingFill);
  EXPECT_EQ(CaughtCode([&] { RenderPatterns({"[the]"}, lex, {{"the", "those"}}); }),
            ErrorCode::kFillNotInLexicon);
}

TEST(RenderTest, RenderTemplateRecordsProvenance) {
  Lexicon lex = AirlineLexicon();
  TestDescription desc = Desc("t", TaskId::kSentiment, "negative");
  Template tmpl = OneTemplate({"No one [pos_verb_present]s [the] [air_noun]."});
  Fills fills = {{"pos_verb_present", "enjoy"}, {"the", "this"},
                 {"air_noun", "seat"}};
  TestCase c = RenderTemplate(tmpl, lex, fills, desc);
  EXPECT_EQ(c.texts[0], "No one enjoys this seat.");
  EXPECT_EQ(c.origin, Origin::kSeed);
  EXPECT_EQ(c.template_id, "tmpl");
  EXPECT_EQ(c.fills, fills);
  EXPECT_EQ(c.label, "negative");
  EXPECT_EQ(c.id, CaseId(TaskId::kSentiment, c));
  EXPECT_EQ(c.fill_spans.size(), 3u);
}

TEST(ArticleTest, VowelRuleOverManyWords) {
  const std::vector<std::string> words = {"apple", "Egg",  "ice",   "Owl",
                                          "umbrella", "hour", "cat", "Yak",
                                          "x", "unit", "bear", "ant"};
  for (const std::string& w : words) {
    const char first = static_cast<char>(std::tolower(w[0]));
    const bool vowel = std::string("aeiou").find(first) != std::string::npos;
    Lexicon lex({{"w", {w}, false, std::nullopt}});
    RenderedTexts r = RenderPatterns({"[a:w]"}, lex, {{"w", w}});
    EXPECT_EQ(r.texts[0].rfind(vowel ? "an " : "a ", 0), 0u) << w;
    EXPECT_EQ(r.texts[0], std::string(vowel ? "an " : "a ") + w);
  }
}

// Random patterns over random lexicons: undoing each recorded fill span
// restores the pattern.
TEST(RenderTest, RenderingIsInvertibleGivenSpans) {
  std::mt19937_64 gen(7);
  auto pick = [&](size_t n) { return static_cast<size_t>(gen() % n); };
  const std::vector<std::string> pieces = {"the ", "a", ", ", "s", "x ", " ",
                                           "!", "ed ", "[not a slot] "};
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<LexiconEntry> entries;
    const size_t n_slots = 1 + pick(4);
    for (size_t s = 0; s < n_slots; ++s) {
      LexiconEntry e;
      e.slot_name = "s" + std::to_string(s);
      const size_t n_words = 1 + pick(4);
      for (size_t w = 0; w < n_words; ++w) {
        std::string word;
        for (size_t k = 0; k < 1 + pick(6); ++k) word += "aeioxyzt"[pick(8)];
        if (std::find(e.words.begin(), e.words.end(), word) == e.words.end()) {
          e.words.push_back(word);
        }
      }
      entries.push_back(std::move(e));
    }
    Lexicon lex(entries);
    std::vector<std::string> patterns(1 + pick(2));
    for (std::string& p : patterns) {
      for (size_t k = 0; k < 1 + pick(6); ++k) {
        if (pick(2) == 0) {
          p += SlotMarker(entries[pick(n_slots)].slot_name, pick(3) == 0);
        } else {
          p += pieces[pick(pieces.size())];
        }
      }
    }
    Fills fills;
    for (const std::string& slot : SlotNames(patterns)) {
      const LexiconEntry* e = lex.Find(slot);
      fills[slot] = e->words[pick(e->words.size())];
    }
    RenderedTexts r = RenderPatterns(patterns, lex, fills);
    std::vector<std::string> undone = r.texts;
    std::vector<FillSpan> spans = r.spans;
    std::sort(spans.begin(), spans.end(), [](const FillSpan& a, const FillSpan& b) {
      return std::tie(a.text_index, b.begin) < std::tie(b.text_index, a.begin);
    });
    for (const FillSpan& s : spans) {
      undone[s.text_index].replace(s.begin, s.length, SlotMarker(s.slot, s.article));
    }
    EXPECT_EQ(undone, patterns) << "trial " << trial;
  }
}

TEST(EnumerateTest, OneSlotInLexiconOrder) {
  Lexicon lex({{"w", {"red", "green", "blue"}, false, std::nullopt}});
  TestDescription desc = Desc("t", TaskId::kSentiment, "positive");
  std::vector<TestCase> cases = EnumerateTemplate(OneTemplate({"I like [w]."}),
                                                  lex, desc, 10);
  ASSERT_EQ(cases.size(), 3u);
  EXPECT_EQ(cases[0].texts[0], "I like red.");
  EXPECT_EQ(cases[1].texts[0], "I like green.");
  EXPECT_EQ(cases[2].texts[0], "I like blue.");
}

TEST(EnumerateTest, TruncatedProductMatchesHandEnumeration) {
  const std::vector<std::string> a = {"a1", "a2", "a3", "a4"};
  const std::vector<std::string> b = {"b1", "b2", "b3", "b4", "b5"};
  Lexicon lex({{"b", b, false, std::nullopt}, {"a", a, false, std::nullopt}});
  TestDescription desc = Desc("t", TaskId::kSentiment, "positive");
  // Slot order follows first appearance in the pattern, not the lexicon.
  std::vector<TestCase> cases =
      EnumerateTemplate(OneTemplate({"[a] then [b]"}), lex, desc, 7);
  std::vector<std::string> oracle;
  for (const std::string& x : a) {
    for (const std::string& y : b) oracle.push_back(x + " then " + y);
  }
  oracle.resize(7);
  ASSERT_EQ(cases.size(), 7u);
  for (size_t i = 0; i < 7; ++i) EXPECT_EQ(cases[i].texts[0], oracle[i]);
  EXPECT_EQ(TemplateProductSize(OneTemplate({"[a] then [b]"}), lex), 20u);
}

TEST(EnumerateTest, NoSlotsGivesOneCase) {
  TestDescription desc = Desc("t", TaskId::kSentiment, "positive");
  EXPECT_EQ(EnumerateTemplate(OneTemplate({"plain"}), Lexicon(), desc, 10).size(),
            1u);
}

TEST(EnumerateTest, SizeIsMinOfCapAndProduct) {
  Lexicon lex = AirlineLexicon();
  TestDescription desc = Desc("t", TaskId::kSentiment, "negative");
  Template tmpl = OneTemplate({"No one [pos_verb_present]s [the] [air_noun]."});
  for (size_t cap : {1u, 5u, 74u, 75u, 76u, 500u}) {
    EXPECT_EQ(EnumerateTemplate(tmpl, lex, desc, cap).size(),
              std::min<size_t>(cap, 75));
  }
  EXPECT_EQ(CaughtCode([&] { EnumerateTemplate(OneTemplate({"[zz]"}), lex, desc, 3); }),
            ErrorCode::kUnknownSlot);
}

TEST(EnumerateTest, NoDuplicateTextsWhenSlotsShareWords) {
  // [it] and [the] both offer "that"/"this": renderings stay unique.
  Lexicon lex = AirlineLexicon();
  TestDescription desc = Desc("t", TaskId::kSentiment, "negative");
  std::vector<TestCase> cases =
      EnumerateTemplate(OneTemplate({"[it]"}), lex, desc, 10);
  std::set<std::string> texts;
  for (const TestCase& c : cases) texts.insert(c.texts[0]);
  EXPECT_EQ(texts.size(), cases.size());
}

TEST(CaseIdTest, DeterministicAndSensitive) {
  const std::string a = CaseId(TaskId::kSentiment, "t", {"Hello there."}, "positive");
  EXPECT_EQ(a, CaseId(TaskId::kSentiment, "t", {"Hello there."}, "positive"));
  EXPECT_EQ(a.size(), 32u);
  EXPECT_EQ(a.find_first_not_of("0123456789abcdef"), std::string::npos);
  EXPECT_NE(a, CaseId(TaskId::kSentiment, "t", {"Hello there!"}, "positive"));
  EXPECT_NE(a, CaseId(TaskId::kSentiment, "u", {"Hello there."}, "positive"));
  EXPECT_NE(a, CaseId(TaskId::kSentiment, "t", {"Hello there."}, "negative"));
  EXPECT_NE(a, CaseId(TaskId::kParaphrase, "t", {"Hello there."}, "positive"));
}

TEST(CaseIdTest, PairOrderMatters) {
  EXPECT_NE(CaseId(TaskId::kNli, "t", {"A man sleeps.", "A man rests."}, "entailment"),
            CaseId(TaskId::kNli, "t", {"A man rests.", "A man sleeps."}, "entailment"));
  // The separator keeps field boundaries apart.
  EXPECT_NE(CaseId(TaskId::kNli, "t", {"ab", "c"}, "neutral"),
            CaseId(TaskId::kNli, "t", {"a", "bc"}, "neutral"));
}

TEST(SuiteIoTest, RoundTrip) {
  TempDir dir;
  TestSuite suite = AirlineSuite(3);
  suite.cases.push_back(MakeCase(TaskId::kSentiment, "pos_adj",
                                 {"What a flight!"}, "positive"));
  suite.cases.back().meta["demonstration_ids"] = Json::array({"x", "y"});
  ValidateSuite(suite);
  SaveSuite(suite, dir.path());
  TestSuite loaded = LoadSuite(dir.path());
  EXPECT_EQ(loaded, suite);
  // Saving again gives the same bytes.
  TempDir dir2;
  SaveSuite(loaded, dir2.path());
  for (const char* f : {"cases.jsonl", "descriptions.jsonl", "templates.jsonl",
                        "lexicon.json"}) {
    EXPECT_EQ(ReadFile(dir.path() / f), ReadFile(dir2.path() / f)) << f;
  }
}

TEST(SuiteIoTest, CaseKeyOrderIsFixed) {
  TestSuite suite = AirlineSuite(1);
  const std::string line = ToJsonlLine(CaseToJson(suite.cases[0]));
  const std::vector<std::string> keys = {"\"id\"", "\"test_id\"", "\"texts\"",
                                         "\"label\"", "\"origin\"",
                                         "\"template_id\"", "\"fills\"",
                                         "\"validity\"", "\"meta\""};
  size_t last = 0;
  for (const std::string& k : keys) {
    const size_t at = line.find(k);
    ASSERT_NE(at, std::string::npos) << k;
    EXPECT_GE(at, last) << k;
    last = at;
  }
  EXPECT_EQ(line.back(), '\n');
}

TEST(SuiteIoTest, EmptyCasesFile) {
  TempDir dir;
  TestSuite suite = AirlineSuite(1);
  suite.cases.clear();
  SaveSuite(suite, dir.path());
  TestSuite loaded = LoadSuite(dir.path());
  EXPECT_TRUE(loaded.cases.empty());
  EXPECT_EQ(loaded.descriptions.size(), 2u);
}

TEST(SuiteIoTest, UnknownKeysLandInMeta) {
  TempDir dir;
  TestSuite suite = AirlineSuite(1);
  suite.cases.resize(1);
  SaveSuite(suite, dir.path());
  Json j = CaseToJson(suite.cases[0]);
  j["annotator_note"] = "check";
  WriteFileAtomic(dir / "cases.jsonl", ToJsonlLine(j));
  TestSuite loaded = LoadSuite(dir.path());
  ASSERT_EQ(loaded.cases.size(), 1u);
  EXPECT_EQ(loaded.cases[0].meta.value("annotator_note", ""), "check");
}

TEST(SuiteIoTest, ParseErrorNamesLine) {
  TempDir dir;
  TestSuite suite = AirlineSuite(2);
  SaveSuite(suite, dir.path());
  std::string content = ReadFile(dir / "cases.jsonl");
  content.insert(content.find('\n') + 1, "{not json\n");
  WriteFileAtomic(dir / "cases.jsonl", content);
  try {
    LoadSuite(dir.path());
    FAIL() << "expected a parse error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParseError);
    EXPECT_NE(std::string(e.what()).find(":2"), std::string::npos) << e.what();
  }
}

TEST(SuiteIoTest, WrongArityIsInvariantViolation) {
  TempDir dir;
  TestSuite suite;
  suite.name = "nli";
  suite.task = TaskId::kNli;
  suite.descriptions = {Desc("n1", TaskId::kNli, "contradiction")};
  SaveSuite(suite, dir.path());
  Json j = CaseToJson(
      MakeCase(TaskId::kNli, "n1", {"Joe isn't at the party."}, "contradiction"));
  WriteFileAtomic(dir / "cases.jsonl", ToJsonlLine(j));
  try {
    LoadSuite(dir.path());
    FAIL() << "expected an invariant violation";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvariantViolation);
    EXPECT_NE(std::string(e.what()).find(j["id"].get<std::string>()),
              std::string::npos);
  }
}

TEST(SuiteValidationTest, DetectsBrokenInvariants) {
  auto broken = [](const std::function<void(TestSuite&)>& edit) {
    TestSuite s = AirlineSuite(2);
    edit(s);
    return CaughtCode([&] { ValidateSuite(s); });
  };
  EXPECT_EQ(broken([](TestSuite&) {}), std::nullopt);
  EXPECT_EQ(broken([](TestSuite& s) { s.cases.push_back(s.cases[0]); }),
            ErrorCode::kInvariantViolation);
  EXPECT_EQ(broken([](TestSuite& s) { s.cases[0].test_id = "missing"; }),
            ErrorCode::kInvariantViolation);
  EXPECT_EQ(broken([](TestSuite& s) { s.cases[0].label = "positive"; }),
            ErrorCode::kInvariantViolation);
  EXPECT_EQ(broken([](TestSuite& s) { s.templates[0].test_id = "missing"; }),
            ErrorCode::kInvariantViolation);
  EXPECT_EQ(broken([](TestSuite& s) { s.cases[0].texts[0] = "  "; }),
            ErrorCode::kInvariantViolation);
  EXPECT_EQ(broken([](TestSuite& s) {
              s.cases[0].origin = Origin::kExpanded;
              s.cases[0].fills.reset();
            }),
            ErrorCode::kInvariantViolation);
  EXPECT_EQ(broken([](TestSuite& s) { s.descriptions[0].validity_threshold = 1.5; }),
            ErrorCode::kInvariantViolation);
}

}  // namespace
}  // namespace testaug
