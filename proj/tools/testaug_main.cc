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

// Command-line entry point for the TestAug toolkit.
//
// Exit codes: 0 ok, 1 usage, 2 data error, 3 endpoint error.

#include <pthread.h>

#include <csignal>
#include <cstdio>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "CLI11.hpp"
#include "testaug/annotation_service.h"
#include "testaug/annotation_store.h"
#include "testaug/classifier.h"
#include "testaug/config.h"
#include "testaug/conllu.h"
#include "testaug/error.h"
#include "testaug/expansion.h"
#include "testaug/filtering.h"
#include "testaug/generation.h"
#include "testaug/harness.h"
#include "testaug/hash.h"
#include "testaug/metrics.h"
#include "testaug/mock_server.h"
#include "testaug/pipeline.h"
#include "testaug/rng.h"
#include "testaug/suite.h"
#include "testaug/template.h"
#include "testaug/text.h"

namespace testaug {
namespace {

namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitEndpoint = 3;

int ExitCodeFor(ErrorCode code) {
  switch (ClassOf(code)) {
    case ErrorClass::kUsage:
      return kExitUsage;
    case ErrorClass::kData:
      return kExitData;
    case ErrorClass::kEndpoint:
      return kExitEndpoint;
  }
  return kExitData;
}

// Writes `j` to `path`, or stdout when the path is empty.
void Emit(const Json& j, const std::string& path) {
  if (path.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    WriteFileAtomic(path, j.dump(2) + "\n");
  }
}

void Log(const std::string& message) { std::cerr << message << "\n"; }

// Servers run until SIGINT/SIGTERM. The signals are blocked before any
// server thread starts so only sigwait() sees them.
sigset_t BlockStopSignals() {
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);
  return set;
}

void WaitForStopSignal(const sigset_t& set) {
  int sig = 0;
  sigwait(&set, &sig);
}

// Labeled data from annotations over `cases`: conjunction of annotators,
// cases with fewer than `min_annotators` labels skipped.
std::vector<LabeledCase> LabeledFromAnnotations(
    const std::vector<TestCase>& cases,
    const std::vector<AnnotationRecord>& records, size_t min_annotators) {
  const std::map<std::string, Adjudication> adjudicated = Adjudicate(records);
  std::vector<LabeledCase> out;
  for (const TestCase& c : cases) {
    auto it = adjudicated.find(c.id);
    if (it != adjudicated.end() && it->second.n_annotators >= min_annotators) {
      out.push_back({c, it->second.valid});
    }
  }
  return out;
}

std::vector<TestSuite> LoadSuites(const std::vector<std::string>& dirs) {
  std::vector<TestSuite> suites;
  for (const std::string& d : dirs) suites.push_back(LoadSuite(d));
  return suites;
}

struct GenerationFlags {
  GenerationConfig config;
  long long timeout_ms = 30000;
  size_t k_demos = kDefaultDemonstrations;
  uint64_t seed = 42;

  void Register(CLI::App* app) {
    app->add_option("--endpoint", config.endpoint_url, "Completion endpoint URL")
        ->capture_default_str();
    app->add_option("--model", config.model_name)->capture_default_str();
    app->add_option("--temperature", config.temperature)->capture_default_str();
    app->add_option("--max-tokens", config.max_tokens)->capture_default_str();
    app->add_option("--n", config.n_completions, "Requests per test")
        ->capture_default_str();
    app->add_option("--k-demos", k_demos, "Demonstrations per prompt")
        ->capture_default_str();
    app->add_option("--seed", seed)->capture_default_str();
    app->add_option("--max-parallel", config.max_parallel)->capture_default_str();
    app->add_option("--max-retries", config.max_retries)->capture_default_str();
    app->add_option("--timeout-ms", timeout_ms)->capture_default_str();
  }

  GenerationConfig Build() {
    config.request_timeout = std::chrono::milliseconds(timeout_ms);
    return config;
  }
};

int Run(int argc, char** argv) {
  CLI::App app{"TestAug: generate, filter, expand and evaluate behavioral "
               "test suites"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  // render
  auto* render = app.add_subcommand(
      "render", "Instantiate manual templates into seed cases");
  std::string rd_suite, rd_out;
  size_t rd_cap = 50;
  render->add_option("--suite", rd_suite, "Suite directory")->required();
  render->add_option("--cap", rd_cap, "Cases per template")
      ->capture_default_str();
  render->add_option("--out", rd_out, "Output suite directory")->required();

  // generate
  auto* gen = app.add_subcommand("generate", "Prompt an LLM for new cases");
  std::string gen_suite, gen_out, gen_raw;
  std::vector<std::string> gen_tests;
  GenerationFlags gen_flags;
  gen->add_option("--suite", gen_suite, "Seed suite directory")->required();
  gen->add_option("--test", gen_tests, "Test ids (default: all)");
  gen->add_option("--out", gen_out, "Output cases.jsonl")->required();
  gen->add_option("--raw", gen_raw, "Output raw generations JSONL");
  gen_flags.Register(gen);

  // filter
  auto* filter = app.add_subcommand("filter", "Validity filtering");
  filter->require_subcommand(1);
  auto* f_format = filter->add_subcommand("format", "Structural checks");
  std::string ff_cases, ff_task, ff_out, ff_rejected;
  f_format->add_option("--cases", ff_cases)->required();
  f_format->add_option("--task", ff_task)->required();
  f_format->add_option("--out", ff_out)->required();
  f_format->add_option("--rejected", ff_rejected);

  auto* f_train = filter->add_subcommand("train", "Train a validity classifier");
  std::string ft_cases, ft_labels, ft_backend = "ngram", ft_out, ft_trainer;
  uint64_t ft_seed = 42;
  double ft_threshold = 0.5;
  size_t ft_min_annotators = 1;
  f_train->add_option("--cases", ft_cases)->required();
  f_train->add_option("--labels", ft_labels, "labels.jsonl")->required();
  f_train->add_option("--backend", ft_backend, "ngram | remote")
      ->capture_default_str();
  f_train->add_option("--trainer-url", ft_trainer);
  f_train->add_option("--seed", ft_seed)->capture_default_str();
  f_train->add_option("--threshold", ft_threshold)->capture_default_str();
  f_train->add_option("--min-annotators", ft_min_annotators)
      ->capture_default_str();
  f_train->add_option("--out", ft_out, "Model JSON")->required();

  auto* f_apply = filter->add_subcommand("apply", "Score and split cases");
  std::string fa_model, fa_cases, fa_out, fa_rejected;
  f_apply->add_option("--model", fa_model)->required();
  f_apply->add_option("--cases", fa_cases)->required();
  f_apply->add_option("--out", fa_out)->required();
  f_apply->add_option("--rejected", fa_rejected);

  auto* f_eval = filter->add_subcommand("eval", "Accuracy and F1 on labels");
  std::string fe_model, fe_cases, fe_labels, fe_out;
  size_t fe_min_annotators = 1;
  f_eval->add_option("--model", fe_model)->required();
  f_eval->add_option("--cases", fe_cases)->required();
  f_eval->add_option("--labels", fe_labels)->required();
  f_eval->add_option("--min-annotators", fe_min_annotators)
      ->capture_default_str();
  f_eval->add_option("--out", fe_out);

  // agreement
  auto* agree = app.add_subcommand("agreement", "Cohen's kappa of two raters");
  std::string ag_labels, ag_a, ag_b, ag_out;
  agree->add_option("--labels", ag_labels)->required();
  agree->add_option("--a", ag_a)->required();
  agree->add_option("--b", ag_b)->required();
  agree->add_option("--out", ag_out);

  // annotate-serve
  auto* serve = app.add_subcommand("annotate-serve", "Annotation HTTP service");
  std::string sv_suite, sv_cases, sv_labels, sv_host = "127.0.0.1", sv_static;
  int sv_port = 8090;
  AnnotationServiceOptions sv_options;
  serve->add_option("--suite", sv_suite, "Seed suite directory")->required();
  serve->add_option("--cases", sv_cases, "Candidate cases.jsonl")->required();
  serve->add_option("--labels", sv_labels, "Append-only labels.jsonl")
      ->required();
  serve->add_option("--host", sv_host)->capture_default_str();
  serve->add_option("--port", sv_port)->capture_default_str();
  serve->add_option("--static", sv_static, "UI bundle directory");
  serve->add_option("--guideline-version", sv_options.guideline_version)
      ->capture_default_str();
  serve->add_option("--phase1-size", sv_options.phase1_sample_size)
      ->capture_default_str();
  serve->add_option("--phase2-target", sv_options.phase2_target)
      ->capture_default_str();
  serve->add_option("--min-annotators", sv_options.min_annotators)
      ->capture_default_str();
  serve->add_option("--seed", sv_options.seed)->capture_default_str();

  // expand
  auto* expand = app.add_subcommand("expand", "Template expansion");
  std::string ex_suite, ex_generated, ex_out, ex_conllu;
  ExpandSuiteOptions ex_options;
  expand->add_option("--suite", ex_suite, "Seed suite directory")->required();
  expand->add_option("--generated", ex_generated, "Generated cases.jsonl")
      ->required();
  expand->add_option("--per-template-cap", ex_options.per_template_cap)
      ->capture_default_str();
  expand->add_option("--global-cap", ex_options.global_cap)
      ->capture_default_str();
  expand->add_option("--seed", ex_options.seed)->capture_default_str();
  expand->add_flag("--enable-nli", ex_options.enable_nli);
  expand->add_option("--conllu", ex_conllu, "POS tags overriding content flags");
  expand->add_option("--out", ex_out, "Output directory")->required();

  // diversity
  auto* div = app.add_subcommand("diversity", "Self-BLEU and dependency paths");
  std::string dv_suite, dv_out;
  std::vector<std::string> dv_conllu;
  DiversityOptions dv_options;
  div->add_option("--suite", dv_suite)->required();
  div->add_option("--conllu", dv_conllu, "CoNLL-U parses of the sentences");
  div->add_option("--cap", dv_options.per_test_cap)->capture_default_str();
  div->add_option("--seed", dv_options.seed)->capture_default_str();
  div->add_flag("--strict", dv_options.strict, "Fail on missing parses");
  div->add_flag("--exact-zero", "Disable epsilon smoothing");
  div->add_option("--threads", dv_options.threads);
  div->add_option("--out", dv_out);

  // saving
  auto* saving = app.add_subcommand("saving", "Effort-saving counts");
  std::string sa_seed, sa_aug, sa_out;
  saving->add_option("--seed-suite", sa_seed)->required();
  saving->add_option("--augmented", sa_aug)->required();
  saving->add_option("--out", sa_out);

  // split
  auto* split = app.add_subcommand("split", "Seeded test/train split");
  std::vector<std::string> sp_suites;
  uint64_t sp_seed = 42;
  double sp_fraction = kDefaultTestFraction;
  std::string sp_out, sp_emit;
  split->add_option("--suites", sp_suites)->required();
  split->add_option("--seed", sp_seed)->capture_default_str();
  split->add_option("--fraction", sp_fraction)->capture_default_str();
  split->add_option("--out", sp_out, "Split directory")->required();
  split->add_option("--emit", sp_emit,
                    "Also write one training job per suite here");

  // score
  auto* score = app.add_subcommand("score", "Patched failure rate");
  std::string sc_split, sc_pred, sc_out;
  bool sc_strict = false;
  bool sc_by_capability = false;
  score->add_option("--split", sc_split)->required();
  score->add_option("--pred", sc_pred)->required();
  score->add_flag("--strict", sc_strict);
  score->add_flag("--by-capability", sc_by_capability);
  score->add_option("--out", sc_out);

  // matrix
  auto* matrix = app.add_subcommand("matrix", "Failure rates over seeds");
  std::vector<std::string> mx_suites;
  std::vector<uint64_t> mx_seeds(std::begin(kDefaultSeeds),
                                 std::end(kDefaultSeeds));
  std::string mx_pred_dir, mx_endpoint, mx_out, mx_emit;
  double mx_fraction = kDefaultTestFraction;
  bool mx_strict = false;
  long long mx_timeout_ms = 30000;
  matrix->add_option("--suites", mx_suites)->required();
  matrix->add_option("--seeds", mx_seeds)->delimiter(',')->capture_default_str();
  matrix->add_option("--fraction", mx_fraction)->capture_default_str();
  auto* mx_pred_opt = matrix->add_option(
      "--pred-dir", mx_pred_dir, "Predictions at <dir>/<seed>/<suite>.jsonl");
  auto* mx_ep_opt =
      matrix->add_option("--endpoint", mx_endpoint, "Inference service URL");
  mx_pred_opt->excludes(mx_ep_opt);
  matrix->add_option("--timeout-ms", mx_timeout_ms)->capture_default_str();
  matrix->add_option("--emit", mx_emit,
                     "Write training jobs to <dir>/<seed>/<suite> and exit");
  matrix->add_flag("--strict", mx_strict);
  matrix->add_option("--out", mx_out);

  // pipeline
  auto* pipe = app.add_subcommand("pipeline", "Run the end-to-end pipeline");
  std::string pl_config, pl_fixture, pl_out_dir;
  bool pl_force = false;
  pipe->add_option("--config", pl_config, "Pipeline config JSON")->required();
  pipe->add_option("--out-dir", pl_out_dir, "Overrides out_dir");
  pipe->add_option("--mock-fixture", pl_fixture,
                   "Serve completions from this fixture in-process");
  pipe->add_flag("--force", pl_force, "Rerun every stage");

  // mock-serve
  auto* mock = app.add_subcommand("mock-serve", "Offline completions endpoint");
  std::string mk_fixture, mk_host = "127.0.0.1";
  int mk_port = 8089;
  mock->add_option("--fixture", mk_fixture)->required();
  mock->add_option("--host", mk_host)->capture_default_str();
  mock->add_option("--port", mk_port)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  if (render->parsed()) {
    TestSuite suite = LoadSuite(rd_suite);
    std::unordered_set<std::string> seen;
    for (const TestCase& c : suite.cases) {
      seen.insert(c.test_id + "\x1e" + NormalizeTextsForDedup(c.texts));
    }
    size_t added = 0;
    for (const Template& t : suite.templates) {
      if (t.provenance != TemplateProvenance::kManual) continue;
      const TestDescription* desc = suite.FindDescription(t.test_id);
      if (desc == nullptr) {
        throw Error(ErrorCode::kInvariantViolation,
                    "template " + t.id + " names unknown test " + t.test_id);
      }
      for (TestCase& c : EnumerateTemplate(t, suite.lexicon, *desc, rd_cap)) {
        if (!seen.insert(c.test_id + "\x1e" + NormalizeTextsForDedup(c.texts))
                 .second) {
          continue;
        }
        suite.cases.push_back(std::move(c));
        ++added;
      }
    }
    ValidateSuite(suite);
    SaveSuite(suite, rd_out);
    Log("rendered " + std::to_string(added) + " cases");
    return kExitOk;
  }

  if (gen->parsed()) {
    const TestSuite suite = LoadSuite(gen_suite);
    const GenerationConfig config = gen_flags.Build();
    HttpCompletionClient client(config);
    std::vector<TestCase> cases;
    std::string raw;
    for (const TestDescription& desc : suite.descriptions) {
      if (!gen_tests.empty() &&
          std::find(gen_tests.begin(), gen_tests.end(), desc.id) ==
              gen_tests.end()) {
        continue;
      }
      GenerationResult r =
          GenerateCases(desc, suite, config, client, gen_flags.k_demos,
                        DeriveSeed(gen_flags.seed, "generate:" + desc.id));
      Log(desc.id + ": " + std::to_string(r.cases.size()) + " cases");
      for (TestCase& c : r.cases) cases.push_back(std::move(c));
      for (const RawGeneration& g : r.raw) raw += ToJsonlLine(RawGenerationToJson(g));
    }
    SaveCasesJsonl(cases, gen_out);
    if (!gen_raw.empty()) WriteFileAtomic(gen_raw, raw);
    return kExitOk;
  }

  if (f_format->parsed()) {
    FormatFilterResult r =
        FormatFilter(LoadCasesJsonl(ff_cases), ParseTaskId(ff_task));
    SaveCasesJsonl(r.kept, ff_out);
    if (!ff_rejected.empty()) {
      std::string out;
      for (const CaseRejection& rej : r.rejected) {
        out += ToJsonlLine({{"reason", rej.reason},
                            {"case", CaseToJson(rej.test_case)}});
      }
      WriteFileAtomic(ff_rejected, out);
    }
    Log("kept " + std::to_string(r.kept.size()) + ", rejected " +
        std::to_string(r.rejected.size()));
    return kExitOk;
  }

  if (f_train->parsed()) {
    TrainOptions options;
    options.backend = ParseBackend(ft_backend);
    options.seed = ft_seed;
    options.decision_threshold = ft_threshold;
    options.trainer_url = ft_trainer;
    auto model = TrainFilter(
        LabeledFromAnnotations(LoadCasesJsonl(ft_cases),
                               LoadAnnotations(ft_labels), ft_min_annotators),
        options);
    SaveClassifier(*model, ft_out);
    return kExitOk;
  }

  if (f_apply->parsed()) {
    ApplyResult r = ApplyFilter(LoadClassifier(fa_model), LoadCasesJsonl(fa_cases));
    SaveCasesJsonl(r.kept, fa_out);
    if (!fa_rejected.empty()) SaveCasesJsonl(r.rejected, fa_rejected);
    Log("kept " + std::to_string(r.kept.size()) + ", rejected " +
        std::to_string(r.rejected.size()));
    return kExitOk;
  }

  if (f_eval->parsed()) {
    auto model = LoadClassifier(fe_model);
    Emit(FilterMetricsToJson(EvaluateFilter(
             *model, LabeledFromAnnotations(LoadCasesJsonl(fe_cases),
                                            LoadAnnotations(fe_labels),
                                            fe_min_annotators))),
         fe_out);
    return kExitOk;
  }

  if (agree->parsed()) {
    Emit(AgreementToJson(Agreement(LoadAnnotations(ag_labels), ag_a, ag_b)),
         ag_out);
    return kExitOk;
  }

  if (serve->parsed()) {
    sv_options.static_dir = sv_static;
    const sigset_t signals = BlockStopSignals();
    auto store = std::make_shared<AnnotationStore>(sv_labels);
    AnnotationService service(LoadSuite(sv_suite), LoadCasesJsonl(sv_cases),
                              store, sv_options);
    const int port = service.Start(sv_host, sv_port);
    Log("annotation service on http://" + sv_host + ":" + std::to_string(port));
    WaitForStopSignal(signals);
    service.Stop();
    return kExitOk;
  }

  if (expand->parsed()) {
    const TestSuite suite = LoadSuite(ex_suite);
    PosOverride pos;
    if (!ex_conllu.empty()) {
      pos = PosTable(ReadConllu(ex_conllu));
      ex_options.pos_override = &pos;
    }
    ExpandSuiteResult r =
        ExpandSuite(suite, LoadCasesJsonl(ex_generated), ex_options);
    fs::create_directories(ex_out);
    std::string templates;
    for (const Template& t : r.templates) templates += ToJsonlLine(TemplateToJson(t));
    WriteFileAtomic(fs::path(ex_out) / "templates.jsonl", templates);
    SaveCasesJsonl(r.cases, fs::path(ex_out) / "cases.jsonl");
    Log(std::to_string(r.templates.size()) + " templates, " +
        std::to_string(r.cases.size()) + " cases");
    return kExitOk;
  }

  if (div->parsed()) {
    if (div->count("--exact-zero") > 0) {
      dv_options.bleu.smoothing = BleuSmoothing::kNone;
    }
    std::vector<ConlluSentence> sentences;
    for (const std::string& path : dv_conllu) {
      for (ConlluSentence& s : ReadConllu(path)) sentences.push_back(std::move(s));
    }
    DiversityReport r =
        MakeDiversityReport(LoadSuite(dv_suite), ParsesByText(sentences), dv_options);
    for (const std::string& w : r.warnings) Log("warning: " + w);
    Emit(DiversityReportToJson(r), dv_out);
    return kExitOk;
  }

  if (saving->parsed()) {
    Emit(SavingReportToJson(MakeSavingReport(LoadSuite(sa_seed), LoadSuite(sa_aug))),
         sa_out);
    return kExitOk;
  }

  if (split->parsed()) {
    const EvalSplit s = MakeSplit(LoadSuites(sp_suites), sp_seed, sp_fraction);
    SaveSplit(s, sp_out);
    if (!sp_emit.empty()) {
      for (const auto& [name, ids] : s.train_sets) {
        EmitTrainingJob(s, name, fs::path(sp_emit) / name);
      }
    }
    Log("test set " + std::to_string(s.test_set.size()) + " cases");
    return kExitOk;
  }

  if (score->parsed()) {
    FailureReport r =
        ScorePredictions(LoadSplit(sc_split), LoadPredictions(sc_pred), sc_strict);
    if (!r.missing_ids.empty()) {
      Log("warning: " + std::to_string(r.missing_ids.size()) +
          " test cases have no prediction");
    }
    Json j = FailureReportToJson(r);
    if (!sc_by_capability) j.erase("by_capability");
    Emit(j, sc_out);
    return kExitOk;
  }

  if (matrix->parsed()) {
    const std::vector<TestSuite> suites = LoadSuites(mx_suites);
    if (!mx_emit.empty()) {
      for (uint64_t seed : mx_seeds) {
        const EvalSplit s = MakeSplit(suites, seed, mx_fraction);
        for (const TestSuite& suite : suites) {
          EmitTrainingJob(s, suite.name,
                          fs::path(mx_emit) / std::to_string(seed) / suite.name);
        }
      }
      return kExitOk;
    }
    std::unique_ptr<PredictionSource> source;
    if (!mx_endpoint.empty()) {
      source = std::make_unique<EndpointPredictionSource>(
          mx_endpoint, std::chrono::milliseconds(mx_timeout_ms));
    } else if (!mx_pred_dir.empty()) {
      source = std::make_unique<FilePredictionSource>(mx_pred_dir);
    } else {
      Log("matrix needs --pred-dir, --endpoint or --emit");
      return kExitUsage;
    }
    RunMatrixResult r = RunMatrix(suites, mx_seeds, *source, mx_strict, mx_fraction);
    for (const SuiteMatrix& m : r.suites) {
      Log(m.suite_name + ": " + FormatMeanStd(m.mean, m.std) +
          (m.partial ? " (partial)" : ""));
    }
    Emit(RunMatrixToJson(r), mx_out);
    return kExitOk;
  }

  if (pipe->parsed()) {
    PipelineConfig config = LoadConfig(pl_config);
    if (!pl_out_dir.empty()) config.out_dir = pl_out_dir;
    PipelineOptions options;
    options.force = pl_force;
    options.log = Log;
    std::optional<MockLlmServer> server;
    if (!pl_fixture.empty()) {
      server.emplace(MockLlmServer::FromFile(pl_fixture));
      const int port = server->Start("127.0.0.1", 0);
      config.generation.endpoint_url =
          "http://127.0.0.1:" + std::to_string(port) + "/v1/completions";
      options.endpoint_identity = "mock:" + Sha256Hex(ReadFile(pl_fixture));
    }
    PipelineResult r = RunPipeline(config, options);
    Log("augmented suite: " + r.augmented_dir.string() + " (" +
        std::to_string(r.augmented.cases.size()) + " cases)");
    Emit(SavingReportToJson(r.saving), "");
    return kExitOk;
  }

  if (mock->parsed()) {
    const sigset_t signals = BlockStopSignals();
    MockLlmServer server = MockLlmServer::FromFile(mk_fixture);
    const int port = server.Start(mk_host, mk_port);
    Log("mock completions on http://" + mk_host + ":" + std::to_string(port) +
        "/v1/completions");
    WaitForStopSignal(signals);
    server.Stop();
    return kExitOk;
  }
  return kExitUsage;
}

}  // namespace
}  // namespace testaug

int main(int argc, char** argv) {
  try {
    return testaug::Run(argc, argv);
  } catch (const testaug::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return testaug::ExitCodeFor(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return testaug::kExitData;
  }
}
