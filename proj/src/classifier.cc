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

#include "testaug/classifier.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "http_util.h"
#include "testaug/error.h"
#include "testaug/rng.h"
#include "testaug/text.h"

namespace testaug {

std::string_view BackendName(ClassifierBackend backend) {
  return backend == ClassifierBackend::kRemoteHttp ? "remote_http"
                                                   : "ngram_logreg";
}

ClassifierBackend ParseBackend(std::string_view name) {
  if (name == "ngram" || name == "ngram_logreg") {
    return ClassifierBackend::kNgramLogReg;
  }
  if (name == "remote" || name == "remote_http") {
    return ClassifierBackend::kRemoteHttp;
  }
  throw Error(ErrorCode::kConfigError,
              "unknown filter backend '" + std::string(name) + "'");
}

std::vector<std::string> NgramFeatures(const std::vector<std::string>& texts) {
  static constexpr std::string_view kSep = "<sep>";
  std::vector<std::string> tokens;
  std::string chars = " ";
  for (size_t t = 0; t < texts.size(); ++t) {
    if (t) {
      tokens.emplace_back(kSep);
      chars += "\x1f ";
    }
    for (std::string& tok : Tokenize(texts[t])) tokens.push_back(std::move(tok));
    chars += CollapseWhitespace(AsciiLower(texts[t]));
    chars += ' ';
  }
  std::vector<std::string> features;
  for (size_t i = 0; i < tokens.size(); ++i) {
    features.push_back("w:" + tokens[i]);
    if (i + 1 < tokens.size()) {
      features.push_back("b:" + tokens[i] + " " + tokens[i + 1]);
    }
  }
  for (size_t i = 0; i + 3 <= chars.size(); ++i) {
    features.push_back("c:" + chars.substr(i, 3));
  }
  return features;
}

namespace {

using SparseVector = std::vector<std::pair<size_t, double>>;

double Sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

class NgramLogRegClassifier : public ValidityClassifier {
 public:
  NgramLogRegClassifier(double threshold, std::vector<std::string> vocabulary,
                        std::vector<double> weights, double bias)
      : ValidityClassifier(threshold),
        vocabulary_(std::move(vocabulary)),
        weights_(std::move(weights)),
        bias_(bias) {
    for (size_t i = 0; i < vocabulary_.size(); ++i) index_[vocabulary_[i]] = i;
  }

  ClassifierBackend backend() const override {
    return ClassifierBackend::kNgramLogReg;
  }

  double Score(const TestCase& test_case) const override {
    double z = bias_;
    for (const auto& [i, x] : Vectorize(test_case.texts)) z += weights_[i] * x;
    return Sigmoid(z);
  }

  Json ToJson() const override {
    Json j;
    j["backend"] = BackendName(backend());
    j["decision_threshold"] = decision_threshold();
    j["bias"] = bias_;
    j["features"] = vocabulary_;
    j["weights"] = weights_;
    return j;
  }

  SparseVector Vectorize(const std::vector<std::string>& texts) const {
    std::map<size_t, double> counts;
    for (const std::string& f : NgramFeatures(texts)) {
      auto it = index_.find(f);
      if (it != index_.end()) counts[it->second] += 1.0;
    }
    double norm = 0.0;
    for (const auto& [i, c] : counts) norm += c * c;
    norm = std::sqrt(norm);
    SparseVector v(counts.begin(), counts.end());
    if (norm > 0) {
      for (auto& [i, c] : v) c /= norm;
    }
    return v;
  }

 private:
  std::vector<std::string> vocabulary_;
  std::unordered_map<std::string, size_t> index_;
  std::vector<double> weights_;
  double bias_;
};

std::shared_ptr<const ValidityClassifier> TrainNgram(
    const std::vector<LabeledCase>& data, const TrainOptions& options) {
  // Sorted vocabulary keeps feature indices independent of input order.
  std::vector<std::string> vocabulary;
  {
    std::map<std::string, int> seen;
    for (const LabeledCase& lc : data) {
      for (std::string& f : NgramFeatures(lc.test_case.texts)) seen[f] = 1;
    }
    for (auto& [f, unused] : seen) vocabulary.push_back(f);
  }
  NgramLogRegClassifier shape(options.decision_threshold, vocabulary,
                              std::vector<double>(vocabulary.size(), 0.0), 0.0);
  std::vector<SparseVector> xs;
  std::vector<double> ys;
  for (const LabeledCase& lc : data) {
    xs.push_back(shape.Vectorize(lc.test_case.texts));
    ys.push_back(lc.valid ? 1.0 : 0.0);
  }

  // SGD on the regularized log loss. Weights are stored as scale * w so the
  // L2 shrink costs O(1) per step.
  std::vector<double> w(vocabulary.size(), 0.0);
  double scale = 1.0;
  double bias = 0.0;
  std::vector<size_t> order(xs.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(options.seed);
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    rng.Shuffle(order);
    const double lr = options.learning_rate / (1.0 + 0.05 * epoch);
    for (size_t idx : order) {
      const SparseVector& x = xs[idx];
      double z = bias;
      for (const auto& [i, v] : x) z += scale * w[i] * v;
      const double g = Sigmoid(z) - ys[idx];
      scale *= (1.0 - lr * options.l2);
      for (const auto& [i, v] : x) w[i] -= lr * g * v / scale;
      bias -= lr * g;
      if (scale < 1e-6) {
        for (double& wi : w) wi *= scale;
        scale = 1.0;
      }
    }
  }
  for (double& wi : w) wi *= scale;
  return std::make_shared<NgramLogRegClassifier>(
      options.decision_threshold, std::move(vocabulary), std::move(w), bias);
}

class RemoteClassifier : public ValidityClassifier {
 public:
  RemoteClassifier(double threshold, std::string trainer_url,
                   std::string model_id, int timeout_ms)
      : ValidityClassifier(threshold),
        trainer_url_(std::move(trainer_url)),
        model_id_(std::move(model_id)),
        timeout_ms_(timeout_ms) {}

  ClassifierBackend backend() const override {
    return ClassifierBackend::kRemoteHttp;
  }

  double Score(const TestCase& test_case) const override {
    Json body;
    body["model_id"] = model_id_;
    body["texts"] = test_case.texts;
    Json reply = Post(trainer_url_, "/score", body, timeout_ms_);
    double score = 0.0;
    try {
      score = reply.at("score").get<double>();
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kTrainerEndpointError,
                  std::string("malformed /score reply: ") + e.what());
    }
    if (!(score >= 0.0 && score <= 1.0)) {
      throw Error(ErrorCode::kTrainerEndpointError, "score outside [0,1]");
    }
    return score;
  }

  Json ToJson() const override {
    Json j;
    j["backend"] = BackendName(backend());
    j["decision_threshold"] = decision_threshold();
    j["trainer_url"] = trainer_url_;
    j["model_id"] = model_id_;
    j["timeout_ms"] = timeout_ms_;
    return j;
  }

  static Json Post(const std::string& base, const std::string& route,
                   const Json& body, int timeout_ms) {
    internal::Endpoint endpoint =
        internal::ParseEndpoint(internal::JoinUrl(base, route));
    auto client = internal::MakeClient(endpoint,
                                       std::chrono::milliseconds(timeout_ms));
    httplib::Result res =
        client->Post(endpoint.path, body.dump(), "application/json");
    if (!res) {
      throw Error(ErrorCode::kTrainerEndpointError,
                  route + ": " + httplib::to_string(res.error()));
    }
    if (res->status != 200) {
      throw Error(ErrorCode::kTrainerEndpointError,
                  route + ": HTTP " + std::to_string(res->status));
    }
    try {
      return Json::parse(res->body);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorCode::kTrainerEndpointError,
                  route + ": malformed reply: " + e.what());
    }
  }

 private:
  std::string trainer_url_;
  std::string model_id_;
  int timeout_ms_;
};

std::shared_ptr<const ValidityClassifier> TrainRemote(
    const std::vector<LabeledCase>& data, const TrainOptions& options) {
  if (options.trainer_url.empty()) {
    throw Error(ErrorCode::kConfigError, "remote backend needs trainer_url");
  }
  Json examples = Json::array();
  for (const LabeledCase& lc : data) {
    examples.push_back({{"texts", lc.test_case.texts}, {"valid", lc.valid}});
  }
  Json body;
  body["examples"] = std::move(examples);
  body["seed"] = options.seed;
  Json reply = RemoteClassifier::Post(options.trainer_url, "/train", body,
                                      options.timeout_ms);
  if (!reply.contains("model_id") || !reply["model_id"].is_string()) {
    throw Error(ErrorCode::kTrainerEndpointError, "/train reply lacks model_id");
  }
  return std::make_shared<RemoteClassifier>(
      options.decision_threshold, options.trainer_url,
      reply["model_id"].get<std::string>(), options.timeout_ms);
}

}  // namespace

std::shared_ptr<const ValidityClassifier> TrainFilter(
    const std::vector<LabeledCase>& data, const TrainOptions& options) {
  const bool has_valid =
      std::any_of(data.begin(), data.end(), [](const auto& d) { return d.valid; });
  const bool has_invalid =
      std::any_of(data.begin(), data.end(), [](const auto& d) { return !d.valid; });
  if (!has_valid || !has_invalid) {
    throw Error(ErrorCode::kDegenerateData,
                "training data needs both valid and invalid cases");
  }
  if (options.backend == ClassifierBackend::kRemoteHttp) {
    return TrainRemote(data, options);
  }
  return TrainNgram(data, options);
}

std::shared_ptr<const ValidityClassifier> ClassifierFromJson(const Json& j) {
  try {
    const ClassifierBackend backend =
        ParseBackend(j.at("backend").get<std::string>());
    const double threshold = j.value("decision_threshold", 0.5);
    if (backend == ClassifierBackend::kRemoteHttp) {
      return std::make_shared<RemoteClassifier>(
          threshold, j.at("trainer_url").get<std::string>(),
          j.at("model_id").get<std::string>(), j.value("timeout_ms", 60000));
    }
    auto features = j.at("features").get<std::vector<std::string>>();
    auto weights = j.at("weights").get<std::vector<double>>();
    if (features.size() != weights.size()) {
      throw Error(ErrorCode::kParseError, "features/weights length mismatch");
    }
    return std::make_shared<NgramLogRegClassifier>(
        threshold, std::move(features), std::move(weights),
        j.at("bias").get<double>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("classifier: ") + e.what());
  }
}

void SaveClassifier(const ValidityClassifier& classifier,
                    const std::filesystem::path& path) {
  WriteFileAtomic(path, classifier.ToJson().dump() + "\n");
}

std::shared_ptr<const ValidityClassifier> LoadClassifier(
    const std::filesystem::path& path) {
  return ClassifierFromJson(ReadJsonFile(path));
}

FilterMetrics MetricsFromPredictions(const std::vector<bool>& predicted,
                                     const std::vector<bool>& actual) {
  FilterMetrics m;
  for (size_t i = 0; i < predicted.size(); ++i) {
    if (predicted[i] && actual[i]) ++m.true_positive;
    if (predicted[i] && !actual[i]) ++m.false_positive;
    if (!predicted[i] && !actual[i]) ++m.true_negative;
    if (!predicted[i] && actual[i]) ++m.false_negative;
  }
  const double n = static_cast<double>(predicted.size());
  if (n > 0) {
    m.accuracy = static_cast<double>(m.true_positive + m.true_negative) / n;
  }
  const double denom = 2.0 * m.true_positive + m.false_positive + m.false_negative;
  m.f1_valid = denom > 0 ? 2.0 * m.true_positive / denom : 0.0;
  return m;
}

FilterMetrics EvaluateFilter(const ValidityClassifier& classifier,
                             const std::vector<LabeledCase>& test_set) {
  if (test_set.empty()) {
    throw Error(ErrorCode::kEmptyTestSet, "no labeled cases to evaluate");
  }
  std::vector<bool> predicted, actual;
  for (const LabeledCase& lc : test_set) {
    predicted.push_back(classifier.Accepts(lc.test_case));
    actual.push_back(lc.valid);
  }
  return MetricsFromPredictions(predicted, actual);
}

Json FilterMetricsToJson(const FilterMetrics& m) {
  Json j;
  j["accuracy"] = m.accuracy;
  j["f1_valid"] = m.f1_valid;
  j["confusion"] = {{"tp", m.true_positive},
                    {"fp", m.false_positive},
                    {"tn", m.true_negative},
                    {"fn", m.false_negative}};
  return j;
}

ApplyResult ApplyFilter(
    const std::shared_ptr<const ValidityClassifier>& classifier,
    const std::vector<TestCase>& cases) {
  if (!classifier) {
    throw Error(ErrorCode::kModelNotLoaded, "no validity classifier loaded");
  }
  ApplyResult out;
  for (TestCase c : cases) {
    if (classifier->Accepts(c)) {
      c.validity = Validity::kValid;
      out.kept.push_back(std::move(c));
    } else {
      c.validity = Validity::kInvalid;
      out.rejected.push_back(std::move(c));
    }
  }
  return out;
}

}  // namespace testaug
