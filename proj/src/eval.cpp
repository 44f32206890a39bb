#include "optimseed/eval.hpp"

#include <cmath>

#include "descent.hpp"
#include "json.hpp"
#include "optimseed/error.hpp"
#include "optimseed/version.hpp"

namespace optimseed {

using nlohmann::json;

namespace {

int map_gold_label(const std::string& value, const std::string& category_a,
                   const std::string& category_b) {
  if (value == category_a) return 0;
  if (value == category_b) return 1;
  throw DomainError("gold label '" + value +
                    "' does not map onto categories ('" + category_a + "', '" +
                    category_b + "')");
}

// ln(1 + e^s), overflow safe.
double softplus(double s) {
  return std::max(s, 0.0) + std::log1p(std::exp(-std::abs(s)));
}

double sigmoid(double s) {
  if (s >= 0.0) return 1.0 / (1.0 + std::exp(-s));
  const double e = std::exp(s);
  return e / (1.0 + e);
}

}  // namespace

EvalResult evaluate(const std::vector<Prediction>& predictions,
                    const EvalLabels& labels, const std::string& category_a,
                    const std::string& category_b) {
  if (predictions.size() != labels.size()) {
    throw DomainError("prediction count " + std::to_string(predictions.size()) +
                      " does not match document count " +
                      std::to_string(labels.size()));
  }
  EvalResult result;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const auto& gold = labels.at(static_cast<int>(i));
    if (!gold) {
      ++result.n_unlabeled;
      continue;
    }
    const int g = map_gold_label(*gold, category_a, category_b);
    const int p = predictions[i].label;
    result.confusion[static_cast<std::size_t>(g)][static_cast<std::size_t>(p)] += 1;
    ++result.n_evaluated;
  }
  if (result.n_evaluated == 0) {
    throw DomainError("no labeled documents to evaluate");
  }
  result.accuracy =
      static_cast<double>(result.confusion[0][0] + result.confusion[1][1]) /
      result.n_evaluated;
  return result;
}

std::string eval_result_to_json(const EvalResult& result) {
  json out = {{"schema_version", kSchemaVersion},
              {"accuracy", result.accuracy},
              {"confusion",
               {{result.confusion[0][0], result.confusion[0][1]},
                {result.confusion[1][0], result.confusion[1][1]}}},
              {"n_evaluated", result.n_evaluated},
              {"n_unlabeled", result.n_unlabeled},
              {"model_id", result.model_id},
              {"seed_set_id", result.seed_set_id}};
  return out.dump(2) + "\n";
}

bool in_train_split(int doc_id, double train_fraction) {
  // FNV-1a over the id bytes; stable across runs and platforms.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto v = static_cast<std::uint64_t>(doc_id);
  for (int b = 0; b < 8; ++b) {
    h ^= (v >> (8 * b)) & 0xff;
    h *= 0x100000001b3ULL;
  }
  return static_cast<double>(h % 10000) < train_fraction * 10000.0;
}

double supervised_loss_gradient(std::span<const double> parameters,
                                const Corpus& corpus,
                                std::span<const std::int32_t> doc_ids,
                                std::span<const std::uint8_t> targets,
                                std::span<const double> idf,
                                double regularization,
                                std::vector<double>* gradient) {
  const std::size_t vocab = corpus.vocab_size();
  const double bias = parameters[vocab];
  if (gradient) gradient->assign(vocab + 1, 0.0);

  double loss = 0.0;
  for (std::size_t i = 0; i < doc_ids.size(); ++i) {
    const auto& doc = corpus.doc(doc_ids[i]);
    double s = bias;
    for (const auto& [t, count] : doc.bag) {
      s += parameters[static_cast<std::size_t>(t)] * count *
           idf[static_cast<std::size_t>(t)];
    }
    // targets: 0 = category A = sigmoid side, 1 = category B.
    loss += targets[i] == 0 ? softplus(-s) : softplus(s);
    if (gradient) {
      const double g = sigmoid(s) - (targets[i] == 0 ? 1.0 : 0.0);
      for (const auto& [t, count] : doc.bag) {
        (*gradient)[static_cast<std::size_t>(t)] +=
            g * count * idf[static_cast<std::size_t>(t)];
      }
      (*gradient)[vocab] += g;
    }
  }
  if (regularization > 0.0) {
    double sq = 0.0;
    for (std::size_t t = 0; t < vocab; ++t) {
      sq += parameters[t] * parameters[t];
    }
    loss += regularization * sq;
    if (gradient) {
      for (std::size_t t = 0; t < vocab; ++t) {
        (*gradient)[t] += 2.0 * regularization * parameters[t];
      }
    }
  }
  return loss;
}

Prediction TfidfLogisticModel::predict_doc(const Document& doc) const {
  double s = bias_;
  for (const auto& [t, count] : doc.bag) {
    s += weights_[static_cast<std::size_t>(t)] * count *
         idf_[static_cast<std::size_t>(t)];
  }
  const double p_a = sigmoid(s);
  return Prediction{{p_a, 1.0 - p_a}, p_a >= 0.5 ? 0 : 1};
}

BaselineResult train_supervised_baseline(const Corpus& corpus,
                                         const EvalLabels& labels,
                                         const std::string& category_a,
                                         const std::string& category_b,
                                         const BaselineConfig& config,
                                         const Corpus* test_corpus,
                                         const EvalLabels* test_labels) {
  if (labels.size() != static_cast<std::size_t>(corpus.num_docs())) {
    throw DomainError("label vector does not match corpus size");
  }
  const bool external_test = test_corpus != nullptr;
  if (external_test && test_labels == nullptr) {
    throw DomainError("test corpus given without test labels");
  }

  std::vector<double> idf(corpus.vocab_size());
  for (std::size_t t = 0; t < corpus.vocab_size(); ++t) {
    idf[t] = std::log(static_cast<double>(corpus.num_docs()) /
                      corpus.doc_frequency(static_cast<std::int32_t>(t)));
  }

  std::vector<std::int32_t> train_ids;
  std::vector<std::uint8_t> train_targets;
  std::vector<std::int32_t> heldout_ids;
  for (int d = 0; d < corpus.num_docs(); ++d) {
    const bool train_side = external_test || in_train_split(d, config.train_fraction);
    if (train_side) {
      const auto& gold = labels.at(d);
      if (!gold) continue;  // unlabeled training docs are skipped
      train_ids.push_back(d);
      train_targets.push_back(static_cast<std::uint8_t>(
          map_gold_label(*gold, category_a, category_b)));
    } else {
      heldout_ids.push_back(d);
    }
  }
  if (train_ids.empty()) {
    throw DomainError("no labeled documents available for supervised training");
  }

  auto [params, diag] = detail::minimize_batch(
      corpus.vocab_size() + 1,
      [&](std::span<const double> p, std::vector<double>* g) {
        return supervised_loss_gradient(p, corpus, train_ids, train_targets,
                                        idf, config.regularization, g);
      },
      config.tolerance, config.max_iterations);

  const double bias = params.back();
  params.pop_back();
  TfidfLogisticModel model(std::move(params), bias, idf,
                           corpus.vocabulary_fingerprint(), std::move(diag));

  BaselineResult result;
  result.n_train = static_cast<int>(train_ids.size());
  int train_correct = 0;
  for (std::size_t i = 0; i < train_ids.size(); ++i) {
    if (model.predict_doc(corpus.doc(train_ids[i])).label == train_targets[i]) {
      ++train_correct;
    }
  }
  result.train_accuracy =
      static_cast<double>(train_correct) / static_cast<double>(train_ids.size());

  if (external_test) {
    // Tokens unseen in training carry no weight; map through token strings.
    std::vector<Prediction> predictions;
    predictions.reserve(static_cast<std::size_t>(test_corpus->num_docs()));
    for (const auto& doc : test_corpus->docs()) {
      double s = model.bias();
      for (const auto& [t, count] : doc.bag) {
        const auto id = corpus.token_id(test_corpus->token(t));
        if (!id) continue;
        s += model.weights()[static_cast<std::size_t>(*id)] * count *
             idf[static_cast<std::size_t>(*id)];
      }
      const double p_a = sigmoid(s);
      predictions.push_back(Prediction{{p_a, 1.0 - p_a}, p_a >= 0.5 ? 0 : 1});
    }
    result.heldout = evaluate(predictions, *test_labels, category_a, category_b);
    result.n_test = result.heldout.n_evaluated;
  } else {
    std::vector<Prediction> predictions;
    std::vector<std::optional<std::string>> heldout_labels;
    predictions.reserve(heldout_ids.size());
    heldout_labels.reserve(heldout_ids.size());
    for (std::int32_t d : heldout_ids) {
      predictions.push_back(model.predict_doc(corpus.doc(d)));
      heldout_labels.push_back(labels.at(d));
    }
    result.heldout = evaluate(predictions, EvalLabels(std::move(heldout_labels)),
                              category_a, category_b);
    result.n_test = result.heldout.n_evaluated;
  }
  result.heldout.model_id = "supervised_lr_tfidf";
  result.model = std::move(model);
  return result;
}

}  // namespace optimseed
