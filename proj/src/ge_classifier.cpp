#include "optimseed/ge_classifier.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "descent.hpp"
#include "json.hpp"
#include "optimseed/error.hpp"
#include "optimseed/version.hpp"

namespace optimseed {

namespace {

using nlohmann::json;

double sigmoid(double s) {
  if (s >= 0.0) {
    return 1.0 / (1.0 + std::exp(-s));
  }
  const double e = std::exp(s);
  return e / (1.0 + e);
}

}  // namespace

ConstraintSet::ConstraintSet(std::vector<Constraint> entries,
                             const Corpus& corpus)
    : entries_(std::move(entries)) {
  std::set<std::string> seen;
  for (const auto& entry : entries_) {
    if (!seen.insert(entry.word).second) {
      throw DomainError("constraint word '" + entry.word +
                        "' appears more than once");
    }
    const double sum = entry.reference[0] + entry.reference[1];
    if (std::abs(sum - 1.0) > 1e-9) {
      throw DomainError("reference distribution for '" + entry.word +
                        "' does not sum to 1");
    }
    for (double p : entry.reference) {
      if (!(p > 0.0 && p < 1.0)) {
        throw DomainError("reference components for '" + entry.word +
                          "' must lie strictly inside (0, 1)");
      }
    }
    const auto id = corpus.token_id(entry.word);
    if (!id || corpus.doc_frequency(*id) < 1) {
      throw DomainError("constraint word '" + entry.word +
                        "' does not occur in the corpus");
    }
  }
}

ConstraintSet build_constraints(const std::vector<std::string>& seeds_a,
                                const std::vector<std::string>& seeds_b,
                                double reference, const Corpus& corpus) {
  if (!(reference > 0.5 && reference < 1.0)) {
    throw DomainError("reference distribution must satisfy 0.5 < r < 1, got " +
                      std::to_string(reference));
  }
  if (seeds_a.empty() || seeds_b.empty()) {
    throw DomainError("seed lists must be nonempty");
  }
  std::set<std::string> set_a(seeds_a.begin(), seeds_a.end());
  for (const auto& word : seeds_b) {
    if (set_a.count(word)) {
      throw DomainError("seed lists overlap on '" + word + "'");
    }
  }
  for (const auto& word : seeds_a) {
    if (!corpus.token_id(word)) {
      throw DomainError("seed word '" + word + "' not in corpus vocabulary");
    }
  }
  for (const auto& word : seeds_b) {
    if (!corpus.token_id(word)) {
      throw DomainError("seed word '" + word + "' not in corpus vocabulary");
    }
  }
  std::vector<Constraint> entries;
  entries.reserve(seeds_a.size() + seeds_b.size());
  for (const auto& word : seeds_a) {
    entries.push_back({word, {reference, 1.0 - reference}});
  }
  for (const auto& word : seeds_b) {
    entries.push_back({word, {1.0 - reference, reference}});
  }
  return ConstraintSet(std::move(entries), corpus);
}

const char* ge_distance_name(GeDistance d) {
  return d == GeDistance::kSquaredL2 ? "l2" : "kl";
}

GeDistance ge_distance_from_name(std::string_view name) {
  if (name == "l2") return GeDistance::kSquaredL2;
  if (name == "kl") return GeDistance::kKl;
  throw DomainError("unknown ge distance '" + std::string(name) +
                    "' (expected l2 or kl)");
}

namespace {

// Precomputed structure shared across objective evaluations of one
// training run. Document order inside each list is ascending, which fixes
// the floating-point summation order.
class GeProblem {
 public:
  GeProblem(const Corpus& corpus, const ConstraintSet& constraints,
            const GeTrainConfig& config)
      : corpus_(corpus), constraints_(constraints), config_(config) {
    std::set<std::int32_t> active;
    for (const auto& entry : constraints.entries()) {
      const auto id = corpus.token_id(entry.word);
      // ConstraintSet validated coverage already.
      const auto& docs = corpus.docs_containing(*id);
      constraint_docs_.push_back(&docs);
      active.insert(docs.begin(), docs.end());
    }
    active_docs_.assign(active.begin(), active.end());
    dense_index_.assign(static_cast<std::size_t>(corpus.num_docs()), -1);
    for (std::size_t i = 0; i < active_docs_.size(); ++i) {
      dense_index_[static_cast<std::size_t>(active_docs_[i])] =
          static_cast<std::int32_t>(i);
    }
  }

  std::size_t parameter_count() const { return corpus_.vocab_size() + 1; }

  // Returns the objective; fills `gradient` (resized to V+1) when non-null.
  double evaluate(std::span<const double> params,
                  std::vector<double>* gradient) const {
    const std::size_t vocab = corpus_.vocab_size();
    const double bias = params[vocab];

    std::vector<double> posterior(active_docs_.size());
    for (std::size_t i = 0; i < active_docs_.size(); ++i) {
      const auto& doc = corpus_.doc(active_docs_[i]);
      double s = bias;
      for (const auto& [t, _] : doc.bag) {
        s += params[static_cast<std::size_t>(t)];
      }
      posterior[i] = sigmoid(s);
    }

    double objective = 0.0;
    std::vector<double> doc_coef;
    if (gradient) doc_coef.assign(active_docs_.size(), 0.0);

    for (std::size_t k = 0; k < constraints_.size(); ++k) {
      const auto& docs = *constraint_docs_[k];
      double mean = 0.0;
      for (std::int32_t d : docs) {
        mean += posterior[static_cast<std::size_t>(
            dense_index_[static_cast<std::size_t>(d)])];
      }
      mean /= static_cast<double>(docs.size());

      const double ref_a = constraints_.entries()[k].reference[0];
      double dterm = 0.0;
      if (config_.distance == GeDistance::kSquaredL2) {
        // ||ref - empirical||^2 over the 2-vector = 2 (ref_a - mean)^2
        const double diff = ref_a - mean;
        objective += 2.0 * diff * diff;
        dterm = -4.0 * diff;
      } else {
        const double ref_b = constraints_.entries()[k].reference[1];
        objective += ref_a * std::log(ref_a / mean) +
                     ref_b * std::log(ref_b / (1.0 - mean));
        dterm = -ref_a / mean + ref_b / (1.0 - mean);
      }
      if (gradient) {
        const double coef = dterm / static_cast<double>(docs.size());
        for (std::int32_t d : docs) {
          doc_coef[static_cast<std::size_t>(
              dense_index_[static_cast<std::size_t>(d)])] += coef;
        }
      }
    }

    if (gradient) {
      gradient->assign(vocab + 1, 0.0);
      for (std::size_t i = 0; i < active_docs_.size(); ++i) {
        const double m = doc_coef[i] * posterior[i] * (1.0 - posterior[i]);
        if (m == 0.0) continue;
        const auto& doc = corpus_.doc(active_docs_[i]);
        for (const auto& [t, _] : doc.bag) {
          (*gradient)[static_cast<std::size_t>(t)] += m;
        }
        (*gradient)[vocab] += m;
      }
    }

    if (config_.regularization > 0.0) {
      double sq = 0.0;
      for (std::size_t t = 0; t < vocab; ++t) {
        sq += params[t] * params[t];
      }
      objective += config_.regularization * sq;
      if (gradient) {
        for (std::size_t t = 0; t < vocab; ++t) {
          (*gradient)[t] += 2.0 * config_.regularization * params[t];
        }
      }
    }
    return objective;
  }

 private:
  const Corpus& corpus_;
  const ConstraintSet& constraints_;
  GeTrainConfig config_;
  std::vector<const std::vector<std::int32_t>*> constraint_docs_;
  std::vector<std::int32_t> active_docs_;
  std::vector<std::int32_t> dense_index_;
};

}  // namespace

double ge_objective(std::span<const double> parameters,
                    const ConstraintSet& constraints, const Corpus& corpus,
                    const GeTrainConfig& config) {
  if (parameters.size() != corpus.vocab_size() + 1) {
    throw DomainError("parameter vector size must equal vocabulary size + 1");
  }
  return GeProblem(corpus, constraints, config).evaluate(parameters, nullptr);
}

double ge_objective_gradient(std::span<const double> parameters,
                             const ConstraintSet& constraints,
                             const Corpus& corpus, const GeTrainConfig& config,
                             std::vector<double>& gradient) {
  if (parameters.size() != corpus.vocab_size() + 1) {
    throw DomainError("parameter vector size must equal vocabulary size + 1");
  }
  return GeProblem(corpus, constraints, config).evaluate(parameters, &gradient);
}

GeModel train_ge(const Corpus& corpus, const ConstraintSet& constraints,
                 const GeTrainConfig& config) {
  const GeProblem problem(corpus, constraints, config);
  auto [params, diag] = detail::minimize_batch(
      problem.parameter_count(),
      [&problem](std::span<const double> p, std::vector<double>* g) {
        return problem.evaluate(p, g);
      },
      config.tolerance, config.max_iterations);

  const double bias = params.back();
  params.pop_back();
  return GeModel(std::move(params), bias, corpus.vocabulary_fingerprint(),
                 config, std::move(diag));
}

Prediction GeModel::predict_doc(const Document& doc) const {
  double s = bias_;
  for (const auto& [t, _] : doc.bag) {
    s += weights_[static_cast<std::size_t>(t)];
  }
  const double p_a = sigmoid(s);
  return Prediction{{p_a, 1.0 - p_a}, p_a >= 0.5 ? 0 : 1};
}

namespace {

void check_fingerprint(const GeModel& model, const Corpus& corpus) {
  if (model.feature_fingerprint() != corpus.vocabulary_fingerprint()) {
    throw DomainError(
        "model feature space does not match the corpus vocabulary "
        "(fingerprint mismatch)");
  }
  if (model.weights().size() != corpus.vocab_size()) {
    throw DomainError("model weight count does not match vocabulary size");
  }
}

}  // namespace

std::vector<Prediction> predict(const GeModel& model, const Corpus& corpus) {
  check_fingerprint(model, corpus);
  std::vector<Prediction> out;
  out.reserve(static_cast<std::size_t>(corpus.num_docs()));
  for (const auto& doc : corpus.docs()) {
    out.push_back(model.predict_doc(doc));
  }
  return out;
}

std::vector<Prediction> predict(const GeModel& model, const Corpus& corpus,
                                std::span<const std::int32_t> doc_ids) {
  check_fingerprint(model, corpus);
  std::vector<Prediction> out;
  out.reserve(doc_ids.size());
  for (std::int32_t id : doc_ids) {
    out.push_back(model.predict_doc(corpus.doc(id)));
  }
  return out;
}

std::array<double, 2> empirical_distribution(const GeModel& model,
                                             const Corpus& corpus,
                                             std::string_view word) {
  check_fingerprint(model, corpus);
  const auto id = corpus.token_id(word);
  if (!id) {
    throw DomainError("unknown token '" + std::string(word) + "'");
  }
  const auto& docs = corpus.docs_containing(*id);
  if (docs.empty()) {
    throw DomainError("token '" + std::string(word) +
                      "' occurs in no document");
  }
  double mean = 0.0;
  for (std::int32_t d : docs) {
    mean += model.predict_doc(corpus.doc(d)).posterior[0];
  }
  mean /= static_cast<double>(docs.size());
  return {mean, 1.0 - mean};
}

std::string ge_model_to_json(const GeModel& model, const Corpus& corpus) {
  json weights = json::object();
  for (std::size_t t = 0; t < model.weights().size(); ++t) {
    if (model.weights()[t] != 0.0) {
      weights[corpus.token(static_cast<std::int32_t>(t))] = model.weights()[t];
    }
  }
  json out = {
      {"schema_version", kSchemaVersion},
      {"weights", std::move(weights)},
      {"bias", model.bias()},
      {"feature_fingerprint", model.feature_fingerprint()},
      {"config",
       {{"regularization", model.config().regularization},
        {"tolerance", model.config().tolerance},
        {"max_iterations", model.config().max_iterations},
        {"distance", ge_distance_name(model.config().distance)}}},
      {"diagnostics",
       {{"final_objective", model.diagnostics().final_objective},
        {"iterations", model.diagnostics().iterations},
        {"converged", model.diagnostics().converged}}},
  };
  return out.dump(2) + "\n";
}

GeModel ge_model_from_json(const std::string& text, const Corpus& corpus) {
  json obj;
  try {
    obj = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid model JSON: ") + e.what());
  }
  try {
    const auto fingerprint = obj.at("feature_fingerprint").get<std::uint64_t>();
    if (fingerprint != corpus.vocabulary_fingerprint()) {
      throw DomainError(
          "model feature space does not match the corpus vocabulary "
          "(fingerprint mismatch)");
    }
    std::vector<double> weights(corpus.vocab_size(), 0.0);
    for (const auto& [token, value] : obj.at("weights").items()) {
      const auto id = corpus.token_id(token);
      if (!id) {
        throw DomainError("model weight token '" + token +
                          "' not in corpus vocabulary");
      }
      weights[static_cast<std::size_t>(*id)] = value.get<double>();
    }
    GeTrainConfig config;
    const auto& cfg = obj.at("config");
    config.regularization = cfg.at("regularization").get<double>();
    config.tolerance = cfg.at("tolerance").get<double>();
    config.max_iterations = cfg.at("max_iterations").get<int>();
    config.distance = ge_distance_from_name(cfg.at("distance").get<std::string>());
    TrainingDiagnostics diag;
    const auto& d = obj.at("diagnostics");
    diag.final_objective = d.at("final_objective").get<double>();
    diag.iterations = d.at("iterations").get<int>();
    diag.converged = d.at("converged").get<bool>();
    return GeModel(std::move(weights), obj.at("bias").get<double>(),
                   fingerprint, config, std::move(diag));
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid model JSON: ") + e.what());
  }
}

std::string constraints_to_json(const ConstraintSet& constraints) {
  json entries = json::array();
  for (const auto& entry : constraints.entries()) {
    entries.push_back({{"word", entry.word},
                       {"reference", {entry.reference[0], entry.reference[1]}}});
  }
  json out = {{"schema_version", kSchemaVersion},
              {"entries", std::move(entries)}};
  return out.dump(2) + "\n";
}

ConstraintSet constraints_from_json(const std::string& text,
                                    const Corpus& corpus) {
  json obj;
  try {
    obj = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid constraints JSON: ") + e.what());
  }
  std::vector<Constraint> entries;
  try {
    for (const auto& entry : obj.at("entries")) {
      Constraint c;
      c.word = entry.at("word").get<std::string>();
      const auto& ref = entry.at("reference");
      if (!ref.is_array() || ref.size() != 2) {
        throw ParseError("constraint reference must be a pair");
      }
      c.reference = {ref[0].get<double>(), ref[1].get<double>()};
      entries.push_back(std::move(c));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid constraints JSON: ") + e.what());
  }
  return ConstraintSet(std::move(entries), corpus);
}

}  // namespace optimseed
