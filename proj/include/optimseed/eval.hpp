#pragma once

#include <array>
#include <string>
#include <vector>

#include "optimseed/corpus.hpp"
#include "optimseed/ge_classifier.hpp"

namespace optimseed {

struct EvalResult {
  double accuracy = 0.0;
  // confusion[gold][predicted], categories ordered (A, B)
  std::array<std::array<int, 2>, 2> confusion = {{{0, 0}, {0, 0}}};
  int n_evaluated = 0;
  int n_unlabeled = 0;  // documents skipped for missing gold labels
  std::string model_id;
  std::string seed_set_id;
};

// Compares hard predictions against gold labels mapped onto the pair's
// category names. Unlabeled documents are skipped and counted; an
// unmappable label value is an error naming it.
EvalResult evaluate(const std::vector<Prediction>& predictions,
                    const EvalLabels& labels, const std::string& category_a,
                    const std::string& category_b);

std::string eval_result_to_json(const EvalResult& result);

struct BaselineConfig {
  double regularization = 0.5;  // on the summed log-loss
  double tolerance = 1e-5;
  int max_iterations = 500;
  double train_fraction = 0.8;  // used only without an explicit test corpus
};

// Supervised logistic regression on tf-idf features (tf * ln(N/df)).
class TfidfLogisticModel {
 public:
  TfidfLogisticModel() = default;
  TfidfLogisticModel(std::vector<double> weights, double bias,
                     std::vector<double> idf, std::uint64_t fingerprint,
                     TrainingDiagnostics diagnostics)
      : weights_(std::move(weights)),
        bias_(bias),
        idf_(std::move(idf)),
        fingerprint_(fingerprint),
        diagnostics_(std::move(diagnostics)) {}

  Prediction predict_doc(const Document& doc) const;
  std::uint64_t feature_fingerprint() const { return fingerprint_; }
  const TrainingDiagnostics& diagnostics() const { return diagnostics_; }
  const std::vector<double>& weights() const { return weights_; }
  double bias() const { return bias_; }

 private:
  std::vector<double> weights_;
  double bias_ = 0.0;
  std::vector<double> idf_;  // ln(N/df) per token id
  std::uint64_t fingerprint_ = 0;
  TrainingDiagnostics diagnostics_;
};

struct BaselineResult {
  TfidfLogisticModel model;
  EvalResult heldout;       // on the test split / corpus
  double train_accuracy = 0.0;
  int n_train = 0;
  int n_test = 0;
};

// Deterministic hash-based 80/20 split on document id, applied when no
// explicit test corpus is given.
bool in_train_split(int doc_id, double train_fraction);

// Trains on labeled documents of `corpus` (train split when test_corpus is
// null) and evaluates on the held-out side.
BaselineResult train_supervised_baseline(const Corpus& corpus,
                                         const EvalLabels& labels,
                                         const std::string& category_a,
                                         const std::string& category_b,
                                         const BaselineConfig& config = {},
                                         const Corpus* test_corpus = nullptr,
                                         const EvalLabels* test_labels = nullptr);

// Loss and analytic gradient of the regularized supervised objective; used
// by training and exposed for finite-difference checks. `doc_ids` selects
// the training documents, `targets` holds their 0/1 gold codes.
double supervised_loss_gradient(std::span<const double> parameters,
                                const Corpus& corpus,
                                std::span<const std::int32_t> doc_ids,
                                std::span<const std::uint8_t> targets,
                                std::span<const double> idf,
                                double regularization,
                                std::vector<double>* gradient);

}  // namespace optimseed
