#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "optimseed/corpus.hpp"

namespace optimseed {

// One labeled word with its reference category distribution over {A, B}.
struct Constraint {
  std::string word;
  std::array<double, 2> reference;  // [p(A), p(B)], sums to 1
};

class ConstraintSet {
 public:
  ConstraintSet() = default;
  // Validates uniqueness, reference normalization and corpus coverage.
  ConstraintSet(std::vector<Constraint> entries, const Corpus& corpus);

  const std::vector<Constraint>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

 private:
  std::vector<Constraint> entries_;
};

// seeds_a get (reference, 1-reference), seeds_b the mirror image.
// Requires 0.5 < reference < 1 and disjoint, in-vocabulary seed lists.
ConstraintSet build_constraints(const std::vector<std::string>& seeds_a,
                                const std::vector<std::string>& seeds_b,
                                double reference, const Corpus& corpus);

enum class GeDistance { kSquaredL2, kKl };

const char* ge_distance_name(GeDistance d);
GeDistance ge_distance_from_name(std::string_view name);

struct GeTrainConfig {
  double regularization = 1e-4;  // Gaussian penalty on feature weights
  double tolerance = 1e-5;       // gradient norm stopping criterion
  int max_iterations = 500;
  GeDistance distance = GeDistance::kSquaredL2;
};

struct TrainingDiagnostics {
  double final_objective = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> objective_trace;  // objective at each accepted iterate
};

struct Prediction {
  std::array<double, 2> posterior;  // [p(A), p(B)]
  int label = 0;                    // 0 = A, 1 = B; exact ties go to A
};

// Binary logistic model over bag-of-words presence features plus a bias.
class GeModel {
 public:
  GeModel() = default;
  GeModel(std::vector<double> weights, double bias, std::uint64_t fingerprint,
          GeTrainConfig config, TrainingDiagnostics diagnostics)
      : weights_(std::move(weights)),
        bias_(bias),
        fingerprint_(fingerprint),
        config_(config),
        diagnostics_(std::move(diagnostics)) {}

  const std::vector<double>& weights() const { return weights_; }
  double bias() const { return bias_; }
  std::uint64_t feature_fingerprint() const { return fingerprint_; }
  const GeTrainConfig& config() const { return config_; }
  const TrainingDiagnostics& diagnostics() const { return diagnostics_; }

  Prediction predict_doc(const Document& doc) const;

 private:
  std::vector<double> weights_;  // one per vocabulary id
  double bias_ = 0.0;
  std::uint64_t fingerprint_ = 0;
  GeTrainConfig config_;
  TrainingDiagnostics diagnostics_;
};

// Objective in minimized form: sum over constraints of
// dist(reference || mean posterior on docs containing the word) plus
// lambda * ||weights||^2 (bias unpenalized). `parameters` holds the
// vocabulary weights followed by the bias.
double ge_objective(std::span<const double> parameters,
                    const ConstraintSet& constraints, const Corpus& corpus,
                    const GeTrainConfig& config);

// Objective and analytic gradient in one pass; gradient has V+1 entries.
double ge_objective_gradient(std::span<const double> parameters,
                             const ConstraintSet& constraints,
                             const Corpus& corpus, const GeTrainConfig& config,
                             std::vector<double>& gradient);

// Batch gradient descent with backtracking line search from zero weights.
// Deterministic given the config.
GeModel train_ge(const Corpus& corpus, const ConstraintSet& constraints,
                 const GeTrainConfig& config = {});

// Posterior pairs and hard labels; checks the model's vocabulary
// fingerprint against the corpus.
std::vector<Prediction> predict(const GeModel& model, const Corpus& corpus);
std::vector<Prediction> predict(const GeModel& model, const Corpus& corpus,
                                std::span<const std::int32_t> doc_ids);

// Mean model posterior over documents containing the word (the empirical
// side of each constraint term).
std::array<double, 2> empirical_distribution(const GeModel& model,
                                             const Corpus& corpus,
                                             std::string_view word);

// JSON (de)serialization; loading re-binds tokens to the given corpus and
// verifies the vocabulary fingerprint.
std::string ge_model_to_json(const GeModel& model, const Corpus& corpus);
GeModel ge_model_from_json(const std::string& text, const Corpus& corpus);

std::string constraints_to_json(const ConstraintSet& constraints);
ConstraintSet constraints_from_json(const std::string& text,
                                    const Corpus& corpus);

}  // namespace optimseed
