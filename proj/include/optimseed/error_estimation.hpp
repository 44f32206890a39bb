#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace optimseed {

// N instances x J classifiers, binary predictions (0 = category A,
// 1 = category B). The sole input to error estimation.
class PredictionMatrix {
 public:
  PredictionMatrix(int num_instances, std::vector<std::string> classifier_ids);

  int num_instances() const { return n_; }
  int num_classifiers() const { return j_; }
  const std::vector<std::string>& classifier_ids() const { return ids_; }

  std::uint8_t at(int instance, int classifier) const {
    return cells_[static_cast<std::size_t>(instance) * j_ + classifier];
  }
  void set(int instance, int classifier, std::uint8_t value);

  // Per-instance majority over classifiers; ties go to category A (0).
  std::vector<std::uint8_t> majority_labels() const;

  // CSV: header "instance,clf_<id>,...", one row per instance, cells 0/1.
  void save_csv(std::ostream& out) const;
  static PredictionMatrix load_csv(std::istream& in,
                                   const std::string& source_name);

 private:
  int n_ = 0;
  int j_ = 0;
  std::vector<std::string> ids_;
  std::vector<std::uint8_t> cells_;
};

struct BeeConfig {
  int burn_in = 500;
  int samples = 2000;
  double error_alpha = 1.0;       // Beta prior on error rates; (1, 3)
  double error_beta = 3.0;        // encodes the better-than-chance assumption
  double prevalence_alpha = 1.0;  // Beta prior on P(label = 1)
  double prevalence_beta = 1.0;
  std::uint64_t rng_seed = 0;
  int chains = 1;
  bool random_init = false;  // default is majority-vote initialization
};

struct ClassifierErrorStats {
  double error_mean = 0.0;
  double error_sd = 0.0;
};

struct ErrorEstimate {
  std::vector<std::string> classifier_ids;
  std::vector<ClassifierErrorStats> per_classifier;
  std::vector<double> label_posteriors;  // P(label = 1) per instance
  double chain_max_spread = 0.0;         // max across-chain mean gap

  double estimated_accuracy(std::size_t classifier) const {
    return 1.0 - per_classifier[classifier].error_mean;
  }
};

// Three-block Gibbs sweep over prevalence, per-classifier error rates and
// latent labels. Deterministic given (matrix, config). Multiple chains run
// on derived seeds and are averaged.
ErrorEstimate gibbs_estimate(const PredictionMatrix& matrix,
                             const BeeConfig& config);

// Majority-vote pseudo-labels as truth; error = disagreement rate.
ErrorEstimate majority_vote_estimate(const PredictionMatrix& matrix);

// JSON artifact with per-classifier stats and config echo.
std::string error_estimate_to_json(const ErrorEstimate& estimate,
                                   const BeeConfig* config,
                                   const std::string& method);

}  // namespace optimseed
