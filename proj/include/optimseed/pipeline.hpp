#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "optimseed/corpus.hpp"
#include "optimseed/error_estimation.hpp"
#include "optimseed/ge_classifier.hpp"
#include "optimseed/keyword_mining.hpp"

namespace optimseed {

// Union rule: keep a candidate when its estimated accuracy is among the
// top_n or exceeds accuracy_threshold.
struct SelectionRule {
  int top_n = 3;
  double accuracy_threshold = 0.9;
};

struct InterimRun {
  std::string candidate;
  std::string fixed_opposite_seed;
  double pmi_freq = 0.0;
  int doc_frequency = 0;
  int joint_doc_count = 0;
  double estimated_accuracy = 0.0;
  double estimated_error_sd = 0.0;
  int training_iterations = 0;
  bool training_converged = false;
  double final_objective = 0.0;
  std::string model_ref;
};

struct ExclusionRecord {
  std::string token;
  std::string reason;
};

struct RefinementResult {
  std::string category;            // category under refinement
  std::string initial_seed;
  std::string fixed_opposite_seed;
  // Ranked expansion; the initial seed competes too and is appended when
  // not already present (flagged below).
  std::vector<CandidateKeyword> candidates;
  bool initial_seed_appended = false;
  MiningDiagnostics mining_diagnostics;
  std::vector<InterimRun> runs;
  std::vector<ExclusionRecord> exclusions;
  std::vector<std::string> selected;  // ordered by estimated accuracy
};

struct PipelineConfig {
  MiningConfig mining;   // exclude is extended with both initial seeds
  double reference = 0.9;
  GeTrainConfig ge;
  BeeConfig bee;         // rng_seed is derived from `seed` per refinement
  SelectionRule rule;
  int estimate_sample = 0;  // 0 = predict on the full corpus
  std::uint64_t seed = 0;
  bool parallel_interim = true;
};

struct SeedSelectionReport {
  std::string task_type = "binary";
  CategoryPair pair;
  std::optional<RefinementResult> refinement_a;
  std::optional<RefinementResult> refinement_b;
  std::vector<std::string> selected_a;  // after cross-category pruning
  std::vector<std::string> selected_b;
  std::vector<ExclusionRecord> final_exclusions;
  std::optional<GeModel> final_model;
  bool complete = false;
  std::string error;
};

// One refinement iteration: mine candidates for the target category, train
// an interim classifier per candidate with the opposite seed fixed, run
// one joint error estimation over all interim predictions, select winners.
// target: 0 refines category A (B's seed fixed), 1 the mirror image.
RefinementResult refine_category(const Corpus& corpus, const CategoryPair& pair,
                                 int target, const PipelineConfig& config);

// Both refinements plus the final classifier. Refinement errors yield a
// partial report flagged incomplete rather than a throw.
SeedSelectionReport run_optimseed(const Corpus& corpus,
                                  const CategoryPair& pair,
                                  const PipelineConfig& config);

// Document ids the interim classifiers predict on (full corpus, or the
// seeded uniform subsample when estimate_sample is set).
std::vector<std::int32_t> estimation_doc_ids(const Corpus& corpus,
                                             const PipelineConfig& config);

// Full single-file JSON report (config snapshot, refinements, final model).
// `extra_config` entries are merged into the config echo by the CLI.
std::string report_to_json(const SeedSelectionReport& report,
                           const Corpus& corpus, const PipelineConfig& config,
                           const std::vector<std::pair<std::string, std::string>>&
                               extra_config = {});

// Human-readable three-stage summary (initial / expanded / final).
std::string report_summary_text(const SeedSelectionReport& report);

}  // namespace optimseed
