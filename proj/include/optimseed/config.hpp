#pragma once

#include <cstdint>
#include <string>

#include "optimseed/eval.hpp"
#include "optimseed/pipeline.hpp"

namespace optimseed {

// Flat key-value configuration mirroring the module configs. Resolution
// order: command-line flags > config file > built-in defaults. The
// resolved struct is echoed verbatim into every artifact.
struct RunConfig {
  // [corpus]
  std::string corpus_format = "jsonl";  // jsonl | plain
  bool plain_labels = false;
  std::string stopwords = "builtin";  // builtin | none | <path>
  std::string pos_lexicon;            // path, empty = no lexicon tagger

  // [mining]
  int k = 16;
  std::string pos_filter = "none";  // noun | adjective | none
  int min_doc_frequency = 10;

  // [ge]
  double reference = 0.9;
  double ge_regularization = 1e-4;
  double ge_tolerance = 1e-5;
  int ge_max_iterations = 500;
  std::string ge_distance = "l2";  // l2 | kl

  // [bee]
  int bee_burn_in = 500;
  int bee_samples = 2000;
  double bee_error_alpha = 1.0;
  double bee_error_beta = 3.0;
  double bee_prevalence_alpha = 1.0;
  double bee_prevalence_beta = 1.0;
  int bee_chains = 1;
  bool bee_random_init = false;

  // [selection]
  int top_n = 3;
  double accuracy_threshold = 0.9;

  // [pipeline]
  int estimate_sample = 0;
  bool parallel_interim = true;

  // [baseline]
  double baseline_regularization = 0.5;
  int baseline_max_iterations = 500;
  double baseline_tolerance = 1e-5;
  double train_fraction = 0.8;

  // [run]
  std::uint64_t seed = 0;

  IngestOptions ingest_options() const;
  MiningConfig mining_config() const;  // stopword list resolved
  GeTrainConfig ge_config() const;
  BeeConfig bee_config() const;
  SelectionRule selection_rule() const;
  PipelineConfig pipeline_config() const;
  BaselineConfig baseline_config() const;

  // Echoed into artifacts under "run_config".
  std::string to_json_object() const;
};

// INI-style file: [section] headers, key = value lines, '#' comments.
// Unknown sections or keys are errors naming them.
RunConfig load_config_file(const std::string& path);
void apply_config_line(RunConfig& config, const std::string& section,
                       const std::string& key, const std::string& value);

}  // namespace optimseed
