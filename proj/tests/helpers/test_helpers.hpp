#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "optimseed/corpus.hpp"
#include "optimseed/error_estimation.hpp"
#include "optimseed/keyword_mining.hpp"
#include "optimseed/rng.hpp"

// Test-only helpers: synthetic corpus generators with known ground truth,
// and independent oracle implementations that deliberately share no code
// with the library paths they check.

namespace optimseed::testing {

// ---- synthetic corpora -------------------------------------------------

struct LabeledDocs {
  std::vector<std::vector<std::string>> tokens;
  std::vector<std::string> labels;
};

std::pair<Corpus, EvalLabels> build_corpus(const LabeledDocs& docs);

// Small random corpus for property tests: <= max_docs documents over
// tokens w00..w<max_vocab-1>, uniform lengths. Every doc nonempty.
LabeledDocs random_docs(rng::Sampler& sampler, int max_docs, int max_vocab,
                        int max_len = 8);

// Two planted topic families; A documents draw from the A family, B from
// the B family, a couple of mixed documents provide weak cross-talk.
struct TwoFamilyCorpus {
  LabeledDocs docs;
  std::vector<std::string> family_a;  // family_a[0] is the A seed
  std::vector<std::string> family_b;
  std::vector<std::string> noise;
};
TwoFamilyCorpus planted_two_family(std::uint64_t seed);

// Separable corpus for constraint-satisfaction checks: family words occur
// only inside their own category, shared noise on both sides.
struct SeparableCorpus {
  LabeledDocs docs;
  std::string constraint_a;  // in A documents only
  std::string constraint_b;
  std::string label_a = "a";
  std::string label_b = "b";
};
SeparableCorpus separable_corpus(std::uint64_t seed, int docs_per_category = 100);

// Pipeline test bed: per category one initial seed and 12 discriminative
// words; 4 ambiguous words occur equally in both categories but co-occur
// with the seeds, so mining surfaces them.
struct PlantedPipelineCorpus {
  LabeledDocs docs;
  std::string seed_a;
  std::string seed_b;
  std::vector<std::string> good_a;
  std::vector<std::string> good_b;
  std::vector<std::string> ambiguous;
  std::string label_a = "cata";
  std::string label_b = "catb";
};
PlantedPipelineCorpus planted_pipeline_corpus(std::uint64_t seed);

// Prediction matrix from independent label flips with known rates.
struct SimulatedPredictions {
  PredictionMatrix matrix;
  std::vector<double> true_error_rates;
  std::vector<std::uint8_t> true_labels;
};
SimulatedPredictions simulate_predictions(std::uint64_t seed, int n, int j,
                                          double min_error, double max_error);

// ---- independent oracles ----------------------------------------------

// Brute-force candidate mining straight from Eq.-style definitions:
// document scans only, no inverted index, own sort.
std::vector<CandidateKeyword> brute_force_mine(const LabeledDocs& docs,
                                               const Corpus& corpus,
                                               const std::string& seed,
                                               const MiningConfig& config);

// Exhaustive posterior over all 2^N label configurations with the
// Beta-Bernoulli integrals done analytically.
struct ExactPosterior {
  std::vector<double> error_means;       // per classifier
  std::vector<double> label_posteriors;  // P(label = 1) per instance
};
ExactPosterior enumerate_posterior(const PredictionMatrix& matrix,
                                   const BeeConfig& config);

// Direct objective evaluation from token strings; used against
// ge_objective on random instances.
double naive_ge_objective(const LabeledDocs& docs,
                          const std::map<std::string, double>& weights,
                          double bias,
                          const std::vector<std::pair<std::string, double>>&
                              constraints,  // word -> reference p(A)
                          double regularization);

}  // namespace optimseed::testing
