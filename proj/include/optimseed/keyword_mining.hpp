#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "optimseed/corpus.hpp"

namespace optimseed {

struct CandidateKeyword {
  std::string token;
  double pmi_freq = 0.0;
  int doc_frequency = 0;
  int joint_doc_count = 0;
  std::optional<PosTag> pos_tag;
};

enum class PosFilter { kNoun, kAdjective, kNone };

const char* pos_filter_name(PosFilter filter);
PosFilter pos_filter_from_name(std::string_view name);

struct MiningConfig {
  int k = 16;
  PosFilter pos_filter = PosFilter::kNone;
  int min_doc_frequency = 10;
  std::set<std::string> stopwords;
  std::set<std::string> exclude;  // seeds already in use
};

// Per-filter removal counts, reported when expansion comes up empty and
// attached to mining artifacts.
struct MiningDiagnostics {
  int considered = 0;
  int removed_seed = 0;
  int removed_stopword = 0;
  int removed_excluded = 0;
  int removed_below_min_df = 0;
  int removed_pos_filter = 0;
  int removed_no_cooccurrence = 0;
  int removed_nonpositive_pmi = 0;
  int survivors = 0;
  std::vector<std::string> warnings;
};

// ln(df(candidate)) * ln(p(candidate,seed) / (p(candidate) p(seed))), all
// probabilities document-level. Zero joint count is an error; callers
// filter such candidates before scoring.
double pmi_freq_score(const Corpus& corpus, std::string_view candidate,
                      std::string_view seed);

// Ranked expansion of one seed: up to k candidates by descending pmi_freq,
// ties by higher doc frequency then token order. Excludes the seed itself,
// stopwords, the exclude set, rare tokens, POS-filter failures and
// non-positive scores.
std::vector<CandidateKeyword> mine_candidates(const Corpus& corpus,
                                              std::string_view seed,
                                              const MiningConfig& config,
                                              MiningDiagnostics* diagnostics = nullptr);

}  // namespace optimseed
