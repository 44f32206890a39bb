#include "optimseed/keyword_mining.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "optimseed/error.hpp"

namespace optimseed {

const char* pos_filter_name(PosFilter filter) {
  switch (filter) {
    case PosFilter::kNoun:
      return "noun";
    case PosFilter::kAdjective:
      return "adjective";
    default:
      return "none";
  }
}

PosFilter pos_filter_from_name(std::string_view name) {
  if (name == "noun") return PosFilter::kNoun;
  if (name == "adjective") return PosFilter::kAdjective;
  if (name == "none") return PosFilter::kNone;
  throw DomainError("unknown pos filter '" + std::string(name) +
                    "' (expected noun, adjective or none)");
}

namespace {

double pmi_freq_from_counts(int df_candidate, int df_seed, int joint, int n) {
  const double p_w = static_cast<double>(df_candidate) / n;
  const double p_s = static_cast<double>(df_seed) / n;
  const double p_ws = static_cast<double>(joint) / n;
  return std::log(static_cast<double>(df_candidate)) *
         std::log(p_ws / (p_w * p_s));
}

}  // namespace

double pmi_freq_score(const Corpus& corpus, std::string_view candidate,
                      std::string_view seed) {
  const auto cand_id = corpus.token_id(candidate);
  if (!cand_id) {
    throw DomainError("unknown token '" + std::string(candidate) + "'");
  }
  const auto seed_id = corpus.token_id(seed);
  if (!seed_id) {
    throw DomainError("unknown token '" + std::string(seed) + "'");
  }
  const int joint = corpus.joint_doc_count(*cand_id, *seed_id);
  if (joint == 0) {
    throw DomainError("no co-occurrence between '" + std::string(candidate) +
                      "' and '" + std::string(seed) + "'");
  }
  return pmi_freq_from_counts(corpus.doc_frequency(*cand_id),
                              corpus.doc_frequency(*seed_id), joint,
                              corpus.num_docs());
}

std::vector<CandidateKeyword> mine_candidates(const Corpus& corpus,
                                              std::string_view seed,
                                              const MiningConfig& config,
                                              MiningDiagnostics* diagnostics) {
  if (config.k < 1) {
    throw DomainError("mining config requires k >= 1");
  }
  const auto seed_id = corpus.token_id(seed);
  if (!seed_id) {
    throw DomainError("unknown seed token '" + std::string(seed) + "'");
  }

  MiningDiagnostics local;
  MiningDiagnostics& diag = diagnostics ? *diagnostics : local;
  diag = MiningDiagnostics{};

  const bool want_pos = config.pos_filter != PosFilter::kNone;
  const bool pos_available = corpus.has_pos_info();
  if (want_pos && !pos_available) {
    diag.warnings.push_back(
        "pos filter requested but the corpus has no pos tags and no lexicon; "
        "pos filtering disabled");
  }
  const PosTag wanted_tag = config.pos_filter == PosFilter::kAdjective
                                ? PosTag::kAdjective
                                : PosTag::kNoun;

  // Joint document counts against the seed in one pass over the seed's docs.
  std::vector<std::int32_t> joint(corpus.vocab_size(), 0);
  for (std::int32_t d : corpus.docs_containing(*seed_id)) {
    for (const auto& [t, _] : corpus.doc(d).bag) {
      joint[static_cast<std::size_t>(t)] += 1;
    }
  }

  const int df_seed = corpus.doc_frequency(*seed_id);
  const int n = corpus.num_docs();

  std::vector<CandidateKeyword> candidates;
  for (std::int32_t t = 0; t < static_cast<std::int32_t>(corpus.vocab_size());
       ++t) {
    ++diag.considered;
    const std::string& token = corpus.token(t);
    if (t == *seed_id) {
      ++diag.removed_seed;
      continue;
    }
    if (config.stopwords.count(token)) {
      ++diag.removed_stopword;
      continue;
    }
    if (config.exclude.count(token)) {
      ++diag.removed_excluded;
      continue;
    }
    const int df = corpus.doc_frequency(t);
    if (df < config.min_doc_frequency) {
      ++diag.removed_below_min_df;
      continue;
    }
    if (want_pos && pos_available && corpus.pos_tag(t) != wanted_tag) {
      ++diag.removed_pos_filter;
      continue;
    }
    const int j = joint[static_cast<std::size_t>(t)];
    if (j == 0) {
      ++diag.removed_no_cooccurrence;
      continue;
    }
    const double score = pmi_freq_from_counts(df, df_seed, j, n);
    if (!(score > 0.0)) {
      ++diag.removed_nonpositive_pmi;
      continue;
    }
    candidates.push_back(CandidateKeyword{token, score, df, j, corpus.pos_tag(t)});
  }
  diag.survivors = static_cast<int>(candidates.size());

  if (candidates.empty()) {
    std::ostringstream msg;
    msg << "expansion produced no candidates for seed '" << seed
        << "' (considered " << diag.considered << ", removed: seed "
        << diag.removed_seed << ", stopword " << diag.removed_stopword
        << ", excluded " << diag.removed_excluded << ", below min_df "
        << diag.removed_below_min_df << ", pos filter "
        << diag.removed_pos_filter << ", no co-occurrence "
        << diag.removed_no_cooccurrence << ", non-positive pmi "
        << diag.removed_nonpositive_pmi << ")";
    throw DomainError(msg.str());
  }

  std::sort(candidates.begin(), candidates.end(),
            [](const CandidateKeyword& a, const CandidateKeyword& b) {
              if (a.pmi_freq != b.pmi_freq) return a.pmi_freq > b.pmi_freq;
              if (a.doc_frequency != b.doc_frequency)
                return a.doc_frequency > b.doc_frequency;
              return a.token < b.token;
            });
  if (candidates.size() > static_cast<std::size_t>(config.k)) {
    candidates.resize(static_cast<std::size_t>(config.k));
  }
  return candidates;
}

}  // namespace optimseed
