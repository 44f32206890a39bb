#include "test_helpers.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "optimseed/error.hpp"

namespace optimseed::testing {

std::pair<Corpus, EvalLabels> build_corpus(const LabeledDocs& docs) {
  CorpusBuilder builder;
  for (std::size_t i = 0; i < docs.tokens.size(); ++i) {
    std::optional<std::string> label;
    if (i < docs.labels.size() && !docs.labels[i].empty()) {
      label = docs.labels[i];
    }
    builder.add_document(docs.tokens[i], nullptr, std::move(label));
  }
  return builder.finish();
}

LabeledDocs random_docs(rng::Sampler& sampler, int max_docs, int max_vocab,
                        int max_len) {
  const int n = 2 + static_cast<int>(sampler.uniform_int(
                        static_cast<std::uint64_t>(max_docs - 1)));
  const int vocab = 3 + static_cast<int>(sampler.uniform_int(
                            static_cast<std::uint64_t>(max_vocab - 2)));
  LabeledDocs docs;
  for (int d = 0; d < n; ++d) {
    const int len = 1 + static_cast<int>(sampler.uniform_int(
                            static_cast<std::uint64_t>(max_len)));
    std::vector<std::string> tokens;
    for (int t = 0; t < len; ++t) {
      const auto w = sampler.uniform_int(static_cast<std::uint64_t>(vocab));
      tokens.push_back("w" + std::string(w < 10 ? "0" : "") + std::to_string(w));
    }
    docs.tokens.push_back(std::move(tokens));
  }
  return docs;
}

TwoFamilyCorpus planted_two_family(std::uint64_t seed) {
  rng::Sampler sampler(seed);
  TwoFamilyCorpus out;
  out.family_a = {"aseed", "alpha1", "alpha2", "alpha3", "alpha4", "alpha5"};
  out.family_b = {"bseed", "beta1", "beta2", "beta3", "beta4", "beta5"};
  for (int i = 1; i <= 8; ++i) out.noise.push_back("noise" + std::to_string(i));

  auto draw = [&](const std::vector<std::string>& pool) {
    return pool[sampler.uniform_int(pool.size())];
  };
  auto make_doc = [&](const std::vector<std::string>& family, int family_draws) {
    std::vector<std::string> tokens;
    for (int t = 0; t < family_draws; ++t) tokens.push_back(draw(family));
    tokens.push_back(draw(out.noise));
    tokens.push_back(draw(out.noise));
    return tokens;
  };
  for (int d = 0; d < 30; ++d) {
    out.docs.tokens.push_back(make_doc(out.family_a, 4));
    out.docs.labels.push_back("a");
  }
  for (int d = 0; d < 30; ++d) {
    out.docs.tokens.push_back(make_doc(out.family_b, 4));
    out.docs.labels.push_back("b");
  }
  for (int d = 0; d < 2; ++d) {
    auto tokens = make_doc(out.family_a, 2);
    auto extra = make_doc(out.family_b, 2);
    tokens.insert(tokens.end(), extra.begin(), extra.end());
    out.docs.tokens.push_back(std::move(tokens));
    out.docs.labels.push_back("a");
  }
  return out;
}

SeparableCorpus separable_corpus(std::uint64_t seed, int docs_per_category) {
  rng::Sampler sampler(seed);
  SeparableCorpus out;
  std::vector<std::string> family_a, family_b, noise;
  for (int i = 0; i < 10; ++i) {
    family_a.push_back("fa" + std::to_string(i));
    family_b.push_back("fb" + std::to_string(i));
    noise.push_back("nn" + std::to_string(i));
  }
  out.constraint_a = family_a[0];
  out.constraint_b = family_b[0];

  auto make_doc = [&](const std::vector<std::string>& family) {
    std::vector<std::string> tokens;
    for (int t = 0; t < 5; ++t) {
      tokens.push_back(family[sampler.uniform_int(family.size())]);
    }
    for (int t = 0; t < 2; ++t) {
      tokens.push_back(noise[sampler.uniform_int(noise.size())]);
    }
    return tokens;
  };
  for (int d = 0; d < docs_per_category; ++d) {
    out.docs.tokens.push_back(make_doc(family_a));
    out.docs.labels.push_back(out.label_a);
    out.docs.tokens.push_back(make_doc(family_b));
    out.docs.labels.push_back(out.label_b);
  }
  return out;
}

PlantedPipelineCorpus planted_pipeline_corpus(std::uint64_t seed) {
  rng::Sampler sampler(seed);
  PlantedPipelineCorpus out;
  out.seed_a = "seeda";
  out.seed_b = "seedb";
  for (int i = 1; i <= 12; ++i) {
    out.good_a.push_back("ga" + std::string(i < 10 ? "0" : "") + std::to_string(i));
    out.good_b.push_back("gb" + std::string(i < 10 ? "0" : "") + std::to_string(i));
  }
  for (int i = 1; i <= 4; ++i) out.ambiguous.push_back("amb" + std::to_string(i));
  std::vector<std::string> noise;
  for (int i = 1; i <= 40; ++i) {
    noise.push_back("nz" + std::string(i < 10 ? "0" : "") + std::to_string(i));
  }

  auto coin = [&](double p) { return sampler.uniform() < p; };
  auto make_doc = [&](bool is_a) {
    std::vector<std::string> tokens;
    const bool has_seed = coin(0.3);
    if (has_seed) tokens.push_back(is_a ? out.seed_a : out.seed_b);
    const auto& own = is_a ? out.good_a : out.good_b;
    const auto& cross = is_a ? out.good_b : out.good_a;
    for (const auto& w : own) {
      if (coin(0.2)) tokens.push_back(w);
    }
    for (const auto& w : cross) {
      if (coin(0.02)) tokens.push_back(w);
    }
    for (const auto& w : out.ambiguous) {
      if (coin(has_seed ? 0.55 : 0.2)) tokens.push_back(w);
    }
    for (int t = 0; t < 4; ++t) {
      tokens.push_back(noise[sampler.uniform_int(noise.size())]);
    }
    return tokens;
  };
  for (int d = 0; d < 120; ++d) {
    out.docs.tokens.push_back(make_doc(true));
    out.docs.labels.push_back(out.label_a);
    out.docs.tokens.push_back(make_doc(false));
    out.docs.labels.push_back(out.label_b);
  }
  return out;
}

SimulatedPredictions simulate_predictions(std::uint64_t seed, int n, int j,
                                          double min_error, double max_error) {
  rng::Sampler sampler(seed);
  std::vector<std::string> ids;
  for (int c = 0; c < j; ++c) ids.push_back("sim" + std::to_string(c));
  SimulatedPredictions out{PredictionMatrix(n, std::move(ids)), {}, {}};
  for (int c = 0; c < j; ++c) {
    out.true_error_rates.push_back(min_error +
                                   (max_error - min_error) * sampler.uniform());
  }
  out.true_labels.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const std::uint8_t label = sampler.uniform() < 0.5 ? 0 : 1;
    out.true_labels[static_cast<std::size_t>(i)] = label;
    for (int c = 0; c < j; ++c) {
      const bool flip =
          sampler.uniform() < out.true_error_rates[static_cast<std::size_t>(c)];
      out.matrix.set(i, c, flip ? (1 - label) : label);
    }
  }
  return out;
}

std::vector<CandidateKeyword> brute_force_mine(const LabeledDocs& docs,
                                               const Corpus& corpus,
                                               const std::string& seed,
                                               const MiningConfig& config) {
  const int n = static_cast<int>(docs.tokens.size());

  // Document frequencies and joint counts by direct scans over the raw
  // token lists (the corpus index is never consulted for counts).
  std::set<std::string> vocab;
  for (const auto& doc : docs.tokens) {
    vocab.insert(doc.begin(), doc.end());
  }
  auto doc_has = [](const std::vector<std::string>& doc, const std::string& w) {
    return std::find(doc.begin(), doc.end(), w) != doc.end();
  };
  auto df_of = [&](const std::string& w) {
    int df = 0;
    for (const auto& doc : docs.tokens) df += doc_has(doc, w);
    return df;
  };
  const int df_seed = df_of(seed);

  std::vector<CandidateKeyword> survivors;
  for (const auto& word : vocab) {
    if (word == seed) continue;
    if (config.stopwords.count(word)) continue;
    if (config.exclude.count(word)) continue;
    const int df = df_of(word);
    if (df < config.min_doc_frequency) continue;
    if (config.pos_filter != PosFilter::kNone && corpus.has_pos_info()) {
      const auto id = corpus.token_id(word);
      const auto wanted = config.pos_filter == PosFilter::kAdjective
                              ? PosTag::kAdjective
                              : PosTag::kNoun;
      if (corpus.pos_tag(*id) != wanted) continue;
    }
    int joint = 0;
    for (const auto& doc : docs.tokens) {
      joint += doc_has(doc, word) && doc_has(doc, seed);
    }
    if (joint == 0) continue;
    const double p_w = static_cast<double>(df) / n;
    const double p_s = static_cast<double>(df_seed) / n;
    const double p_ws = static_cast<double>(joint) / n;
    const double score =
        std::log(static_cast<double>(df)) * std::log(p_ws / (p_w * p_s));
    if (!(score > 0.0)) continue;
    std::optional<PosTag> tag;
    if (corpus.has_pos_info()) {
      tag = corpus.pos_tag(*corpus.token_id(word));
    }
    survivors.push_back(CandidateKeyword{word, score, df, joint, tag});
  }
  std::sort(survivors.begin(), survivors.end(),
            [](const CandidateKeyword& a, const CandidateKeyword& b) {
              if (a.pmi_freq != b.pmi_freq) return a.pmi_freq > b.pmi_freq;
              if (a.doc_frequency != b.doc_frequency)
                return a.doc_frequency > b.doc_frequency;
              return a.token < b.token;
            });
  if (survivors.size() > static_cast<std::size_t>(config.k)) {
    survivors.resize(static_cast<std::size_t>(config.k));
  }
  return survivors;
}

ExactPosterior enumerate_posterior(const PredictionMatrix& matrix,
                                   const BeeConfig& config) {
  const int n = matrix.num_instances();
  const int j = matrix.num_classifiers();
  if (n > 16) {
    throw DomainError("enumeration oracle limited to N <= 16");
  }
  auto lbeta = [](double a, double b) {
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
  };

  const std::uint32_t configs = 1u << n;
  std::vector<double> log_weight(configs);
  std::vector<std::vector<int>> disagreements(configs, std::vector<int>(j));
  double max_log = -1e300;
  for (std::uint32_t mask = 0; mask < configs; ++mask) {
    const int ones = __builtin_popcount(mask);
    double lw = lbeta(config.prevalence_alpha + ones,
                      config.prevalence_beta + n - ones) -
                lbeta(config.prevalence_alpha, config.prevalence_beta);
    for (int c = 0; c < j; ++c) {
      int d = 0;
      for (int i = 0; i < n; ++i) {
        const int label = (mask >> i) & 1u;
        d += matrix.at(i, c) != label;
      }
      disagreements[mask][static_cast<std::size_t>(c)] = d;
      lw += lbeta(config.error_alpha + d, config.error_beta + n - d) -
            lbeta(config.error_alpha, config.error_beta);
    }
    log_weight[mask] = lw;
    max_log = std::max(max_log, lw);
  }
  double z = 0.0;
  for (auto& lw : log_weight) {
    lw = std::exp(lw - max_log);
    z += lw;
  }

  ExactPosterior out;
  out.error_means.assign(static_cast<std::size_t>(j), 0.0);
  out.label_posteriors.assign(static_cast<std::size_t>(n), 0.0);
  const double denom = config.error_alpha + config.error_beta + n;
  for (std::uint32_t mask = 0; mask < configs; ++mask) {
    const double w = log_weight[mask] / z;
    for (int c = 0; c < j; ++c) {
      out.error_means[static_cast<std::size_t>(c)] +=
          w * (config.error_alpha +
               disagreements[mask][static_cast<std::size_t>(c)]) /
          denom;
    }
    for (int i = 0; i < n; ++i) {
      if ((mask >> i) & 1u) {
        out.label_posteriors[static_cast<std::size_t>(i)] += w;
      }
    }
  }
  return out;
}

double naive_ge_objective(
    const LabeledDocs& docs, const std::map<std::string, double>& weights,
    double bias,
    const std::vector<std::pair<std::string, double>>& constraints,
    double regularization) {
  auto posterior_a = [&](const std::vector<std::string>& doc) {
    std::set<std::string> unique(doc.begin(), doc.end());
    double s = bias;
    for (const auto& w : unique) {
      auto it = weights.find(w);
      if (it != weights.end()) s += it->second;
    }
    return 1.0 / (1.0 + std::exp(-s));
  };
  double objective = 0.0;
  for (const auto& [word, ref_a] : constraints) {
    double mean = 0.0;
    int count = 0;
    for (const auto& doc : docs.tokens) {
      if (std::find(doc.begin(), doc.end(), word) != doc.end()) {
        mean += posterior_a(doc);
        ++count;
      }
    }
    mean /= count;
    const double da = ref_a - mean;
    const double db = (1.0 - ref_a) - (1.0 - mean);
    objective += da * da + db * db;
  }
  for (const auto& [_, w] : weights) {
    objective += regularization * w * w;
  }
  return objective;
}

}  // namespace optimseed::testing
