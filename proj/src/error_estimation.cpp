#include "optimseed/error_estimation.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "optimseed/error.hpp"
#include "optimseed/rng.hpp"
#include "optimseed/version.hpp"

namespace optimseed {

using nlohmann::json;

PredictionMatrix::PredictionMatrix(int num_instances,
                                   std::vector<std::string> classifier_ids)
    : n_(num_instances),
      j_(static_cast<int>(classifier_ids.size())),
      ids_(std::move(classifier_ids)) {
  if (n_ < 1) {
    throw DomainError("prediction matrix needs at least one instance");
  }
  if (j_ < 1) {
    throw DomainError("prediction matrix needs at least one classifier");
  }
  cells_.assign(static_cast<std::size_t>(n_) * j_, 0);
}

void PredictionMatrix::set(int instance, int classifier, std::uint8_t value) {
  if (value > 1) {
    throw DomainError("prediction cells must be 0 or 1, got " +
                      std::to_string(static_cast<int>(value)));
  }
  cells_[static_cast<std::size_t>(instance) * j_ + classifier] = value;
}

std::vector<std::uint8_t> PredictionMatrix::majority_labels() const {
  std::vector<std::uint8_t> labels(static_cast<std::size_t>(n_), 0);
  for (int i = 0; i < n_; ++i) {
    int ones = 0;
    for (int j = 0; j < j_; ++j) {
      ones += at(i, j);
    }
    labels[static_cast<std::size_t>(i)] =
        (2 * ones > j_) ? 1 : 0;  // ties go to category A
  }
  return labels;
}

void PredictionMatrix::save_csv(std::ostream& out) const {
  out << "instance";
  for (const auto& id : ids_) {
    out << ",clf_" << id;
  }
  out << "\n";
  for (int i = 0; i < n_; ++i) {
    out << i;
    for (int j = 0; j < j_; ++j) {
      out << ',' << static_cast<int>(at(i, j));
    }
    out << "\n";
  }
}

PredictionMatrix PredictionMatrix::load_csv(std::istream& in,
                                            const std::string& source_name) {
  std::string line;
  if (!std::getline(in, line)) {
    throw ParseError(source_name + ": empty prediction file");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();

  std::vector<std::string> header;
  std::stringstream hs(line);
  std::string cell;
  while (std::getline(hs, cell, ',')) header.push_back(cell);
  if (header.empty() || header[0] != "instance") {
    throw ParseError(source_name + ": header must start with 'instance'");
  }
  std::vector<std::string> ids;
  for (std::size_t c = 1; c < header.size(); ++c) {
    if (header[c].rfind("clf_", 0) != 0) {
      throw ParseError(source_name + ": classifier column '" + header[c] +
                       "' must be named clf_<id>");
    }
    ids.push_back(header[c].substr(4));
  }
  if (ids.empty()) {
    throw ParseError(source_name + ": no classifier columns");
  }

  std::vector<std::vector<std::uint8_t>> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ls(line);
    std::vector<std::string> cells;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() != header.size()) {
      throw ParseError(source_name + " line " + std::to_string(line_no) +
                       ": expected " + std::to_string(header.size()) +
                       " cells, got " + std::to_string(cells.size()));
    }
    std::vector<std::uint8_t> row;
    for (std::size_t c = 1; c < cells.size(); ++c) {
      if (cells[c] == "0") {
        row.push_back(0);
      } else if (cells[c] == "1") {
        row.push_back(1);
      } else {
        throw ParseError(source_name + " line " + std::to_string(line_no) +
                         ": non-binary cell '" + cells[c] + "'");
      }
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    throw ParseError(source_name + ": no prediction rows");
  }
  PredictionMatrix matrix(static_cast<int>(rows.size()), std::move(ids));
  for (int i = 0; i < matrix.num_instances(); ++i) {
    for (int j = 0; j < matrix.num_classifiers(); ++j) {
      matrix.set(i, j, rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    }
  }
  return matrix;
}

namespace {

void validate_config(const BeeConfig& config) {
  if (config.burn_in < 0) throw DomainError("burn_in must be >= 0");
  if (config.samples < 1) throw DomainError("samples must be >= 1");
  if (config.chains < 1) throw DomainError("chains must be >= 1");
  for (double p : {config.error_alpha, config.error_beta,
                   config.prevalence_alpha, config.prevalence_beta}) {
    if (!(p > 0.0)) throw DomainError("prior parameters must be > 0");
  }
}

struct ChainResult {
  std::vector<double> error_mean;      // per classifier
  std::vector<double> error_sq_sum;    // raw sum of squares over samples
  std::vector<double> error_sum;       // raw sum over samples
  std::vector<double> label_mean;      // per instance
};

ChainResult run_chain(const PredictionMatrix& matrix, const BeeConfig& config,
                      std::uint64_t seed) {
  const int n = matrix.num_instances();
  const int j = matrix.num_classifiers();
  rng::Sampler sampler(seed);

  std::vector<std::uint8_t> labels;
  if (config.random_init) {
    labels.resize(static_cast<std::size_t>(n));
    for (auto& l : labels) {
      l = sampler.uniform() < 0.5 ? 0 : 1;
    }
  } else {
    labels = matrix.majority_labels();
  }

  std::vector<double> log_err(static_cast<std::size_t>(j));
  std::vector<double> log_acc(static_cast<std::size_t>(j));
  std::vector<double> errors(static_cast<std::size_t>(j));

  ChainResult result;
  result.error_sum.assign(static_cast<std::size_t>(j), 0.0);
  result.error_sq_sum.assign(static_cast<std::size_t>(j), 0.0);
  result.label_mean.assign(static_cast<std::size_t>(n), 0.0);

  const int total_sweeps = config.burn_in + config.samples;
  for (int sweep = 0; sweep < total_sweeps; ++sweep) {
    // Block 1: prevalence of label 1 given labels.
    int ones = 0;
    for (std::uint8_t l : labels) ones += l;
    const double prevalence = sampler.beta(config.prevalence_alpha + ones,
                                           config.prevalence_beta + n - ones);

    // Block 2: per-classifier error rates given labels.
    for (int c = 0; c < j; ++c) {
      int disagreements = 0;
      for (int i = 0; i < n; ++i) {
        disagreements += (matrix.at(i, c) != labels[static_cast<std::size_t>(i)]);
      }
      const double e = sampler.beta(config.error_alpha + disagreements,
                                    config.error_beta + (n - disagreements));
      errors[static_cast<std::size_t>(c)] = e;
      log_err[static_cast<std::size_t>(c)] = std::log(e);
      log_acc[static_cast<std::size_t>(c)] = std::log(1.0 - e);
    }

    // Block 3: per-instance labels given prevalence and error rates.
    const double log_p1 = std::log(prevalence);
    const double log_p0 = std::log(1.0 - prevalence);
    for (int i = 0; i < n; ++i) {
      double l1 = log_p1;
      double l0 = log_p0;
      for (int c = 0; c < j; ++c) {
        if (matrix.at(i, c) == 1) {
          l1 += log_acc[static_cast<std::size_t>(c)];
          l0 += log_err[static_cast<std::size_t>(c)];
        } else {
          l1 += log_err[static_cast<std::size_t>(c)];
          l0 += log_acc[static_cast<std::size_t>(c)];
        }
      }
      const double p1 = 1.0 / (1.0 + std::exp(l0 - l1));
      labels[static_cast<std::size_t>(i)] = sampler.uniform() < p1 ? 1 : 0;
    }

    if (sweep >= config.burn_in) {
      for (int c = 0; c < j; ++c) {
        const double e = errors[static_cast<std::size_t>(c)];
        result.error_sum[static_cast<std::size_t>(c)] += e;
        result.error_sq_sum[static_cast<std::size_t>(c)] += e * e;
      }
      for (int i = 0; i < n; ++i) {
        result.label_mean[static_cast<std::size_t>(i)] +=
            labels[static_cast<std::size_t>(i)];
      }
    }
  }

  result.error_mean.resize(static_cast<std::size_t>(j));
  for (int c = 0; c < j; ++c) {
    result.error_mean[static_cast<std::size_t>(c)] =
        result.error_sum[static_cast<std::size_t>(c)] / config.samples;
  }
  for (auto& m : result.label_mean) m /= config.samples;
  return result;
}

}  // namespace

ErrorEstimate gibbs_estimate(const PredictionMatrix& matrix,
                             const BeeConfig& config) {
  validate_config(config);
  const int n = matrix.num_instances();
  const int j = matrix.num_classifiers();

  std::vector<ChainResult> chains;
  chains.reserve(static_cast<std::size_t>(config.chains));
  for (int c = 0; c < config.chains; ++c) {
    chains.push_back(run_chain(
        matrix, config,
        rng::derive_seed(config.rng_seed, static_cast<std::uint64_t>(c))));
  }

  ErrorEstimate estimate;
  estimate.classifier_ids = matrix.classifier_ids();
  estimate.per_classifier.resize(static_cast<std::size_t>(j));
  estimate.label_posteriors.assign(static_cast<std::size_t>(n), 0.0);

  const double total_samples =
      static_cast<double>(config.samples) * config.chains;
  for (int c = 0; c < j; ++c) {
    double sum = 0.0;
    double sq_sum = 0.0;
    double lo = 1.0;
    double hi = 0.0;
    for (const auto& chain : chains) {
      sum += chain.error_sum[static_cast<std::size_t>(c)];
      sq_sum += chain.error_sq_sum[static_cast<std::size_t>(c)];
      lo = std::min(lo, chain.error_mean[static_cast<std::size_t>(c)]);
      hi = std::max(hi, chain.error_mean[static_cast<std::size_t>(c)]);
    }
    const double mean = sum / total_samples;
    const double var = std::max(0.0, sq_sum / total_samples - mean * mean);
    estimate.per_classifier[static_cast<std::size_t>(c)] = {mean,
                                                            std::sqrt(var)};
    estimate.chain_max_spread = std::max(estimate.chain_max_spread, hi - lo);
  }
  for (int i = 0; i < n; ++i) {
    double sum = 0.0;
    for (const auto& chain : chains) {
      sum += chain.label_mean[static_cast<std::size_t>(i)];
    }
    estimate.label_posteriors[static_cast<std::size_t>(i)] =
        sum / config.chains;
  }
  return estimate;
}

ErrorEstimate majority_vote_estimate(const PredictionMatrix& matrix) {
  const int n = matrix.num_instances();
  const int j = matrix.num_classifiers();
  const auto pseudo = matrix.majority_labels();

  ErrorEstimate estimate;
  estimate.classifier_ids = matrix.classifier_ids();
  estimate.per_classifier.resize(static_cast<std::size_t>(j));
  estimate.label_posteriors.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    estimate.label_posteriors[static_cast<std::size_t>(i)] =
        pseudo[static_cast<std::size_t>(i)];
  }
  for (int c = 0; c < j; ++c) {
    int disagreements = 0;
    for (int i = 0; i < n; ++i) {
      disagreements += (matrix.at(i, c) != pseudo[static_cast<std::size_t>(i)]);
    }
    estimate.per_classifier[static_cast<std::size_t>(c)] = {
        static_cast<double>(disagreements) / n, 0.0};
  }
  return estimate;
}

std::string error_estimate_to_json(const ErrorEstimate& estimate,
                                   const BeeConfig* config,
                                   const std::string& method) {
  json classifiers = json::array();
  for (std::size_t c = 0; c < estimate.per_classifier.size(); ++c) {
    classifiers.push_back(
        {{"id", estimate.classifier_ids[c]},
         {"error_mean", estimate.per_classifier[c].error_mean},
         {"error_sd", estimate.per_classifier[c].error_sd},
         {"estimated_accuracy", estimate.estimated_accuracy(c)}});
  }
  json out = {{"schema_version", kSchemaVersion},
              {"method", method},
              {"classifiers", std::move(classifiers)},
              {"label_posteriors", estimate.label_posteriors},
              {"chain_max_spread", estimate.chain_max_spread}};
  if (config) {
    out["config"] = {{"burn_in", config->burn_in},
                     {"samples", config->samples},
                     {"error_alpha", config->error_alpha},
                     {"error_beta", config->error_beta},
                     {"prevalence_alpha", config->prevalence_alpha},
                     {"prevalence_beta", config->prevalence_beta},
                     {"rng_seed", config->rng_seed},
                     {"chains", config->chains},
                     {"random_init", config->random_init}};
  }
  return out.dump(2) + "\n";
}

}  // namespace optimseed
