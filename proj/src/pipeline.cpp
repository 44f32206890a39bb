#include "optimseed/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <set>
#include <sstream>

#include "json.hpp"
#include "optimseed/error.hpp"
#include "optimseed/rng.hpp"
#include "optimseed/version.hpp"

namespace optimseed {

using nlohmann::json;

namespace {

constexpr std::uint64_t kSampleStream = 0x73616d706cULL;  // "sampl"

CandidateKeyword describe_self_candidate(const Corpus& corpus,
                                         const std::string& seed) {
  const auto id = corpus.token_id(seed);
  const int df = corpus.doc_frequency(*id);
  const double p = static_cast<double>(df) / corpus.num_docs();
  // pmi-freq of a word with itself: p(w,w) = p(w).
  const double score = std::log(static_cast<double>(df)) * std::log(1.0 / p);
  return CandidateKeyword{seed, score, df, df, corpus.pos_tag(*id)};
}

std::uint64_t bee_seed_for_target(const PipelineConfig& config, int target) {
  return rng::derive_seed(config.seed, static_cast<std::uint64_t>(target) + 1);
}

}  // namespace

std::vector<std::int32_t> estimation_doc_ids(const Corpus& corpus,
                                             const PipelineConfig& config) {
  const int n = corpus.num_docs();
  std::vector<std::int32_t> ids(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) ids[static_cast<std::size_t>(i)] = i;
  if (config.estimate_sample <= 0 || config.estimate_sample >= n) {
    return ids;
  }
  // Partial Fisher-Yates with a derived seed, then sorted for a stable
  // row order.
  rng::Sampler sampler(rng::derive_seed(config.seed, kSampleStream));
  const auto k = static_cast<std::size_t>(config.estimate_sample);
  for (std::size_t i = 0; i < k; ++i) {
    const auto pick =
        i + static_cast<std::size_t>(sampler.uniform_int(ids.size() - i));
    std::swap(ids[i], ids[pick]);
  }
  ids.resize(k);
  std::sort(ids.begin(), ids.end());
  return ids;
}

RefinementResult refine_category(const Corpus& corpus, const CategoryPair& pair,
                                 int target, const PipelineConfig& config) {
  validate_category_pair(pair, corpus);
  if (target != 0 && target != 1) {
    throw DomainError("refinement target must be 0 (A) or 1 (B)");
  }

  RefinementResult result;
  result.category = target == 0 ? pair.category_a : pair.category_b;
  result.initial_seed = target == 0 ? pair.initial_seed_a : pair.initial_seed_b;
  result.fixed_opposite_seed =
      target == 0 ? pair.initial_seed_b : pair.initial_seed_a;

  MiningConfig mining = config.mining;
  mining.exclude.insert(pair.initial_seed_a);
  mining.exclude.insert(pair.initial_seed_b);
  result.candidates = mine_candidates(corpus, result.initial_seed, mining,
                                      &result.mining_diagnostics);

  // The initial seed competes as a candidate as well.
  const bool already_mined =
      std::any_of(result.candidates.begin(), result.candidates.end(),
                  [&](const CandidateKeyword& c) {
                    return c.token == result.initial_seed;
                  });
  if (!already_mined) {
    result.candidates.push_back(
        describe_self_candidate(corpus, result.initial_seed));
    result.initial_seed_appended = true;
  }

  // One interim classifier per surviving candidate.
  std::vector<const CandidateKeyword*> runnable;
  for (const auto& candidate : result.candidates) {
    if (candidate.token == result.fixed_opposite_seed) {
      result.exclusions.push_back(
          {candidate.token, "equals the fixed opposite seed"});
      continue;
    }
    runnable.push_back(&candidate);
  }
  if (runnable.size() < 3) {
    throw DomainError(
        "too few candidates for error estimation (need >= 3 interim "
        "classifiers, got " +
        std::to_string(runnable.size()) + ")");
  }

  const auto estimation_ids = estimation_doc_ids(corpus, config);

  struct TrainedColumn {
    GeModel model;
    std::vector<Prediction> predictions;
  };
  auto train_one = [&](const CandidateKeyword& candidate) -> TrainedColumn {
    std::vector<std::string> seeds_target = {candidate.token};
    std::vector<std::string> seeds_other = {result.fixed_opposite_seed};
    ConstraintSet constraints =
        target == 0 ? build_constraints(seeds_target, seeds_other,
                                        config.reference, corpus)
                    : build_constraints(seeds_other, seeds_target,
                                        config.reference, corpus);
    GeModel model = train_ge(corpus, constraints, config.ge);
    auto predictions = predict(model, corpus, estimation_ids);
    return {std::move(model), std::move(predictions)};
  };

  std::vector<TrainedColumn> columns(runnable.size());
  if (config.parallel_interim) {
    std::vector<std::future<TrainedColumn>> futures;
    futures.reserve(runnable.size());
    for (const auto* candidate : runnable) {
      futures.push_back(std::async(std::launch::async, train_one, *candidate));
    }
    for (std::size_t i = 0; i < futures.size(); ++i) {
      columns[i] = futures[i].get();
    }
  } else {
    for (std::size_t i = 0; i < runnable.size(); ++i) {
      columns[i] = train_one(*runnable[i]);
    }
  }

  std::vector<std::string> classifier_ids;
  classifier_ids.reserve(runnable.size());
  for (const auto* candidate : runnable) {
    classifier_ids.push_back(candidate->token);
  }
  PredictionMatrix matrix(static_cast<int>(estimation_ids.size()),
                          std::move(classifier_ids));
  for (std::size_t c = 0; c < columns.size(); ++c) {
    for (std::size_t i = 0; i < columns[c].predictions.size(); ++i) {
      matrix.set(static_cast<int>(i), static_cast<int>(c),
                 static_cast<std::uint8_t>(columns[c].predictions[i].label));
    }
  }

  BeeConfig bee = config.bee;
  bee.rng_seed = bee_seed_for_target(config, target);
  const ErrorEstimate estimate = gibbs_estimate(matrix, bee);

  result.runs.reserve(runnable.size());
  for (std::size_t c = 0; c < runnable.size(); ++c) {
    const auto& candidate = *runnable[c];
    InterimRun run;
    run.candidate = candidate.token;
    run.fixed_opposite_seed = result.fixed_opposite_seed;
    run.pmi_freq = candidate.pmi_freq;
    run.doc_frequency = candidate.doc_frequency;
    run.joint_doc_count = candidate.joint_doc_count;
    run.estimated_accuracy = estimate.estimated_accuracy(c);
    run.estimated_error_sd = estimate.per_classifier[c].error_sd;
    run.training_iterations = columns[c].model.diagnostics().iterations;
    run.training_converged = columns[c].model.diagnostics().converged;
    run.final_objective = columns[c].model.diagnostics().final_objective;
    run.model_ref = "interim:" + result.category + ":" + candidate.token;
    result.runs.push_back(std::move(run));
  }

  // Selection: top_n by estimated accuracy union everything above the
  // threshold; boundary ties by higher pmi_freq, then token order.
  std::vector<std::size_t> order(result.runs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& ra = result.runs[a];
    const auto& rb = result.runs[b];
    if (ra.estimated_accuracy != rb.estimated_accuracy)
      return ra.estimated_accuracy > rb.estimated_accuracy;
    if (ra.pmi_freq != rb.pmi_freq) return ra.pmi_freq > rb.pmi_freq;
    return ra.candidate < rb.candidate;
  });
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    const auto& run = result.runs[order[rank]];
    if (rank < static_cast<std::size_t>(config.rule.top_n) ||
        run.estimated_accuracy > config.rule.accuracy_threshold) {
      result.selected.push_back(run.candidate);
    }
  }
  return result;
}

SeedSelectionReport run_optimseed(const Corpus& corpus,
                                  const CategoryPair& pair,
                                  const PipelineConfig& config) {
  SeedSelectionReport report;
  report.pair = pair;

  try {
    report.refinement_a = refine_category(corpus, pair, 0, config);
    report.refinement_b = refine_category(corpus, pair, 1, config);

    report.selected_a = report.refinement_a->selected;
    report.selected_b = report.refinement_b->selected;

    // A token selected for both categories is ambiguous; drop it from both.
    std::set<std::string> overlap;
    {
      std::set<std::string> in_a(report.selected_a.begin(),
                                 report.selected_a.end());
      for (const auto& token : report.selected_b) {
        if (in_a.count(token)) overlap.insert(token);
      }
    }
    for (const auto& token : overlap) {
      report.final_exclusions.push_back(
          {token, "selected for both categories"});
    }
    auto prune = [&overlap](std::vector<std::string>& seeds) {
      std::erase_if(seeds,
                    [&](const std::string& t) { return overlap.count(t) > 0; });
    };
    prune(report.selected_a);
    prune(report.selected_b);
    if (report.selected_a.empty() || report.selected_b.empty()) {
      throw DomainError(
          "cross-category pruning left an empty seed set; cannot train the "
          "final classifier");
    }

    ConstraintSet final_constraints = build_constraints(
        report.selected_a, report.selected_b, config.reference, corpus);
    report.final_model = train_ge(corpus, final_constraints, config.ge);
    report.complete = true;
  } catch (const Error& e) {
    report.complete = false;
    report.error = e.what();
  }
  return report;
}

namespace {

json candidate_to_json(const CandidateKeyword& c) {
  json out = {{"token", c.token},
              {"pmi_freq", c.pmi_freq},
              {"doc_frequency", c.doc_frequency},
              {"joint_doc_count", c.joint_doc_count}};
  out["pos_tag"] = c.pos_tag ? json(pos_tag_name(*c.pos_tag)) : json(nullptr);
  return out;
}

json diagnostics_to_json(const MiningDiagnostics& d) {
  return {{"considered", d.considered},
          {"removed_seed", d.removed_seed},
          {"removed_stopword", d.removed_stopword},
          {"removed_excluded", d.removed_excluded},
          {"removed_below_min_df", d.removed_below_min_df},
          {"removed_pos_filter", d.removed_pos_filter},
          {"removed_no_cooccurrence", d.removed_no_cooccurrence},
          {"removed_nonpositive_pmi", d.removed_nonpositive_pmi},
          {"survivors", d.survivors},
          {"warnings", d.warnings}};
}

json refinement_to_json(const RefinementResult& r) {
  json candidates = json::array();
  for (const auto& c : r.candidates) candidates.push_back(candidate_to_json(c));
  json runs = json::array();
  for (const auto& run : r.runs) {
    runs.push_back({{"candidate", run.candidate},
                    {"fixed_opposite_seed", run.fixed_opposite_seed},
                    {"pmi_freq", run.pmi_freq},
                    {"doc_frequency", run.doc_frequency},
                    {"joint_doc_count", run.joint_doc_count},
                    {"estimated_accuracy", run.estimated_accuracy},
                    {"estimated_error_sd", run.estimated_error_sd},
                    {"training",
                     {{"iterations", run.training_iterations},
                      {"converged", run.training_converged},
                      {"final_objective", run.final_objective}}},
                    {"model_ref", run.model_ref}});
  }
  json exclusions = json::array();
  for (const auto& e : r.exclusions) {
    exclusions.push_back({{"token", e.token}, {"reason", e.reason}});
  }
  return {{"category", r.category},
          {"initial_seed", r.initial_seed},
          {"fixed_opposite_seed", r.fixed_opposite_seed},
          {"candidates", std::move(candidates)},
          {"initial_seed_appended", r.initial_seed_appended},
          {"mining_diagnostics", diagnostics_to_json(r.mining_diagnostics)},
          {"interim_runs", std::move(runs)},
          {"exclusions", std::move(exclusions)},
          {"selected", r.selected}};
}

json pipeline_config_to_json(const PipelineConfig& config) {
  return {
      {"mining",
       {{"k", config.mining.k},
        {"pos_filter", pos_filter_name(config.mining.pos_filter)},
        {"min_doc_frequency", config.mining.min_doc_frequency},
        {"stopword_count", config.mining.stopwords.size()},
        {"exclude", config.mining.exclude}}},
      {"reference", config.reference},
      {"ge",
       {{"regularization", config.ge.regularization},
        {"tolerance", config.ge.tolerance},
        {"max_iterations", config.ge.max_iterations},
        {"distance", ge_distance_name(config.ge.distance)}}},
      {"bee",
       {{"burn_in", config.bee.burn_in},
        {"samples", config.bee.samples},
        {"error_alpha", config.bee.error_alpha},
        {"error_beta", config.bee.error_beta},
        {"prevalence_alpha", config.bee.prevalence_alpha},
        {"prevalence_beta", config.bee.prevalence_beta},
        {"chains", config.bee.chains},
        {"random_init", config.bee.random_init}}},
      {"selection",
       {{"top_n", config.rule.top_n},
        {"accuracy_threshold", config.rule.accuracy_threshold}}},
      {"estimate_sample", config.estimate_sample},
      {"parallel_interim", config.parallel_interim},
      {"rng",
       {{"seed", config.seed},
        {"bee_seed_a", bee_seed_for_target(config, 0)},
        {"bee_seed_b", bee_seed_for_target(config, 1)},
        {"sample_seed", rng::derive_seed(config.seed, kSampleStream)}}},
  };
}

}  // namespace

std::string report_to_json(
    const SeedSelectionReport& report, const Corpus& corpus,
    const PipelineConfig& config,
    const std::vector<std::pair<std::string, std::string>>& extra_config) {
  json config_echo = pipeline_config_to_json(config);
  for (const auto& [key, value] : extra_config) {
    config_echo[key] = value;
  }
  json out = {
      {"schema_version", kSchemaVersion},
      {"toolkit_version", kToolkitVersion},
      {"task_type", report.task_type},
      {"categories",
       {{"a",
         {{"name", report.pair.category_a},
          {"initial_seed", report.pair.initial_seed_a}}},
        {"b",
         {{"name", report.pair.category_b},
          {"initial_seed", report.pair.initial_seed_b}}}}},
      {"config", std::move(config_echo)},
      {"selected_seeds", {{"a", report.selected_a}, {"b", report.selected_b}}},
      {"complete", report.complete},
      {"error", report.error},
  };
  out["refinement_a"] = report.refinement_a
                            ? refinement_to_json(*report.refinement_a)
                            : json(nullptr);
  out["refinement_b"] = report.refinement_b
                            ? refinement_to_json(*report.refinement_b)
                            : json(nullptr);
  json exclusions = json::array();
  for (const auto& e : report.final_exclusions) {
    exclusions.push_back({{"token", e.token}, {"reason", e.reason}});
  }
  out["final_exclusions"] = std::move(exclusions);
  if (report.final_model) {
    out["final_model"] =
        json::parse(ge_model_to_json(*report.final_model, corpus));
    out["final_model_ref"] = "final";
  } else {
    out["final_model"] = nullptr;
    out["final_model_ref"] = nullptr;
  }
  return out.dump(2) + "\n";
}

std::string report_summary_text(const SeedSelectionReport& report) {
  std::ostringstream out;
  auto write_side = [&](const std::optional<RefinementResult>& refinement,
                        const std::string& name,
                        const std::vector<std::string>& selected) {
    out << "Category " << name << "\n";
    if (!refinement) {
      out << "  (refinement did not run)\n";
      return;
    }
    out << "  initial : " << refinement->initial_seed << "\n";
    out << "  expanded(" << refinement->candidates.size() << "):";
    for (const auto& c : refinement->candidates) out << ' ' << c.token;
    out << "\n";
    out << "  final(" << selected.size() << "):";
    for (const auto& token : selected) out << ' ' << token;
    out << "\n";
  };
  write_side(report.refinement_a, report.pair.category_a, report.selected_a);
  write_side(report.refinement_b, report.pair.category_b, report.selected_b);
  if (!report.complete) {
    out << "INCOMPLETE: " << report.error << "\n";
  }
  return out.str();
}

}  // namespace optimseed
