#include "optimseed/config.hpp"

#include <fstream>

#include "json.hpp"
#include "optimseed/error.hpp"

namespace optimseed {

using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

bool parse_bool(const std::string& value, const std::string& key) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ParseError("config key '" + key + "': expected a boolean, got '" +
                   value + "'");
}

int parse_int(const std::string& value, const std::string& key) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ParseError("config key '" + key + "': expected an integer, got '" +
                     value + "'");
  }
}

std::uint64_t parse_u64(const std::string& value, const std::string& key) {
  try {
    std::size_t used = 0;
    const auto v = std::stoull(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ParseError("config key '" + key +
                     "': expected an unsigned integer, got '" + value + "'");
  }
}

double parse_double(const std::string& value, const std::string& key) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ParseError("config key '" + key + "': expected a number, got '" +
                     value + "'");
  }
}

}  // namespace

void apply_config_line(RunConfig& config, const std::string& section,
                       const std::string& key, const std::string& value) {
  const std::string qualified = section + "." + key;
  if (section == "corpus") {
    if (key == "format") {
      config.corpus_format = value;
    } else if (key == "plain_labels") {
      config.plain_labels = parse_bool(value, qualified);
    } else if (key == "stopwords") {
      config.stopwords = value;
    } else if (key == "pos_lexicon") {
      config.pos_lexicon = value;
    } else {
      throw ParseError("unknown config key '" + qualified + "'");
    }
  } else if (section == "mining") {
    if (key == "k") {
      config.k = parse_int(value, qualified);
    } else if (key == "pos_filter") {
      config.pos_filter = value;
    } else if (key == "min_doc_frequency") {
      config.min_doc_frequency = parse_int(value, qualified);
    } else {
      throw ParseError("unknown config key '" + qualified + "'");
    }
  } else if (section == "ge") {
    if (key == "reference") {
      config.reference = parse_double(value, qualified);
    } else if (key == "regularization") {
      config.ge_regularization = parse_double(value, qualified);
    } else if (key == "tolerance") {
      config.ge_tolerance = parse_double(value, qualified);
    } else if (key == "max_iterations") {
      config.ge_max_iterations = parse_int(value, qualified);
    } else if (key == "distance") {
      config.ge_distance = value;
    } else {
      throw ParseError("unknown config key '" + qualified + "'");
    }
  } else if (section == "bee") {
    if (key == "burn_in") {
      config.bee_burn_in = parse_int(value, qualified);
    } else if (key == "samples") {
      config.bee_samples = parse_int(value, qualified);
    } else if (key == "error_alpha") {
      config.bee_error_alpha = parse_double(value, qualified);
    } else if (key == "error_beta") {
      config.bee_error_beta = parse_double(value, qualified);
    } else if (key == "prevalence_alpha") {
      config.bee_prevalence_alpha = parse_double(value, qualified);
    } else if (key == "prevalence_beta") {
      config.bee_prevalence_beta = parse_double(value, qualified);
    } else if (key == "chains") {
      config.bee_chains = parse_int(value, qualified);
    } else if (key == "random_init") {
      config.bee_random_init = parse_bool(value, qualified);
    } else {
      throw ParseError("unknown config key '" + qualified + "'");
    }
  } else if (section == "selection") {
    if (key == "top_n") {
      config.top_n = parse_int(value, qualified);
    } else if (key == "accuracy_threshold") {
      config.accuracy_threshold = parse_double(value, qualified);
    } else {
      throw ParseError("unknown config key '" + qualified + "'");
    }
  } else if (section == "pipeline") {
    if (key == "estimate_sample") {
      config.estimate_sample = parse_int(value, qualified);
    } else if (key == "parallel_interim") {
      config.parallel_interim = parse_bool(value, qualified);
    } else {
      throw ParseError("unknown config key '" + qualified + "'");
    }
  } else if (section == "baseline") {
    if (key == "regularization") {
      config.baseline_regularization = parse_double(value, qualified);
    } else if (key == "max_iterations") {
      config.baseline_max_iterations = parse_int(value, qualified);
    } else if (key == "tolerance") {
      config.baseline_tolerance = parse_double(value, qualified);
    } else if (key == "train_fraction") {
      config.train_fraction = parse_double(value, qualified);
    } else {
      throw ParseError("unknown config key '" + qualified + "'");
    }
  } else if (section == "run") {
    if (key == "seed") {
      config.seed = parse_u64(value, qualified);
    } else {
      throw ParseError("unknown config key '" + qualified + "'");
    }
  } else {
    throw ParseError("unknown config section '" + section + "'");
  }
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open config file '" + path + "'");
  }
  RunConfig config;
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#' || stripped[0] == ';') continue;
    if (stripped.front() == '[') {
      if (stripped.back() != ']') {
        throw ParseError(path + " line " + std::to_string(line_no) +
                         ": malformed section header");
      }
      section = trim(stripped.substr(1, stripped.size() - 2));
      continue;
    }
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ParseError(path + " line " + std::to_string(line_no) +
                       ": expected key = value");
    }
    if (section.empty()) {
      throw ParseError(path + " line " + std::to_string(line_no) +
                       ": key outside any [section]");
    }
    apply_config_line(config, section, trim(stripped.substr(0, eq)),
                      trim(stripped.substr(eq + 1)));
  }
  return config;
}

IngestOptions RunConfig::ingest_options() const {
  IngestOptions options;
  if (corpus_format == "jsonl") {
    options.format = CorpusFormat::kJsonl;
  } else if (corpus_format == "plain") {
    options.format = CorpusFormat::kPlain;
  } else {
    throw DomainError("unknown corpus format '" + corpus_format +
                      "' (expected jsonl or plain)");
  }
  options.plain_has_labels = plain_labels;
  options.pos_lexicon_path = pos_lexicon;
  return options;
}

MiningConfig RunConfig::mining_config() const {
  MiningConfig config;
  config.k = k;
  config.pos_filter = pos_filter_from_name(pos_filter);
  config.min_doc_frequency = min_doc_frequency;
  if (stopwords == "builtin") {
    config.stopwords = default_stopwords();
  } else if (stopwords == "none") {
    config.stopwords.clear();
  } else {
    config.stopwords = load_stopword_file(stopwords);
  }
  return config;
}

GeTrainConfig RunConfig::ge_config() const {
  GeTrainConfig config;
  config.regularization = ge_regularization;
  config.tolerance = ge_tolerance;
  config.max_iterations = ge_max_iterations;
  config.distance = ge_distance_from_name(ge_distance);
  return config;
}

BeeConfig RunConfig::bee_config() const {
  BeeConfig config;
  config.burn_in = bee_burn_in;
  config.samples = bee_samples;
  config.error_alpha = bee_error_alpha;
  config.error_beta = bee_error_beta;
  config.prevalence_alpha = bee_prevalence_alpha;
  config.prevalence_beta = bee_prevalence_beta;
  config.chains = bee_chains;
  config.random_init = bee_random_init;
  config.rng_seed = seed;
  return config;
}

SelectionRule RunConfig::selection_rule() const {
  return SelectionRule{top_n, accuracy_threshold};
}

PipelineConfig RunConfig::pipeline_config() const {
  PipelineConfig config;
  config.mining = mining_config();
  config.reference = reference;
  config.ge = ge_config();
  config.bee = bee_config();
  config.rule = selection_rule();
  config.estimate_sample = estimate_sample;
  config.seed = seed;
  config.parallel_interim = parallel_interim;
  return config;
}

BaselineConfig RunConfig::baseline_config() const {
  BaselineConfig config;
  config.regularization = baseline_regularization;
  config.max_iterations = baseline_max_iterations;
  config.tolerance = baseline_tolerance;
  config.train_fraction = train_fraction;
  return config;
}

std::string RunConfig::to_json_object() const {
  json out = {
      {"corpus",
       {{"format", corpus_format},
        {"plain_labels", plain_labels},
        {"stopwords", stopwords},
        {"pos_lexicon", pos_lexicon}}},
      {"mining",
       {{"k", k},
        {"pos_filter", pos_filter},
        {"min_doc_frequency", min_doc_frequency}}},
      {"ge",
       {{"reference", reference},
        {"regularization", ge_regularization},
        {"tolerance", ge_tolerance},
        {"max_iterations", ge_max_iterations},
        {"distance", ge_distance}}},
      {"bee",
       {{"burn_in", bee_burn_in},
        {"samples", bee_samples},
        {"error_alpha", bee_error_alpha},
        {"error_beta", bee_error_beta},
        {"prevalence_alpha", bee_prevalence_alpha},
        {"prevalence_beta", bee_prevalence_beta},
        {"chains", bee_chains},
        {"random_init", bee_random_init}}},
      {"selection",
       {{"top_n", top_n}, {"accuracy_threshold", accuracy_threshold}}},
      {"pipeline",
       {{"estimate_sample", estimate_sample},
        {"parallel_interim", parallel_interim}}},
      {"baseline",
       {{"regularization", baseline_regularization},
        {"max_iterations", baseline_max_iterations},
        {"tolerance", baseline_tolerance},
        {"train_fraction", train_fraction}}},
      {"run", {{"seed", seed}}},
  };
  return out.dump();
}

}  // namespace optimseed
