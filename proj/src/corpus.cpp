#include "optimseed/corpus.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "optimseed/error.hpp"

namespace optimseed {

namespace {

using nlohmann::json;

bool is_token_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9');
}

char lower_ascii(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

std::uint64_t fnv1a(std::uint64_t h, std::string_view s) {
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

const char* pos_tag_name(PosTag tag) {
  switch (tag) {
    case PosTag::kNoun:
      return "NOUN";
    case PosTag::kAdjective:
      return "ADJ";
    default:
      return "OTHER";
  }
}

PosTag coarse_pos_tag(std::string_view raw) {
  std::string up;
  up.reserve(raw.size());
  for (char c : raw) {
    up.push_back((c >= 'a' && c <= 'z') ? static_cast<char>(c - 'a' + 'A') : c);
  }
  if (up == "NOUN" || (up.size() >= 2 && up[0] == 'N' && up[1] == 'N')) {
    return PosTag::kNoun;
  }
  if (up == "ADJ" || up == "ADJECTIVE" ||
      (up.size() >= 2 && up[0] == 'J' && up[1] == 'J')) {
    return PosTag::kAdjective;
  }
  return PosTag::kOther;
}

std::vector<std::string> tokenize(std::string_view text,
                                  const TokenizerConfig& config) {
  std::vector<std::string> out;
  std::string current;
  auto flush = [&] {
    if (current.size() >= config.min_token_length) {
      out.push_back(current);
    }
    current.clear();
  };
  for (char c : text) {
    if (is_token_char(c)) {
      current.push_back(lower_ascii(c));
    } else {
      flush();
    }
  }
  flush();
  return out;
}

bool Document::contains(std::int32_t token_id) const {
  auto it = std::lower_bound(
      bag.begin(), bag.end(), token_id,
      [](const auto& entry, std::int32_t id) { return entry.first < id; });
  return it != bag.end() && it->first == token_id;
}

int EvalLabels::num_labeled() const {
  int n = 0;
  for (const auto& l : labels_) {
    if (l.has_value()) ++n;
  }
  return n;
}

std::optional<std::int32_t> Corpus::token_id(std::string_view token) const {
  auto it = token_to_id_.find(std::string(token));
  if (it == token_to_id_.end()) return std::nullopt;
  return it->second;
}

double Corpus::doc_probability(std::string_view token) const {
  auto id = token_id(token);
  if (!id) {
    throw DomainError("unknown token '" + std::string(token) + "'");
  }
  return static_cast<double>(doc_frequency(*id)) / num_docs();
}

std::optional<PosTag> Corpus::pos_tag(std::int32_t token_id) const {
  if (!has_pos_info_) return std::nullopt;
  return pos_tags_.at(static_cast<std::size_t>(token_id));
}

int Corpus::joint_doc_count(std::int32_t a, std::int32_t b) const {
  const auto& da = docs_containing(a);
  const auto& db = docs_containing(b);
  const auto& small = da.size() <= db.size() ? da : db;
  const auto& large = da.size() <= db.size() ? db : da;
  int count = 0;
  auto it = large.begin();
  for (std::int32_t d : small) {
    it = std::lower_bound(it, large.end(), d);
    if (it == large.end()) break;
    if (*it == d) ++count;
  }
  return count;
}

std::int32_t CorpusBuilder::intern(const std::string& token) {
  auto it = token_to_id_.find(token);
  if (it != token_to_id_.end()) return it->second;
  const auto id = static_cast<std::int32_t>(tokens_.size());
  tokens_.push_back(token);
  token_to_id_.emplace(token, id);
  return id;
}

void CorpusBuilder::add_document(const std::vector<std::string>& raw_tokens,
                                 const std::vector<std::string>* tags,
                                 std::optional<std::string> label) {
  if (tags && tags->size() != raw_tokens.size()) {
    throw ParseError("pos array length does not match tokens array length");
  }
  PendingDoc doc;
  doc.label = std::move(label);
  for (std::size_t i = 0; i < raw_tokens.size(); ++i) {
    // Pre-tokenized input still goes through the normalization rules; a raw
    // token may expand to several output tokens, each inheriting its tag.
    auto pieces = tokenize(raw_tokens[i], config_);
    for (auto& piece : pieces) {
      doc.token_ids.push_back(intern(piece));
      if (tags) {
        doc.tags.push_back(coarse_pos_tag((*tags)[i]));
      }
    }
  }
  if (tags) any_doc_tags_ = true;
  pending_.push_back(std::move(doc));
}

void CorpusBuilder::add_text(std::string_view text,
                             std::optional<std::string> label) {
  PendingDoc doc;
  doc.label = std::move(label);
  for (auto& token : tokenize(text, config_)) {
    doc.token_ids.push_back(intern(token));
  }
  pending_.push_back(std::move(doc));
}

void CorpusBuilder::load_pos_lexicon(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open pos lexicon file '" + path + "'");
  }
  // Count (word, tag) pairs first; most frequent tag wins, ties resolved
  // by tag order NOUN < ADJ < OTHER.
  std::unordered_map<std::string, std::array<int, 3>> counts;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw ParseError("pos lexicon '" + path + "' line " +
                       std::to_string(line_no) + ": expected word<TAB>TAG");
    }
    std::string word = line.substr(0, tab);
    std::string tag = line.substr(tab + 1);
    if (!tag.empty() && tag.back() == '\r') tag.pop_back();
    for (auto& c : word) c = lower_ascii(c);
    counts[word][static_cast<int>(coarse_pos_tag(tag))] += 1;
  }
  for (const auto& [word, tag_counts] : counts) {
    int best = 0;
    for (int t = 1; t < 3; ++t) {
      if (tag_counts[t] > tag_counts[best]) best = t;
    }
    lexicon_[word] = static_cast<PosTag>(best);
  }
  has_lexicon_ = true;
}

std::pair<Corpus, EvalLabels> CorpusBuilder::finish() {
  if (pending_.empty()) {
    throw DomainError("empty corpus: no documents ingested");
  }
  Corpus corpus;
  corpus.tokens_ = tokens_;
  corpus.token_to_id_ = token_to_id_;
  corpus.inverted_index_.assign(tokens_.size(), {});

  std::vector<std::optional<std::string>> labels;
  labels.reserve(pending_.size());

  // Per-token tag occurrence counts from document-level tags.
  std::vector<std::array<int, 3>> tag_counts;
  if (any_doc_tags_) tag_counts.assign(tokens_.size(), {0, 0, 0});

  for (std::size_t i = 0; i < pending_.size(); ++i) {
    auto& pending = pending_[i];
    Document doc;
    doc.id = static_cast<int>(i);
    doc.token_ids = std::move(pending.token_ids);

    std::map<std::int32_t, std::int32_t> counts;
    for (std::int32_t t : doc.token_ids) counts[t] += 1;
    doc.bag.assign(counts.begin(), counts.end());
    for (const auto& [t, _] : doc.bag) {
      corpus.inverted_index_[static_cast<std::size_t>(t)].push_back(doc.id);
    }
    if (any_doc_tags_ && !pending.tags.empty()) {
      for (std::size_t k = 0; k < doc.token_ids.size(); ++k) {
        tag_counts[static_cast<std::size_t>(doc.token_ids[k])]
                  [static_cast<int>(pending.tags[k])] += 1;
      }
    }
    labels.push_back(std::move(pending.label));
    corpus.documents_.push_back(std::move(doc));
  }

  corpus.has_pos_info_ = any_doc_tags_ || has_lexicon_;
  if (corpus.has_pos_info_) {
    corpus.pos_tags_.assign(tokens_.size(), PosTag::kOther);
    for (std::size_t t = 0; t < tokens_.size(); ++t) {
      if (any_doc_tags_) {
        const auto& tc = tag_counts[t];
        if (tc[0] + tc[1] + tc[2] > 0) {
          int best = 0;
          for (int k = 1; k < 3; ++k) {
            if (tc[k] > tc[best]) best = k;
          }
          corpus.pos_tags_[t] = static_cast<PosTag>(best);
          continue;
        }
      }
      if (has_lexicon_) {
        auto it = lexicon_.find(tokens_[t]);
        corpus.pos_tags_[t] = it != lexicon_.end() ? it->second : PosTag::kOther;
      }
    }
  }

  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& token : corpus.tokens_) {
    h = fnv1a(h, token);
    h = fnv1a(h, "\x1f");
  }
  corpus.fingerprint_ = h;

  pending_.clear();
  return {std::move(corpus), EvalLabels(std::move(labels))};
}

namespace {

struct JsonlDoc {
  std::vector<std::string> tokens;
  bool pre_tokenized = false;
  std::vector<std::string> pos;
  bool has_pos = false;
  std::optional<std::string> label;
  std::optional<std::int64_t> explicit_id;
  std::string text;
  bool has_text = false;
};

JsonlDoc parse_jsonl_line(const std::string& line, int line_no,
                          const std::string& source) {
  json obj;
  try {
    obj = json::parse(line);
  } catch (const json::exception& e) {
    throw ParseError(source + " line " + std::to_string(line_no) +
                     ": invalid JSON (" + e.what() + ")");
  }
  if (!obj.is_object()) {
    throw ParseError(source + " line " + std::to_string(line_no) +
                     ": expected a JSON object");
  }
  JsonlDoc doc;
  auto fail = [&](const std::string& msg) -> void {
    throw ParseError(source + " line " + std::to_string(line_no) + ": " + msg);
  };
  if (obj.contains("tokens")) {
    if (!obj["tokens"].is_array()) fail("'tokens' must be an array of strings");
    for (const auto& t : obj["tokens"]) {
      if (!t.is_string()) fail("'tokens' must be an array of strings");
      doc.tokens.push_back(t.get<std::string>());
    }
    doc.pre_tokenized = true;
  }
  if (obj.contains("text")) {
    if (!obj["text"].is_string()) fail("'text' must be a string");
    doc.text = obj["text"].get<std::string>();
    doc.has_text = true;
  }
  if (!doc.pre_tokenized && !doc.has_text) {
    fail("missing required field 'text' (or 'tokens')");
  }
  if (obj.contains("pos")) {
    if (!doc.pre_tokenized) fail("'pos' requires a 'tokens' array to align with");
    if (!obj["pos"].is_array()) fail("'pos' must be an array of strings");
    for (const auto& t : obj["pos"]) {
      if (!t.is_string()) fail("'pos' must be an array of strings");
      doc.pos.push_back(t.get<std::string>());
    }
    if (doc.pos.size() != doc.tokens.size()) {
      fail("'pos' length " + std::to_string(doc.pos.size()) +
           " does not match 'tokens' length " + std::to_string(doc.tokens.size()));
    }
    doc.has_pos = true;
  }
  if (obj.contains("label")) {
    if (!obj["label"].is_string()) fail("'label' must be a string");
    doc.label = obj["label"].get<std::string>();
  }
  if (obj.contains("id")) {
    if (!obj["id"].is_number_integer()) fail("'id' must be an integer");
    doc.explicit_id = obj["id"].get<std::int64_t>();
  }
  return doc;
}

}  // namespace

IngestResult ingest_stream(std::istream& in, const IngestOptions& options,
                           const std::string& source_name) {
  CorpusBuilder builder(options.tokenizer);
  if (!options.pos_lexicon_path.empty()) {
    builder.load_pos_lexicon(options.pos_lexicon_path);
  }

  std::string line;
  int line_no = 0;

  if (options.format == CorpusFormat::kPlain) {
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      std::optional<std::string> label;
      std::string_view text = line;
      if (options.plain_has_labels) {
        const auto tab = line.find('\t');
        if (tab == std::string::npos) {
          throw ParseError(source_name + " line " + std::to_string(line_no) +
                           ": expected label<TAB>text");
        }
        label = line.substr(0, tab);
        text = std::string_view(line).substr(tab + 1);
      }
      builder.add_text(text, std::move(label));
    }
    auto [corpus, labels] = builder.finish();
    return {std::move(corpus), std::move(labels)};
  }

  // JSONL. Explicit ids are all-or-none and must be dense 0..N-1.
  struct Parsed {
    JsonlDoc doc;
    int line_no;
  };
  std::vector<Parsed> parsed;
  int with_id = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
    parsed.push_back({parse_jsonl_line(line, line_no, source_name), line_no});
    if (parsed.back().doc.explicit_id) ++with_id;
  }
  if (with_id != 0 && with_id != static_cast<int>(parsed.size())) {
    throw ParseError(source_name +
                     ": 'id' must be present on every line or on none");
  }
  if (with_id > 0) {
    std::vector<int> position(parsed.size(), -1);
    for (std::size_t i = 0; i < parsed.size(); ++i) {
      const auto id = *parsed[i].doc.explicit_id;
      if (id < 0 || id >= static_cast<std::int64_t>(parsed.size())) {
        throw ParseError(source_name + " line " +
                         std::to_string(parsed[i].line_no) + ": id " +
                         std::to_string(id) + " outside dense range 0.." +
                         std::to_string(parsed.size() - 1));
      }
      if (position[static_cast<std::size_t>(id)] != -1) {
        throw ParseError(source_name + " line " +
                         std::to_string(parsed[i].line_no) +
                         ": duplicate document id " + std::to_string(id));
      }
      position[static_cast<std::size_t>(id)] = static_cast<int>(i);
    }
    std::vector<Parsed> ordered;
    ordered.reserve(parsed.size());
    for (int pos : position) ordered.push_back(std::move(parsed[static_cast<std::size_t>(pos)]));
    parsed = std::move(ordered);
  }

  for (auto& [doc, doc_line] : parsed) {
    if (doc.pre_tokenized) {
      builder.add_document(doc.tokens, doc.has_pos ? &doc.pos : nullptr,
                           std::move(doc.label));
    } else {
      builder.add_text(doc.text, std::move(doc.label));
    }
  }
  auto [corpus, labels] = builder.finish();
  return {std::move(corpus), std::move(labels)};
}

IngestResult ingest(const std::string& path, const IngestOptions& options) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open corpus file '" + path + "'");
  }
  return ingest_stream(in, options, path);
}

void validate_category_pair(const CategoryPair& pair, const Corpus& corpus) {
  if (pair.initial_seed_a == pair.initial_seed_b) {
    throw DomainError("initial seeds must be distinct tokens ('" +
                      pair.initial_seed_a + "')");
  }
  for (const auto& seed : {pair.initial_seed_a, pair.initial_seed_b}) {
    if (!corpus.token_id(seed)) {
      throw DomainError("initial seed '" + seed +
                        "' does not occur in the corpus");
    }
  }
}

const std::set<std::string>& default_stopwords() {
  static const std::set<std::string> kStopwords = {
      "about", "above", "after", "again", "against", "all", "am", "an",
      "and", "any", "are", "as", "at", "be", "because", "been", "before",
      "being", "below", "between", "both", "but", "by", "can", "cannot",
      "could", "did", "do", "does", "doing", "down", "during", "each",
      "few", "for", "from", "further", "had", "has", "have", "having",
      "he", "her", "here", "hers", "herself", "him", "himself", "his",
      "how", "if", "in", "into", "is", "it", "its", "itself", "just",
      "me", "more", "most", "my", "myself", "no", "nor", "not", "now",
      "of", "off", "on", "once", "only", "or", "other", "our", "ours",
      "ourselves", "out", "over", "own", "same", "she", "should", "so",
      "some", "such", "than", "that", "the", "their", "theirs", "them",
      "themselves", "then", "there", "these", "they", "this", "those",
      "through", "to", "too", "under", "until", "up", "very", "was",
      "we", "were", "what", "when", "where", "which", "while", "who",
      "whom", "why", "will", "with", "would", "you", "your", "yours",
      "yourself", "yourselves"};
  return kStopwords;
}

std::set<std::string> load_stopword_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open stopword file '" + path + "'");
  }
  std::set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    for (auto& token : tokenize(line)) {
      words.insert(std::move(token));
    }
  }
  return words;
}

}  // namespace optimseed
