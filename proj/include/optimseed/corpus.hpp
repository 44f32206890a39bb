#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace optimseed {

enum class PosTag { kNoun = 0, kAdjective = 1, kOther = 2 };

const char* pos_tag_name(PosTag tag);

// Maps a raw tag string (Penn or coarse) onto the three-tag set:
// NN* / NOUN -> noun, JJ* / ADJ -> adjective, everything else -> other.
PosTag coarse_pos_tag(std::string_view raw);

struct TokenizerConfig {
  std::size_t min_token_length = 2;
};

// Lowercases, splits on non-alphanumeric bytes, drops short tokens.
// This is the single normalization authority: pre-tokenized input is
// routed through it as well.
std::vector<std::string> tokenize(std::string_view text,
                                  const TokenizerConfig& config = {});

struct Document {
  int id = 0;
  std::vector<std::int32_t> token_ids;                     // as tokenized
  std::vector<std::pair<std::int32_t, std::int32_t>> bag;  // sorted (id, count)

  std::size_t num_tokens() const { return token_ids.size(); }
  bool contains(std::int32_t token_id) const;
};

// Gold labels live outside Corpus so nothing on the training path can
// reach them; only evaluation code takes an EvalLabels argument.
class EvalLabels {
 public:
  EvalLabels() = default;
  explicit EvalLabels(std::vector<std::optional<std::string>> labels)
      : labels_(std::move(labels)) {}

  std::size_t size() const { return labels_.size(); }
  const std::optional<std::string>& at(int doc_id) const {
    return labels_.at(static_cast<std::size_t>(doc_id));
  }
  int num_labeled() const;

 private:
  std::vector<std::optional<std::string>> labels_;
};

// Immutable tokenized document collection with vocabulary, inverted index
// and document frequencies. Safe for concurrent reads.
class Corpus {
 public:
  int num_docs() const { return static_cast<int>(documents_.size()); }
  const Document& doc(int id) const {
    return documents_.at(static_cast<std::size_t>(id));
  }
  const std::vector<Document>& docs() const { return documents_; }

  std::size_t vocab_size() const { return tokens_.size(); }
  std::optional<std::int32_t> token_id(std::string_view token) const;
  const std::string& token(std::int32_t id) const {
    return tokens_.at(static_cast<std::size_t>(id));
  }

  int doc_frequency(std::int32_t token_id) const {
    return static_cast<int>(inverted_index_.at(static_cast<std::size_t>(token_id)).size());
  }
  // Sorted document ids containing the token.
  const std::vector<std::int32_t>& docs_containing(std::int32_t token_id) const {
    return inverted_index_.at(static_cast<std::size_t>(token_id));
  }

  // df(token) / N. Unknown token is an error, distinct from probability 0.
  double doc_probability(std::string_view token) const;

  bool has_pos_info() const { return has_pos_info_; }
  std::optional<PosTag> pos_tag(std::int32_t token_id) const;

  // FNV-1a over the vocabulary in id order; models record it so a predict
  // call against a different corpus fails loudly.
  std::uint64_t vocabulary_fingerprint() const { return fingerprint_; }

  // Number of documents containing both tokens (document-level joint count).
  int joint_doc_count(std::int32_t a, std::int32_t b) const;

 private:
  friend class CorpusBuilder;

  std::vector<Document> documents_;
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::int32_t> token_to_id_;
  std::vector<std::vector<std::int32_t>> inverted_index_;
  std::vector<PosTag> pos_tags_;
  bool has_pos_info_ = false;
  std::uint64_t fingerprint_ = 0;
};

// Incremental construction; finish() freezes the corpus.
class CorpusBuilder {
 public:
  explicit CorpusBuilder(TokenizerConfig config = {}) : config_(config) {}

  // tags, when given, must align 1:1 with raw_tokens; each raw token may
  // normalize to several output tokens, all inheriting its tag.
  void add_document(const std::vector<std::string>& raw_tokens,
                    const std::vector<std::string>* tags,
                    std::optional<std::string> label);
  void add_text(std::string_view text, std::optional<std::string> label);

  // word<TAB>TAG lines; most-frequent tag wins, ties by tag order.
  void load_pos_lexicon(const std::string& path);

  std::pair<Corpus, EvalLabels> finish();

 private:
  TokenizerConfig config_;
  struct PendingDoc {
    std::vector<std::int32_t> token_ids;
    std::vector<PosTag> tags;  // aligned with token_ids; empty if untagged
    std::optional<std::string> label;
  };
  std::int32_t intern(const std::string& token);

  std::vector<PendingDoc> pending_;
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::int32_t> token_to_id_;
  std::unordered_map<std::string, PosTag> lexicon_;
  bool any_doc_tags_ = false;
  bool has_lexicon_ = false;
};

enum class CorpusFormat { kJsonl, kPlain };

struct IngestOptions {
  CorpusFormat format = CorpusFormat::kJsonl;
  bool plain_has_labels = false;     // leading "label<TAB>" per line
  std::string pos_lexicon_path;      // optional lexicon tagger
  TokenizerConfig tokenizer;
};

struct IngestResult {
  Corpus corpus;
  EvalLabels labels;
};

// JSONL fields: text (required unless tokens), label, tokens, pos, id.
// Plain: one document per line. Errors name the offending line.
IngestResult ingest(const std::string& path, const IngestOptions& options = {});
IngestResult ingest_stream(std::istream& in, const IngestOptions& options,
                           const std::string& source_name);

struct CategoryPair {
  std::string category_a;
  std::string category_b;
  std::string initial_seed_a;
  std::string initial_seed_b;
};

// Seeds must be distinct and occur in at least one document each.
void validate_category_pair(const CategoryPair& pair, const Corpus& corpus);

// Built-in English stopword list (sorted), used by mining unless the
// caller supplies their own.
const std::set<std::string>& default_stopwords();

// One token per line; normalized through the tokenizer rules.
std::set<std::string> load_stopword_file(const std::string& path);

}  // namespace optimseed
