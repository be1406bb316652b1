#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sevstack/corpus.hpp"
#include "sevstack/feature_matrix.hpp"
#include "sevstack/sentiment.hpp"

namespace sevstack {

using TokenList = std::vector<std::string>;

/// Lower-cases and splits on maximal runs of non-alphanumeric code points.
/// An apostrophe (' or U+2019) between two alphanumerics stays inside the
/// token and is emitted as '.
TokenList tokenize(std::string_view text);

// ---------------------------------------------------------------- TF-IDF

/// Smoothed inverse document frequency over a lexicographically ordered
/// vocabulary: idf(t) = ln((1 + N) / (1 + df(t))) + 1.
class TfidfVocabulary {
 public:
  TfidfVocabulary(std::vector<std::string> terms, std::vector<double> idf, std::size_t doc_count);

  std::size_t size() const noexcept { return terms_.size(); }
  std::size_t doc_count() const noexcept { return doc_count_; }
  const std::vector<std::string>& terms() const noexcept { return terms_; }
  const std::vector<double>& idf() const noexcept { return idf_; }
  std::optional<std::size_t> index_of(std::string_view term) const;
  double idf(std::string_view term) const;

  std::string to_json() const;
  static TfidfVocabulary from_json(std::string_view json);

  friend bool operator==(const TfidfVocabulary& a, const TfidfVocabulary& b) {
    return a.terms_ == b.terms_ && a.idf_ == b.idf_ && a.doc_count_ == b.doc_count_;
  }

 private:
  std::vector<std::string> terms_;
  std::vector<double> idf_;
  std::size_t doc_count_;
};

/// Throws Error(fit) on an empty corpus or an empty effective vocabulary.
TfidfVocabulary fit_tfidf(const Corpus& corpus, std::size_t min_df = 1);

/// Raw counts x idf, L2-normalized per row; sparse storage; OOV terms ignored.
FeatureMatrix transform_tfidf(const Corpus& corpus, const TfidfVocabulary& vocab);

// ---------------------------------------------------------------- embeddings

/// One fixed-width vector per document id, in file order.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;

  /// Throws Error(format) on a width mismatch, a duplicate id or a non-finite value.
  void add(std::string id, std::vector<double> vec);

  std::size_t size() const noexcept { return ids_.size(); }
  bool empty() const noexcept { return ids_.empty(); }
  std::optional<std::size_t> dim() const noexcept { return dim_; }
  const std::vector<std::string>& ids() const noexcept { return ids_; }
  const std::vector<double>* find(std::string_view id) const;
  const std::vector<double>& vector_at(std::size_t i) const { return vecs_.at(i); }

  friend bool operator==(const EmbeddingTable& a, const EmbeddingTable& b) {
    return a.ids_ == b.ids_ && a.vecs_ == b.vecs_ && a.dim_ == b.dim_;
  }

 private:
  std::vector<std::string> ids_;
  std::vector<std::vector<double>> vecs_;
  std::unordered_map<std::string, std::size_t> index_;
  std::optional<std::size_t> dim_;
};

/// JSON Lines `{"id": "...", "vec": [...]}`.
EmbeddingTable read_embedding_table(const std::filesystem::path& path);
EmbeddingTable parse_embedding_table(std::string_view content, std::string_view source = "<memory>");
void write_embedding_table(const EmbeddingTable& table, const std::filesystem::path& path);
std::string to_jsonl(const EmbeddingTable& table);

/// Row i is the table vector of document i; throws Error(join) naming the
/// first missing id.
FeatureMatrix embed_corpus(const Corpus& corpus, const EmbeddingTable& table);

// ---------------------------------------------------------------- fusion

using SentimentBlocks = std::unordered_map<std::string, SentimentBlock>;

/// Tokenize + score every document and encode its 4-wide block.
SentimentBlocks sentiment_blocks(const Corpus& corpus, const Lexicon& lexicon);

/// Appends each row's sentiment block (dim + 4) when `use_sentiment` is set;
/// otherwise returns `base` unchanged. Sparse input stays sparse.
FeatureMatrix fuse_features(const FeatureMatrix& base, const SentimentBlocks& blocks, bool use_sentiment);

}  // namespace sevstack
