#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sevstack {

struct Document {
  std::string id;
  std::string text;
  std::optional<std::size_t> label;

  friend bool operator==(const Document&, const Document&) = default;
};

/// Ordered severity class names. Matching is trim + case-fold.
class LabelScheme {
 public:
  /// Throws Error(validation) on an empty list or on names that collide after folding.
  explicit LabelScheme(std::vector<std::string> names);

  /// Not depressed / Moderate / Severe, with the LT-EDI spelling
  /// "not depression" accepted for class 0.
  static LabelScheme d1();
  /// Minimal / Mild / Moderate / Severe.
  static LabelScheme d2();
  /// "d1", "d2", or a comma-separated list of class names.
  static LabelScheme parse(std::string_view spec);

  /// Registers an extra spelling for an existing class.
  LabelScheme& add_alias(std::string_view alias, std::size_t index);

  std::size_t size() const noexcept { return names_.size(); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::string& name(std::size_t index) const { return names_.at(index); }
  std::optional<std::size_t> find(std::string_view label) const;

  friend bool operator==(const LabelScheme& a, const LabelScheme& b) { return a.names_ == b.names_; }

 private:
  std::vector<std::string> names_;
  std::vector<std::pair<std::string, std::size_t>> keys_;  // folded spelling -> index
};

enum class SplitTag { train, dev, test, unsplit };

std::string_view to_string(SplitTag tag) noexcept;

/// Immutable labeled document collection.
class Corpus {
 public:
  /// Validates non-empty unique ids and label < scheme.size().
  Corpus(std::vector<Document> documents, LabelScheme scheme, SplitTag tag = SplitTag::unsplit);

  const std::vector<Document>& documents() const noexcept { return documents_; }
  const LabelScheme& scheme() const noexcept { return scheme_; }
  SplitTag split_tag() const noexcept { return tag_; }
  std::size_t size() const noexcept { return documents_.size(); }
  bool empty() const noexcept { return documents_.empty(); }
  const Document& operator[](std::size_t i) const { return documents_[i]; }

  /// Gold labels in document order; throws Error(contract) on an unlabeled document.
  std::vector<std::size_t> labels() const;
  std::vector<std::string> ids() const;

  Corpus with_tag(SplitTag tag) const { return Corpus(documents_, scheme_, tag); }

 private:
  std::vector<Document> documents_;
  LabelScheme scheme_;
  SplitTag tag_;
};

struct ColumnMapping {
  std::string id = "id";
  std::string text = "text";
  std::optional<std::string> label = "label";
};

/// Reads a header-bearing delimited file (RFC 4180 quoting; quoted fields may
/// span lines). One Document per data row in file order.
Corpus load_table(const std::filesystem::path& path, const ColumnMapping& mapping,
                  const LabelScheme& scheme, char delimiter = ',');

/// Same as load_table over an in-memory buffer; `source` names it in errors.
Corpus parse_table(std::string_view content, const ColumnMapping& mapping,
                   const LabelScheme& scheme, char delimiter = ',',
                   std::string_view source = "<memory>");

/// Writes a delimited table with header `id,text,label` (quoted as needed).
void write_table(const Corpus& corpus, const std::filesystem::path& path, char delimiter = ',');

/// Dedup key: NFC + whitespace collapse, case preserved.
std::string dedup_key(std::string_view text);

/// Keeps the first document of each dedup key, order preserved.
Corpus deduplicate(const Corpus& corpus);

std::vector<std::size_t> class_counts(const Corpus& corpus);

/// Stratified two-way split. First part receives round(fraction * N) documents
/// apportioned across classes by largest remainder, each class keeping at
/// least one document on either side.
std::pair<Corpus, Corpus> stratified_split(const Corpus& corpus, double fraction, std::uint64_t seed);

/// JSON Lines persistence: {"id": ..., "text": ..., "label": "<name>"}.
void write_jsonl(const Corpus& corpus, const std::filesystem::path& path);
std::string to_jsonl(const Corpus& corpus);
Corpus read_jsonl(const std::filesystem::path& path, const LabelScheme& scheme,
                  SplitTag tag = SplitTag::unsplit);
Corpus parse_jsonl(std::string_view content, const LabelScheme& scheme,
                   SplitTag tag = SplitTag::unsplit, std::string_view source = "<memory>");

/// Whole-file read; throws Error(io).
std::string read_file(const std::filesystem::path& path);
/// Whole-file write, creating parent directories; throws Error(io).
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace sevstack
