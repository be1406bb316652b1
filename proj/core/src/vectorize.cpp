#include "sevstack/vectorize.hpp"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "json.hpp"
#include "sevstack/error.hpp"

namespace sevstack {

namespace {

bool is_word_char(UChar32 c) {
  if (u_isalnum(c)) return true;
  const int8_t t = u_charType(c);
  return t == U_NON_SPACING_MARK || t == U_COMBINING_SPACING_MARK || t == U_ENCLOSING_MARK;
}

bool is_apostrophe(UChar32 c) { return c == U'\'' || c == 0x2019; }

void append_utf8(std::string& out, UChar32 c) {
  char buf[U8_MAX_LENGTH];
  int32_t len = 0;
  UBool error = false;
  U8_APPEND(reinterpret_cast<uint8_t*>(buf), len, U8_MAX_LENGTH, c, error);
  if (!error) out.append(buf, static_cast<std::size_t>(len));
}

}  // namespace

TokenList tokenize(std::string_view text_value) {
  TokenList tokens;
  const auto* s = reinterpret_cast<const uint8_t*>(text_value.data());
  const auto n = static_cast<int32_t>(text_value.size());
  std::string current;
  int32_t i = 0;
  while (i < n) {
    UChar32 c;
    U8_NEXT(s, i, n, c);
    if (c >= 0 && is_word_char(c)) {
      append_utf8(current, u_tolower(c));
      continue;
    }
    if (c >= 0 && is_apostrophe(c) && !current.empty() && i < n) {
      int32_t j = i;
      UChar32 next;
      U8_NEXT(s, j, n, next);
      if (next >= 0 && is_word_char(next)) {
        current.push_back('\'');
        continue;
      }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    current.clear();
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

// ---------------------------------------------------------------- TF-IDF

TfidfVocabulary::TfidfVocabulary(std::vector<std::string> terms, std::vector<double> idf, std::size_t doc_count)
    : terms_(std::move(terms)), idf_(std::move(idf)), doc_count_(doc_count) {
  if (terms_.size() != idf_.size()) throw Error(ErrorCode::contract, "vocabulary: terms/idf length mismatch");
  if (!std::is_sorted(terms_.begin(), terms_.end()) ||
      std::adjacent_find(terms_.begin(), terms_.end()) != terms_.end()) {
    throw Error(ErrorCode::contract, "vocabulary: terms must be strictly increasing");
  }
}

std::optional<std::size_t> TfidfVocabulary::index_of(std::string_view term) const {
  const auto it = std::lower_bound(terms_.begin(), terms_.end(), term);
  if (it == terms_.end() || *it != term) return std::nullopt;
  return static_cast<std::size_t>(it - terms_.begin());
}

double TfidfVocabulary::idf(std::string_view term) const {
  const auto i = index_of(term);
  if (!i) throw Error(ErrorCode::contract, "term '" + std::string(term) + "' not in vocabulary");
  return idf_[*i];
}

std::string TfidfVocabulary::to_json() const {
  nlohmann::ordered_json j;
  j["format"] = 1;
  j["kind"] = "tfidf_vocabulary";
  j["doc_count"] = doc_count_;
  j["terms"] = terms_;
  j["idf"] = idf_;
  return j.dump();
}

TfidfVocabulary TfidfVocabulary::from_json(std::string_view json) {
  try {
    const auto j = nlohmann::json::parse(json);
    if (j.at("kind").get<std::string>() != "tfidf_vocabulary") {
      throw Error(ErrorCode::format, "not a tfidf_vocabulary document");
    }
    return TfidfVocabulary(j.at("terms").get<std::vector<std::string>>(), j.at("idf").get<std::vector<double>>(),
                           j.at("doc_count").get<std::size_t>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::format, std::string("vocabulary: ") + e.what());
  }
}

TfidfVocabulary fit_tfidf(const Corpus& corpus, std::size_t min_df) {
  if (corpus.empty()) throw Error(ErrorCode::fit, "fit_tfidf: empty corpus");
  if (min_df < 1) throw Error(ErrorCode::fit, "fit_tfidf: min_df must be >= 1");
  std::map<std::string, std::size_t> df;
  for (const auto& d : corpus.documents()) {
    TokenList tokens = tokenize(d.text);
    std::sort(tokens.begin(), tokens.end());
    tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
    for (auto& t : tokens) ++df[std::move(t)];
  }
  const double n = static_cast<double>(corpus.size());
  std::vector<std::string> terms;
  std::vector<double> idf;
  for (const auto& [term, count] : df) {
    if (count < min_df) continue;
    terms.push_back(term);
    idf.push_back(std::log((1.0 + n) / (1.0 + static_cast<double>(count))) + 1.0);
  }
  if (terms.empty()) {
    throw Error(ErrorCode::fit, "fit_tfidf: no term reaches min_df = " + std::to_string(min_df));
  }
  return TfidfVocabulary(std::move(terms), std::move(idf), corpus.size());
}

FeatureMatrix transform_tfidf(const Corpus& corpus, const TfidfVocabulary& vocab) {
  std::vector<std::size_t> offsets{0};
  std::vector<std::uint32_t> indices;
  std::vector<double> values;
  std::map<std::size_t, double> row;
  for (const auto& d : corpus.documents()) {
    row.clear();
    for (const auto& t : tokenize(d.text)) {
      if (const auto col = vocab.index_of(t)) row[*col] += 1.0;
    }
    double norm2 = 0.0;
    for (auto& [col, w] : row) {
      w *= vocab.idf()[col];
      norm2 += w * w;
    }
    const double inv = norm2 > 0.0 ? 1.0 / std::sqrt(norm2) : 0.0;
    for (const auto& [col, w] : row) {
      indices.push_back(static_cast<std::uint32_t>(col));
      values.push_back(w * inv);
    }
    offsets.push_back(indices.size());
  }
  return FeatureMatrix::sparse(vocab.size(), corpus.ids(), std::move(offsets), std::move(indices),
                               std::move(values));
}

// ---------------------------------------------------------------- embeddings

void EmbeddingTable::add(std::string id, std::vector<double> vec) {
  if (dim_ && *dim_ != vec.size()) {
    throw Error(ErrorCode::format, "embedding '" + id + "' has width " + std::to_string(vec.size()) +
                                       ", table width is " + std::to_string(*dim_));
  }
  for (double v : vec) {
    if (!std::isfinite(v)) throw Error(ErrorCode::format, "embedding '" + id + "' holds a non-finite value");
  }
  if (index_.contains(id)) throw Error(ErrorCode::format, "duplicate embedding id '" + id + "'");
  dim_ = vec.size();
  index_.emplace(id, ids_.size());
  ids_.push_back(std::move(id));
  vecs_.push_back(std::move(vec));
}

const std::vector<double>* EmbeddingTable::find(std::string_view id) const {
  const auto it = index_.find(std::string(id));
  return it == index_.end() ? nullptr : &vecs_[it->second];
}

EmbeddingTable parse_embedding_table(std::string_view content, std::string_view source) {
  EmbeddingTable table;
  std::size_t line_no = 0, start = 0;
  while (start < content.size()) {
    auto end = content.find('\n', start);
    if (end == std::string_view::npos) end = content.size();
    const auto line = content.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      if (!j.is_object() || !j.contains("id") || !j["id"].is_string() || !j.contains("vec") ||
          !j["vec"].is_array()) {
        throw Error(ErrorCode::format, "expected {\"id\": string, \"vec\": [numbers]}");
      }
      table.add(j["id"].get<std::string>(), j["vec"].get<std::vector<double>>());
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::format, std::string(source) + ": line " + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      throw Error(ErrorCode::format, std::string(source) + ": line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return table;
}

EmbeddingTable read_embedding_table(const std::filesystem::path& path) {
  return parse_embedding_table(read_file(path), path.string());
}

std::string to_jsonl(const EmbeddingTable& table) {
  std::string out;
  for (std::size_t i = 0; i < table.size(); ++i) {
    nlohmann::ordered_json j;
    j["id"] = table.ids()[i];
    j["vec"] = table.vector_at(i);
    out += j.dump();
    out += '\n';
  }
  return out;
}

void write_embedding_table(const EmbeddingTable& table, const std::filesystem::path& path) {
  write_file(path, to_jsonl(table));
}

FeatureMatrix embed_corpus(const Corpus& corpus, const EmbeddingTable& table) {
  std::vector<double> values;
  const std::size_t dim = table.dim().value_or(0);
  values.reserve(corpus.size() * dim);
  for (const auto& d : corpus.documents()) {
    const auto* vec = table.find(d.id);
    if (vec == nullptr) throw Error(ErrorCode::join, "embedding table has no vector for id '" + d.id + "'");
    values.insert(values.end(), vec->begin(), vec->end());
  }
  return FeatureMatrix::dense(dim, corpus.ids(), std::move(values));
}

// ---------------------------------------------------------------- fusion

SentimentBlocks sentiment_blocks(const Corpus& corpus, const Lexicon& lexicon) {
  SentimentBlocks blocks;
  blocks.reserve(corpus.size());
  for (const auto& d : corpus.documents()) {
    blocks.emplace(d.id, encode_sentiment_features(score_document(tokenize(d.text), lexicon)));
  }
  return blocks;
}

FeatureMatrix fuse_features(const FeatureMatrix& base, const SentimentBlocks& blocks, bool use_sentiment) {
  if (!use_sentiment) return base;
  std::vector<double> block_values;
  block_values.reserve(base.rows() * kSentimentBlockWidth);
  for (const auto& id : base.row_ids()) {
    const auto it = blocks.find(id);
    if (it == blocks.end()) throw Error(ErrorCode::join, "no sentiment block for id '" + id + "'");
    block_values.insert(block_values.end(), it->second.begin(), it->second.end());
  }
  return base.concat_columns(FeatureMatrix::dense(kSentimentBlockWidth, base.row_ids(), std::move(block_values)));
}

}  // namespace sevstack
