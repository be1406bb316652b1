#include "sevstack/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"
#include "sevstack/error.hpp"
#include "sevstack/random.hpp"
#include "sevstack/text.hpp"

namespace sevstack {

namespace {

std::string fold_label(std::string_view s) { return text::fold_case(text::trim(s)); }

struct Record {
  std::vector<std::string> fields;
  std::size_t line = 0;  // 1-based line where the record starts
};

// RFC 4180 reader. A quote is special only at the start of a field; inside an
// unquoted field it is kept literally.
class DelimitedReader {
 public:
  DelimitedReader(std::string_view content, char delimiter, std::string_view source)
      : s_(content), delim_(delimiter), source_(source) {
    if (s_.starts_with("\xEF\xBB\xBF")) pos_ = 3;
  }

  bool next(Record& rec) {
    // Skip blank lines between records.
    while (pos_ < s_.size() && (s_[pos_] == '\n' || s_[pos_] == '\r')) {
      if (s_[pos_] == '\n') ++line_;
      ++pos_;
    }
    if (pos_ >= s_.size()) return false;
    rec.fields.clear();
    rec.line = line_;
    std::string field;
    for (;;) {
      field.clear();
      if (pos_ < s_.size() && s_[pos_] == '"') {
        ++pos_;
        for (;;) {
          if (pos_ >= s_.size()) {
            throw Error(ErrorCode::parse, std::string(source_) + ": unterminated quoted field in record starting at line " +
                                              std::to_string(rec.line));
          }
          const char c = s_[pos_++];
          if (c == '"') {
            if (pos_ < s_.size() && s_[pos_] == '"') {
              field.push_back('"');
              ++pos_;
            } else {
              break;
            }
          } else {
            if (c == '\n') ++line_;
            field.push_back(c);
          }
        }
        // Anything between the closing quote and the delimiter is malformed.
        if (pos_ < s_.size() && s_[pos_] != delim_ && s_[pos_] != '\n' && s_[pos_] != '\r') {
          throw Error(ErrorCode::parse, std::string(source_) + ": text after closing quote at line " +
                                            std::to_string(line_));
        }
      } else {
        while (pos_ < s_.size() && s_[pos_] != delim_ && s_[pos_] != '\n' && s_[pos_] != '\r') {
          field.push_back(s_[pos_++]);
        }
      }
      rec.fields.push_back(field);
      if (pos_ < s_.size() && s_[pos_] == delim_) {
        ++pos_;
        continue;
      }
      if (pos_ < s_.size() && s_[pos_] == '\r') ++pos_;
      if (pos_ < s_.size() && s_[pos_] == '\n') {
        ++pos_;
        ++line_;
      }
      return true;
    }
  }

 private:
  std::string_view s_;
  char delim_;
  std::string_view source_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

std::string quote_field(std::string_view f, char delim) {
  const bool needs = f.find_first_of(std::string{'"', '\n', '\r', delim}) != std::string_view::npos ||
                     (!f.empty() && f.front() == ' ');
  if (!needs) return std::string(f);
  std::string out = "\"";
  for (char c : f) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

// ---------------------------------------------------------------- LabelScheme

LabelScheme::LabelScheme(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.empty()) throw Error(ErrorCode::validation, "label scheme needs at least one class");
  for (std::size_t i = 0; i < names_.size(); ++i) {
    std::string key = fold_label(names_[i]);
    if (key.empty()) throw Error(ErrorCode::validation, "label scheme has an empty class name");
    for (const auto& [k, idx] : keys_) {
      if (k == key) throw Error(ErrorCode::validation, "duplicate class name '" + names_[i] + "'");
    }
    keys_.emplace_back(std::move(key), i);
  }
}

LabelScheme LabelScheme::d1() {
  LabelScheme s({"not depressed", "moderate", "severe"});
  s.add_alias("not depression", 0);
  return s;
}

LabelScheme LabelScheme::d2() { return LabelScheme({"minimal", "mild", "moderate", "severe"}); }

LabelScheme LabelScheme::parse(std::string_view spec) {
  const std::string folded = fold_label(spec);
  if (folded == "d1") return d1();
  if (folded == "d2") return d2();
  std::vector<std::string> names;
  std::size_t start = 0;
  while (start <= spec.size()) {
    const auto comma = spec.find(',', start);
    const auto end = comma == std::string_view::npos ? spec.size() : comma;
    names.push_back(text::trim(spec.substr(start, end - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return LabelScheme(std::move(names));
}

LabelScheme& LabelScheme::add_alias(std::string_view alias, std::size_t index) {
  if (index >= names_.size()) throw Error(ErrorCode::validation, "alias target out of range");
  std::string key = fold_label(alias);
  if (find(key)) throw Error(ErrorCode::validation, "alias '" + std::string(alias) + "' already taken");
  keys_.emplace_back(std::move(key), index);
  return *this;
}

std::optional<std::size_t> LabelScheme::find(std::string_view label) const {
  const std::string key = fold_label(label);
  for (const auto& [k, idx] : keys_) {
    if (k == key) return idx;
  }
  return std::nullopt;
}

std::string_view to_string(SplitTag tag) noexcept {
  switch (tag) {
    case SplitTag::train: return "train";
    case SplitTag::dev: return "dev";
    case SplitTag::test: return "test";
    case SplitTag::unsplit: return "unsplit";
  }
  return "unsplit";
}

// ---------------------------------------------------------------- Corpus

Corpus::Corpus(std::vector<Document> documents, LabelScheme scheme, SplitTag tag)
    : documents_(std::move(documents)), scheme_(std::move(scheme)), tag_(tag) {
  std::unordered_set<std::string_view> seen;
  seen.reserve(documents_.size());
  for (const auto& d : documents_) {
    if (d.id.empty()) throw Error(ErrorCode::contract, "document with empty id");
    if (!seen.insert(d.id).second) throw Error(ErrorCode::contract, "duplicate document id '" + d.id + "'");
    if (d.label && *d.label >= scheme_.size()) {
      throw Error(ErrorCode::contract, "document '" + d.id + "' has label index " + std::to_string(*d.label) +
                                           " outside a " + std::to_string(scheme_.size()) + "-class scheme");
    }
  }
}

std::vector<std::size_t> Corpus::labels() const {
  std::vector<std::size_t> out;
  out.reserve(documents_.size());
  for (const auto& d : documents_) {
    if (!d.label) throw Error(ErrorCode::contract, "document '" + d.id + "' is unlabeled");
    out.push_back(*d.label);
  }
  return out;
}

std::vector<std::string> Corpus::ids() const {
  std::vector<std::string> out;
  out.reserve(documents_.size());
  for (const auto& d : documents_) out.push_back(d.id);
  return out;
}

// ---------------------------------------------------------------- delimited I/O

Corpus parse_table(std::string_view content, const ColumnMapping& mapping, const LabelScheme& scheme,
                   char delimiter, std::string_view source) {
  DelimitedReader reader(content, delimiter, source);
  Record header;
  if (!reader.next(header)) throw Error(ErrorCode::schema, std::string(source) + ": missing header row");

  auto column = [&](const std::string& name) -> std::size_t {
    for (std::size_t i = 0; i < header.fields.size(); ++i) {
      if (text::trim(header.fields[i]) == name) return i;
    }
    throw Error(ErrorCode::schema, std::string(source) + ": missing column '" + name + "'");
  };
  const std::size_t id_col = column(mapping.id);
  const std::size_t text_col = column(mapping.text);
  const std::optional<std::size_t> label_col =
      mapping.label ? std::optional<std::size_t>(column(*mapping.label)) : std::nullopt;

  std::vector<Document> docs;
  Record rec;
  std::size_t row = 0;
  while (reader.next(rec)) {
    ++row;
    if (rec.fields.size() != header.fields.size()) {
      throw Error(ErrorCode::parse, std::string(source) + ": row " + std::to_string(row) + " (line " +
                                        std::to_string(rec.line) + ") has " + std::to_string(rec.fields.size()) +
                                        " fields, header has " + std::to_string(header.fields.size()));
    }
    Document d;
    d.id = text::trim(rec.fields[id_col]);
    d.text = rec.fields[text_col];
    if (label_col) {
      const std::string& raw = rec.fields[*label_col];
      if (!text::trim(raw).empty()) {
        d.label = scheme.find(raw);
        if (!d.label) {
          throw Error(ErrorCode::label, std::string(source) + ": unknown label '" + raw + "' at row " +
                                            std::to_string(row) + " (line " + std::to_string(rec.line) + ")");
        }
      }
    }
    docs.push_back(std::move(d));
  }
  return Corpus(std::move(docs), scheme);
}

Corpus load_table(const std::filesystem::path& path, const ColumnMapping& mapping, const LabelScheme& scheme,
                  char delimiter) {
  return parse_table(read_file(path), mapping, scheme, delimiter, path.string());
}

void write_table(const Corpus& corpus, const std::filesystem::path& path, char delimiter) {
  std::string out;
  out += "id";
  out += delimiter;
  out += "text";
  out += delimiter;
  out += "label\n";
  for (const auto& d : corpus.documents()) {
    out += quote_field(d.id, delimiter);
    out += delimiter;
    out += quote_field(d.text, delimiter);
    out += delimiter;
    if (d.label) out += quote_field(corpus.scheme().name(*d.label), delimiter);
    out += '\n';
  }
  write_file(path, out);
}

// ---------------------------------------------------------------- dedup / counts / split

std::string dedup_key(std::string_view text_value) { return text::collapse_whitespace(text::nfc(text_value)); }

Corpus deduplicate(const Corpus& corpus) {
  std::unordered_set<std::string> seen;
  std::vector<Document> kept;
  kept.reserve(corpus.size());
  for (const auto& d : corpus.documents()) {
    if (seen.insert(dedup_key(d.text)).second) kept.push_back(d);
  }
  return Corpus(std::move(kept), corpus.scheme(), corpus.split_tag());
}

std::vector<std::size_t> class_counts(const Corpus& corpus) {
  std::vector<std::size_t> counts(corpus.scheme().size(), 0);
  for (const auto& d : corpus.documents()) {
    if (!d.label) throw Error(ErrorCode::contract, "class_counts: document '" + d.id + "' is unlabeled");
    ++counts[*d.label];
  }
  return counts;
}

std::pair<Corpus, Corpus> stratified_split(const Corpus& corpus, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw Error(ErrorCode::split, "split fraction must lie in (0, 1)");
  }
  const auto labels = corpus.labels();
  const std::size_t classes = corpus.scheme().size();
  std::vector<std::vector<std::size_t>> members(classes);
  for (std::size_t i = 0; i < labels.size(); ++i) members[labels[i]].push_back(i);
  for (std::size_t c = 0; c < classes; ++c) {
    if (!members[c].empty() && members[c].size() < 2) {
      throw Error(ErrorCode::split, "class '" + corpus.scheme().name(c) + "' has " +
                                        std::to_string(members[c].size()) + " document(s); need at least 2");
    }
  }

  // Largest-remainder apportionment of the first part's total across classes.
  const auto total_first = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(labels.size())));
  std::vector<std::size_t> take(classes, 0);
  std::vector<double> remainder(classes, 0.0);
  std::size_t assigned = 0;
  for (std::size_t c = 0; c < classes; ++c) {
    const double quota = fraction * static_cast<double>(members[c].size());
    take[c] = static_cast<std::size_t>(std::floor(quota));
    remainder[c] = quota - std::floor(quota);
    assigned += take[c];
  }
  std::vector<std::size_t> order(classes);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t k = 0; assigned < total_first && k < classes; ++k) {
    if (members[order[k]].empty()) continue;
    ++take[order[k]];
    ++assigned;
  }
  for (std::size_t c = 0; c < classes; ++c) {
    if (members[c].empty()) continue;
    take[c] = std::clamp<std::size_t>(take[c], 1, members[c].size() - 1);
  }

  std::vector<char> in_first(labels.size(), 0);
  const Rng root(seed);
  for (std::size_t c = 0; c < classes; ++c) {
    Rng rng = root.fork({c});
    auto m = members[c];
    rng.shuffle(m);
    for (std::size_t k = 0; k < take[c]; ++k) in_first[m[k]] = 1;
  }
  std::vector<Document> first, second;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    (in_first[i] ? first : second).push_back(corpus[i]);
  }
  return {Corpus(std::move(first), corpus.scheme(), SplitTag::train),
          Corpus(std::move(second), corpus.scheme(), SplitTag::test)};
}

// ---------------------------------------------------------------- JSON Lines

std::string to_jsonl(const Corpus& corpus) {
  std::string out;
  for (const auto& d : corpus.documents()) {
    nlohmann::ordered_json j;
    j["id"] = d.id;
    j["text"] = d.text;
    if (d.label) j["label"] = corpus.scheme().name(*d.label);
    out += j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
    out += '\n';
  }
  return out;
}

void write_jsonl(const Corpus& corpus, const std::filesystem::path& path) { write_file(path, to_jsonl(corpus)); }

Corpus parse_jsonl(std::string_view content, const LabelScheme& scheme, SplitTag tag, std::string_view source) {
  std::vector<Document> docs;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < content.size()) {
    auto end = content.find('\n', start);
    if (end == std::string_view::npos) end = content.size();
    const std::string_view line = content.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (text::trim(line).empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::parse, std::string(source) + ": line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!j.is_object() || !j.contains("id") || !j["id"].is_string() || !j.contains("text") ||
        !j["text"].is_string()) {
      throw Error(ErrorCode::parse, std::string(source) + ": line " + std::to_string(line_no) +
                                        ": expected object with string 'id' and 'text'");
    }
    Document d{j["id"].get<std::string>(), j["text"].get<std::string>(), std::nullopt};
    if (j.contains("label") && !j["label"].is_null()) {
      if (!j["label"].is_string()) {
        throw Error(ErrorCode::parse, std::string(source) + ": line " + std::to_string(line_no) +
                                          ": 'label' must be a string");
      }
      const auto raw = j["label"].get<std::string>();
      d.label = scheme.find(raw);
      if (!d.label) {
        throw Error(ErrorCode::label, std::string(source) + ": unknown label '" + raw + "' at line " +
                                          std::to_string(line_no));
      }
    }
    docs.push_back(std::move(d));
  }
  return Corpus(std::move(docs), scheme, tag);
}

Corpus read_jsonl(const std::filesystem::path& path, const LabelScheme& scheme, SplitTag tag) {
  return parse_jsonl(read_file(path), scheme, tag, path.string());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::io, "cannot write '" + path.string() + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(ErrorCode::io, "write failed for '" + path.string() + "'");
}

}  // namespace sevstack
