#include "sevstack/sentiment.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <iostream>

#include "sevstack/corpus.hpp"
#include "sevstack/error.hpp"
#include "sevstack/text.hpp"
#include "sevstack/vectorize.hpp"

#ifndef SEVSTACK_SOURCE_DATA_DIR
#define SEVSTACK_SOURCE_DATA_DIR ""
#endif
#ifndef SEVSTACK_INSTALL_DATA_DIR
#define SEVSTACK_INSTALL_DATA_DIR ""
#endif

namespace sevstack {

namespace {

std::string join_tokens(const TokenList& tokens) {
  std::string key;
  for (const auto& t : tokens) {
    if (!key.empty()) key.push_back(' ');
    key += t;
  }
  return key;
}

}  // namespace

void stderr_warning(std::string_view message) { std::cerr << "warning: " << message << '\n'; }

const int* Lexicon::find(std::string_view key) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? nullptr : &it->second;
}

Lexicon parse_lexicon(std::string_view content, ZeroScore zero, std::string_view source, const WarningSink& warn) {
  Lexicon lex;
  std::size_t line_no = 0, start = 0;
  if (content.starts_with("\xEF\xBB\xBF")) start = 3;
  while (start < content.size()) {
    auto end = content.find('\n', start);
    if (end == std::string_view::npos) end = content.size();
    std::string_view line = content.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (text::trim(line).empty()) continue;

    auto fail = [&](const std::string& why) {
      return Error(ErrorCode::lexicon, std::string(source) + ": line " + std::to_string(line_no) + ": " + why);
    };
    const auto tab = line.rfind('\t');
    if (tab == std::string_view::npos) throw fail("expected term<TAB>score");
    const std::string term(line.substr(0, tab));
    const std::string score_text = text::trim(line.substr(tab + 1));
    int score = 0;
    const auto [ptr, ec] = std::from_chars(score_text.data(), score_text.data() + score_text.size(), score);
    if (ec != std::errc() || ptr != score_text.data() + score_text.size() || score_text.empty()) {
      throw fail("score '" + score_text + "' is not an integer");
    }
    if (score < -5 || score > 5) throw fail("score " + score_text + " outside [-5, 5]");
    if (score == 0 && zero == ZeroScore::reject) throw fail("score 0 for '" + term + "' (scores must be nonzero)");

    const TokenList tokens = tokenize(term);
    if (tokens.empty()) throw fail("term '" + term + "' has no word characters");
    std::string key = join_tokens(tokens);
    lex.max_tokens_ = std::max(lex.max_tokens_, tokens.size());
    auto [it, inserted] = lex.entries_.insert_or_assign(std::move(key), score);
    if (!inserted) {
      warn(std::string(source) + ": line " + std::to_string(line_no) + ": duplicate term '" + term +
           "', keeping the later score");
    }
  }
  for (const auto& [term, score] : lex.entries_) {
    ++lex.counts_.total;
    if (score > 0) {
      ++lex.counts_.positive;
    } else {
      ++lex.counts_.negative;
      if (score == 0) ++lex.counts_.zero;
    }
  }
  return lex;
}

Lexicon load_lexicon(const std::filesystem::path& path, ZeroScore zero, const WarningSink& warn) {
  return parse_lexicon(read_file(path), zero, path.string(), warn);
}

std::filesystem::path bundled_lexicon_path() {
  if (const char* env = std::getenv("SEVSTACK_LEXICON"); env != nullptr && *env != '\0') return env;
  for (const char* dir : {SEVSTACK_SOURCE_DATA_DIR, SEVSTACK_INSTALL_DATA_DIR}) {
    if (*dir == '\0') continue;
    std::filesystem::path p = std::filesystem::path(dir) / "AFINN-111.txt";
    if (std::filesystem::exists(p)) return p;
  }
  throw Error(ErrorCode::io, "bundled AFINN-111.txt not found; set SEVSTACK_LEXICON");
}

Lexicon load_bundled_lexicon() { return load_lexicon(bundled_lexicon_path(), ZeroScore::tally_negative); }

std::string_view to_string(Polarity p) noexcept {
  switch (p) {
    case Polarity::positive: return "positive";
    case Polarity::neutral: return "neutral";
    case Polarity::negative: return "negative";
  }
  return "neutral";
}

Polarity polarity_of(long long score) noexcept {
  if (score >= 1) return Polarity::positive;
  if (score <= -1) return Polarity::negative;
  return Polarity::neutral;
}

SentimentResult score_document(const std::vector<std::string>& tokens, const Lexicon& lexicon) {
  SentimentResult r;
  std::string bigram;
  for (std::size_t i = 0; i < tokens.size();) {
    if (i + 1 < tokens.size()) {
      bigram.assign(tokens[i]);
      bigram.push_back(' ');
      bigram += tokens[i + 1];
      if (const int* s = lexicon.find(bigram)) {
        r.score += *s;
        ++r.matched;
        i += 2;
        continue;
      }
    }
    if (const int* s = lexicon.find(tokens[i])) {
      r.score += *s;
      ++r.matched;
    }
    ++i;
  }
  r.polarity = polarity_of(r.score);
  return r;
}

SentimentBlock encode_sentiment_features(const SentimentResult& result) noexcept {
  const double magnitude = static_cast<double>(std::clamp<long long>(result.score, -10, 10)) / 10.0;
  return {magnitude, result.polarity == Polarity::positive ? 1.0 : 0.0,
          result.polarity == Polarity::neutral ? 1.0 : 0.0, result.polarity == Polarity::negative ? 1.0 : 0.0};
}

}  // namespace sevstack
