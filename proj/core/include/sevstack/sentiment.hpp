#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace sevstack {

/// What to do with a `term<TAB>0` line. The published AFINN-111 carries one
/// such phrase; its Table-1 style statistics count it on the negative side.
enum class ZeroScore {
  reject,          // lexicon format error
  tally_negative,  // keep it (contributes 0) and count it as non-positive
};

struct LexiconCounts {
  std::size_t total = 0;
  std::size_t positive = 0;
  std::size_t negative = 0;  // includes `zero` under ZeroScore::tally_negative
  std::size_t zero = 0;

  friend bool operator==(const LexiconCounts&, const LexiconCounts&) = default;
};

/// Term -> valence. Keys are stored as the space-joined tokenization of the
/// lexicon term, so "self-deluded" is looked up as the bigram "self deluded".
class Lexicon {
 public:
  Lexicon() = default;

  std::size_t size() const noexcept { return entries_.size(); }
  const LexiconCounts& counts() const noexcept { return counts_; }
  /// Score of a single- or multi-token key, or nullptr.
  const int* find(std::string_view key) const;
  /// Length in tokens of the longest key.
  std::size_t max_phrase_tokens() const noexcept { return max_tokens_; }

 private:
  friend Lexicon parse_lexicon(std::string_view, ZeroScore, std::string_view,
                               const std::function<void(std::string_view)>&);
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept { return std::hash<std::string_view>{}(s); }
  };
  std::unordered_map<std::string, int, Hash, std::equal_to<>> entries_;
  LexiconCounts counts_;
  std::size_t max_tokens_ = 0;
};

using WarningSink = std::function<void(std::string_view)>;

/// Writes "warning: ..." to stderr.
void stderr_warning(std::string_view message);

/// Loads `term<TAB>integer` lines. Non-integer, zero (under ZeroScore::reject)
/// or out-of-range scores raise Error(lexicon) with the line number; a
/// duplicate term keeps the last score and reports a warning.
Lexicon load_lexicon(const std::filesystem::path& path, ZeroScore zero = ZeroScore::reject,
                     const WarningSink& warn = stderr_warning);
Lexicon parse_lexicon(std::string_view content, ZeroScore zero = ZeroScore::reject,
                      std::string_view source = "<memory>", const WarningSink& warn = stderr_warning);

/// The AFINN-111 word list shipped with the library, loaded with
/// ZeroScore::tally_negative. Looks in $SEVSTACK_LEXICON, then the build and
/// install data directories.
std::filesystem::path bundled_lexicon_path();
Lexicon load_bundled_lexicon();

enum class Polarity { positive, neutral, negative };

std::string_view to_string(Polarity p) noexcept;
Polarity polarity_of(long long score) noexcept;

struct SentimentResult {
  long long score = 0;
  Polarity polarity = Polarity::neutral;
  std::size_t matched = 0;

  friend bool operator==(const SentimentResult&, const SentimentResult&) = default;
};

/// Greedy left-to-right match: at each position the two-token phrase is tried
/// before the unigram; matched spans do not overlap. Tokens must already be
/// lower-cased (see tokenize()).
SentimentResult score_document(const std::vector<std::string>& tokens, const Lexicon& lexicon);

using SentimentBlock = std::array<double, 4>;
inline constexpr std::size_t kSentimentBlockWidth = 4;

/// [clamp(score, -10, 10) / 10, is_positive, is_neutral, is_negative]
SentimentBlock encode_sentiment_features(const SentimentResult& result) noexcept;

}  // namespace sevstack
