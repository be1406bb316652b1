#include "doctest.h"

#include "sevstack/random.hpp"
#include "sevstack/vectorize.hpp"

using sevstack::tokenize;
using sevstack::TokenList;

TEST_CASE("tokenize examples") {
  CHECK(tokenize("Happy New Years Everyone") == TokenList{"happy", "new", "years", "everyone"});
  CHECK(tokenize("").empty());
  CHECK(tokenize("I can't--stop") == TokenList{"i", "can't", "stop"});
}

TEST_CASE("apostrophes") {
  CHECK(tokenize("don\xE2\x80\x99t") == TokenList{"don't"});
  CHECK(tokenize("'quoted' rock'n'roll") == TokenList{"quoted", "rock'n'roll"});
  CHECK(tokenize("it''s") == TokenList{"it", "s"});
}

TEST_CASE("unicode letters and digits") {
  CHECK(tokenize("NA\xC3\x8FVE caf\xC3\xA9 2nd") == TokenList{"na\xC3\xafve", "caf\xC3\xA9", "2nd"});
  CHECK(tokenize("self-deluded, 10/10!!") == TokenList{"self", "deluded", "10", "10"});
}

TEST_CASE("tokens are nonempty, whitespace-free, and retokenizing is idempotent") {
  sevstack::Rng rng(1);
  const std::string alphabet = "aZ9 '-.\t\n!";
  for (int i = 0; i < 300; ++i) {
    std::string s;
    for (std::size_t k = rng.below(40); k > 0; --k) s.push_back(alphabet[rng.below(alphabet.size())]);
    const auto tokens = tokenize(s);
    std::string joined;
    for (const auto& t : tokens) {
      CHECK_FALSE(t.empty());
      CHECK(t.find_first_of(" \t\n") == std::string::npos);
      if (!joined.empty()) joined += ' ';
      joined += t;
    }
    CHECK(tokenize(joined) == tokens);
  }
}
