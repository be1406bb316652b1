#pragma once

#include <string>
#include <vector>

#include "sevstack/corpus.hpp"
#include "sevstack/random.hpp"

namespace sevstack::bench {

// Labeled posts over a Zipf-ish vocabulary; each class favours its own slice.
inline Corpus synthetic_corpus(std::size_t docs, std::size_t vocab, std::size_t classes, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Document> out;
  out.reserve(docs);
  for (std::size_t i = 0; i < docs; ++i) {
    const std::size_t label = i % classes;
    std::string text;
    const std::size_t len = 20 + rng.below(40);
    for (std::size_t t = 0; t < len; ++t) {
      const double u = rng.uniform();
      std::size_t w = static_cast<std::size_t>(u * u * static_cast<double>(vocab));
      if (rng.uniform() < 0.3) w = (label * vocab / classes + rng.below(vocab / classes)) % vocab;
      if (!text.empty()) text += ' ';
      text += "w" + std::to_string(w);
    }
    out.push_back({"d" + std::to_string(i), std::move(text), label});
  }
  std::vector<std::string> names;
  for (std::size_t k = 0; k < classes; ++k) names.push_back("c" + std::to_string(k));
  return Corpus(std::move(out), LabelScheme(std::move(names)));
}

}  // namespace sevstack::bench
