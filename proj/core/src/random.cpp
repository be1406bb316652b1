#include "sevstack/random.hpp"

#include <cmath>
#include <numbers>

namespace sevstack {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t Rng::next_u64() noexcept {
  const std::uint64_t n = counter_++;
  return splitmix64(splitmix64(key_) ^ splitmix64(n + 0x632be59bd9b4e019ULL));
}

double Rng::uniform() noexcept {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::below(std::uint64_t bound) noexcept {
  // Lemire-style rejection keeps the draw unbiased.
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = next_u64();
    if (r >= threshold) return r % bound;
  }
}

double Rng::normal() noexcept {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Rng Rng::fork(std::initializer_list<std::uint64_t> path) const noexcept {
  std::uint64_t k = splitmix64(key_ ^ 0xa0761d6478bd642fULL);
  for (std::uint64_t p : path) k = splitmix64(k ^ splitmix64(p + 0xe7037ed1a0b428dbULL));
  return Rng(k);
}

}  // namespace sevstack
