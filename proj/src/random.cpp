#include "mtkit/random.hpp"

#include <numeric>
#include <unordered_map>

#include "mtkit/error.hpp"

namespace mtkit {

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw InputError("Rng::below requires a positive bound");
  // Reject the low residue class so every value in [0, bound) is equally likely.
  const std::uint64_t threshold = (0 - bound) % bound;
  while (true) {
    std::uint64_t r = engine_();
    if (r >= threshold) return r % bound;
  }
}

std::vector<std::size_t> sample_without_replacement(std::size_t population, std::size_t k, Rng& rng) {
  if (k > population) throw InputError("sample size exceeds population");
  // Partial Fisher-Yates over a sparse index map: O(k) memory for small samples.
  std::unordered_map<std::size_t, std::size_t> swapped;
  auto at = [&](std::size_t i) {
    auto it = swapped.find(i);
    return it == swapped.end() ? i : it->second;
  };
  std::vector<std::size_t> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng.below(population - i));
    std::size_t vi = at(i), vj = at(j);
    swapped[j] = vi;
    swapped[i] = vj;
    out.push_back(vj);
  }
  return out;
}

std::uint64_t derive_seed(std::uint64_t seed, std::string_view label) {
  // FNV-1a over the label, folded into the seed with a splitmix64 finalizer.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::uint64_t z = seed ^ h;
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace mtkit
