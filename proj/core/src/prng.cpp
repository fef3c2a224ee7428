#include "hawkes/prng.hpp"

#include <cassert>
#include <cmath>

namespace hawkes {

double Rng::exponential(double rate) {
  assert(rate > 0.0);
  double u = uniform01();
  while (u == 0.0) u = uniform01();
  return -std::log1p(-u) / rate;
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

} // namespace

std::uint64_t derive_seed(std::uint64_t base, std::string_view label, std::uint64_t index) {
  std::uint64_t h = fnv1a64(label);
  h = splitmix64(h ^ splitmix64(index));
  return splitmix64(base ^ h);
}

} // namespace hawkes
