#include "lsllab/rng.hpp"

#include <cmath>

namespace lsl {

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::uint64_t stream_key(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
  std::uint64_t k = mix64(master ^ 0x6a09e667f3bcc909ull);
  k = mix64(k ^ a);
  k = mix64(k ^ 0x510e527fade682d1ull);
  k = mix64(k ^ b);
  return k;
}

double normal_draw(SplitMix64& g) {
  double u1 = g.next_open();
  double u2 = g.next_open();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

}  // namespace lsl
