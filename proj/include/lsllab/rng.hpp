#pragma once

#include <cstdint>

namespace lsl {

// Finalizer of the splitmix64 generator; bijective on 64-bit words.
std::uint64_t mix64(std::uint64_t z);

// Counter generator: state advances by a fixed odd constant, outputs are the
// mixed counter. Draw i from seed s is mix64(s + (i+1)*gamma), so streams
// with distinct keys never share internal state.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ull;
    return mix64(state_);
  }

  // strictly inside (0,1); 53 significant bits
  double next_open() {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

  bool next_bit() { return (next() >> 63) != 0; }

 private:
  std::uint64_t state_;
};

// Key for the stream owned by lattice anchor (a, b) under a master seed.
// Recomputable from the coordinates alone, so any scheduling of blocks across
// workers reproduces identical draws.
std::uint64_t stream_key(std::uint64_t master, std::uint64_t a, std::uint64_t b);

// One standard normal via the trigonometric Box-Muller map; consumes exactly
// two uniforms, no state carried between calls.
double normal_draw(SplitMix64& g);

}  // namespace lsl
