#include "trajevo/rng.hpp"

#include <array>

namespace trajevo {

Rng make_stream(std::uint64_t seed, StreamTag tag, std::uint64_t a, std::uint64_t b) {
  auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xffffffffu); };
  auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
  std::array<std::uint32_t, 7> words{lo(seed), hi(seed), static_cast<std::uint32_t>(tag),
                                     lo(a),    hi(a),    lo(b),
                                     hi(b)};
  std::seed_seq seq(words.begin(), words.end());
  return Rng(seq);
}

}  // namespace trajevo
