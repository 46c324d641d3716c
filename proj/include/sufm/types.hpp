#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace sufm {

using Index = std::int64_t;

/// Where data lives on the sphere: mesh vertices ("hex") or faces ("ico").
enum class NodeType { Vertex, Face };

inline const char* to_string(NodeType t) {
  return t == NodeType::Vertex ? "hex" : "ico";
}

inline NodeType node_type_from_string(const std::string& s) {
  if (s == "hex" || s == "vertex") return NodeType::Vertex;
  if (s == "ico" || s == "face") return NodeType::Face;
  throw std::invalid_argument("unknown node type: " + s);
}

/// Deterministic RNG. mt19937_64 bit stream with explicit float construction,
/// so sequences do not depend on the standard library's distribution code.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

  std::uint64_t next_u64() {
    // xorshift* keeps this header-only and identical everywhere.
    std::uint64_t x = state_;
    x ^= x >> 12;
    x ^= x << 25;
    x ^= x >> 27;
    state_ = x;
    return x * 0x2545f4914f6cdd1dull;
  }

  /// Uniform in [0, 1).
  double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n).
  std::uint64_t uniform_int(std::uint64_t n) { return next_u64() % n; }

 private:
  std::uint64_t state_;
};

}  // namespace sufm
