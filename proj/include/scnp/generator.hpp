#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "scnp/instance.hpp"

namespace scnp {

enum class WeightScheme { kUnit, kType1, kType2, kType3 };

std::string_view to_string(WeightScheme scheme);
std::optional<WeightScheme> parse_weight_scheme(std::string_view name);

// Substream identifiers. Each stream is an mt19937_64 seeded with
// splitmix64(seed + stream * 0x9E3779B97F4A7C15), so topology, probabilities
// and weights never share draws. Integer and real variates are derived from
// raw 64-bit outputs (no std:: distributions) to stay bit-portable.
enum class RandomStream : std::uint64_t {
  kTopology = 1,
  kProbabilities = 2,
  kWeights = 3,
  kAuxiliary = 4,
};

std::uint64_t splitmix64(std::uint64_t x);

class Rng {
 public:
  Rng(std::uint64_t seed, RandomStream stream);
  explicit Rng(std::uint64_t raw_seed) : engine_(raw_seed) {}

  std::uint64_t next() { return engine_(); }
  // Uniform integer in [lo, hi], by rejection.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  // Uniform real in [0, 1) with 53 random bits.
  double uniform01();

 private:
  std::mt19937_64 engine_;
};

// Broder's random walk on the complete graph K_n: a uniformly distributed
// labeled spanning tree. Edges are reported as (walk predecessor, new node).
std::vector<Edge> broder_tree(int n, std::uint64_t seed);

// Survival probabilities round(U[0,1) * 100) / 100, then the scheme's costs,
// and K = 0.1 * sum(kappa).
TreeInstance assign_weights(int n, const std::vector<Edge>& edges, WeightScheme scheme, std::uint64_t seed);

inline TreeInstance generate_instance(int n, WeightScheme scheme, std::uint64_t seed) {
  return assign_weights(n, broder_tree(n, seed), scheme, seed);
}

std::string instance_file_name(int n, WeightScheme scheme, std::uint64_t seed);

}  // namespace scnp
