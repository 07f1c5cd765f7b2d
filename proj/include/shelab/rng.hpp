#pragma once

// Seed lineage for replica-parallel Monte Carlo.
//
// Every stochastic quantity is drawn from an engine whose seed is a pure
// function of (master_seed, replica_index, stream). Results therefore do not
// depend on how replicas are distributed over workers.

#include <cstdint>
#include <random>

#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>

namespace shelab {

/// One step of the splitmix64 generator; advances `state`.
constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Child seed for item `index` of a parent seed. Two splitmix rounds so that
/// neighbouring indices give unrelated seeds.
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index) noexcept {
  std::uint64_t state = parent;
  std::uint64_t a = splitmix64(state);
  state = a ^ (index * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL);
  splitmix64(state);
  return splitmix64(state);
}

/// Disjoint streams inside one replica.
enum class Stream : std::uint64_t {
  white_noise = 1,
  brownian = 2,
  bridge = 3,
  hitting = 4,
  path = 5,
};

constexpr std::uint64_t stream_seed(std::uint64_t replica_seed, Stream s) noexcept {
  return derive_seed(replica_seed, static_cast<std::uint64_t>(s));
}

using Engine = std::mt19937_64;

/// Engine plus standard normal and uniform(0,1) samplers.
///
/// The normal sampler is Boost's ziggurat, whose output is a fixed function of
/// the engine output on every platform.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : engine_(seed) {}

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }

  Engine& engine() noexcept { return engine_; }

 private:
  Engine engine_;
  boost::random::normal_distribution<double> normal_{0.0, 1.0};
  boost::random::uniform_01<double> uniform_;
};

}  // namespace shelab
