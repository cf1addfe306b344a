#pragma once

#include <cstdint>
#include <random>

namespace cbandit {

using Rng = std::mt19937_64;

// SplitMix64 finalizer; used to derive independent child seeds.
constexpr std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Child seed for stream `stream` of Monte Carlo run `run` under `root`.
constexpr std::uint64_t derive_seed(std::uint64_t root, std::uint64_t run,
                                    std::uint64_t stream = 0) {
  return mix_seed(mix_seed(mix_seed(root) ^ run) ^ (stream * 0x632be59bd9b4e019ULL));
}

// Fixed stream ids so every policy in a run sees the same environment and
// the same exogenous draws.
enum class Stream : std::uint64_t { environment = 1, noise = 2, policy = 3, schedule = 4 };

inline Rng make_rng(std::uint64_t root, std::uint64_t run, Stream s) {
  return Rng(derive_seed(root, run, static_cast<std::uint64_t>(s)));
}

}  // namespace cbandit
