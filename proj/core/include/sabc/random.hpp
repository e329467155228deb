#pragma once

#include <cstdint>
#include <random>

namespace sabc {

using Rng = std::mt19937_64;

/// Stage tags for derived random streams. Every simulation is driven by its
/// own stream keyed on (seed, stage, index), so results never depend on the
/// order in which simulations are scheduled.
enum class Stage : std::uint64_t {
  kReplicate = 1,
  kObservation = 2,
  kPilot = 3,
  kTraining = 4,
  kMain = 5,
  kStandard = 6,
  kHoldout = 7,
};

std::uint64_t splitmix64(std::uint64_t x);

std::uint64_t derive_seed(std::uint64_t seed, Stage stage, std::uint64_t index);

Rng make_rng(std::uint64_t seed, Stage stage, std::uint64_t index);

/// Uniform draw strictly inside (0, 1) with 53 bits of resolution.
double uniform_open(Rng& rng);

}  // namespace sabc
