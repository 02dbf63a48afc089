#pragma once

// Frozen constants for the acceptance gate. The regression bounds were
// calibrated once against this exact code and are kept as small integers so
// any future drift in policy behavior trips the gate instead of sliding by.

#include <cstdint>

namespace flowlab::calibration {

// Estimate-chain stranding instance at depth 40: the alternating policy's
// worst observed local ratio against the clairvoyant baseline.
inline constexpr long kChainZigzagRatioBound = 2;

// Witness-chain stranding instance at depth 30: worst observed local ratios.
inline constexpr long kWitnessChainZigzagRatioBound = 3;
inline constexpr long kWitnessChainDlRatioBound = 3;

// Randomized invariant suite: every per-instance max local ratio of the
// alternating policy stays within C * mu * (log2(mu) + 1) for this C.
inline constexpr long kSuiteLocalRatioC = 2;

// Master seeds and sizes for the randomized criteria. Trial seeds derive
// from the master stream, so every run replays the same instances.
inline constexpr std::uint64_t kTrendMasterSeed = 2026;
inline constexpr long kTrendTrials = 200;
inline constexpr std::uint64_t kSuiteMasterSeed = 77;
inline constexpr long kSuiteSeeds = 1000;

}  // namespace flowlab::calibration
