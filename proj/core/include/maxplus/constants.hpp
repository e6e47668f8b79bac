#pragma once

// Default numerical tolerances. Every solver parameter block copies its
// defaults from here so that a single table governs the whole library.

#include <cstddef>

namespace maxplus::defaults {

// cxmat
inline constexpr std::size_t kMaxSvdDim = 16;
inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kUnitaryTol = 1e-9;
inline constexpr double kDykstraTol = 1e-10;
inline constexpr int kDykstraMaxSweeps = 500;

// bundle (outer loop defaults are the published settings)
inline constexpr double kTrustRadius = 0.5;
inline constexpr double kBundleEpsilon = 1e-8;
inline constexpr double kDescentGamma = 0.5;
inline constexpr int kMaxOuter = 2000;

// smoothed inner solver
inline constexpr double kBetaStart = 10.0;
inline constexpr double kBetaFactor = 10.0;
inline constexpr double kBetaCap = 1e8;
inline constexpr double kGradTol = 1e-9;
inline constexpr int kMaxInner = 20000;

// barrier inner solver
inline constexpr double kBarrierGap = 1e-12;
inline constexpr int kMaxNewton = 400;

// metric / dual certificate
inline constexpr double kGapTol = 1e-5;
inline constexpr double kDualTol = 1e-6;
inline constexpr int kDualMaxIter = 20000;
inline constexpr double kPruneMargin = 1e-9;
inline constexpr double kFeasibilityTol = 1e-8;

}  // namespace maxplus::defaults
