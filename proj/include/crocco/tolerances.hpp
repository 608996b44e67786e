#pragma once

// Pass/fail thresholds shared by the scenario verdicts and the acceptance suite.
namespace crocco::tol {

inline constexpr double kExactProfile = 1e-8;
inline constexpr double kExactRuntimeSeconds = 10.0;
inline constexpr double kComparisonExact = 1e-6;
inline constexpr double kOrderXT = 0.9;
inline constexpr double kOrderY = 1.9;
inline constexpr double kUniformSpread = 0.10;
inline constexpr double kSweepProxyFactor = 10.0;
inline constexpr double kWeakResidual = 1e-2;
inline constexpr double kWeakRefinementFactor = 1.8;
inline constexpr double kTraceWall = 1e-6;
inline constexpr double kC6Variation = 0.20;
inline constexpr double kUniqueness = 1e-12;
inline constexpr double kKernelMass = 1e-8;
inline constexpr double kDilation = 1e-12;
inline constexpr double kKernelOrder = 1.9;
inline constexpr double kMeanValueConstant = 1e-6;
inline constexpr double kDensityFloor = 1.0 / 11.0;
inline constexpr double kPoincareStability = 0.25;
inline constexpr double kLinearControl = 1e-9;

}  // namespace crocco::tol
