#pragma once

namespace biduct::tol {

inline constexpr double kHermitian = 1e-10;
inline constexpr double kTrace = 1e-10;
inline constexpr double kPsd = 1e-10;
// Eigenvalues at or below this contribute nothing to an entropy.
inline constexpr double kEigenClamp = 1e-12;
inline constexpr double kPureNorm = 1e-12;
inline constexpr double kProbability = 1e-10;
inline constexpr double kKrausCompleteness = 1e-9;
inline constexpr double kChoiMarginal = 1e-9;
inline constexpr double kClassicalRow = 1e-12;
inline constexpr double kProductDistribution = 1e-10;
inline constexpr double kPpt = 1e-9;
// Maximally-mixed admixture applied inside optimisation objectives only.
inline constexpr double kEntropyRegularization = 1e-9;
inline constexpr double kCertificate = 1e-9;

}  // namespace biduct::tol
