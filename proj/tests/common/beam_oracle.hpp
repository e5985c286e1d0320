#pragma once

// Expected deflection under log-stiffness U[1, 1.2]^3, N = 31, unit load:
// 16^3-node tensor Gauss-Legendre over the dense model in
// tests/oracles/beam_oracle.py.

namespace ldcube::testing {

inline constexpr double kExpectedTip = 0.04172457747462164;
inline constexpr double kExpectedNode10 = 0.007394033522133872;
inline constexpr double kExpectedNode20 = 0.023360412101952763;

}  // namespace ldcube::testing
