#pragma once

#include <cmath>

namespace arcdet {

/// zeta'(-1) = 1/12 - ln A, A = 1.28242712910062263687534... (Glaisher-Kinkelin).
inline constexpr double kZetaPrimeMinusOne = -0.165421143700450929;

/// 2^{1/12} exp(3 zeta'(-1)), the constant in the arc-Toeplitz and
/// sine-kernel determinant asymptotics.
inline double widom_constant() { return std::exp(std::log(2.0) / 12.0 + 3.0 * kZetaPrimeMinusOne); }

}  // namespace arcdet
