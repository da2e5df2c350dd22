#pragma once

// Sign plus natural-log magnitude. Determinant factors such as
// 2^{n(n+1)} gamma^{n^2+3n+2} leave double range long before n = 400,
// so every product in the library is accumulated in this form.

#include <cmath>
#include <limits>
#include <ostream>
#include <span>

namespace arcdet {

struct LogSigned {
  int sign = 1;         // -1, 0 or +1
  double logmag = 0.0;  // ln|value|, meaningless when sign == 0

  static LogSigned from_real(double v) {
    if (v == 0.0) return {0, -std::numeric_limits<double>::infinity()};
    return {v > 0 ? 1 : -1, std::log(std::fabs(v))};
  }
  static LogSigned from_log(double logmag, int sign = 1) { return {sign, logmag}; }
  static LogSigned zero() { return {0, -std::numeric_limits<double>::infinity()}; }
  static LogSigned one() { return {1, 0.0}; }

  double to_real() const {
    if (sign == 0) return 0.0;
    return sign * std::exp(logmag);
  }
  bool is_zero() const { return sign == 0; }

  LogSigned& operator*=(const LogSigned& o) {
    if (sign == 0 || o.sign == 0) return *this = zero();
    sign *= o.sign;
    logmag += o.logmag;
    return *this;
  }
  LogSigned& operator/=(const LogSigned& o) {
    if (o.sign == 0) {
      // division by zero: keep the sign, send magnitude to +inf
      logmag = std::numeric_limits<double>::infinity();
      return *this;
    }
    if (sign == 0) return *this;
    sign *= o.sign;
    logmag -= o.logmag;
    return *this;
  }
  friend LogSigned operator*(LogSigned a, const LogSigned& b) { return a *= b; }
  friend LogSigned operator/(LogSigned a, const LogSigned& b) { return a /= b; }

  LogSigned pow(double p) const {
    if (sign == 0) return p > 0 ? zero() : LogSigned{1, std::numeric_limits<double>::infinity()};
    // negative bases only make sense for integer powers
    int s = sign;
    if (sign < 0 && std::fmod(std::fabs(p), 2.0) == 0.0) s = 1;
    return {s, logmag * p};
  }

  friend std::ostream& operator<<(std::ostream& os, const LogSigned& v) {
    return os << "(" << v.sign << ", " << v.logmag << ")";
  }
};

inline LogSigned log_product(std::span<const LogSigned> factors) {
  LogSigned acc = LogSigned::one();
  for (const auto& f : factors) acc *= f;
  return acc;
}

}  // namespace arcdet
