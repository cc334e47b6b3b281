#pragma once

#include <array>
#include <cmath>

#include "gkdv/error.hpp"

namespace gkdv {

struct JacobiValues {
  double sn = 0.0;
  double cn = 1.0;
  double dn = 1.0;
};

/// Arithmetic-geometric mean of a, b >= 0.
inline double agm(double a, double b) {
  for (int i = 0; i < 64 && std::abs(a - b) > 1e-16 * a; ++i) {
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  return 0.5 * (a + b);
}

/// Complete elliptic integral of the first kind K(k), k the modulus.
inline double elliptic_K(double modulus) {
  if (!(modulus >= 0.0 && modulus < 1.0)) throw DomainError("elliptic_K: modulus outside [0,1)");
  return M_PI / (2.0 * agm(1.0, std::sqrt(1.0 - modulus * modulus)));
}

/// Jacobi elliptic functions sn, cn, dn at argument u for modulus k in [0,1],
/// by the descending AGM (Landen) sequence.
inline JacobiValues jacobi(double u, double modulus) {
  if (!(modulus >= 0.0 && modulus <= 1.0)) throw DomainError("jacobi: modulus outside [0,1]");
  const double m = modulus * modulus;
  if (m == 1.0) {
    const double s = 1.0 / std::cosh(u);
    return {std::tanh(u), s, s};
  }
  constexpr int max_levels = 16;
  std::array<double, max_levels + 1> a{}, c{};
  a[0] = 1.0;
  double b = std::sqrt(1.0 - m);
  c[0] = modulus;
  int N = 0;
  while (std::abs(c[N]) > 1e-17 && N < max_levels) {
    a[N + 1] = 0.5 * (a[N] + b);
    c[N + 1] = 0.5 * (a[N] - b);
    b = std::sqrt(a[N] * b);
    ++N;
  }
  double phi = std::ldexp(a[N] * u, N);
  for (int i = N; i > 0; --i) phi = 0.5 * (phi + std::asin(c[i] / a[i] * std::sin(phi)));
  const double sn = std::sin(phi);
  return {sn, std::cos(phi), std::sqrt(1.0 - m * sn * sn)};
}

}  // namespace gkdv
