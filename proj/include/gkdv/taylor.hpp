#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace gkdv {

/// Truncated Taylor series in one variable, c[k] = f^(k)(x0) / k!.
///
/// Used to differentiate closed-form backgrounds exactly to third order
/// without hand-expanding every derivative.
template <std::size_t N>
struct Taylor {
  std::array<double, N + 1> c{};

  static Taylor constant(double v) {
    Taylor t;
    t.c[0] = v;
    return t;
  }
  static Taylor variable(double x0) {
    Taylor t;
    t.c[0] = x0;
    if constexpr (N >= 1) t.c[1] = 1.0;
    return t;
  }

  double value() const { return c[0]; }
  /// k-th derivative at the expansion point.
  double derivative(std::size_t k) const {
    double fact = 1.0;
    for (std::size_t i = 2; i <= k; ++i) fact *= static_cast<double>(i);
    return c[k] * fact;
  }

  Taylor& operator+=(const Taylor& o) {
    for (std::size_t k = 0; k <= N; ++k) c[k] += o.c[k];
    return *this;
  }
  Taylor& operator-=(const Taylor& o) {
    for (std::size_t k = 0; k <= N; ++k) c[k] -= o.c[k];
    return *this;
  }
  Taylor& operator*=(double s) {
    for (auto& v : c) v *= s;
    return *this;
  }
};

template <std::size_t N>
Taylor<N> operator+(Taylor<N> a, const Taylor<N>& b) { return a += b; }
template <std::size_t N>
Taylor<N> operator-(Taylor<N> a, const Taylor<N>& b) { return a -= b; }
template <std::size_t N>
Taylor<N> operator-(Taylor<N> a) { return a *= -1.0; }
template <std::size_t N>
Taylor<N> operator*(Taylor<N> a, double s) { return a *= s; }
template <std::size_t N>
Taylor<N> operator*(double s, Taylor<N> a) { return a *= s; }
template <std::size_t N>
Taylor<N> operator+(Taylor<N> a, double s) { a.c[0] += s; return a; }
template <std::size_t N>
Taylor<N> operator+(double s, Taylor<N> a) { a.c[0] += s; return a; }
template <std::size_t N>
Taylor<N> operator-(Taylor<N> a, double s) { a.c[0] -= s; return a; }
template <std::size_t N>
Taylor<N> operator-(double s, Taylor<N> a) { a *= -1.0; a.c[0] += s; return a; }

template <std::size_t N>
Taylor<N> operator*(const Taylor<N>& a, const Taylor<N>& b) {
  Taylor<N> r;
  for (std::size_t k = 0; k <= N; ++k)
    for (std::size_t j = 0; j <= k; ++j) r.c[k] += a.c[j] * b.c[k - j];
  return r;
}

template <std::size_t N>
Taylor<N> operator/(const Taylor<N>& a, const Taylor<N>& b) {
  Taylor<N> r;
  for (std::size_t k = 0; k <= N; ++k) {
    double s = a.c[k];
    for (std::size_t j = 1; j <= k; ++j) s -= b.c[j] * r.c[k - j];
    r.c[k] = s / b.c[0];
  }
  return r;
}

template <std::size_t N>
Taylor<N> exp(const Taylor<N>& a) {
  Taylor<N> e;
  e.c[0] = std::exp(a.c[0]);
  for (std::size_t k = 1; k <= N; ++k) {
    double s = 0.0;
    for (std::size_t j = 1; j <= k; ++j) s += static_cast<double>(j) * a.c[j] * e.c[k - j];
    e.c[k] = s / static_cast<double>(k);
  }
  return e;
}

template <std::size_t N>
Taylor<N> log(const Taylor<N>& a) {
  Taylor<N> l;
  l.c[0] = std::log(a.c[0]);
  for (std::size_t k = 1; k <= N; ++k) {
    double s = 0.0;
    for (std::size_t j = 1; j < k; ++j) s += static_cast<double>(j) * l.c[j] * a.c[k - j];
    l.c[k] = (a.c[k] - s / static_cast<double>(k)) / a.c[0];
  }
  return l;
}

template <std::size_t N>
void sincos(const Taylor<N>& a, Taylor<N>& s, Taylor<N>& co) {
  s = Taylor<N>{};
  co = Taylor<N>{};
  s.c[0] = std::sin(a.c[0]);
  co.c[0] = std::cos(a.c[0]);
  for (std::size_t k = 1; k <= N; ++k) {
    double ss = 0.0, cc = 0.0;
    for (std::size_t j = 1; j <= k; ++j) {
      ss += static_cast<double>(j) * a.c[j] * co.c[k - j];
      cc -= static_cast<double>(j) * a.c[j] * s.c[k - j];
    }
    s.c[k] = ss / static_cast<double>(k);
    co.c[k] = cc / static_cast<double>(k);
  }
}

template <std::size_t N>
Taylor<N> sin(const Taylor<N>& a) {
  Taylor<N> s, c;
  sincos(a, s, c);
  return s;
}

template <std::size_t N>
Taylor<N> cos(const Taylor<N>& a) {
  Taylor<N> s, c;
  sincos(a, s, c);
  return c;
}

// tanh' = (1 - tanh^2) a'
template <std::size_t N>
Taylor<N> tanh(const Taylor<N>& a) {
  Taylor<N> t, d;
  t.c[0] = std::tanh(a.c[0]);
  d.c[0] = 1.0 - t.c[0] * t.c[0];
  for (std::size_t k = 1; k <= N; ++k) {
    double s = 0.0;
    for (std::size_t j = 1; j <= k; ++j) s += static_cast<double>(j) * a.c[j] * d.c[k - j];
    t.c[k] = s / static_cast<double>(k);
    double sq = 0.0;
    for (std::size_t i = 0; i <= k; ++i) sq += t.c[i] * t.c[k - i];
    d.c[k] = -sq;
  }
  return t;
}

// Scalar overloads so closed-form profiles can be written once as templates.
inline double tanh(double x) { return std::tanh(x); }
inline double cos(double x) { return std::cos(x); }
inline double sin(double x) { return std::sin(x); }
inline double log(double x) { return std::log(x); }
inline double exp(double x) { return std::exp(x); }

}  // namespace gkdv
