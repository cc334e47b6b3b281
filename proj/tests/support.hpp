#pragma once

// Shared fixtures and independent oracles for the unit tests.

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "gkdv/gkdv.hpp"

namespace gkdv::testing {

inline PhysicalField gaussian(const Grid& g, double amplitude = 1.0, double width = 1.0, double center = 0.0) {
  return PhysicalField::sample(g, [&](double x) {
    const double z = (x - center) / width;
    return amplitude * std::exp(-z * z);
  });
}

/// Smooth random field: random modes on |xi| <= kmax under a Gaussian bump.
inline PhysicalField random_smooth(const Grid& g, std::mt19937_64& rng, double kmax = 4.0) {
  std::normal_distribution<double> nd;
  std::vector<double> a, b, k;
  for (std::size_t j = 1; j < g.n() / 2 && g.xi(j) <= kmax; ++j) {
    k.push_back(g.xi(j));
    a.push_back(nd(rng));
    b.push_back(nd(rng));
  }
  const double c0 = nd(rng);
  return PhysicalField::sample(g, [&](double x) {
    double v = c0;
    for (std::size_t i = 0; i < k.size(); ++i) v += a[i] * std::cos(k[i] * x) + b[i] * std::sin(k[i] * x);
    return v * std::exp(-x * x / 16.0);
  });
}

/// Composite Simpson rule with 2m panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int m = 20000) {
  const double h = (b - a) / (2.0 * m);
  double s = f(a) + f(b);
  for (int i = 1; i < 2 * m; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

/// Fourth-order central difference.
inline double central_diff(const std::function<double(double)>& f, double x, double h) {
  return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h);
}

inline double max_abs_diff(const PhysicalField& a, const PhysicalField& b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a.values[j] - b.values[j]));
  return m;
}

inline double max_abs_diff(const SpectralField& a, const SpectralField& b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a.coeffs[j] - b.coeffs[j]));
  return m;
}

}  // namespace gkdv::testing
