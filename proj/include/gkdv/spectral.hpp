#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include "gkdv/error.hpp"
#include "gkdv/fft.hpp"
#include "gkdv/grid.hpp"

namespace gkdv {

// ---------------------------------------------------------------------------
// Transforms
// ---------------------------------------------------------------------------

namespace detail {

inline double alternating_sign(std::ptrdiff_t k) { return (k % 2 == 0) ? 1.0 : -1.0; }

inline std::size_t bin_of(std::ptrdiff_t k, std::size_t m) {
  return k >= 0 ? static_cast<std::size_t>(k) : static_cast<std::size_t>(static_cast<std::ptrdiff_t>(m) + k);
}

}  // namespace detail

/// Fourier-series coefficients with c_j exp(i xi_j x) the plane-wave basis.
/// Discrete Parseval: ||u||_{L2}^2 = 2L sum |c_j|^2.
inline SpectralField transform(const PhysicalField& f) {
  const Grid& g = f.grid;
  const std::size_t n = g.n();
  if (f.values.size() != n) throw DomainError("transform: size mismatch");
  std::vector<complex> buf(n);
  for (std::size_t j = 0; j < n; ++j) buf[j] = f.values[j];
  auto out = fft::forward(std::move(buf));
  const double inv = 1.0 / static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j) out[j] *= inv * detail::alternating_sign(g.index(j));
  return SpectralField(g, std::move(out));
}

/// Complex samples of the series on the grid points.
inline std::vector<complex> inverse_transform_complex(const SpectralField& F) {
  const Grid& g = F.grid;
  std::vector<complex> buf(F.coeffs);
  for (std::size_t j = 0; j < g.n(); ++j) buf[j] *= detail::alternating_sign(g.index(j));
  return fft::backward(std::move(buf));
}

/// Real part of the synthesized series.
inline PhysicalField inverse_transform(const SpectralField& F) {
  if (F.coeffs.size() != F.grid.n()) throw DomainError("inverse_transform: size mismatch");
  auto vals = inverse_transform_complex(F);
  PhysicalField f(F.grid);
  for (std::size_t j = 0; j < vals.size(); ++j) f.values[j] = vals[j].real();
  return f;
}

/// Samples of the series on an m-point grid of the same period (m >= n).
/// The Nyquist coefficient keeps its negative wavenumber.
inline std::vector<complex> evaluate_padded(const SpectralField& F, std::size_t m) {
  const Grid& g = F.grid;
  if (m < g.n()) throw DomainError("evaluate_padded: target smaller than source");
  std::vector<complex> buf(m, complex{});
  for (std::size_t j = 0; j < g.n(); ++j) {
    const auto k = g.index(j);
    buf[detail::bin_of(k, m)] = F.coeffs[j] * detail::alternating_sign(k);
  }
  return fft::backward(std::move(buf));
}

/// Coefficients of m-point samples, truncated to the bins of grid g.
inline SpectralField project_padded(std::vector<complex> values, const Grid& g) {
  const std::size_t m = values.size();
  auto spec = fft::forward(std::move(values));
  SpectralField F(g);
  const double inv = 1.0 / static_cast<double>(m);
  for (std::size_t j = 0; j < g.n(); ++j) {
    const auto k = g.index(j);
    F.coeffs[j] = spec[detail::bin_of(k, m)] * inv * detail::alternating_sign(k);
  }
  return F;
}

/// Largest |c_j| above two thirds of the resolved band relative to the
/// largest |c_j| overall; 0 for the zero field.
inline double spectral_tail(const SpectralField& F) {
  double peak = 0.0, tail = 0.0;
  const double cut = 2.0 * F.grid.xi_max() / 3.0;
  for (std::size_t j = 0; j < F.size(); ++j) {
    const double a = std::abs(F.coeffs[j]);
    peak = std::max(peak, a);
    if (std::abs(F.grid.xi(j)) > cut) tail = std::max(tail, a);
  }
  return peak > 0.0 ? tail / peak : 0.0;
}

inline double spectral_tail(const PhysicalField& f) { return spectral_tail(transform(f)); }

/// Throws UnresolvedFieldError when the tail exceeds the threshold.
inline void require_resolved(const PhysicalField& f, double threshold, const std::string& what) {
  const double tail = spectral_tail(f);
  if (!(tail <= threshold)) throw UnresolvedFieldError(what + " (spectral tail " + detail::sci(tail) + ")", tail);
}

// ---------------------------------------------------------------------------
// Fourier multipliers
// ---------------------------------------------------------------------------

/// Symbols that are real and even in xi keep the Nyquist bin; all others zero
/// it, since a lone Nyquist bin cannot carry an odd or complex symbol and
/// stay real.
enum class NyquistRule { keep, zero };

template <class Symbol>
SpectralField apply_symbol(SpectralField F, Symbol&& symbol, NyquistRule rule) {
  const Grid& g = F.grid;
  for (std::size_t j = 0; j < g.n(); ++j) {
    if (j == g.nyquist() && rule == NyquistRule::zero) {
      F.coeffs[j] = 0.0;
      continue;
    }
    F.coeffs[j] *= symbol(g.xi(j));
  }
  return F;
}

/// Multiplies bin j by (i xi_j)^order, order in {1,2,3}.
inline SpectralField spatial_derivative(const SpectralField& F, int order) {
  if (order < 1 || order > 3) throw DomainError("spatial_derivative: order must be 1, 2 or 3");
  const auto rule = order % 2 == 1 ? NyquistRule::zero : NyquistRule::keep;
  return apply_symbol(
      F, [order](double xi) { return std::pow(complex(0.0, xi), order); }, rule);
}

inline PhysicalField spatial_derivative(const PhysicalField& f, int order) {
  return inverse_transform(spatial_derivative(transform(f), order));
}

/// J^s: multiplier (1 + xi^2)^{s/2}.
inline SpectralField bessel_potential(const SpectralField& F, double s) {
  return apply_symbol(
      F, [s](double xi) { return complex(std::pow(1.0 + xi * xi, 0.5 * s)); }, NyquistRule::keep);
}

/// D^s: multiplier |xi|^s; the zero mode is annihilated for every s != 0.
inline SpectralField riesz_potential(const SpectralField& F, double s) {
  return apply_symbol(
      F,
      [s](double xi) {
        if (s == 0.0) return complex(1.0);
        return xi == 0.0 ? complex(0.0) : complex(std::pow(std::abs(xi), s));
      },
      NyquistRule::keep);
}

/// Airy group U(t): multiplier exp(i t xi^3).
inline SpectralField airy_propagate(const SpectralField& F, double t) {
  return apply_symbol(
      F, [t](double xi) { return std::exp(complex(0.0, t * xi * xi * xi)); }, NyquistRule::zero);
}

/// W_mu(t) = exp((mu d_x^2 - d_x^3) t): multiplier exp((i xi^3 - mu xi^2) t).
inline SpectralField dissipative_propagate(const SpectralField& F, double t, double mu) {
  if (mu < 0.0) throw DomainError("dissipative_propagate: mu must be non-negative");
  if (mu > 0.0 && t < 0.0) throw DomainError("dissipative_propagate: negative time with mu > 0");
  if (mu == 0.0) return airy_propagate(F, t);
  return apply_symbol(
      F,
      [t, mu](double xi) { return std::exp(complex(-mu * xi * xi * t, t * xi * xi * xi)); },
      NyquistRule::zero);
}

/// sup over xi of (1 + xi^2)^{r/2} e^{-mu t xi^2}, closed form in y = xi^2.
inline double smoothing_symbol_sup(double r, double mu, double t) {
  if (r < 0.0) throw DomainError("smoothing_symbol_sup: r must be non-negative");
  const double a = mu * t;
  if (!(a > 0.0)) throw DomainError("smoothing_symbol_sup: mu t must be positive");
  const double y = r / (2.0 * a) - 1.0;
  if (y <= 0.0) return 1.0;
  return std::exp(0.5 * r * std::log(r / (2.0 * a)) + a - 0.5 * r);
}

/// Ratio of the symbol sup to (1 + (2 mu t)^{-r})^{1/2}.
inline double smoothing_ratio(double r, double mu, double t) {
  const double a = mu * t;
  const double lg = -r * std::log(2.0 * a);  // log of (2a)^{-r}
  const double log_den = 0.5 * (lg > 0.0 ? lg + std::log1p(std::exp(-lg)) : std::log1p(std::exp(lg)));
  return std::exp(std::log(smoothing_symbol_sup(r, mu, t)) - log_den);
}

/// C_r: the sup of smoothing_ratio over mu t > 0. Log-spaced scan then a
/// golden-section refinement around the best sample.
inline double smoothing_constant(double r) {
  auto f = [r](double la) { return smoothing_ratio(r, std::exp(la), 1.0); };
  const double lo = std::log(1e-10), hi = std::log(1e10);
  const int samples = 4001;
  double best = lo, fbest = f(lo);
  const double step = (hi - lo) / (samples - 1);
  for (int i = 1; i < samples; ++i) {
    const double la = lo + step * i;
    const double v = f(la);
    if (v > fbest) fbest = v, best = la;
  }
  double a = best - step, b = best + step;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 80; ++it) {
    const double c = b - g * (b - a), d = a + g * (b - a);
    if (f(c) > f(d)) b = d;
    else a = c;
  }
  return std::max(fbest, f(0.5 * (a + b)));
}

// ---------------------------------------------------------------------------
// Littlewood-Paley machinery
// ---------------------------------------------------------------------------

namespace detail {

inline double glue(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

}  // namespace detail

/// Even C-infinity cutoff: 1 on |xi| <= 1, 0 on |xi| >= 2, monotone between.
inline double cutoff_eta(double xi) {
  const double a = std::abs(xi);
  if (a <= 1.0) return 1.0;
  if (a >= 2.0) return 0.0;
  const double up = detail::glue(2.0 - a);
  return up / (up + detail::glue(a - 1.0));
}

/// phi(xi) = eta(xi) - eta(2 xi), supported in 1/2 <= |xi| <= 2.
inline double cutoff_phi(double xi) { return cutoff_eta(xi) - cutoff_eta(2.0 * xi); }

/// phi_N(xi) = phi(xi / N).
inline double dyadic_phi(double xi, double N) { return cutoff_phi(xi / N); }

/// Finite dyadic family {2^l : l_min <= l <= l_max} resolving a grid.
///
/// l_max is the largest exponent with 2^l <= 2 xi_max; l_min is the largest
/// with 2^l <= pi/L, so the residual low block eta(2 xi / N_min) holds only
/// the zero mode.
struct DyadicBand {
  int l_min = 0;
  int l_max = 0;

  static DyadicBand for_grid(const Grid& g) {
    DyadicBand b;
    b.l_max = static_cast<int>(std::floor(std::log2(2.0 * g.xi_max()) + 1e-12));
    b.l_min = static_cast<int>(std::floor(std::log2(g.dxi()) + 1e-12));
    return b;
  }

  double N(int l) const { return std::ldexp(1.0, l); }
  double N_min() const { return N(l_min); }
  double N_max() const { return N(l_max); }
  std::size_t size() const { return static_cast<std::size_t>(l_max - l_min + 1); }
  std::vector<double> levels() const {
    std::vector<double> v;
    for (int l = l_min; l <= l_max; ++l) v.push_back(N(l));
    return v;
  }
  bool contains(double Nq) const {
    const double l = std::log2(Nq);
    return std::abs(l - std::round(l)) < 1e-12 && l >= l_min - 1e-12 && l <= l_max + 1e-12;
  }
  /// Multiplier of the residual low block.
  double low_symbol(double xi) const { return cutoff_eta(2.0 * xi / N_min()); }
};

/// P_N: multiplier phi_N.
inline SpectralField lp_project(const SpectralField& F, double N) {
  if (!(N > 0.0)) throw DomainError("lp_project: N must be positive");
  return apply_symbol(F, [N](double xi) { return complex(dyadic_phi(xi, N)); }, NyquistRule::keep);
}

/// P_{<=N}: multiplier eta(xi / N), the sum of all P_M with M <= N
/// (the zero mode included).
inline SpectralField lp_project_below(const SpectralField& F, double N) {
  if (!(N > 0.0)) throw DomainError("lp_project_below: N must be positive");
  return apply_symbol(F, [N](double xi) { return complex(cutoff_eta(xi / N)); }, NyquistRule::keep);
}

/// Residual low block of the grid band.
inline SpectralField lp_project_low(const SpectralField& F, const DyadicBand& band) {
  return apply_symbol(F, [&band](double xi) { return complex(band.low_symbol(xi)); }, NyquistRule::keep);
}

// ---------------------------------------------------------------------------
// Products
// ---------------------------------------------------------------------------

/// Alias-free product of two series, truncated to the source bins.
inline SpectralField dealiased_product(const SpectralField& f, const SpectralField& g) {
  require_same_grid(f.grid, g.grid, "dealiased_product");
  const std::size_t m = 3 * f.grid.n() / 2;
  auto a = evaluate_padded(f, m);
  auto b = evaluate_padded(g, m);
  for (std::size_t j = 0; j < m; ++j) a[j] *= b[j];
  return project_padded(std::move(a), f.grid);
}

/// Pseudoproduct: bin xi holds sum_{xi1} f(xi1) g(xi - xi1) chi(xi, xi1),
/// over all pairs whose sum lands on a grid bin (no aliasing).
///
/// Coefficients are Fourier-series amplitudes, so the Riemann-sum weight of
/// the continuous definition is already absorbed; chi = 1 gives f g.
inline SpectralField pseudoproduct(const SpectralField& f, const SpectralField& g,
                                   const std::function<complex(double, double)>& chi) {
  require_same_grid(f.grid, g.grid, "pseudoproduct");
  const Grid& grid = f.grid;
  const auto n = static_cast<std::ptrdiff_t>(grid.n());
  SpectralField out(grid);
  for (std::size_t j1 = 0; j1 < grid.n(); ++j1) {
    if (f.coeffs[j1] == complex{}) continue;
    const auto k1 = grid.index(j1);
    const double xi1 = grid.xi(j1);
    for (std::size_t j2 = 0; j2 < grid.n(); ++j2) {
      const auto k = k1 + grid.index(j2);
      if (k < -n / 2 || k >= n / 2) continue;
      const std::size_t j = detail::bin_of(k, grid.n());
      out.coeffs[j] += f.coeffs[j1] * g.coeffs[j2] * chi(grid.xi(j), xi1);
    }
  }
  return out;
}

/// Integral over [-L, L) of the product of two real series: 2L sum c_j d_{-j}.
inline complex pairing(const SpectralField& a, const SpectralField& b) {
  require_same_grid(a.grid, b.grid, "pairing");
  const std::size_t n = a.grid.n();
  complex acc{};
  for (std::size_t j = 0; j < n; ++j) {
    const auto k = a.grid.index(j);
    if (k == -static_cast<std::ptrdiff_t>(n / 2)) continue;  // partner bin not representable
    acc += a.coeffs[j] * b.coeffs[detail::bin_of(-k, n)];
  }
  return 2.0 * a.grid.L() * acc;
}

/// L2 norm by Parseval.
inline double l2_norm(const SpectralField& F) {
  double s = 0.0;
  for (const auto& c : F.coeffs) s += std::norm(c);
  return std::sqrt(2.0 * F.grid.L() * s);
}

inline double l2_norm(const PhysicalField& f) {
  double s = 0.0;
  for (double v : f.values) s += v * v;
  return std::sqrt(f.grid.dx() * s);
}

// ---------------------------------------------------------------------------
// Boundary handling
// ---------------------------------------------------------------------------

/// Smooth taper: ~1 on |x| <= (1 - fraction) L, ~0 (below 1e-16) at |x| = L,
/// built from two error functions of width fraction L / 12.
inline double boundary_taper(double x, double L, double fraction) {
  const double a = L * (1.0 - 0.5 * fraction);
  const double sigma = L * fraction / 12.0;
  return 0.5 * (std::erf((x + a) / sigma) - std::erf((x - a) / sigma));
}

/// Fraction of the L2 mass carried in the strip |x| > (1 - fraction) L.
inline double boundary_mass_fraction(const PhysicalField& f, double fraction) {
  const double edge = (1.0 - fraction) * f.grid.L();
  double total = 0.0, strip = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) {
    const double v2 = f.values[j] * f.values[j];
    total += v2;
    if (std::abs(f.grid.x(j)) > edge) strip += v2;
  }
  return total > 0.0 ? strip / total : 0.0;
}

}  // namespace gkdv
