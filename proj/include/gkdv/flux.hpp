#pragma once

#include <cmath>
#include <vector>

#include "gkdv/background.hpp"
#include "gkdv/grid.hpp"
#include "gkdv/nonlinearity.hpp"
#include "gkdv/spectral.hpp"

namespace gkdv {

/// Padded length that makes a degree-d polynomial flux alias-free, or 0 when
/// the pointwise-plus-low-pass rule applies instead.
inline std::size_t flux_padding(const AnalyticNonlinearity& nl, std::size_t n) {
  if (!nl.is_polynomial()) return 0;
  const std::size_t d = nl.degree();
  if (d <= 1) return n;
  if (d > 3) return 0;
  return n * (d + 1) / 2;
}

/// w Psi(t) on the m-point lattice of [-L, L), w the boundary taper. The
/// flux sees this blended background: a non-periodic Psi (kinks, Synthetic)
/// would otherwise put a jump at the seam x = +-L into Psi u. w = 1 to
/// rounding on |x| <= (1 - fraction) L.
inline std::vector<double> flux_background_samples(const BackgroundField& bg, double t, double L, std::size_t m,
                                                   double fraction = default_taper_fraction) {
  std::vector<double> psi(m, 0.0);
  if (bg.is_zero()) return psi;
  const double dxm = 2.0 * L / static_cast<double>(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double x = -L + static_cast<double>(j) * dxm;
    psi[j] = boundary_taper(x, L, fraction) * bg.eval(t, x);
  }
  return psi;
}

/// Coefficients of f(u + w Psi(t)) - f(w Psi(t)) truncated to the grid band.
///
/// Polynomial f of degree <= 3: u is evaluated on a padded grid where Psi is
/// sampled directly, so the truncated product carries no aliasing from the
/// powers of u. Other f: pointwise evaluation followed by a low-pass that
/// keeps |xi| <= 2 xi_max / 3. The Nyquist bin of the input and output is
/// zeroed.
inline SpectralField nonlinear_flux_spectral(const SpectralField& U, const BackgroundField& bg,
                                             const AnalyticNonlinearity& nl, double t,
                                             double fraction = default_taper_fraction) {
  const Grid& g = U.grid;
  const std::size_t n = g.n();
  const std::size_t m = flux_padding(nl, n);
  if (m != 0) {
    SpectralField Uc = U;
    Uc.coeffs[g.nyquist()] = 0.0;
    auto u = evaluate_padded(Uc, m);
    const auto psi = flux_background_samples(bg, t, g.L(), m, fraction);
    for (std::size_t j = 0; j < m; ++j) u[j] = nl.difference(psi[j], u[j].real());
    auto out = project_padded(std::move(u), g);
    out.coeffs[g.nyquist()] = 0.0;
    return out;
  }
  SpectralField Uc = U;
  Uc.coeffs[g.nyquist()] = 0.0;
  auto u = inverse_transform(Uc);
  const auto psi = flux_background_samples(bg, t, g.L(), n, fraction);
  for (std::size_t j = 0; j < n; ++j) u.values[j] = nl.difference(psi[j], u.values[j]);
  auto out = transform(u);
  const double cut = 2.0 * g.xi_max() / 3.0;
  for (std::size_t j = 0; j < n; ++j)
    if (std::abs(g.xi(j)) > cut) out.coeffs[j] = 0.0;
  return out;
}

/// f(u + w Psi(t, .)) - f(w Psi(t, .)) on the grid, after checking that u
/// is resolved.
inline PhysicalField nonlinear_flux(const PhysicalField& u, const BackgroundField& bg,
                                    const AnalyticNonlinearity& nl, double t, double tail_threshold = 1e-10,
                                    double fraction = default_taper_fraction) {
  auto U = transform(u);
  const double tail = spectral_tail(U);
  if (!(tail <= tail_threshold)) throw UnresolvedFieldError("nonlinear_flux input", tail);
  return inverse_transform(nonlinear_flux_spectral(U, bg, nl, t, fraction));
}

}  // namespace gkdv
