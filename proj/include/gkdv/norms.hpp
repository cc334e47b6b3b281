#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

#include "gkdv/error.hpp"
#include "gkdv/fft.hpp"
#include "gkdv/grid.hpp"
#include "gkdv/spectral.hpp"

namespace gkdv {

// ---------------------------------------------------------------------------
// Spatial norms
// ---------------------------------------------------------------------------

/// ||J^s f||_{L^2}.
inline double sobolev_norm(const SpectralField& F, double s) {
  double acc = 0.0;
  for (std::size_t j = 0; j < F.size(); ++j) {
    const double xi = F.grid.xi(j);
    acc += std::pow(1.0 + xi * xi, s) * std::norm(F.coeffs[j]);
  }
  return std::sqrt(2.0 * F.grid.L() * acc);
}

inline double sobolev_norm(const PhysicalField& f, double s) { return sobolev_norm(transform(f), s); }

/// Dyadic envelope omega_N, either identically 1 or (N / N_min)^epsilon.
class WeightSequence {
 public:
  static WeightSequence constant() { return WeightSequence(0.0); }
  static WeightSequence power(double epsilon) {
    if (!(epsilon >= 0.0)) throw ConfigError("envelope exponent must be non-negative");
    return WeightSequence(epsilon);
  }

  double epsilon() const noexcept { return eps_; }
  bool is_constant() const noexcept { return eps_ == 0.0; }

  /// omega_N relative to the lowest level N_min of the band.
  double operator()(double N, double N_min) const { return eps_ == 0.0 ? 1.0 : std::pow(N / N_min, eps_); }

 private:
  explicit WeightSequence(double eps) : eps_(eps) {}
  double eps_;
};

/// ||f||_{H^s_omega}^2 = sum_N omega_N^2 ||P_N f||_{H^s}^2 + ||P_low f||_{H^s}^2
/// over the grid band; the low block carries weight 1.
inline double enveloped_norm(const SpectralField& F, double s, const WeightSequence& w) {
  const auto band = DyadicBand::for_grid(F.grid);
  double acc = 0.0;
  for (std::size_t j = 0; j < F.size(); ++j) {
    const double xi = F.grid.xi(j);
    const double a2 = std::norm(F.coeffs[j]) * std::pow(1.0 + xi * xi, s);
    if (a2 == 0.0) continue;
    const double low = band.low_symbol(xi);
    double sum = low * low;
    for (int l = band.l_min; l <= band.l_max; ++l) {
      const double N = band.N(l);
      const double p = dyadic_phi(xi, N);
      if (p != 0.0) sum += w(N, band.N_min()) * w(N, band.N_min()) * p * p;
    }
    acc += sum * a2;
  }
  return std::sqrt(2.0 * F.grid.L() * acc);
}

inline double enveloped_norm(const PhysicalField& f, double s, const WeightSequence& w) {
  return enveloped_norm(transform(f), s, w);
}

/// (c1, c2) with c1 ||f||_{H^s} <= ||f||_{H^s_1} <= c2 ||f||_{H^s} on the
/// grid: square roots of the extrema of the overlap sum over the band.
inline std::pair<double, double> enveloped_comparison_constants(const Grid& g) {
  const auto band = DyadicBand::for_grid(g);
  double lo = INFINITY, hi = 0.0;
  for (std::size_t j = 0; j < g.n(); ++j) {
    const double xi = g.xi(j);
    double sum = band.low_symbol(xi) * band.low_symbol(xi);
    for (int l = band.l_min; l <= band.l_max; ++l) sum += std::pow(dyadic_phi(xi, band.N(l)), 2);
    lo = std::min(lo, sum);
    hi = std::max(hi, sum);
  }
  return {std::sqrt(lo), std::sqrt(hi)};
}

// ---------------------------------------------------------------------------
// Space-time machinery
// ---------------------------------------------------------------------------

/// Space-time coefficients of a trajectory in the interaction picture:
/// v(t) = U(-t) u(t) expanded as sum_k a_{k}(xi) exp(i sigma_k t), with the
/// stored window taken as one period P = (frame count) dt. Since
/// u-tilde(tau, xi) = v-tilde(tau - xi^3, xi), sigma is the modulation
/// tau - xi^3 exactly, with no temporal aliasing of the dispersive phase.
struct ModulationSpectrum {
  Grid grid;
  double t0 = 0.0, dt = 0.0, period = 0.0;
  std::size_t frames = 0;
  /// coeffs[k * n + j]: temporal bin k (FFT order), spatial bin j.
  std::vector<complex> coeffs;

  double sigma(std::size_t k) const {
    const auto kk = k < frames / 2 ? static_cast<double>(k) : static_cast<double>(k) - static_cast<double>(frames);
    return 2.0 * M_PI * kk / period;
  }
  double max_sigma() const { return 2.0 * M_PI * static_cast<double>(frames / 2) / period; }
};

inline ModulationSpectrum modulation_spectrum(const Trajectory& traj) {
  if (traj.empty()) throw DomainError("space-time transform of an empty trajectory");
  ModulationSpectrum M;
  M.grid = traj.grid;
  M.t0 = traj.t0;
  M.dt = traj.dt;
  M.frames = traj.size();
  M.period = static_cast<double>(M.frames) * traj.dt;
  const std::size_t n = traj.grid.n(), F = M.frames;
  M.coeffs.assign(F * n, complex{});
  std::vector<SpectralField> V;
  V.reserve(F);
  for (std::size_t m = 0; m < F; ++m) V.push_back(airy_propagate(transform(traj[m]), -traj.time(m)));
  std::vector<complex> line(F);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t m = 0; m < F; ++m) line[m] = V[m].coeffs[j];
    auto spec = fft::forward(line);
    for (std::size_t k = 0; k < F; ++k) {
      // Phase referenced to t = 0 so that a_k exp(i sigma_k t) reproduces v(t).
      const double ph = -2.0 * M_PI * (k < F / 2 ? double(k) : double(k) - double(F)) * traj.t0 / M.period;
      M.coeffs[k * n + j] = spec[k] / static_cast<double>(F) * std::exp(complex(0.0, ph));
    }
  }
  return M;
}

/// Trajectory on the same lattice from a modulation spectrum.
inline Trajectory synthesize(const ModulationSpectrum& M) {
  const std::size_t n = M.grid.n(), F = M.frames;
  Trajectory out(M.grid, M.t0, M.dt);
  std::vector<std::vector<complex>> V(F, std::vector<complex>(n));
  std::vector<complex> line(F);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < F; ++k) {
      const double ph = 2.0 * M_PI * (k < F / 2 ? double(k) : double(k) - double(F)) * M.t0 / M.period;
      line[k] = M.coeffs[k * n + j] * std::exp(complex(0.0, ph));
    }
    auto vals = fft::backward(line);
    for (std::size_t m = 0; m < F; ++m) V[m][j] = vals[m];
  }
  for (std::size_t m = 0; m < F; ++m) {
    SpectralField Vm(M.grid, std::move(V[m]));
    out.push_back(inverse_transform(airy_propagate(Vm, M.t0 + static_cast<double>(m) * M.dt)));
  }
  return out;
}

/// Largest |u| over the first and last frames relative to the peak.
inline double temporal_edge_ratio(const Trajectory& traj) {
  double peak = 0.0;
  for (const auto& f : traj.frames) peak = std::max(peak, f.max_abs());
  if (peak == 0.0) return 0.0;
  return std::max(traj.frames.front().max_abs(), traj.frames.back().max_abs()) / peak;
}

inline void require_temporal_decay(const Trajectory& traj, double tolerance = 1e-10) {
  const double r = temporal_edge_ratio(traj);
  if (!(r <= tolerance))
    throw DomainError("trajectory does not decay at the window ends (ratio " + std::to_string(r) +
                      "); extend it with rho_T first");
}

/// X^{s,b} norm: (sum (1+|sigma|)^{2b} (1+|xi|)^{2s} |a|^2 P 2L)^{1/2}.
inline double bourgain_norm(const Trajectory& traj, double s, double b, double decay_tolerance = 1e-10) {
  require_temporal_decay(traj, decay_tolerance);
  const auto M = modulation_spectrum(traj);
  const std::size_t n = M.grid.n();
  double acc = 0.0;
  for (std::size_t k = 0; k < M.frames; ++k) {
    const double wt = std::pow(1.0 + std::abs(M.sigma(k)), 2.0 * b);
    for (std::size_t j = 0; j < n; ++j) {
      const double ws = std::pow(1.0 + std::abs(M.grid.xi(j)), 2.0 * s);
      acc += wt * ws * std::norm(M.coeffs[k * n + j]);
    }
  }
  return std::sqrt(acc * M.period * 2.0 * M.grid.L());
}

/// L^2_t H^s over the stored window (rectangle rule over the period) with the
/// spatial weight (1+|xi|)^{2s} used by the X^{s,b} norm.
inline double l2t_hs(const Trajectory& traj, double s) {
  double acc = 0.0;
  for (const auto& f : traj.frames) {
    const auto F = transform(f);
    for (std::size_t j = 0; j < F.size(); ++j)
      acc += std::pow(1.0 + std::abs(F.grid.xi(j)), 2.0 * s) * std::norm(F.coeffs[j]);
  }
  return std::sqrt(acc * traj.dt * 2.0 * traj.grid.L());
}

/// Non-homogeneous modulation levels 1, 2, 4, ... up to the first level whose
/// cumulative cutoff covers every lattice modulation.
inline std::vector<double> modulation_levels(const Trajectory& traj) {
  const double sigma_max = 2.0 * M_PI * static_cast<double>(traj.size() / 2) / (static_cast<double>(traj.size()) * traj.dt);
  std::vector<double> L{1.0};
  while (L.back() < sigma_max) L.push_back(2.0 * L.back());
  return L;
}

/// psi_L(sigma): eta(sigma) for L = 1, phi_L(sigma) for L >= 2.
inline double modulation_symbol(double sigma, double L) {
  return L <= 1.0 ? cutoff_eta(sigma) : dyadic_phi(sigma, L);
}

/// Q_L: space-time multiplier psi_L(tau - xi^3).
inline Trajectory modulation_project(const Trajectory& traj, double L, double decay_tolerance = 1e-10) {
  require_temporal_decay(traj, decay_tolerance);
  auto M = modulation_spectrum(traj);
  const std::size_t n = M.grid.n();
  for (std::size_t k = 0; k < M.frames; ++k) {
    const double w = modulation_symbol(M.sigma(k), L);
    for (std::size_t j = 0; j < n; ++j) M.coeffs[k * n + j] *= w;
  }
  return synthesize(M);
}

/// Space-time L^2 mass per modulation level (same order as modulation_levels).
inline std::vector<double> modulation_mass(const Trajectory& traj) {
  const auto M = modulation_spectrum(traj);
  const auto levels = modulation_levels(traj);
  const std::size_t n = M.grid.n();
  std::vector<double> mass(levels.size(), 0.0);
  for (std::size_t k = 0; k < M.frames; ++k) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) row += std::norm(M.coeffs[k * n + j]);
    for (std::size_t i = 0; i < levels.size(); ++i) {
      const double w = modulation_symbol(M.sigma(k), levels[i]);
      mass[i] += w * w * row;
    }
  }
  for (auto& v : mass) v *= M.period * 2.0 * M.grid.L();
  return mass;
}

/// ||(Q_1 + ... + Q_Lmax) u||^2 / ||u||^2. The block symbols telescope to
/// eta(sigma / Lmax).
inline double modulation_low_fraction(const Trajectory& traj, double Lmax) {
  const auto M = modulation_spectrum(traj);
  const std::size_t n = M.grid.n();
  double low = 0.0, total = 0.0;
  for (std::size_t k = 0; k < M.frames; ++k) {
    const double w = cutoff_eta(M.sigma(k) / Lmax);
    for (std::size_t j = 0; j < n; ++j) {
      const double a = std::norm(M.coeffs[k * n + j]);
      total += a;
      low += w * w * a;
    }
  }
  return total > 0.0 ? low / total : 0.0;
}

/// Output lattice of rho_T: t = -2 + m dt, m = 0 .. 4/dt - 1.
inline std::size_t rho_lattice_size(double dt) {
  const double frames = 4.0 / dt;
  const double r = std::round(frames);
  if (std::abs(frames - r) > 1e-9 * frames || r < 4)
    throw DomainError("rho_T: the time step must divide the window [-2, 2)");
  return static_cast<std::size_t>(r);
}

/// rho_T[u](t) = U(t) eta(t) U(-mu_T(t)) u(mu_T(t)) on [-2, 2), where u is
/// sampled on [0, T] at t_m = m dt and mu_T clamps t to [0, T]. The output
/// equals u on [0, T] wherever eta = 1, i.e. for T <= 1.
inline Trajectory extend_rho_T(const Trajectory& u) {
  if (u.empty()) throw DomainError("rho_T: empty trajectory");
  if (std::abs(u.t0) > 1e-12) throw DomainError("rho_T: input must start at t = 0");
  const double T = u.t_end();
  if (!(T > 0.0 && T < 2.0)) throw DomainError("rho_T: T must lie in (0, 2)");
  const std::size_t F = rho_lattice_size(u.dt);
  const std::size_t offset = F / 2;  // index of t = 0
  Trajectory out(u.grid, -2.0, u.dt);
  std::vector<SpectralField> profile(u.size());  // U(-t_m) u(t_m)
  for (std::size_t m = 0; m < u.size(); ++m) profile[m] = airy_propagate(transform(u[m]), -u.time(m));
  const auto last = static_cast<std::ptrdiff_t>(u.size()) - 1;
  for (std::size_t q = 0; q < F; ++q) {
    const auto idx = static_cast<std::ptrdiff_t>(q) - static_cast<std::ptrdiff_t>(offset);
    const double t = out.time(q);
    const double e = cutoff_eta(t);
    const std::ptrdiff_t src = std::clamp<std::ptrdiff_t>(idx, 0, last);
    if (idx == src && e == 1.0) {
      out.push_back(u[static_cast<std::size_t>(src)]);  // restriction identity, bit for bit
      continue;
    }
    if (e == 0.0) {
      out.push_back(PhysicalField(u.grid));
      continue;
    }
    auto W = airy_propagate(profile[static_cast<std::size_t>(src)], t);
    W *= e;
    out.push_back(inverse_transform(W));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Resonance
// ---------------------------------------------------------------------------

/// Omega = sum of cubes of the interacting frequencies.
inline double resonance(const std::vector<double>& xi) {
  double s = 0.0;
  for (double v : xi) s += v * v * v;
  return s;
}

/// On Gamma^3 (xi1 + xi2 + xi3 = 0): xi1^3 + xi2^3 + xi3^3 = -3 (xi1 + xi2) xi1 xi2.
inline double resonance_factorized(const std::vector<double>& xi, double tolerance = 0.0) {
  if (xi.size() != 3) throw DomainError("resonance_factorized: three frequencies required");
  const double sum = xi[0] + xi[1] + xi[2];
  const double scale = std::abs(xi[0]) + std::abs(xi[1]) + std::abs(xi[2]);
  if (std::abs(sum) > tolerance * std::max(1.0, scale)) throw DomainError("resonance_factorized: frequencies off Gamma^3");
  return -3.0 * (xi[0] + xi[1]) * xi[0] * xi[1];
}

/// One factor of the multilinear resonance test: a real space-time field
/// with Fourier support phi_N(xi) psi_L(tau - xi^3) and pseudo-random
/// Hermitian amplitudes, on the integer lattice (x-period and t-period 2 pi).
struct ResonanceBlock {
  double N = 1.0;
  double L = 1.0;
};

struct ResonanceResult {
  double magnitude = 0.0;     // |integral|
  double scale = 0.0;         // product of the factors' L^2 norms
  std::size_t terms = 0;      // lattice points on the constraint surface inside all supports
  bool predicted_vanishing = false;  // L_max < N1 N2 N3 / (2^9 k)
};

namespace detail {

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline complex lattice_noise(std::uint64_t seed, std::size_t factor, long tau, long xi) {
  auto h = mix64(seed ^ mix64(factor * 0x100000001b3ULL ^ mix64(static_cast<std::uint64_t>(tau) * 0x9e3779b1ULL ^
                                                                 mix64(static_cast<std::uint64_t>(xi)))));
  const double a = static_cast<double>(h >> 11) * 0x1.0p-53 - 0.5;
  const double b = static_cast<double>(mix64(h) >> 11) * 0x1.0p-53 - 0.5;
  return {a, b};
}

struct LatticeFactor {
  ResonanceBlock block;
  std::size_t id;
  std::uint64_t seed;

  // Hermitian: value(-tau, -xi) = conj(value(tau, xi)), so the field is real.
  complex value(long tau, long xi) const {
    const double x = static_cast<double>(xi);
    const double sigma = static_cast<double>(tau) - x * x * x;
    const double amp = dyadic_phi(x, block.N) * modulation_symbol(sigma, block.L);
    if (amp == 0.0) return {};
    const complex h = lattice_noise(seed, id, tau, xi) + std::conj(lattice_noise(seed, id, -tau, -xi));
    return amp * h;
  }

  long xi_max() const { return static_cast<long>(std::floor(2.0 * block.N)); }
  long sigma_max() const { return static_cast<long>(std::floor(block.L <= 1.0 ? 2.0 : 2.0 * block.L)); }

  template <class Fn>
  void for_each(Fn&& fn) const {
    for (long xi = -xi_max(); xi <= xi_max(); ++xi) {
      if (dyadic_phi(static_cast<double>(xi), block.N) == 0.0) continue;
      const long c = xi * xi * xi;
      for (long s = -sigma_max(); s <= sigma_max(); ++s) {
        const complex v = value(c + s, xi);
        if (v != complex{}) fn(c + s, xi, v);
      }
    }
  }

  double l2_norm() const {
    double acc = 0.0;
    for_each([&](long, long, complex v) { acc += std::norm(v); });
    return 2.0 * M_PI * std::sqrt(acc);  // (2 pi)^2 sum |a|^2 on the period cell
  }
};

}  // namespace detail

/// Space-time integral of Pi_chi(Q_{L1}P_{N1}u1, Q_{L2}P_{N2}u2) prod_{i>=3} Q_{Li}P_{Ni}u_i
/// over one lattice period, for k = blocks.size() pseudo-random real factors.
/// The widest factor (largest L) is looked up on the constraint surface
/// instead of enumerated. Supports k = 3.
inline ResonanceResult resonance_vanishing_check(const std::vector<ResonanceBlock>& blocks,
                                                 const std::function<complex(double, double)>& chi,
                                                 std::uint64_t seed = 1,
                                                 const std::vector<bool>& zero_factor = {}) {
  const std::size_t k = blocks.size();
  if (k != 3) throw DomainError("resonance_vanishing_check: k = 3 blocks supported");
  for (const auto& b : blocks)
    if (!(b.N >= 1.0 && b.L >= 1.0)) throw DomainError("resonance_vanishing_check: N and L must be >= 1");
  if (!(blocks[0].N >= blocks[1].N && blocks[1].N >= blocks[2].N))
    throw DomainError("resonance_vanishing_check: N1 >= N2 >= N3 required");

  std::vector<detail::LatticeFactor> f;
  for (std::size_t i = 0; i < k; ++i) f.push_back({blocks[i], i, seed});
  auto is_zero = [&](std::size_t i) { return i < zero_factor.size() && zero_factor[i]; };

  ResonanceResult res;
  res.scale = 1.0;
  for (std::size_t i = 0; i < k; ++i) res.scale *= is_zero(i) ? 0.0 : f[i].l2_norm();
  double Lmax = 0.0;
  for (const auto& b : blocks) Lmax = std::max(Lmax, b.L);
  res.predicted_vanishing = Lmax < blocks[0].N * blocks[1].N * blocks[2].N / (512.0 * static_cast<double>(k));

  // Enumerate the two narrowest factors; the third is determined by the constraint.
  std::array<std::size_t, 3> order{0, 1, 2};
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return blocks[a].L < blocks[b].L; });
  const std::size_t a = order[0], b = order[1], w = order[2];

  struct Entry {
    long tau, xi;
    complex v;
  };
  std::vector<Entry> ea, eb;
  if (!is_zero(a)) f[a].for_each([&](long t, long x, complex v) { ea.push_back({t, x, v}); });
  if (!is_zero(b)) f[b].for_each([&](long t, long x, complex v) { eb.push_back({t, x, v}); });
  complex acc{};
  if (!is_zero(w)) {
    for (const auto& p : ea)
      for (const auto& q : eb) {
        const long xi_w = -(p.xi + q.xi), tau_w = -(p.tau + q.tau);
        const complex vw = f[w].value(tau_w, xi_w);
        if (vw == complex{}) continue;
        std::array<long, 3> xi{};
        xi[a] = p.xi;
        xi[b] = q.xi;
        xi[w] = xi_w;
        const double xi12 = static_cast<double>(xi[0] + xi[1]);
        acc += chi(xi12, static_cast<double>(xi[0])) * p.v * q.v * vw;
        ++res.terms;
      }
  }
  // (2 pi)^2 from the space-time period cell.
  res.magnitude = std::abs(acc) * 4.0 * M_PI * M_PI;
  return res;
}

// ---------------------------------------------------------------------------
// Refined Strichartz certificate
// ---------------------------------------------------------------------------

struct StrichartzCertificate {
  double lhs = 0.0;   // ||u||_{L^2_T L^inf_x}
  double rhs1 = 0.0;  // T^{3/8} ||J^{-(1-delta)/4+theta} u||_{L^inf_T L^2}
  double rhs2 = 0.0;  // T^{3/8} ||J^{-(1+3 delta)/4+theta} F||_{L^2_T L^2}
  double residual = 0.0;  // relative Duhamel residual of u_t + u_xxx = F
  double ratio() const { return (rhs1 + rhs2) > 0.0 ? lhs / (rhs1 + rhs2) : 0.0; }
};

/// Exponents of T with the proof's choice kappa = 1/2.
inline constexpr double strichartz_kappa1 = 0.375;
inline constexpr double strichartz_kappa2 = 0.375;

/// Relative residual of u_t + u_xxx = F on the stored lattice, measured in
/// the interaction picture v = U(-t)u, where v_t = U(-t)F is smooth in t:
/// max_m ||v_{m+1} - v_m - dt/2 (G_m + G_{m+1})|| over the largest of
/// sum_m ||v_{m+1} - v_m||, int ||G|| and max_m ||v_m||.
inline double airy_duhamel_residual(const Trajectory& u, const Trajectory& F) {
  if (u.size() != F.size()) throw DomainError("strichartz: trajectory and forcing lengths differ");
  if (u.size() < 2) return 0.0;
  std::vector<SpectralField> v, G;
  for (std::size_t m = 0; m < u.size(); ++m) {
    v.push_back(airy_propagate(transform(u[m]), -u.time(m)));
    G.push_back(airy_propagate(transform(F[m]), -u.time(m)));
  }
  double worst = 0.0, total = 0.0, forcing = 0.0, size = 0.0;
  for (const auto& vm : v) size = std::max(size, l2_norm(vm));
  for (std::size_t m = 0; m + 1 < u.size(); ++m) {
    auto d = v[m + 1] - v[m];
    total += l2_norm(d);
    auto r = d - complex(0.5 * u.dt) * (G[m] + G[m + 1]);
    worst = std::max(worst, l2_norm(r));
    forcing += 0.5 * u.dt * (l2_norm(G[m]) + l2_norm(G[m + 1]));
  }
  const double denom = std::max({total, forcing, size});
  return denom > 0.0 ? worst / denom : worst;
}

/// Terms of the refined Strichartz inequality for u on [t0, t0 + T] with
/// forcing F, time integrals by the trapezoid rule.
inline StrichartzCertificate strichartz_certificate(const Trajectory& u, const Trajectory& F, double delta,
                                                    double theta, double residual_tolerance = 1e-6) {
  if (!(delta >= 0.0)) throw DomainError("strichartz: delta must be non-negative");
  if (!(theta > 0.0)) throw DomainError("strichartz: theta must be positive");
  require_same_grid(u.grid, F.grid, "strichartz");
  StrichartzCertificate c;
  if (u.size() < 2) return c;
  c.residual = airy_duhamel_residual(u, F);
  if (!(c.residual <= residual_tolerance))
    throw DomainError("strichartz: trajectory violates the forced Airy equation (relative residual " +
                      std::to_string(c.residual) + ")");
  const double T = u.t_end() - u.t0;
  const double s1 = -(1.0 - delta) / 4.0 + theta;
  const double s2 = -(1.0 + 3.0 * delta) / 4.0 + theta;
  double lhs2 = 0.0, sup1 = 0.0, rhs2 = 0.0;
  for (std::size_t m = 0; m < u.size(); ++m) {
    const double w = (m == 0 || m + 1 == u.size()) ? 0.5 * u.dt : u.dt;
    const double linf = u[m].max_abs();
    lhs2 += w * linf * linf;
    sup1 = std::max(sup1, sobolev_norm(u[m], s1));
    const double fn = sobolev_norm(F[m], s2);
    rhs2 += w * fn * fn;
  }
  c.lhs = std::sqrt(lhs2);
  c.rhs1 = std::pow(T, strichartz_kappa1) * sup1;
  c.rhs2 = std::pow(T, strichartz_kappa2) * std::sqrt(rhs2);
  return c;
}

}  // namespace gkdv
