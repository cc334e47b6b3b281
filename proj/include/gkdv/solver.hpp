#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <string>
#include <vector>

#include "gkdv/background.hpp"
#include "gkdv/error.hpp"
#include "gkdv/flux.hpp"
#include "gkdv/grid.hpp"
#include "gkdv/nonlinearity.hpp"
#include "gkdv/norms.hpp"
#include "gkdv/spectral.hpp"

namespace gkdv {

enum class Scheme { etdrk4, ifrk4 };

inline std::string to_string(Scheme s) { return s == Scheme::etdrk4 ? "ETDRK4" : "IFRK4"; }

inline Scheme scheme_from_string(const std::string& s) {
  std::string u;
  for (char c : s) u.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  if (u == "ETDRK4") return Scheme::etdrk4;
  if (u == "IFRK4") return Scheme::ifrk4;
  throw ConfigError("unknown scheme '" + s + "'");
}

/// 0.4 dx^3 / pi^2.
inline double default_time_step(const Grid& g) {
  const double dx = g.dx();
  return 0.4 * dx * dx * dx / (M_PI * M_PI);
}

struct SolverConfig {
  Scheme scheme = Scheme::etdrk4;
  double dt = 0.0;  // 0 selects default_time_step
  double T = 1.0;
  double mu = 0.0;
  std::string dealias = "auto";
  /// Width of the boundary strip watched for contamination, as a fraction of L.
  double boundary_fraction = 0.05;
  /// Largest tolerated share of ||u||^2 inside the boundary strip.
  double contamination_threshold = 1e-3;
  /// Largest tolerated spectral tail of u (see spectral_tail).
  double tail_threshold = 1e-10;
  /// Width of the taper applied to the forcing S, as a fraction of L.
  double forcing_taper_fraction = default_taper_fraction;
  /// Fields with ||u||_{L2} at or below this are roundoff: the tail and
  /// contamination ratios of pure noise carry no information.
  double noise_floor = 1e-10;
  std::size_t output_every = 1;
  std::size_t check_every = 10;

  void validate() const {
    if (!(dt >= 0.0) || !std::isfinite(dt)) throw ConfigError("time step must be positive");
    if (!(T > 0.0) || !std::isfinite(T)) throw ConfigError("horizon T must be positive");
    if (!(mu >= 0.0) || !std::isfinite(mu)) throw ConfigError("viscosity mu must be non-negative");
    if (!(boundary_fraction > 0.0 && boundary_fraction < 0.5))
      throw ConfigError("boundary buffer fraction must lie in (0, 0.5)");
    if (!(forcing_taper_fraction > 0.0 && forcing_taper_fraction < 0.5))
      throw ConfigError("forcing taper fraction must lie in (0, 0.5)");
    if (!(noise_floor >= 0.0)) throw ConfigError("noise floor must be non-negative");
    if (output_every == 0 || check_every == 0) throw ConfigError("cadences must be positive");
    if (dealias != "auto" && dealias != "pad" && dealias != "lowpass")
      throw ConfigError("dealias rule must be auto, pad or lowpass");
  }

  double step_for(const Grid& g) const { return dt > 0.0 ? dt : default_time_step(g); }
  /// Smallest multiple of output_every with T / steps <= the nominal step.
  std::size_t steps_for(const Grid& g) const {
    const double h = step_for(g);
    const double k = static_cast<double>(output_every);
    return static_cast<std::size_t>(k * std::max(1.0, std::ceil(T / h / k - 1e-9)));
  }
  /// Step actually taken: T / steps_for(g).
  double actual_step(const Grid& g) const { return T / static_cast<double>(steps_for(g)); }
};

struct SimulationState {
  double t = 0.0;
  PhysicalField u;
  std::size_t step = 0;
};

/// Raised when a run stops early; carries the frames produced so far.
class SimulationAborted : public InstabilityError {
 public:
  enum class Reason { non_finite, contamination, unresolved };
  SimulationAborted(const std::string& what, std::size_t step, Reason reason, Trajectory partial)
      : InstabilityError(what, step), reason_(reason), partial_(std::move(partial)) {}
  Reason reason() const noexcept { return reason_; }
  const Trajectory& partial() const noexcept { return partial_; }

 private:
  Reason reason_;
  Trajectory partial_;
};

// ---------------------------------------------------------------------------
// phi functions
// ---------------------------------------------------------------------------

/// phi_0..phi_4 at z: phi_0 = e^z, phi_{k+1}(z) = (phi_k(z) - 1/k!) / z.
/// The recurrence loses about one digit per level near z = 0, so a Taylor
/// series is used on |z| < 1.
inline std::array<complex, 5> phi_functions(complex z) {
  std::array<complex, 5> p{};
  if (std::abs(z) < 1.0) {
    // phi_k(z) = sum_j z^j / (j + k)!
    std::array<double, 32> inv_fact{};
    inv_fact[0] = 1.0;
    for (std::size_t i = 1; i < inv_fact.size(); ++i) inv_fact[i] = inv_fact[i - 1] / static_cast<double>(i);
    for (std::size_t k = 0; k < 5; ++k) {
      complex acc{};
      for (std::size_t j = 26; j-- > 0;) acc = acc * z + inv_fact[j + k];
      p[k] = acc;
    }
    return p;
  }
  p[0] = std::exp(z);
  double fact = 1.0;
  for (std::size_t k = 0; k < 4; ++k) {
    if (k > 0) fact *= static_cast<double>(k);
    p[k + 1] = (p[k] - 1.0 / fact) / z;
  }
  return p;
}

// ---------------------------------------------------------------------------
// Right-hand side
// ---------------------------------------------------------------------------

/// Spectral evaluation of N(u, t) = -d_x(f(u + w Psi) - f(w Psi)) - w S, with the
/// background samples and forcing cached per stage time.
class RhsEvaluator {
 public:
  RhsEvaluator(const Grid& g, const BackgroundField& bg, const AnalyticNonlinearity& nl, const SolverConfig& cfg)
      : grid_(g), bg_(bg), nl_(nl), taper_(cfg.forcing_taper_fraction) {
    if (cfg.dealias == "lowpass" || (cfg.dealias == "auto" && flux_padding(nl, g.n()) == 0)) {
      padded_ = 0;
    } else {
      padded_ = flux_padding(nl, g.n());
      if (padded_ == 0) padded_ = 2 * g.n();  // explicit padding for higher-degree f
    }
    window_ = boundary_window(g, taper_);
    static_background_ = std::holds_alternative<bg::Zero>(bg.spec()) || std::holds_alternative<bg::Tabulated>(bg.spec());
  }

  const Grid& grid() const noexcept { return grid_; }

  /// Fourier coefficients of the nonlinear part at time t.
  SpectralField nonlinear(const SpectralField& U, double t) {
    const auto& c = cache(t);
    SpectralField Uc = U;
    Uc.coeffs[grid_.nyquist()] = 0.0;
    SpectralField flux;
    if (padded_ != 0) {
      auto u = evaluate_padded(Uc, padded_);
      for (std::size_t j = 0; j < padded_; ++j) u[j] = nl_.difference(c.psi[j], u[j].real());
      flux = project_padded(std::move(u), grid_);
    } else {
      auto u = inverse_transform(Uc);
      for (std::size_t j = 0; j < grid_.n(); ++j) u.values[j] = nl_.difference(c.psi[j], u.values[j]);
      flux = transform(u);
      const double cut = 2.0 * grid_.xi_max() / 3.0;
      for (std::size_t j = 0; j < grid_.n(); ++j)
        if (std::abs(grid_.xi(j)) > cut) flux.coeffs[j] = 0.0;
    }
    SpectralField out(grid_);
    for (std::size_t j = 0; j < grid_.n(); ++j) out.coeffs[j] = -complex(0.0, grid_.xi(j)) * flux.coeffs[j] - c.forcing[j];
    out.coeffs[grid_.nyquist()] = 0.0;
    return out;
  }

  /// Windowed forcing w S at time t.
  PhysicalField forcing(double t) {
    const auto& c = cache(t);
    return inverse_transform(SpectralField(grid_, c.forcing));
  }

 private:
  struct Entry {
    std::vector<double> psi;       // on the flux grid
    std::vector<complex> forcing;  // coefficients of w S
  };

  const Entry& cache(double t) {
    const double key = static_background_ ? 0.0 : t;
    if (auto it = entries_.find(key); it != entries_.end()) return it->second;
    if (entries_.size() >= 4) entries_.erase(entries_.begin());
    Entry e;
    e.psi = flux_background_samples(bg_, t, grid_.L(), padded_ != 0 ? padded_ : grid_.n(), taper_);
    if (bg_.is_zero()) {
      e.forcing.assign(grid_.n(), complex{});
    } else {
      auto S = residual_S_raw(bg_, nl_, t, grid_);
      for (std::size_t j = 0; j < grid_.n(); ++j) S.values[j] *= window_.values[j];
      e.forcing = transform(S).coeffs;
      e.forcing[grid_.nyquist()] = 0.0;
    }
    return entries_.emplace(key, std::move(e)).first->second;
  }

  Grid grid_;
  BackgroundField bg_;
  AnalyticNonlinearity nl_;
  double taper_;
  std::size_t padded_ = 0;
  PhysicalField window_;
  bool static_background_ = false;
  std::map<double, Entry> entries_;
};

/// Linear symbol of the u-equation: i xi^3 - mu xi^2.
inline complex linear_symbol(double xi, double mu) { return complex(-mu * xi * xi, xi * xi * xi); }

/// Full right-hand side -u_xxx + mu u_xx - d_x(f(u + Psi) - f(Psi)) - w S,
/// after checking that u is resolved.
inline PhysicalField rhs(const PhysicalField& u, const BackgroundField& bg, const AnalyticNonlinearity& nl, double t,
                         const SolverConfig& cfg = {}) {
  auto U = transform(u);
  const double tail = spectral_tail(U);
  if (!(tail <= cfg.tail_threshold)) throw UnresolvedFieldError("rhs input", tail);
  RhsEvaluator ev(u.grid, bg, nl, cfg);
  auto N = ev.nonlinear(U, t);
  for (std::size_t j = 0; j < u.grid.n(); ++j) {
    if (j == u.grid.nyquist()) continue;
    N.coeffs[j] += linear_symbol(u.grid.xi(j), cfg.mu) * U.coeffs[j];
  }
  auto out = inverse_transform(N);
  if (!out.all_finite()) throw OverflowError("rhs: non-finite output");
  return out;
}

// ---------------------------------------------------------------------------
// Time stepping
// ---------------------------------------------------------------------------

/// One-step exponential integrator with the linear part exact.
class Integrator {
 public:
  Integrator(const Grid& g, const BackgroundField& bg, const AnalyticNonlinearity& nl, const SolverConfig& cfg, double h)
      : grid_(g), cfg_(cfg), h_(h), rhs_(g, bg, nl, cfg) {
    const std::size_t n = g.n();
    E_.resize(n);
    E2_.resize(n);
    Q_.resize(n);
    f1_.resize(n);
    f2_.resize(n);
    f3_.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == g.nyquist()) continue;  // all zero: the Nyquist bin is dropped
      const complex z = h * linear_symbol(g.xi(j), cfg.mu);
      const auto p = phi_functions(z);
      const auto ph = phi_functions(0.5 * z);
      E_[j] = p[0];
      E2_[j] = ph[0];
      Q_[j] = 0.5 * h * ph[1];
      f1_[j] = h * (p[1] - 3.0 * p[2] + 4.0 * p[3]);
      f2_[j] = h * 2.0 * (p[2] - 2.0 * p[3]);
      f3_[j] = h * (-p[2] + 4.0 * p[3]);
    }
  }

  double h() const noexcept { return h_; }
  RhsEvaluator& evaluator() noexcept { return rhs_; }

  SpectralField step(const SpectralField& U, double t) {
    return cfg_.scheme == Scheme::etdrk4 ? etdrk4(U, t) : ifrk4(U, t);
  }

 private:
  SpectralField etdrk4(const SpectralField& U, double t) {
    const std::size_t n = grid_.n();
    const auto Nu = rhs_.nonlinear(U, t);
    SpectralField a(grid_), b(grid_), c(grid_), out(grid_);
    for (std::size_t j = 0; j < n; ++j) a.coeffs[j] = E2_[j] * U.coeffs[j] + Q_[j] * Nu.coeffs[j];
    const auto Na = rhs_.nonlinear(a, t + 0.5 * h_);
    for (std::size_t j = 0; j < n; ++j) b.coeffs[j] = E2_[j] * U.coeffs[j] + Q_[j] * Na.coeffs[j];
    const auto Nb = rhs_.nonlinear(b, t + 0.5 * h_);
    for (std::size_t j = 0; j < n; ++j)
      c.coeffs[j] = E2_[j] * a.coeffs[j] + Q_[j] * (2.0 * Nb.coeffs[j] - Nu.coeffs[j]);
    const auto Nc = rhs_.nonlinear(c, t + h_);
    for (std::size_t j = 0; j < n; ++j)
      out.coeffs[j] = E_[j] * U.coeffs[j] + f1_[j] * Nu.coeffs[j] + f2_[j] * (Na.coeffs[j] + Nb.coeffs[j]) +
                      f3_[j] * Nc.coeffs[j];
    return out;
  }

  SpectralField ifrk4(const SpectralField& U, double t) {
    const std::size_t n = grid_.n();
    const double h = h_;
    const auto k1 = rhs_.nonlinear(U, t);
    SpectralField a(grid_), b(grid_), c(grid_), out(grid_);
    for (std::size_t j = 0; j < n; ++j) a.coeffs[j] = E2_[j] * (U.coeffs[j] + 0.5 * h * k1.coeffs[j]);
    const auto k2 = rhs_.nonlinear(a, t + 0.5 * h);
    for (std::size_t j = 0; j < n; ++j) b.coeffs[j] = E2_[j] * U.coeffs[j] + 0.5 * h * k2.coeffs[j];
    const auto k3 = rhs_.nonlinear(b, t + 0.5 * h);
    for (std::size_t j = 0; j < n; ++j) c.coeffs[j] = E_[j] * U.coeffs[j] + h * E2_[j] * k3.coeffs[j];
    const auto k4 = rhs_.nonlinear(c, t + h);
    for (std::size_t j = 0; j < n; ++j)
      out.coeffs[j] = E_[j] * U.coeffs[j] +
                      h / 6.0 * (E_[j] * k1.coeffs[j] + 2.0 * E2_[j] * (k2.coeffs[j] + k3.coeffs[j]) + k4.coeffs[j]);
    return out;
  }

  Grid grid_;
  SolverConfig cfg_;
  double h_;
  RhsEvaluator rhs_;
  std::vector<complex> E_, E2_, Q_, f1_, f2_, f3_;
};

/// Advances a state by one step of size cfg.step_for(grid).
inline SimulationState step(const SimulationState& s, const SolverConfig& cfg, const BackgroundField& bg,
                            const AnalyticNonlinearity& nl) {
  cfg.validate();
  Integrator integ(s.u.grid, bg, nl, cfg, cfg.step_for(s.u.grid));
  auto U = transform(s.u);
  U.coeffs[s.u.grid.nyquist()] = 0.0;
  auto next = inverse_transform(integ.step(U, s.t));
  if (!next.all_finite()) throw InstabilityError("non-finite field", s.step + 1);
  return {s.t + integ.h(), std::move(next), s.step + 1};
}

namespace detail {

inline void check_state(const PhysicalField& u, const SolverConfig& cfg, std::size_t step, const Trajectory& partial) {
  using R = SimulationAborted::Reason;
  if (!u.all_finite()) throw SimulationAborted("non-finite field", step, R::non_finite, partial);
  if (l2_norm(u) <= cfg.noise_floor) return;
  const double tail = spectral_tail(u);
  if (!(tail <= cfg.tail_threshold))
    throw SimulationAborted("unresolved field (spectral tail " + detail::sci(tail) + ")", step, R::unresolved, partial);
  const double frac = boundary_mass_fraction(u, cfg.boundary_fraction);
  if (!(frac <= cfg.contamination_threshold))
    throw SimulationAborted("boundary contamination (strip mass fraction " + detail::sci(frac) + ")", step,
                            R::contamination, partial);
}

}  // namespace detail

/// Integrates from u0 at t = 0 to cfg.T, storing every cfg.output_every-th
/// step. The step is T / ceil(T / dt), so the horizon is hit exactly.
inline Trajectory evolve(const PhysicalField& u0, const BackgroundField& bg, const AnalyticNonlinearity& nl,
                         const SolverConfig& cfg) {
  cfg.validate();
  const Grid& g = u0.grid;
  const std::size_t steps = cfg.steps_for(g);
  const double h = cfg.T / static_cast<double>(steps);

  if (!bg.is_zero()) require_resolved(windowed_background_slope(bg, 0.0, g), cfg.tail_threshold, "background slope");
  Trajectory traj(g, 0.0, h * static_cast<double>(cfg.output_every));
  {
    const double tail = spectral_tail(u0);
    if (!(tail <= cfg.tail_threshold) && l2_norm(u0) > cfg.noise_floor)
      throw UnresolvedFieldError("initial data (spectral tail " + detail::sci(tail) + ")", tail);
  }
  detail::check_state(u0, cfg, 0, traj);

  Integrator integ(g, bg, nl, cfg, h);
  auto U = transform(u0);
  U.coeffs[g.nyquist()] = 0.0;
  traj.push_back(u0);
  for (std::size_t k = 1; k <= steps; ++k) {
    const double t = static_cast<double>(k - 1) * h;
    U = integ.step(U, t);
    const bool out = k % cfg.output_every == 0;
    const bool check = k % cfg.check_every == 0 || k == steps;
    if (out || check) {
      auto u = inverse_transform(U);
      if (check) detail::check_state(u, cfg, k, traj);
      else if (!u.all_finite())
        throw SimulationAborted("non-finite field", k, SimulationAborted::Reason::non_finite, traj);
      if (out) traj.push_back(std::move(u));
    }
  }
  return traj;
}

// ---------------------------------------------------------------------------
// Duhamel / Picard construction for mu > 0
// ---------------------------------------------------------------------------

struct PicardReport {
  std::size_t iterations = 0;
  std::vector<double> differences;         // L^inf_T H^{s-1} distance between successive iterates
  std::vector<double> contraction_factors;  // ratios of successive differences
};

struct PicardResult {
  Trajectory trajectory;
  PicardReport report;
};

namespace detail {

// Monomial coefficients (in theta) of the four cubic Lagrange basis
// polynomials through the nodes theta = o, o+1, o+2, o+3.
inline std::array<std::array<double, 4>, 4> lagrange_monomials(int o) {
  std::array<std::array<double, 4>, 4> out{};
  for (int i = 0; i < 4; ++i) {
    std::array<double, 4> p{1.0, 0.0, 0.0, 0.0};
    double denom = 1.0;
    const double ti = o + i;
    for (int m = 0; m < 4; ++m) {
      if (m == i) continue;
      const double tm = o + m;
      std::array<double, 4> q{};
      for (int d = 3; d >= 0; --d) q[d] = (d > 0 ? p[d - 1] : 0.0) - tm * p[d];
      p = q;
      denom *= ti - tm;
    }
    for (int d = 0; d < 4; ++d) out[i][d] = p[d] / denom;
  }
  return out;
}

}  // namespace detail

/// Fixed point of u(t) = W_mu(t) u0 + int_0^t W_mu(t - t') N(u(t'), t') dt'
/// on the lattice t_m = m T / M, iterated from u = 0. The Duhamel integral
/// over each lattice interval uses the cubic interpolant of N through four
/// neighbouring nodes, integrated exactly against the exponential
/// (weights p! phi_{p+1}(h Lambda)), so the quadrature is fourth order.
inline PicardResult picard_solve(const PhysicalField& u0, const BackgroundField& bg, const AnalyticNonlinearity& nl,
                                 double mu, double T, std::size_t intervals = 50, double s = 1.0,
                                 double tolerance = 1e-10, std::size_t max_iterations = 50,
                                 const SolverConfig& base = {}) {
  if (!(mu > 0.0)) throw DomainError("picard_solve: mu must be positive");
  if (!(T > 0.0)) throw DomainError("picard_solve: T must be positive");
  if (intervals < 3) throw DomainError("picard_solve: at least 3 intervals");
  SolverConfig cfg = base;
  cfg.mu = mu;
  const Grid& g = u0.grid;
  const std::size_t n = g.n(), M = intervals;
  const double h = T / static_cast<double>(M);

  // Per-bin propagator and quadrature weights for the three stencil offsets.
  std::vector<complex> E(n);
  std::array<std::vector<std::array<complex, 4>>, 3> W;  // offsets 0, -1, -2
  const std::array<int, 3> offsets{0, -1, -2};
  std::array<std::array<std::array<double, 4>, 4>, 3> lag;
  for (int q = 0; q < 3; ++q) {
    lag[q] = detail::lagrange_monomials(offsets[q]);
    W[q].assign(n, {});
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (j == g.nyquist()) continue;
    const auto p = phi_functions(h * linear_symbol(g.xi(j), mu));
    E[j] = p[0];
    const std::array<complex, 4> mom{p[1], p[2], 2.0 * p[3], 6.0 * p[4]};  // int_0^1 e^{z(1-th)} th^d
    for (int q = 0; q < 3; ++q)
      for (int i = 0; i < 4; ++i) {
        complex w{};
        for (int d = 0; d < 4; ++d) w += lag[q][i][d] * mom[d];
        W[q][j][i] = h * w;
      }
  }

  RhsEvaluator ev(g, bg, nl, cfg);
  auto U0 = transform(u0);
  U0.coeffs[g.nyquist()] = 0.0;
  std::vector<SpectralField> cur(M + 1, SpectralField(g));
  PicardResult res;
  for (std::size_t it = 1; it <= max_iterations; ++it) {
    std::vector<SpectralField> N(M + 1);
    for (std::size_t m = 0; m <= M; ++m) N[m] = ev.nonlinear(cur[m], static_cast<double>(m) * h);
    std::vector<SpectralField> next(M + 1, SpectralField(g));
    next[0] = U0;
    for (std::size_t m = 0; m < M; ++m) {
      // Stencil start: m-1 in the interior, clamped to [0, M-3].
      const std::size_t start = std::min<std::size_t>(m == 0 ? 0 : m - 1, M - 3);
      const int q = static_cast<int>(m - start);  // 0, 1 or 2 -> offsets 0, -1, -2
      for (std::size_t j = 0; j < n; ++j) {
        complex acc = E[j] * next[m].coeffs[j];
        for (int i = 0; i < 4; ++i) acc += W[q][j][i] * N[start + i].coeffs[j];
        next[m + 1].coeffs[j] = acc;
      }
    }
    double diff = 0.0;
    for (std::size_t m = 0; m <= M; ++m) diff = std::max(diff, sobolev_norm(next[m] - cur[m], s - 1.0));
    if (!std::isfinite(diff)) throw ConvergenceError("picard_solve: iteration diverged");
    res.report.differences.push_back(diff);
    if (res.report.differences.size() >= 2) {
      const auto& d = res.report.differences;
      res.report.contraction_factors.push_back(d[d.size() - 2] > 0.0 ? d.back() / d[d.size() - 2] : 0.0);
    }
    cur = std::move(next);
    res.report.iterations = it;
    if (diff <= tolerance) {
      res.trajectory = Trajectory(g, 0.0, h);
      for (const auto& F : cur) res.trajectory.push_back(inverse_transform(F));
      return res;
    }
  }
  throw ConvergenceError("picard_solve: no contraction within " + std::to_string(max_iterations) +
                         " iterations; reduce T for this mu");
}

// ---------------------------------------------------------------------------
// Vanishing viscosity
// ---------------------------------------------------------------------------

/// sup over shared frames of ||a - b||_{H^r}.
inline double linf_t_hs_distance(const Trajectory& a, const Trajectory& b, double r) {
  if (a.size() != b.size()) throw DomainError("trajectory lengths differ");
  double d = 0.0;
  for (std::size_t m = 0; m < a.size(); ++m) d = std::max(d, sobolev_norm(a[m] - b[m], r));
  return d;
}

struct ViscosityRow {
  double mu = 0.0;
  double difference = 0.0;  // ||u_mu - u_0||_{L^inf_T H^{s-1}}
};

struct ViscosityTable {
  std::vector<ViscosityRow> rows;
  double rate = 0.0;  // least-squares slope of log(difference) against log(mu), last three mu > 0
  bool monotone = false;
};

/// Least-squares slope of log y against log x.
inline double fitted_order(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t k = x.size();
  if (k < 2 || y.size() != k) return 0.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

/// Runs each mu of a decreasing list ending in 0 and compares against the
/// mu = 0 run in L^inf_T H^{s-1}. Monotonicity allows 5 % noise.
inline ViscosityTable vanishing_viscosity(const PhysicalField& u0, const BackgroundField& bg,
                                          const AnalyticNonlinearity& nl, const std::vector<double>& mus,
                                          const SolverConfig& base, double s = 1.0) {
  if (mus.size() < 2 || mus.back() != 0.0) throw DomainError("vanishing_viscosity: mu list must end in 0");
  for (std::size_t i = 1; i < mus.size(); ++i)
    if (!(mus[i] < mus[i - 1])) throw DomainError("vanishing_viscosity: mu list must decrease");
  SolverConfig c0 = base;
  c0.mu = 0.0;
  const auto limit = evolve(u0, bg, nl, c0);
  ViscosityTable tab;
  for (double mu : mus) {
    if (mu == 0.0) {
      tab.rows.push_back({0.0, 0.0});
      continue;
    }
    SolverConfig c = base;
    c.mu = mu;
    tab.rows.push_back({mu, linf_t_hs_distance(evolve(u0, bg, nl, c), limit, s - 1.0)});
  }
  std::vector<double> x, y;
  for (const auto& r : tab.rows)
    if (r.mu > 0.0) {
      x.push_back(r.mu);
      y.push_back(r.difference);
    }
  if (x.size() > 3) {
    x.erase(x.begin(), x.end() - 3);
    y.erase(y.begin(), y.end() - 3);
  }
  tab.rate = fitted_order(x, y);
  tab.monotone = true;
  for (std::size_t i = 1; i < tab.rows.size(); ++i)
    if (tab.rows[i].mu > 0.0 && tab.rows[i].difference > 1.05 * tab.rows[i - 1].difference) tab.monotone = false;
  return tab;
}

}  // namespace gkdv
