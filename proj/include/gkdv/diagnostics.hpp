#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "gkdv/background.hpp"
#include "gkdv/grid.hpp"
#include "gkdv/nonlinearity.hpp"
#include "gkdv/norms.hpp"
#include "gkdv/solver.hpp"
#include "gkdv/spectral.hpp"

namespace gkdv {

namespace detail {

// Integral over [-L, L) of g(x_j', v(x_j')) sampled on an m-point grid,
// where v is the band-limited interpolant of the coefficients V.
template <class Fn>
double padded_integral(const SpectralField& V, std::size_t m, Fn&& g) {
  const auto v = evaluate_padded(V, m);
  const double L = V.grid.L();
  const double dxm = 2.0 * L / static_cast<double>(m);
  double acc = 0.0;
  for (std::size_t j = 0; j < m; ++j) acc += g(-L + static_cast<double>(j) * dxm, v[j].real());
  return acc * dxm;
}

// Grid size on which a degree-d polynomial of v integrates exactly.
inline std::size_t exact_quadrature_size(const AnalyticNonlinearity& nl, std::size_t n, std::size_t extra_degree) {
  if (!nl.is_polynomial()) return n;
  const std::size_t d = nl.degree() + extra_degree;
  return std::max<std::size_t>(n, n * (d + 1) / 2);
}

inline double gradient_energy(const SpectralField& V) {
  double acc = 0.0;
  for (std::size_t j = 0; j < V.size(); ++j) {
    if (j == V.grid.nyquist()) continue;  // odd derivative drops the Nyquist bin
    const double xi = V.grid.xi(j);
    acc += xi * xi * std::norm(V.coeffs[j]);
  }
  return 2.0 * V.grid.L() * acc;
}

}  // namespace detail

struct Invariants {
  double I1 = 0.0, I2 = 0.0, I3 = 0.0;
};

/// I1 = int v, I2 = int v^2, I3 = int (v_x^2 - F(v)). The first three terms
/// use Parseval; int F(v) is a grid sum on a grid fine enough to be exact
/// for polynomial f.
inline Invariants invariants_I(const PhysicalField& v, const AnalyticNonlinearity& nl) {
  const auto V = transform(v);
  const double L = v.grid.L();
  Invariants I;
  I.I1 = 2.0 * L * V.coeffs[0].real();
  double mass = 0.0;
  for (const auto& c : V.coeffs) mass += std::norm(c);
  I.I2 = 2.0 * L * mass;
  const std::size_t m = detail::exact_quadrature_size(nl, v.grid.n(), 1);
  const double intF = detail::padded_integral(V, m, [&](double, double val) { return nl.F(val); });
  I.I3 = detail::gradient_energy(V) - intF;
  return I;
}

/// E(u) = 1/2 int u_x^2 - int (F(u + Psi) - F(Psi) - u f(Psi)).
inline double modified_energy(const PhysicalField& u, const BackgroundField& bg, const AnalyticNonlinearity& nl,
                              double t) {
  const auto U = transform(u);
  const std::size_t m = detail::exact_quadrature_size(nl, u.grid.n(), 1);
  const double rem = detail::padded_integral(U, m, [&](double x, double val) {
    const double psi = bg.is_zero() ? 0.0 : bg.eval(t, x);
    return nl.primitive_remainder(psi, val);
  });
  return 0.5 * detail::gradient_energy(U) - rem;
}

// ---------------------------------------------------------------------------
// L^2 growth bound
// ---------------------------------------------------------------------------

struct GrowthVerdict {
  bool pass = true;
  double A = 0.0;       // sup_t ||w S||_{L^2}^2
  double B = 0.0;       // 1 + M ||Psi_x||_inf
  double M = 0.0;       // sup |f''| on the attained range
  double psi_x_sup = 0.0;
  double worst_ratio = 0.0;  // max_t ||u(t)||^2 / bound(t)
  std::vector<double> times, mass, bound;
};

/// Checks ||u(t)||^2 <= (||u0||^2 + t A) exp(B t) at every stored frame. The
/// forcing is the tapered S the solver integrates; M comes from gwp_bound on
/// the attained range of u + Psi padded by 10 %.
inline GrowthVerdict l2_growth_monitor(const Trajectory& traj, const BackgroundField& bg,
                                       const AnalyticNonlinearity& nl,
                                       double taper_fraction = default_taper_fraction) {
  GrowthVerdict v;
  if (traj.empty()) return v;
  const Grid& g = traj.grid;
  const auto w = boundary_window(g, taper_fraction);
  double lo = INFINITY, hi = -INFINITY;
  for (std::size_t m = 0; m < traj.size(); ++m) {
    const double t = traj.time(m);
    auto S = residual_S_raw(bg, nl, t, g);
    for (std::size_t j = 0; j < g.n(); ++j) {
      S.values[j] *= w.values[j];
      const Jet J = bg.is_zero() ? Jet{} : bg.eval_jet(t, g.x(j));
      v.psi_x_sup = std::max(v.psi_x_sup, std::abs(J.psi_x));
      lo = std::min({lo, J.psi, J.psi + traj[m].values[j]});
      hi = std::max({hi, J.psi, J.psi + traj[m].values[j]});
    }
    const double s2 = l2_norm(S);
    v.A = std::max(v.A, s2 * s2);
  }
  const auto [plo, phi] = padded_range(lo, hi);
  v.M = gwp_bound(nl, plo, phi).M;
  v.B = 1.0 + v.M * v.psi_x_sup;
  const double m0 = std::pow(l2_norm(traj[0]), 2);
  for (std::size_t m = 0; m < traj.size(); ++m) {
    const double t = traj.time(m) - traj.t0;
    const double mass = std::pow(l2_norm(traj[m]), 2);
    const double bound = (m0 + t * v.A) * std::exp(v.B * t);
    v.times.push_back(traj.time(m));
    v.mass.push_back(mass);
    v.bound.push_back(bound);
    if (bound > 0.0) v.worst_ratio = std::max(v.worst_ratio, mass / bound);
    if (mass > bound * (1.0 + 1e-12) + 1e-300) v.pass = false;
  }
  return v;
}

// ---------------------------------------------------------------------------
// Flow Lipschitz experiment
// ---------------------------------------------------------------------------

struct LipschitzRow {
  double delta = 0.0;
  double ratio = 0.0;  // sup_t ||u - v||_{H^{s-1}} / ||u0 - v0||_{H^{s-1}}
};

/// Gaussian exp(-(x - center)^2) normalized to unit H^r norm.
inline PhysicalField unit_profile(const Grid& g, double r, double center = 0.0) {
  auto p = PhysicalField::sample(g, [&](double x) { return std::exp(-(x - center) * (x - center)); });
  p *= 1.0 / sobolev_norm(p, r);
  return p;
}

/// Runs u from u0 and v from u0 + delta g for each delta and reports the
/// amplification of the initial H^{s-1} distance.
inline std::vector<LipschitzRow> flow_lipschitz_experiment(const PhysicalField& u0, const BackgroundField& bg,
                                                           const AnalyticNonlinearity& nl, const SolverConfig& cfg,
                                                           const std::vector<double>& deltas, double s = 1.0,
                                                           std::optional<PhysicalField> profile = std::nullopt) {
  if (!(s > 0.5)) throw DomainError("flow_lipschitz_experiment: s must exceed 1/2");
  for (double d : deltas)
    if (d == 0.0) throw DomainError("flow_lipschitz_experiment: delta = 0 leaves the ratio undefined");
  const PhysicalField gprof = profile ? *profile : unit_profile(u0.grid, s - 1.0);
  const auto base = evolve(u0, bg, nl, cfg);
  std::vector<LipschitzRow> rows;
  for (double d : deltas) {
    PhysicalField v0 = u0;
    for (std::size_t j = 0; j < v0.size(); ++j) v0.values[j] += d * gprof.values[j];
    const double init = sobolev_norm(v0 - u0, s - 1.0);
    const auto other = evolve(v0, bg, nl, cfg);
    rows.push_back({d, linf_t_hs_distance(base, other, s - 1.0) / init});
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Frequency-envelope tails
// ---------------------------------------------------------------------------

struct EnvelopeTails {
  std::vector<double> thresholds;          // N*
  std::vector<double> times;
  std::vector<std::vector<double>> tails;  // tails[m][i]: frame m, threshold i
  std::vector<double> sup_tails;           // sup over frames per threshold
};

/// sum_{N > N*} omega_N^2 <N>^{2s} ||P_N u(t)||^2 for every band level N*.
inline EnvelopeTails envelope_tail_monitor(const Trajectory& traj, double s, const WeightSequence& w) {
  if (!(w.epsilon() > 0.0)) throw DomainError("envelope_tail_monitor: weights must increase strictly");
  EnvelopeTails out;
  if (traj.empty()) return out;
  const auto band = DyadicBand::for_grid(traj.grid);
  const auto levels = band.levels();
  out.thresholds = levels;
  out.sup_tails.assign(levels.size(), 0.0);
  for (std::size_t m = 0; m < traj.size(); ++m) {
    const auto U = transform(traj[m]);
    std::vector<double> per_level(levels.size(), 0.0);
    for (std::size_t i = 0; i < levels.size(); ++i) {
      const double N = levels[i];
      double acc = 0.0;
      for (std::size_t j = 0; j < U.size(); ++j) {
        const double p = dyadic_phi(U.grid.xi(j), N);
        if (p != 0.0) acc += p * p * std::norm(U.coeffs[j]);
      }
      const double wn = w(N, band.N_min());
      per_level[i] = wn * wn * std::pow(1.0 + N * N, s) * 2.0 * U.grid.L() * acc;
    }
    std::vector<double> tails(levels.size(), 0.0);
    double run = 0.0;
    for (std::size_t i = levels.size(); i-- > 0;) {
      tails[i] = run;  // strictly above levels[i]
      run += per_level[i];
    }
    for (std::size_t i = 0; i < levels.size(); ++i) out.sup_tails[i] = std::max(out.sup_tails[i], tails[i]);
    out.times.push_back(traj.time(m));
    out.tails.push_back(std::move(tails));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Report
// ---------------------------------------------------------------------------

struct DiagnosticsRow {
  double t = 0.0;
  double I1 = 0.0, I2 = 0.0, I3 = 0.0, E = 0.0;
  double hs = 0.0, hs_omega = 0.0, boundary_mass = 0.0;
};

struct Verdict {
  std::string name;
  bool pass = true;
  std::string detail;
};

struct DiagnosticsReport {
  double s = 1.0;
  std::vector<DiagnosticsRow> rows;
  std::vector<Verdict> verdicts;

  bool all_pass() const {
    return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
  }

  void write_csv(std::ostream& os) const {
    os << "t,I1,I2,I3,E,hs_norm,hs_omega_norm,boundary_mass\n";
    os.precision(17);
    for (const auto& r : rows)
      os << r.t << ',' << r.I1 << ',' << r.I2 << ',' << r.I3 << ',' << r.E << ',' << r.hs << ',' << r.hs_omega << ','
         << r.boundary_mass << '\n';
  }

  void write_summary(std::ostream& os) const {
    for (const auto& v : verdicts) os << v.name << ": " << (v.pass ? "PASS" : "FAIL") << "  " << v.detail << '\n';
  }
};

/// Time series of every monitored functional along a trajectory.
inline DiagnosticsReport diagnose(const Trajectory& traj, const BackgroundField& bg, const AnalyticNonlinearity& nl,
                                  double s, const WeightSequence& w, double boundary_fraction = 0.05) {
  DiagnosticsReport rep;
  rep.s = s;
  for (std::size_t m = 0; m < traj.size(); ++m) {
    const double t = traj.time(m);
    const auto& u = traj[m];
    DiagnosticsRow r;
    r.t = t;
    const auto I = invariants_I(u, nl);
    r.I1 = I.I1;
    r.I2 = I.I2;
    r.I3 = I.I3;
    r.E = modified_energy(u, bg, nl, t);
    r.hs = sobolev_norm(u, s);
    r.hs_omega = enveloped_norm(u, s, w);
    r.boundary_mass = boundary_mass_fraction(u, boundary_fraction);
    rep.rows.push_back(r);
  }
  return rep;
}

}  // namespace gkdv
