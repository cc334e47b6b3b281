#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "gkdv/background.hpp"
#include "gkdv/diagnostics.hpp"
#include "gkdv/io.hpp"
#include "gkdv/norms.hpp"
#include "gkdv/scenario.hpp"
#include "gkdv/solver.hpp"

namespace gkdv::cli {

/// Process exit codes. Stable: scripts depend on them.
enum ExitCode : int {
  exit_ok = 0,
  exit_failure = 1,      // I/O or any other error
  exit_config = 2,       // config or input file rejected
  exit_instability = 3,  // blow-up, boundary contamination, unresolved field, no convergence
  exit_verdict = 4,      // run finished but a verdict failed
};

namespace fs = std::filesystem;

/// Tolerances for the run verdicts.
inline constexpr double exactness_tol = 1e-10;
inline constexpr double persistence_tol = 1e-8;
inline constexpr double mean_drift_tol = 1e-12;
inline constexpr double invariant_rel_tol = 1e-8;

/// max |S| over stored frames relative to
/// max(1, max |Psi_t| + |Psi_xxx| + |f'(Psi) Psi_x|).
inline std::pair<double, double> background_exactness(const BackgroundField& bg, const AnalyticNonlinearity& nl,
                                                      const Grid& g, const std::vector<double>& times) {
  double smax = 0.0, scale = 1.0;
  for (double t : times) {
    const auto S = residual_S_raw(bg, nl, t, g);
    smax = std::max(smax, S.max_abs());
    for (std::size_t j = 0; j < g.n(); ++j) {
      const Jet J = bg.eval_jet(t, g.x(j));
      scale = std::max(scale, std::abs(J.psi_t) + std::abs(J.psi_xxx) + std::abs(nl.fp(J.psi) * J.psi_x));
    }
  }
  return {smax, scale};
}

inline std::vector<Verdict> run_verdicts(const Trajectory& traj, const BackgroundField& bg,
                                         const AnalyticNonlinearity& nl, const SolverConfig& cfg) {
  std::vector<Verdict> out;
  auto fmt = [](double v) { return io::format_double(v); };
  std::vector<double> times;
  for (std::size_t m = 0; m < traj.size(); ++m) times.push_back(traj.time(m));

  if (bg.is_exact_solution()) {
    const auto [smax, scale] = background_exactness(bg, nl, traj.grid, times);
    out.push_back({"background-exactness", smax <= exactness_tol * scale,
                   "max|S| = " + fmt(smax) + ", scale = " + fmt(scale)});
    if (traj[0].max_abs() == 0.0) {
      double sup = 0.0;
      for (const auto& f : traj.frames) sup = std::max(sup, l2_norm(f));
      out.push_back({"zero-perturbation-persistence", sup <= persistence_tol, "sup ||u||_L2 = " + fmt(sup)});
    }
  }

  const auto gv = l2_growth_monitor(traj, bg, nl, cfg.forcing_taper_fraction);
  out.push_back({"l2-growth-bound", gv.pass,
                 "worst ratio = " + fmt(gv.worst_ratio) + ", A = " + fmt(gv.A) + ", B = " + fmt(gv.B)});

  if (bg.is_zero() && cfg.mu == 0.0) {
    // I3 is reported but not judged: only 1/2 int v_x^2 - int F(v) is
    // conserved for general data, I3 only along traveling waves.
    const auto I0 = invariants_I(traj[0], nl);
    const double E0 = modified_energy(traj[0], bg, nl, traj.t0);
    double d1 = 0.0, d2 = 0.0, d3 = 0.0, dE = 0.0;
    for (std::size_t m = 0; m < traj.size(); ++m) {
      const auto I = invariants_I(traj[m], nl);
      d1 = std::max(d1, std::abs(I.I1 - I0.I1));
      d2 = std::max(d2, std::abs(I.I2 - I0.I2));
      d3 = std::max(d3, std::abs(I.I3 - I0.I3));
      dE = std::max(dE, std::abs(modified_energy(traj[m], bg, nl, traj.time(m)) - E0));
    }
    const double r2 = I0.I2 != 0.0 ? d2 / std::abs(I0.I2) : d2;
    const double r3 = d3 / (1.0 + std::abs(I0.I3));
    const double rE = dE / (1.0 + std::abs(E0));
    out.push_back({"conservation", d1 <= mean_drift_tol && r2 <= invariant_rel_tol && rE <= invariant_rel_tol,
                   "I1 drift = " + fmt(d1) + ", I2 rel = " + fmt(r2) + ", E rel = " + fmt(rE) +
                       ", I3 rel = " + fmt(r3)});
  }
  return out;
}

struct RunResult {
  int code = exit_ok;
  std::string message;
  DiagnosticsReport report;
};

/// evolve + diagnostics for one scenario; writes trajectory.{bin,meta},
/// diagnostics.csv, verdicts.txt, scenario.ini and run.meta into out_dir.
inline RunResult run_scenario(const ScenarioConfig& c, const fs::path& out_dir, const fs::path& base_dir,
                              std::ostream& log) {
  RunResult res;
  try {
    fs::create_directories(out_dir);
    {
      std::ofstream ini(out_dir / "scenario.ini");
      ini << serialize_scenario(c);
    }
    const auto nl = c.nonlinearity.build();
    const auto [bg, u0] = [&] {
      try {
        return std::pair{build_background(c, base_dir), build_initial(c, nl, base_dir)};
      } catch (const ConfigError&) {
        throw;
      } catch (const DomainError&) {
        throw;
      } catch (const Error& e) {
        throw ConfigError(std::string("input file: ") + e.what());
      }
    }();
    const Grid g = c.grid();
    const double h = c.solver.actual_step(g);
    const std::size_t steps = c.solver.steps_for(g);

    Trajectory traj;
    try {
      traj = evolve(u0, bg, nl, c.solver);
    } catch (const SimulationAborted& e) {
      io::write_trajectory(out_dir / "partial", e.partial());
      throw;
    }
    io::write_trajectory(out_dir / "trajectory", traj);

    res.report = diagnose(traj, bg, nl, c.s, WeightSequence::power(c.envelope_epsilon), c.solver.boundary_fraction);
    res.report.verdicts = run_verdicts(traj, bg, nl, c.solver);
    {
      std::ofstream csv(out_dir / "diagnostics.csv");
      res.report.write_csv(csv);
      std::ofstream v(out_dir / "verdicts.txt");
      res.report.write_summary(v);
    }
    std::ofstream meta(out_dir / "run.meta");
    meta << "scenario = " << c.name << "\nbackground = " << bg.name() << "\nnonlinearity = "
         << to_string(nl.kind()) << "\nscheme = " << to_string(c.solver.scheme) << "\ndt = " << io::format_double(h)
         << "\nsteps = " << steps << "\nframes = " << traj.size() << "\nT = " << io::format_double(c.solver.T)
         << "\nverdicts = " << (res.report.all_pass() ? "pass" : "fail") << '\n';
    res.report.write_summary(log);
    if (!res.report.all_pass()) {
      res.code = exit_verdict;
      res.message = "verdict failure";
    }
  } catch (const ConfigError& e) {
    res = {exit_config, std::string("config error: ") + e.what(), {}};
  } catch (const InstabilityError& e) {
    res = {exit_instability, std::string("instability: ") + e.what(), {}};
  } catch (const UnresolvedFieldError& e) {
    res = {exit_instability, e.what(), {}};
  } catch (const DomainError& e) {
    res = {exit_config, std::string("domain error: ") + e.what(), {}};
  } catch (const std::exception& e) {
    res = {exit_failure, std::string("error: ") + e.what(), {}};
  }
  return res;
}

// ---------------------------------------------------------------------------
// Convergence studies
// ---------------------------------------------------------------------------

struct StudyRow {
  double parameter = 0.0;  // dt, n or mu
  double error = 0.0;      // against the finest level (or the mu = 0 run)
  double order = NAN;      // local order against the next level
};

struct StudyTable {
  std::string kind;
  std::vector<StudyRow> rows;
  double fitted_order = NAN;
  bool complete = true;
  std::string failure;

  void write(std::ostream& os) const {
    os << "# study = " << kind << "\n";
    if (!complete) os << "# PARTIAL: " << failure << "\n";
    os << "parameter,error,order\n";
    for (const auto& r : rows)
      os << io::format_double(r.parameter) << ',' << io::format_double(r.error) << ','
         << (std::isnan(r.order) ? std::string("") : io::format_double(r.order)) << '\n';
    os << "# fitted_order = " << (std::isnan(fitted_order) ? std::string("nan") : io::format_double(fitted_order))
       << '\n';
  }
};

/// Final frame of each level only.
inline PhysicalField final_state(const PhysicalField& u0, const BackgroundField& bg, const AnalyticNonlinearity& nl,
                                 SolverConfig cfg) {
  cfg.output_every = cfg.steps_for(u0.grid);
  return evolve(u0, bg, nl, cfg).frames.back();
}

/// L^2 distance of a coarse field to a fine one, the coarse field
/// interpolated spectrally onto the fine grid.
inline double interpolated_distance(const PhysicalField& coarse, const PhysicalField& fine) {
  const auto v = evaluate_padded(transform(coarse), fine.grid.n());
  PhysicalField d(fine.grid);
  for (std::size_t j = 0; j < d.size(); ++j) d.values[j] = v[j].real() - fine.values[j];
  return l2_norm(d);
}

inline void fill_orders(StudyTable& tab, bool parameter_is_resolution) {
  std::vector<double> x, y;
  for (std::size_t i = 0; i < tab.rows.size(); ++i) {
    auto& a = tab.rows[i];
    if (i + 1 < tab.rows.size() && a.error > 0.0 && tab.rows[i + 1].error > 0.0)
      a.order = std::log(a.error / tab.rows[i + 1].error) / std::log(a.parameter / tab.rows[i + 1].parameter);
    if (a.error > 0.0) {
      x.push_back(parameter_is_resolution ? 1.0 / a.parameter : a.parameter);
      y.push_back(a.error);
    }
  }
  if (x.size() >= 2) tab.fitted_order = fitted_order(x, y);
}

/// temporal: ladder of decreasing dt; spatial: ladder of increasing n with
/// the time step of the scenario (or the default on the finest grid);
/// viscosity: ladder of decreasing mu ending in 0.
inline StudyTable run_study(const ScenarioConfig& c, const fs::path& base_dir) {
  StudyTable tab;
  tab.kind = c.study.kind;
  const auto& lad = c.study.ladder;
  if (lad.size() < 2) throw ConfigError("study ladder needs at least two levels");
  const auto nl = c.nonlinearity.build();
  const auto bg = build_background(c, base_dir);

  if (c.study.kind == "viscosity") {
    const auto u0 = build_initial(c, nl, base_dir);
    const auto vt = vanishing_viscosity(u0, bg, nl, lad, c.solver, c.s);
    for (const auto& r : vt.rows) tab.rows.push_back({r.mu, r.difference, NAN});
    tab.fitted_order = vt.rate;
    if (!vt.monotone) {
      tab.complete = false;
      tab.failure = "differences not monotone";
    }
    return tab;
  }

  const bool spatial = c.study.kind == "spatial";
  for (std::size_t i = 1; i < lad.size(); ++i)
    if (spatial ? !(lad[i] > lad[i - 1]) : !(lad[i] < lad[i - 1]))
      throw ConfigError("study ladder must be monotone toward the finest level");

  std::vector<PhysicalField> finals;
  try {
    for (double p : lad) {
      ScenarioConfig lc = c;
      if (spatial) {
        if (p != std::floor(p) || p < 4) throw ConfigError("spatial ladder entries must be grid sizes");
        lc.n = static_cast<std::size_t>(p);
        if (lc.solver.dt == 0.0) lc.solver.dt = default_time_step(Grid(c.L, static_cast<std::size_t>(lad.back())));
        // coarse levels are under-resolved by construction; only the reference keeps the tail guard
        if (p != lad.back()) lc.solver.tail_threshold = 1.0;
      } else {
        lc.solver.dt = p;
      }
      finals.push_back(final_state(build_initial(lc, nl, base_dir), bg, nl, lc.solver));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    tab.complete = false;
    tab.failure = "level " + std::to_string(finals.size()) + ": " + e.what();
    return tab;
  }
  const auto& ref = finals.back();
  for (std::size_t i = 0; i + 1 < finals.size(); ++i)
    tab.rows.push_back({lad[i], interpolated_distance(finals[i], ref), NAN});
  fill_orders(tab, spatial);
  return tab;
}

// ---------------------------------------------------------------------------
// norms, split, catalog
// ---------------------------------------------------------------------------

struct NormsRow {
  double s = 0.0, b = 0.0, epsilon = 0.0;
  double sup_hs = 0.0, sup_hs_omega = 0.0, l2t_hs = 0.0, bourgain = 0.0;
};

inline std::vector<NormsRow> trajectory_norms(const Trajectory& traj, const std::vector<double>& ss,
                                              const std::vector<double>& bs, double epsilon) {
  std::vector<NormsRow> rows;
  const auto w = WeightSequence::power(epsilon);
  for (double s : ss) {
    double sh = 0.0, sw = 0.0;
    for (const auto& f : traj.frames) {
      const auto F = transform(f);
      sh = std::max(sh, sobolev_norm(F, s));
      sw = std::max(sw, enveloped_norm(F, s, w));
    }
    const double l2 = l2t_hs(traj, s);
    for (double b : bs) rows.push_back({s, b, epsilon, sh, sw, l2, bourgain_norm(traj, s, b)});
  }
  return rows;
}

inline void write_norms(std::ostream& os, const std::vector<NormsRow>& rows) {
  os << "s,b,epsilon,sup_t_hs,sup_t_hs_omega,l2t_hs,bourgain\n";
  using io::format_double;
  for (const auto& r : rows)
    os << format_double(r.s) << ',' << format_double(r.b) << ',' << format_double(r.epsilon) << ','
       << format_double(r.sup_hs) << ',' << format_double(r.sup_hs_omega) << ',' << format_double(r.l2t_hs) << ','
       << format_double(r.bourgain) << '\n';
}

inline void catalog(std::ostream& os) {
  os << "backgrounds:\n"
        "  zero          Psi = 0\n"
        "  mkdv-kink     f = -x^3, parameters c > 0, sign = +-1 (exact)\n"
        "  gardner-kink  f = x^2 - beta x^3, parameters c > 0, beta > 0, sign (exact)\n"
        "  kdv-cnoidal   f = x^2, cn^2 profile, parameters c, kappa in (0,1) (exact)\n"
        "  mkdv-dnoidal  f = x^3, dn profile, parameters c, kappa in (0,1) (exact)\n"
        "  synthetic     1 + 4 tanh(x + t) + cos(log(1 + x^2 + t^2)) (not a solution)\n"
        "  tabulated     static profile read from file, spline-interpolated\n"
        "nonlinearities:\n"
        "  polynomial    coefficients a0, a1, ...\n"
        "  exponential   e^x truncated at order K\n"
        "  sine, cosine  truncated at order K\n"
        "  custom-series coefficients a0, a1, ... of an entire series\n";
}

/// Runs each job on up to `jobs` threads; results keep input order.
template <class F>
std::vector<RunResult> run_batch(std::size_t count, std::size_t jobs, F&& job) {
  std::vector<RunResult> out(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) out[i] = job(i);
  };
  std::vector<std::thread> pool;
  for (std::size_t k = 1; k < std::min(jobs, count); ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return out;
}

}  // namespace gkdv::cli
