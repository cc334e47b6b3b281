// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Tolerances and setups are fixed here; measured quantities are printed.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "gkdv/cli.hpp"
#include "gkdv/gkdv.hpp"

using namespace gkdv;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

PhysicalField gaussian(const Grid& g, double A = 1.0, double width = 1.0) {
  return PhysicalField::sample(g, [&](double x) { return A * std::exp(-(x / width) * (x / width)); });
}

SolverConfig solver(double dt, double T, std::size_t every) {
  SolverConfig c;
  c.dt = dt;
  c.T = T;
  c.output_every = every;
  return c;
}

struct ExactCase {
  std::string name;
  BackgroundField bg;
  AnalyticNonlinearity nl;
};

std::vector<ExactCase> exact_backgrounds(bool periodic_too) {
  std::vector<ExactCase> v{
      {"mkdv-kink+", BackgroundField(bg::MKdVKink{1.0, 1}), AnalyticNonlinearity::mkdv(-1.0)},
      {"mkdv-kink-", BackgroundField(bg::MKdVKink{1.0, -1}), AnalyticNonlinearity::mkdv(-1.0)},
      {"gardner-kink+", BackgroundField(bg::GardnerKink{1.0, 0.5, 1}), AnalyticNonlinearity::gardner(0.5)},
      {"gardner-kink-", BackgroundField(bg::GardnerKink{1.0, 0.5, -1}), AnalyticNonlinearity::gardner(0.5)}};
  if (periodic_too) {
    v.push_back({"kdv-cnoidal", BackgroundField(bg::KdVCnoidal{1.0, 0.8}), AnalyticNonlinearity::kdv()});
    v.push_back({"mkdv-dnoidal", BackgroundField(bg::MKdVDnoidal{1.0, 0.5}), AnalyticNonlinearity::mkdv(1.0)});
  }
  return v;
}

// 1. max|S| <= 1e-10 scale for the kinks on the desk grid, t in [0, 1].
Outcome background_exactness() {
  const Grid g(50.0, 1024);
  std::vector<double> times;
  for (int i = 0; i <= 10; ++i) times.push_back(0.1 * i);
  double worst = 0.0;
  for (const auto& c : exact_backgrounds(false)) {
    const auto [smax, scale] = cli::background_exactness(c.bg, c.nl, g, times);
    worst = std::max(worst, smax / scale);
  }
  return {worst <= 1e-10, "max|S|/scale = " + fmt(worst)};
}

// 2. u0 = 0 on every exact background stays below 1e-8 in L2 up to t = 1.
Outcome zero_persistence() {
  const Grid g(50.0, 1024);
  double worst = 0.0;
  for (const auto& c : exact_backgrounds(true)) {
    const auto tr = evolve(PhysicalField(g), c.bg, c.nl, solver(2e-4, 1.0, 50));
    for (const auto& f : tr.frames) worst = std::max(worst, l2_norm(f));
  }
  return {worst <= 1e-8, "sup ||u||_L2 = " + fmt(worst) + " over 6 backgrounds"};
}

// 3. KdV soliton, no background.
Outcome conservation() {
  const Grid g(50.0, 1024);
  const auto nl = AnalyticNonlinearity::kdv();
  const auto u0 = kdv_soliton(g, nl, 1.0, -10.0);
  const auto tr = evolve(u0, BackgroundField(), nl, solver(2e-4, 1.0, 250));
  const auto I0 = invariants_I(tr[0], nl);
  double d1 = 0.0, d2 = 0.0, d3 = 0.0;
  for (const auto& f : tr.frames) {
    const auto I = invariants_I(f, nl);
    d1 = std::max(d1, std::abs(I.I1 - I0.I1));
    d2 = std::max(d2, std::abs(I.I2 - I0.I2) / std::abs(I0.I2));
    d3 = std::max(d3, std::abs(I.I3 - I0.I3) / std::abs(I0.I3));
  }
  return {d1 <= 1e-12 && d2 <= 1e-8 && d3 <= 1e-8,
          "I1 drift = " + fmt(d1) + ", I2 rel = " + fmt(d2) + ", I3 rel = " + fmt(d3)};
}

ScenarioConfig gaussian_kdv(double L, std::size_t n) {
  ScenarioConfig c;
  c.L = L;
  c.n = n;
  c.initial.kind = InitialKind::gaussian;
  return c;
}

// 4. ETDRK4 self-convergence.
Outcome temporal_order() {
  auto c = gaussian_kdv(40.0, 1024);
  c.study.kind = "temporal";
  c.study.ladder = {0.005, 0.0025, 0.00125, 0.000625, 0.0003125};
  const auto tab = cli::run_study(c, {});
  return {tab.complete && std::abs(tab.fitted_order - 4.0) <= 0.3, "fitted order = " + fmt(tab.fitted_order)};
}

// 5. Tenfold error reduction per doubling of n until the 1e-12 floor.
Outcome spatial_accuracy() {
  auto c = gaussian_kdv(20.0, 512);
  c.solver.dt = 1e-3;
  c.solver.T = 0.1;
  c.study.kind = "spatial";
  c.study.ladder = {64, 128, 256, 512};
  const auto tab = cli::run_study(c, {});
  bool ok = tab.complete && tab.rows.size() == 3;
  std::string errs;
  for (std::size_t i = 0; ok && i < tab.rows.size(); ++i) {
    errs += (i ? ", " : "") + fmt(tab.rows[i].error);
    if (i > 0 && tab.rows[i - 1].error > 1e-12)
      ok = ok && (tab.rows[i].error <= 0.1 * tab.rows[i - 1].error || tab.rows[i].error <= 1e-12);
  }
  return {ok, "errors vs n = 512: " + errs};
}

// 6. Reconstructed-constant L2 bound on every shipped scenario.
Outcome l2_growth() {
  const fs::path dir = fs::path(GKDV_SOURCE_DIR) / "scenarios";
  std::size_t count = 0;
  double worst = 0.0;
  std::string failed;
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ".ini") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto& p : files) {
    const auto c = load_scenario(p);
    const auto nl = c.nonlinearity.build();
    const auto bg = build_background(c, dir);
    try {
      const auto tr = evolve(build_initial(c, nl, dir), bg, nl, c.solver);
      const auto v = l2_growth_monitor(tr, bg, nl, c.solver.forcing_taper_fraction);
      worst = std::max(worst, v.worst_ratio);
      if (!v.pass) failed += " " + c.name;
    } catch (const std::exception& e) {
      failed += " " + c.name + "(" + e.what() + ")";
    }
    ++count;
  }
  const bool has_synthetic = std::any_of(files.begin(), files.end(), [&](const fs::path& p) {
    return std::holds_alternative<bg::Synthetic>(load_scenario(p).background);
  });
  return {count > 0 && failed.empty() && has_synthetic,
          std::to_string(count) + " scenarios, worst mass/bound = " + fmt(worst) +
              (failed.empty() ? "" : ", failed:" + failed)};
}

// 7. R(delta) for KdV on a cnoidal background at s = 1.
Outcome flow_lipschitz() {
  const Grid g(40.0, 512);
  const auto rows = flow_lipschitz_experiment(gaussian(g, 0.5), BackgroundField(bg::KdVCnoidal{1.0, 0.8}),
                                              AnalyticNonlinearity::kdv(), solver(0.002, 1.0, 10), {1e-2, 1e-3, 1e-4},
                                              1.0);
  double lo = INFINITY, hi = 0.0;
  std::string rs;
  for (const auto& r : rows) {
    lo = std::min(lo, r.ratio);
    hi = std::max(hi, r.ratio);
    rs += (rs.empty() ? "" : ", ") + fmt(r.ratio);
  }
  return {hi <= 10.0 && hi <= 1.2 * lo, "R = " + rs};
}

// 8. Vanishing viscosity.
Outcome vanishing_viscosity_rate() {
  const Grid g(40.0, 512);
  const auto nl = AnalyticNonlinearity::kdv();
  const auto vt = vanishing_viscosity(gaussian(g), BackgroundField(), nl, {0.1, 0.05, 0.025, 0.0},
                                      solver(0.002, 1.0, 10), 1.0);
  bool monotone = true;
  std::string ds;
  for (std::size_t i = 0; i < vt.rows.size(); ++i) {
    ds += (i ? ", " : "") + fmt(vt.rows[i].difference);
    if (i > 0) monotone = monotone && vt.rows[i].difference <= 1.05 * vt.rows[i - 1].difference;
  }
  return {monotone && vt.rate >= 0.9, "differences " + ds + ", rate = " + fmt(vt.rate)};
}

// 9. Littlewood-Paley partition on grid lattices and the Q_L partition.
Outcome partitions() {
  double worst_lp = 0.0;
  for (const Grid& g : {Grid(20.0, 256), Grid(50.0, 1024), Grid(3.0, 64), Grid(M_PI, 4096)}) {
    const auto band = DyadicBand::for_grid(g);
    for (std::size_t j = 0; j < g.n(); ++j) {
      double s = band.low_symbol(g.xi(j));
      for (double N : band.levels()) s += dyadic_phi(g.xi(j), N);
      worst_lp = std::max(worst_lp, std::abs(s - 1.0));
    }
  }
  // Modulation symbols on a sigma lattice, then reconstruction of a windowed
  // free solution from its Q_L pieces.
  double worst_q = 0.0;
  const Grid g(20.0, 128);
  Trajectory free(g, 0.0, 0.02);
  const auto U0 = transform(gaussian(g, 1.0, 1.5));
  for (int m = 0; m <= 25; ++m) free.push_back(inverse_transform(airy_propagate(U0, 0.02 * m)));
  const auto tr = extend_rho_T(free);
  const auto levels = modulation_levels(tr);
  for (double sigma = -4.0 * levels.back(); sigma <= 4.0 * levels.back(); sigma += 0.01) {
    if (std::abs(sigma) >= levels.back()) continue;  // beyond the top level the lattice is not covered
    double s = 0.0;
    for (double L : levels) s += modulation_symbol(sigma, L);
    worst_q = std::max(worst_q, std::abs(s - 1.0));
  }
  Trajectory sum = modulation_project(tr, levels.front());
  for (std::size_t i = 1; i < levels.size(); ++i) {
    const auto q = modulation_project(tr, levels[i]);
    for (std::size_t m = 0; m < sum.size(); ++m) sum.frames[m] += q[m];
  }
  double recon = 0.0;
  for (std::size_t m = 0; m < sum.size(); ++m)
    for (std::size_t j = 0; j < g.n(); ++j) recon = std::max(recon, std::abs(sum[m].values[j] - tr[m].values[j]));
  const double w = std::max({worst_lp, worst_q, recon});
  return {w <= 1e-12, "LP " + fmt(worst_lp) + ", Q_L symbols " + fmt(worst_q) + ", Q_L reconstruction " + fmt(recon)};
}

// 10. sup_xi <xi>^r e^{-mu xi^2 t} <= C_r sqrt(1 + (2 mu t)^{-r}).
Outcome smoothing() {
  double worst = 0.0;
  for (double r : {1.0, 2.0, 3.0})
    for (double mu : {1e-3, 1e-2, 1e-1})
      for (double t : {1e-2, 1e-1, 1.0}) {
        const double top = 10.0 * std::sqrt(r / (2.0 * mu * t)) + 10.0;
        double sup = 0.0;
        for (int i = 0; i <= 200000; ++i) {
          const double xi = top * i / 200000.0;
          sup = std::max(sup, std::pow(1.0 + xi * xi, 0.5 * r) * std::exp(-mu * xi * xi * t));
        }
        const double bound = smoothing_constant(r) * std::sqrt(1.0 + std::pow(2.0 * mu * t, -r));
        worst = std::max(worst, sup / bound);
      }
  return {worst <= 1.0, "27 samples, max sup/bound = " + fmt(worst)};
}

// 11. The k = 3 constrained integral vanishes when every modulation is small.
Outcome resonance_criterion() {
  auto chi = [](double xi, double xi1) { return complex(1.0 + 0.1 * xi * xi1, 0.01 * xi); };
  const std::vector<std::vector<ResonanceBlock>> configs{
      {{32, 1}, {32, 1}, {16, 1}}, {{32, 4}, {16, 2}, {16, 1}}, {{32, 8}, {32, 2}, {32, 1}}, {{64, 8}, {64, 4}, {32, 2}}};
  double worst = 0.0;
  bool predicted = true;
  for (const auto& b : configs)
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      const auto r = resonance_vanishing_check(b, chi, seed);
      predicted = predicted && r.predicted_vanishing;
      worst = std::max(worst, r.magnitude / r.scale);
    }
  return {predicted && worst <= 1e-12, "12 configurations, max magnitude/scale = " + fmt(worst)};
}

// 12. Zhidkov split.
Outcome zhidkov() {
  const Grid g(40.0, 2048);
  const auto phi = PhysicalField::sample(g, [](double x) { return std::tanh(x); });
  const auto sp = zhidkov_split(phi);
  const auto P = transform(phi), U = transform(sp.u0);
  double ident = 0.0;
  for (std::size_t j = 0; j < g.n(); ++j) {
    const double xi = g.xi(j);
    ident = std::max(ident, std::abs(U.coeffs[j] - (1.0 - std::exp(-xi * xi)) * P.coeffs[j]));
  }
  const Grid h(30.0, 1024);
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> Ud(-1.0, 1.0);
  double excess = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> a(6), k(6);
    for (int i = 0; i < 6; ++i) a[i] = Ud(rng), k[i] = 3.0 * std::abs(Ud(rng));
    const auto f = PhysicalField::sample(h, [&](double x) {
      double v = std::tanh(a[0] * x);
      for (int i = 1; i < 6; ++i) v += a[i] * std::cos(k[i] * x) / (1.0 + 0.01 * x * x);
      return v;
    });
    excess = std::max(excess, zhidkov_split(f).psi0.max_abs() / f.max_abs() - 1.0);
  }
  // A positive averaging kernel applied through one transform pair: the
  // comparison allows that pair's rounding and nothing more.
  return {ident <= 1e-12 && excess <= 1e-14,
          "identity error " + fmt(ident) + ", max(||Psi0||/||Phi||) - 1 = " + fmt(excess)};
}

// 13. Bourgain norm of the windowed free solution under refinement.
Outcome bourgain_free() {
  std::vector<double> ratios;
  for (std::size_t n : {256, 512, 1024}) {
    const Grid g(20.0, n);
    const auto u0 = gaussian(g);
    const auto U0 = transform(u0);
    Trajectory free(g, 0.0, 0.01);
    for (int m = 0; m <= 100; ++m) free.push_back(inverse_transform(airy_propagate(U0, 0.01 * m)));
    ratios.push_back(bourgain_norm(extend_rho_T(free), 1.0, 1.0) / sobolev_norm(u0, 1.0));
  }
  bool ok = true;
  for (double r : ratios) ok = ok && std::abs(r / ratios.front() - 1.0) <= 0.2;
  return {ok, "ratios " + fmt(ratios[0]) + ", " + fmt(ratios[1]) + ", " + fmt(ratios[2])};
}

// 14. Picard fixed point against evolve at mu = 0.1.
Outcome picard_vs_evolve() {
  const Grid g(20.0, 256);
  const auto u0 = gaussian(g);
  const auto nl = AnalyticNonlinearity::kdv();
  const auto r = picard_solve(u0, BackgroundField(), nl, 0.1, 0.05, 50);
  auto c = solver(1e-4, 0.05, 10);
  c.mu = 0.1;
  const auto ev = evolve(u0, BackgroundField(), nl, c);
  const double d = linf_t_hs_distance(ev, r.trajectory, 0.0);
  return {d <= 1e-8, "L^inf_T L^2 distance = " + fmt(d)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"background exactness", background_exactness},
      {"zero-perturbation persistence", zero_persistence},
      {"conservation", conservation},
      {"temporal order", temporal_order},
      {"spatial spectral accuracy", spatial_accuracy},
      {"L2 growth bound", l2_growth},
      {"flow Lipschitz", flow_lipschitz},
      {"vanishing viscosity", vanishing_viscosity_rate},
      {"partitions of unity", partitions},
      {"W_mu smoothing bound", smoothing},
      {"resonance vanishing", resonance_criterion},
      {"Zhidkov split", zhidkov},
      {"Bourgain free-solution bound", bourgain_free},
      {"Picard/ETD cross-validation", picard_vs_evolve},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%-4s %2zu %-30s %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
