#include <gtest/gtest.h>

#include <sstream>

#include "support.hpp"

using namespace gkdv;
using gkdv::testing::gaussian;
using gkdv::testing::simpson;

namespace {

SolverConfig config(double dt, double T, std::size_t every = 1) {
  SolverConfig c;
  c.dt = dt;
  c.T = T;
  c.output_every = every;
  return c;
}

// (3c/2) sech^2(sqrt(c) x / 2) travels at speed c under u_t = -u_xxx - (u^2)_x.
PhysicalField kdv_soliton(const Grid& g, double c, double x0 = 0.0) {
  return PhysicalField::sample(g, [&](double x) {
    const double s = 1.0 / std::cosh(0.5 * std::sqrt(c) * (x - x0));
    return 1.5 * c * s * s;
  });
}

PhysicalField reflect(const PhysicalField& u) {
  PhysicalField r(u.grid);
  const std::size_t n = u.size();
  for (std::size_t j = 0; j < n; ++j) r.values[j] = u.values[(n - j) % n];
  return r;
}

AnalyticNonlinearity linear_flux() { return AnalyticNonlinearity::polynomial({0.0}); }

}  // namespace

// ---------------------------------------------------------------------------
// invariants_I
// ---------------------------------------------------------------------------

TEST(Invariants, ZeroField) {
  const auto I = invariants_I(PhysicalField(Grid(10.0, 64)), AnalyticNonlinearity::kdv());
  EXPECT_EQ(I.I1, 0.0);
  EXPECT_EQ(I.I2, 0.0);
  EXPECT_EQ(I.I3, 0.0);
}

TEST(Invariants, CosineClosedForm) {
  const double L = 10.0, A = 0.7;
  const Grid g(L, 128);
  const double xi1 = 3.0 * M_PI / L;
  const auto v = PhysicalField::sample(g, [&](double x) { return A * std::cos(xi1 * x); });
  const auto I = invariants_I(v, AnalyticNonlinearity::kdv());
  EXPECT_NEAR(I.I1, 0.0, 1e-13);
  EXPECT_NEAR(I.I2, A * A * L, 1e-12);
  EXPECT_NEAR(I.I3, A * A * xi1 * xi1 * L, 1e-12);
}

TEST(Invariants, GaussianAgainstQuadrature) {
  const Grid g(20.0, 512);
  const auto nl = AnalyticNonlinearity::gardner(0.5);
  const double A = 0.8;
  const auto I = invariants_I(gaussian(g, A), nl);
  auto e = [&](double x) { return A * std::exp(-x * x); };
  EXPECT_NEAR(I.I1, simpson(e, -20, 20), 1e-10);
  EXPECT_NEAR(I.I2, simpson([&](double x) { return e(x) * e(x); }, -20, 20), 1e-10);
  const double i3 = simpson(
      [&](double x) {
        const double ux = -2.0 * x * e(x);
        return ux * ux - nl.F(e(x));
      },
      -20, 20);
  EXPECT_NEAR(I.I3, i3, 1e-10);
}

TEST(Invariants, NonPolynomialFluxUsesGridQuadrature) {
  const Grid g(20.0, 512);
  const auto nl = AnalyticNonlinearity::sine();
  const auto I = invariants_I(gaussian(g, 0.5), nl);
  const double i3 = simpson(
      [&](double x) {
        const double e = 0.5 * std::exp(-x * x), ux = -2.0 * x * e;
        return ux * ux - (1.0 - std::cos(e));
      },
      -20, 20);
  EXPECT_NEAR(I.I3, i3, 1e-10);
}

TEST(Invariants, ConservedAlongSolitonRun) {
  const Grid g(50.0, 1024);
  const auto nl = AnalyticNonlinearity::kdv();
  const auto tr = evolve(kdv_soliton(g, 1.0, -10.0), BackgroundField(), nl, config(0.001, 1.0, 100));
  const auto I0 = invariants_I(tr[0], nl);
  double d1 = 0.0, d2 = 0.0, d3 = 0.0;
  for (std::size_t m = 1; m < tr.size(); ++m) {
    const auto I = invariants_I(tr[m], nl);
    d1 = std::max(d1, std::abs(I.I1 - I0.I1));
    d2 = std::max(d2, std::abs(I.I2 - I0.I2) / std::abs(I0.I2));
    d3 = std::max(d3, std::abs(I.I3 - I0.I3) / (1.0 + std::abs(I0.I3)));
  }
  EXPECT_LE(d1, 1e-12);
  EXPECT_LE(d2, 1e-8);
  EXPECT_LE(d3, 1e-8);
}

TEST(Invariants, GardnerGaussianConservesMeanMassAndHamiltonian) {
  // The conserved energy of this flow carries 1/2 on v_x^2, i.e. modified_energy
  // at Psi = 0. The unweighted I3 is conserved only along traveling waves.
  const Grid g(40.0, 1024);
  const auto nl = AnalyticNonlinearity::gardner(0.5);
  const BackgroundField zero;
  const auto tr = evolve(gaussian(g, 0.5), zero, nl, config(0.001, 1.0, 100));
  const auto I0 = invariants_I(tr[0], nl);
  const double E0 = modified_energy(tr[0], zero, nl, 0.0);
  double i3_drift = 0.0;
  for (std::size_t m = 1; m < tr.size(); ++m) {
    const auto I = invariants_I(tr[m], nl);
    EXPECT_LE(std::abs(I.I1 - I0.I1), 1e-12);
    EXPECT_LE(std::abs(I.I2 - I0.I2) / std::abs(I0.I2), 1e-8);
    const double E = modified_energy(tr[m], zero, nl, tr.time(m));
    EXPECT_LE(std::abs(E - E0) / (1.0 + std::abs(E0)), 1e-8);
    i3_drift = std::max(i3_drift, std::abs(I.I3 - I0.I3) / (1.0 + std::abs(I0.I3)));
  }
  EXPECT_NEAR(i3_drift, 0.0152735, 1e-5);
}

// ---------------------------------------------------------------------------
// modified_energy
// ---------------------------------------------------------------------------

TEST(ModifiedEnergy, ZeroPerturbation) {
  const Grid g(40.0, 512);
  EXPECT_EQ(modified_energy(PhysicalField(g), BackgroundField(bg::MKdVKink{1.0, 1}), AnalyticNonlinearity::mkdv(-1.0),
                            0.3),
            0.0);
}

TEST(ModifiedEnergy, ZeroBackgroundReducesToHamiltonian) {
  const Grid g(20.0, 512);
  const auto nl = AnalyticNonlinearity::kdv();
  const double A = 0.6;
  const double E = modified_energy(gaussian(g, A), BackgroundField(), nl, 0.0);
  const double ref = simpson(
      [&](double x) {
        const double e = A * std::exp(-x * x), ux = -2.0 * x * e;
        return 0.5 * ux * ux - e * e * e / 3.0;
      },
      -20, 20);
  EXPECT_NEAR(E, ref, 1e-10);
}

TEST(ModifiedEnergy, QuadraticCoefficientFromTaylorScaling) {
  const Grid g(40.0, 1024);
  const BackgroundField kink(bg::MKdVKink{1.0, 1});
  const auto nl = AnalyticNonlinearity::mkdv(-1.0);
  const double t = 0.2;
  auto u = [](double x) { return std::exp(-(x - 1.0) * (x - 1.0)); };
  const double q = simpson(
      [&](double x) {
        const double ux = -2.0 * (x - 1.0) * u(x);
        return 0.5 * ux * ux - 0.5 * nl.fp(kink.eval(t, x)) * u(x) * u(x);
      },
      -40, 40);
  for (double h : {1e-2, 1e-3}) {
    const auto uh = PhysicalField::sample(g, [&](double x) { return h * u(x); });
    const double coeff = modified_energy(uh, kink, nl, t) / (h * h);
    EXPECT_NEAR(coeff, q, 0.01 * std::abs(q)) << "h = " << h;
  }
}

TEST(ModifiedEnergy, TruncatedIntegralConvergesUnderRefinement) {
  const BackgroundField kink(bg::GardnerKink{1.0, 0.5, 1});
  const auto nl = AnalyticNonlinearity::gardner(0.5);
  const double a = modified_energy(gaussian(Grid(40.0, 512), 0.3), kink, nl, 0.0);
  const double b = modified_energy(gaussian(Grid(40.0, 1024), 0.3), kink, nl, 0.0);
  EXPECT_NEAR(a, b, 1e-10 * (1.0 + std::abs(b)));
}

TEST(ModifiedEnergy, TimeReversal) {
  // u(x, t) -> u(-x, T - t) maps solutions with Psi = 0 to solutions.
  const Grid g(40.0, 512);
  const auto nl = AnalyticNonlinearity::kdv();
  const BackgroundField zero;
  const auto cfg = config(0.002, 1.0, 50);
  const auto fwd = evolve(gaussian(g, 0.8), zero, nl, cfg);
  const auto bwd = evolve(reflect(fwd.frames.back()), zero, nl, cfg);
  ASSERT_EQ(fwd.size(), bwd.size());
  const std::size_t M = fwd.size();
  for (std::size_t m = 0; m < M; ++m) {
    const double ef = modified_energy(fwd[m], zero, nl, fwd.time(m));
    const double eb = modified_energy(bwd[M - 1 - m], zero, nl, bwd.time(M - 1 - m));
    EXPECT_NEAR(ef, eb, 1e-6) << "frame " << m;
  }
}

// ---------------------------------------------------------------------------
// l2_growth_monitor
// ---------------------------------------------------------------------------

TEST(GrowthMonitor, ZeroBackground) {
  const Grid g(40.0, 512);
  const auto nl = AnalyticNonlinearity::kdv();
  const auto tr = evolve(gaussian(g, 0.5), BackgroundField(), nl, config(0.002, 1.0, 25));
  const auto v = l2_growth_monitor(tr, BackgroundField(), nl);
  EXPECT_TRUE(v.pass);
  EXPECT_EQ(v.A, 0.0);
  EXPECT_EQ(v.B, 1.0);
  EXPECT_EQ(v.times.size(), tr.size());
  for (std::size_t m = 0; m < tr.size(); ++m) EXPECT_NEAR(v.mass[m], v.mass[0], 1e-8 * v.mass[0]);
}

TEST(GrowthMonitor, KinkBackgroundHasNoForcing) {
  const Grid g(40.0, 1024);
  const BackgroundField kink(bg::MKdVKink{1.0, -1});
  const auto nl = AnalyticNonlinearity::mkdv(-1.0);
  const auto tr = evolve(gaussian(g, 0.3, 1.0, 5.0), kink, nl, config(0.001, 1.0, 50));
  const auto v = l2_growth_monitor(tr, kink, nl);
  EXPECT_TRUE(v.pass);
  EXPECT_LE(v.A, 1e-20);
  EXPECT_NEAR(v.psi_x_sup, 1.0 / std::sqrt(2.0), 1e-6);
  EXPECT_LE(v.worst_ratio, 1.0);
}

TEST(GrowthMonitor, SyntheticForcedRun) {
  const Grid g(40.0, 1024);
  const BackgroundField syn(bg::Synthetic{});
  const auto nl = AnalyticNonlinearity::kdv();
  const auto tr = evolve(gaussian(g, 0.5), syn, nl, config(0.001, 1.0, 50));
  const auto v = l2_growth_monitor(tr, syn, nl);
  EXPECT_TRUE(v.pass);
  EXPECT_GT(v.A, 0.0);
  EXPECT_GT(v.B, 1.0);
  EXPECT_EQ(v.M, 2.0);
  for (std::size_t m = 0; m < v.times.size(); ++m) EXPECT_LE(v.mass[m], v.bound[m]);
}

TEST(GrowthMonitor, FlagsViolation) {
  // A trajectory whose mass jumps is not a solution; the monitor must say so.
  const Grid g(20.0, 256);
  Trajectory tr(g, 0.0, 0.01);
  tr.push_back(gaussian(g, 0.1));
  tr.push_back(gaussian(g, 10.0));
  EXPECT_FALSE(l2_growth_monitor(tr, BackgroundField(), AnalyticNonlinearity::kdv()).pass);
}

// ---------------------------------------------------------------------------
// flow_lipschitz_experiment
// ---------------------------------------------------------------------------

TEST(FlowLipschitz, ZeroDeltaRejected) {
  const Grid g(20.0, 256);
  EXPECT_THROW(flow_lipschitz_experiment(gaussian(g), BackgroundField(), AnalyticNonlinearity::kdv(),
                                         config(0.01, 0.1), {1e-2, 0.0}),
               DomainError);
  EXPECT_THROW(flow_lipschitz_experiment(gaussian(g), BackgroundField(), AnalyticNonlinearity::kdv(),
                                         config(0.01, 0.1), {1e-2}, 0.5),
               DomainError);
}

TEST(FlowLipschitz, LinearFlowIsIsometric) {
  const Grid g(40.0, 1024);
  const auto rows = flow_lipschitz_experiment(gaussian(g, 0.5), BackgroundField(bg::Synthetic{}), linear_flux(),
                                              config(0.005, 1.0, 10), {1e-1, 1e-2, 1e-3});
  ASSERT_EQ(rows.size(), 3u);
  for (const auto& r : rows) EXPECT_NEAR(r.ratio, 1.0, 1e-9) << r.delta;
}

TEST(FlowLipschitz, KdVOnCnoidalBackgroundIsUniformInDelta) {
  const Grid g(40.0, 512);
  const BackgroundField cn(bg::KdVCnoidal{1.0, 0.8});
  const auto rows = flow_lipschitz_experiment(PhysicalField(g), cn, AnalyticNonlinearity::kdv(),
                                              config(0.002, 1.0, 10), {1e-2, 1e-3, 1e-4});
  double lo = INFINITY, hi = 0.0;
  for (const auto& r : rows) {
    lo = std::min(lo, r.ratio);
    hi = std::max(hi, r.ratio);
  }
  EXPECT_LE(hi, 10.0);
  EXPECT_GE(hi, 1.0);
  EXPECT_LE(hi / lo, 1.2);
  EXPECT_NEAR(rows[0].ratio, 1.019943, 1e-5);
  EXPECT_NEAR(rows[2].ratio, 1.019180, 1e-5);
}

// ---------------------------------------------------------------------------
// envelope_tail_monitor
// ---------------------------------------------------------------------------

TEST(EnvelopeTails, BandLimitedLinearFlowHasNoHighTail) {
  const Grid g(20.0, 256);
  const double xi0 = 4.0 * M_PI / 20.0;
  const auto u0 = PhysicalField::sample(g, [&](double x) { return std::cos(xi0 * x) + 0.5 * std::sin(2 * xi0 * x); });
  auto c = config(0.01, 0.5, 10);
  c.contamination_threshold = 1.0;  // periodic data fills the strip by design
  const auto tr = evolve(u0, BackgroundField(), linear_flux(), c);
  const auto tails = envelope_tail_monitor(tr, 1.0, WeightSequence::power(0.1));
  ASSERT_EQ(tails.times.size(), tr.size());
  for (std::size_t i = 0; i < tails.thresholds.size(); ++i) {
    // phi_N vanishes unless N/2 < |xi| < 2N
    if (tails.thresholds[i] >= 2.0 * 2.0 * xi0) {
      EXPECT_LE(tails.sup_tails[i], 1e-24 * tails.sup_tails[0]) << tails.thresholds[i];  // squared roundoff
    }
  }
  EXPECT_GT(tails.sup_tails[0], 0.0);
}

TEST(EnvelopeTails, MonotoneForKdVGaussian) {
  const Grid g(40.0, 512);
  const auto tr = evolve(gaussian(g, 0.8), BackgroundField(), AnalyticNonlinearity::kdv(), config(0.002, 0.5, 25));
  const auto tails = envelope_tail_monitor(tr, 1.0, WeightSequence::power(0.1));
  for (std::size_t m = 0; m < tails.tails.size(); ++m)
    for (std::size_t i = 1; i < tails.thresholds.size(); ++i)
      EXPECT_LE(tails.tails[m][i], tails.tails[m][i - 1]) << "frame " << m << " level " << i;
}

TEST(EnvelopeTails, RefinementConsistent) {
  const auto nl = AnalyticNonlinearity::kdv();
  const auto w = WeightSequence::power(0.1);
  const auto a = envelope_tail_monitor(
      evolve(gaussian(Grid(40.0, 512), 0.8), BackgroundField(), nl, config(0.002, 0.5, 25)), 1.0, w);
  const auto b = envelope_tail_monitor(
      evolve(gaussian(Grid(40.0, 1024), 0.8), BackgroundField(), nl, config(0.002, 0.5, 25)), 1.0, w);
  std::size_t shared = 0;
  for (std::size_t i = 0; i < a.thresholds.size(); ++i) {
    if (a.sup_tails[i] < 1e-20) continue;  // below roundoff on both grids
    for (std::size_t k = 0; k < b.thresholds.size(); ++k)
      if (b.thresholds[k] == a.thresholds[i]) {
        EXPECT_NEAR(a.sup_tails[i], b.sup_tails[k], 0.05 * b.sup_tails[k]) << a.thresholds[i];
        ++shared;
      }
  }
  EXPECT_GE(shared, 3u);
}

TEST(EnvelopeTails, RejectsConstantWeights) {
  const Grid g(20.0, 64);
  Trajectory tr(g, 0.0, 0.1);
  tr.push_back(gaussian(g));
  EXPECT_THROW(envelope_tail_monitor(tr, 1.0, WeightSequence::constant()), DomainError);
}

// ---------------------------------------------------------------------------
// diagnose
// ---------------------------------------------------------------------------

TEST(Diagnose, ExactBackgroundWithZeroDataStaysQuiet) {
  const Grid g(40.0, 1024);
  for (const auto& [bgf, nl] : std::vector<std::pair<BackgroundField, AnalyticNonlinearity>>{
           {BackgroundField(bg::MKdVKink{1.0, 1}), AnalyticNonlinearity::mkdv(-1.0)},
           {BackgroundField(bg::GardnerKink{1.0, 0.5, -1}), AnalyticNonlinearity::gardner(0.5)}}) {
    const auto tr = evolve(PhysicalField(g), bgf, nl, config(0.001, 1.0, 100));
    const auto rep = diagnose(tr, bgf, nl, 1.0, WeightSequence::power(0.1));
    for (const auto& r : rep.rows) {
      for (double q : {r.I1, r.I2, r.I3, r.E, r.hs, r.hs_omega}) EXPECT_LE(std::abs(q), 1e-10) << "t = " << r.t;
      EXPECT_TRUE(std::isfinite(r.boundary_mass));
    }
  }
}

TEST(Diagnose, RowsAreOrderedAndFinite) {
  const Grid g(40.0, 1024);
  const BackgroundField syn(bg::Synthetic{});
  const auto nl = AnalyticNonlinearity::kdv();
  const auto tr = evolve(gaussian(g, 0.5), syn, nl, config(0.002, 0.5, 25));
  const auto rep = diagnose(tr, syn, nl, 1.0, WeightSequence::power(0.1));
  ASSERT_EQ(rep.rows.size(), tr.size());
  for (std::size_t m = 0; m < rep.rows.size(); ++m) {
    const auto& r = rep.rows[m];
    if (m > 0) {
      EXPECT_GT(r.t, rep.rows[m - 1].t);
    }
    for (double q : {r.t, r.I1, r.I2, r.I3, r.E, r.hs, r.hs_omega, r.boundary_mass}) EXPECT_TRUE(std::isfinite(q));
    EXPECT_GE(r.hs_omega, r.hs * (1.0 - 1e-12));
  }
}

TEST(Diagnose, CsvAndSummary) {
  const Grid g(20.0, 128);
  Trajectory tr(g, 0.0, 0.1);
  tr.push_back(gaussian(g, 0.2));
  tr.push_back(gaussian(g, 0.2));
  auto rep = diagnose(tr, BackgroundField(), AnalyticNonlinearity::kdv(), 1.0, WeightSequence::constant());
  rep.verdicts.push_back({"mean-conservation", true, "drift 0"});
  rep.verdicts.push_back({"mass-conservation", false, "drift 1"});
  std::ostringstream csv, sum;
  rep.write_csv(csv);
  rep.write_summary(sum);
  const auto text = csv.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "t,I1,I2,I3,E,hs_norm,hs_omega_norm,boundary_mass");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 3);
  EXPECT_NE(sum.str().find("mean-conservation: PASS"), std::string::npos);
  EXPECT_NE(sum.str().find("mass-conservation: FAIL"), std::string::npos);
  EXPECT_FALSE(rep.all_pass());
}
