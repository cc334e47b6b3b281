#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace gkdv;
using gkdv::testing::central_diff;

namespace {

std::vector<AnalyticNonlinearity> all_kinds() {
  return {AnalyticNonlinearity::kdv(),
          AnalyticNonlinearity::mkdv(-1.0),
          AnalyticNonlinearity::gardner(0.5),
          AnalyticNonlinearity::polynomial({0.3, -1.0, 0.5, 0.25}),
          AnalyticNonlinearity::exponential(),
          AnalyticNonlinearity::sine(),
          AnalyticNonlinearity::cosine(),
          AnalyticNonlinearity::custom_series({0.0, 0.5, 0.25, -0.125, 0.0625, 1e-3})};
}

}  // namespace

TEST(Nonlinearity, PolynomialValues) {
  const auto f = AnalyticNonlinearity::kdv();
  EXPECT_EQ(f.f(3.0), 9.0);
  EXPECT_EQ(f.fp(2.0), 4.0);
  EXPECT_EQ(f.fpp(2.0), 2.0);
  EXPECT_EQ(f.F(3.0), 9.0);
  EXPECT_EQ(f.F(0.0), 0.0);
}

TEST(Nonlinearity, ClosedFormKinds) {
  EXPECT_NEAR(AnalyticNonlinearity::exponential().f(1.0), std::exp(1.0), 1e-14);
  EXPECT_NEAR(AnalyticNonlinearity::sine().f(0.7), std::sin(0.7), 1e-15);
  EXPECT_NEAR(AnalyticNonlinearity::cosine().fpp(0.0), -1.0, 1e-15);
  EXPECT_NEAR(AnalyticNonlinearity::sine().F(M_PI), 2.0, 1e-14);
  for (const auto& nl : all_kinds()) EXPECT_EQ(nl.F(0.0), 0.0);
}

TEST(Nonlinearity, StoredSeriesTruncationError) {
  auto series = [](const AnalyticNonlinearity& nl, double x) {
    double acc = 0.0;
    for (auto it = nl.coeffs().rbegin(); it != nl.coeffs().rend(); ++it) acc = acc * x + *it;
    return acc;
  };
  const auto e = AnalyticNonlinearity::exponential();
  const auto s = AnalyticNonlinearity::sine();
  const auto c = AnalyticNonlinearity::cosine();
  // Absolute bound: at x = -5 the order-30 tail alone is ~6.7e-13 against e^x ~ 6.7e-3.
  for (double x = -5.0; x <= 5.0; x += 0.25) {
    EXPECT_NEAR(series(e, x), std::exp(x), 1e-12);
    EXPECT_NEAR(series(s, x), std::sin(x), 1e-12);
    EXPECT_NEAR(series(c, x), std::cos(x), 1e-12);
  }
}

TEST(Nonlinearity, CustomSeriesMatchesFiniteDifference) {
  const auto nl = AnalyticNonlinearity::custom_series({0.1, 0.5, 0.25, -0.125, 0.0625});
  const double fd = central_diff([&](double x) { return nl.f(x); }, 0.7, 1e-5);
  EXPECT_NEAR(nl.fp(0.7), fd, 1e-8 * std::abs(fd));
}

TEST(Nonlinearity, DerivativesAndPrimitiveAgreeWithFiniteDifferences) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> pos(-2.0, 2.0);
  for (const auto& nl : all_kinds()) {
    for (int i = 0; i < 100; ++i) {
      const double x = pos(rng);
      const double h = 1e-5;
      auto rel = [](double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); };
      EXPECT_LT(rel(central_diff([&](double y) { return nl.f(y); }, x, h), nl.fp(x)), 1e-6) << to_string(nl.kind());
      EXPECT_LT(rel(central_diff([&](double y) { return nl.fp(y); }, x, h), nl.fpp(x)), 1e-6);
      EXPECT_LT(rel(central_diff([&](double y) { return nl.F(y); }, x, h), nl.f(x)), 1e-6);
    }
  }
}

TEST(Nonlinearity, IntegerPolynomialIsExact) {
  const auto nl = AnalyticNonlinearity::polynomial({1.0, -2.0, 3.0, 4.0});
  EXPECT_EQ(nl.f(0.5), 1.0 - 1.0 + 0.75 + 0.5);
  EXPECT_EQ(nl.fp(0.5), -2.0 + 3.0 + 3.0);
  EXPECT_EQ(nl.fpp(0.25), 6.0 + 6.0);
  EXPECT_EQ(nl.F(2.0), 2.0 - 4.0 + 8.0 + 16.0);
}

TEST(Nonlinearity, DifferenceAvoidsCancellation) {
  for (const auto& nl : all_kinds()) {
    const double psi = 0.8, u = 1e-9;
    EXPECT_NEAR(nl.difference(psi, u), nl.fp(psi) * u, 1e-6 * std::abs(nl.fp(psi) * u) + 1e-30);
    EXPECT_NEAR(nl.difference(psi, 0.3), nl.f(psi + 0.3) - nl.f(psi), 1e-13);
    EXPECT_NEAR(nl.primitive_remainder(psi, 0.3), nl.F(psi + 0.3) - nl.F(psi) - 0.3 * nl.f(psi), 1e-13);
  }
}

TEST(Nonlinearity, GwpBound) {
  EXPECT_EQ(gwp_bound(AnalyticNonlinearity::kdv(), -10.0, 10.0).M, 2.0);
  EXPECT_TRUE(gwp_bound(AnalyticNonlinearity::kdv(), -10.0, 10.0).hypothesis_holds);
  EXPECT_NEAR(gwp_bound(AnalyticNonlinearity::sine(), -100.0, 100.0).M, 1.0, 1e-12);
  EXPECT_TRUE(gwp_bound(AnalyticNonlinearity::sine(), -1.0, 1.0).hypothesis_holds);
  const auto cubic = gwp_bound(AnalyticNonlinearity::polynomial({0, 0, 0, 1}), -2.0, 2.0);
  EXPECT_EQ(cubic.M, 12.0);
  EXPECT_FALSE(cubic.hypothesis_holds);
  EXPECT_THROW(gwp_bound(AnalyticNonlinearity::kdv(), -INFINITY, 1.0), DomainError);
}

TEST(Nonlinearity, PaddedRange) {
  const auto [lo, hi] = padded_range(-1.0, 3.0);
  EXPECT_DOUBLE_EQ(lo, -1.4);
  EXPECT_DOUBLE_EQ(hi, 3.4);
}

TEST(Nonlinearity, Errors) {
  EXPECT_THROW(AnalyticNonlinearity::custom_series({}), ConfigError);
  EXPECT_THROW(AnalyticNonlinearity::polynomial({1.0, NAN}), ConfigError);
  EXPECT_THROW(nonlinearity_kind_from_string("tangent"), ConfigError);
  std::vector<double> slow(25, 0.0);
  slow[24] = 1.0;  // |a_K|^(1/K) = 1
  EXPECT_THROW(AnalyticNonlinearity::custom_series(slow), ConfigError);
  EXPECT_THROW(AnalyticNonlinearity::exponential().f(1e6), OverflowError);
}

TEST(Nonlinearity, KindNamesRoundTrip) {
  for (auto k : {NonlinearityKind::polynomial, NonlinearityKind::exponential, NonlinearityKind::sine,
                 NonlinearityKind::cosine, NonlinearityKind::custom_series})
    EXPECT_EQ(nonlinearity_kind_from_string(to_string(k)), k);
}
