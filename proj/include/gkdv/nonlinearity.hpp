#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gkdv/error.hpp"

namespace gkdv {

enum class NonlinearityKind { polynomial, exponential, sine, cosine, custom_series };

inline std::string_view to_string(NonlinearityKind k) {
  switch (k) {
    case NonlinearityKind::polynomial: return "polynomial";
    case NonlinearityKind::exponential: return "exponential";
    case NonlinearityKind::sine: return "sine";
    case NonlinearityKind::cosine: return "cosine";
    case NonlinearityKind::custom_series: return "custom-series";
  }
  return "?";
}

inline NonlinearityKind nonlinearity_kind_from_string(std::string_view s) {
  if (s == "polynomial") return NonlinearityKind::polynomial;
  if (s == "exponential") return NonlinearityKind::exponential;
  if (s == "sine") return NonlinearityKind::sine;
  if (s == "cosine") return NonlinearityKind::cosine;
  if (s == "custom-series" || s == "custom_series") return NonlinearityKind::custom_series;
  throw ConfigError("unknown nonlinearity kind '" + std::string(s) + "'");
}

namespace detail {

inline double horner(const std::vector<double>& c, double x) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

inline std::vector<double> differentiate(const std::vector<double>& c) {
  if (c.size() <= 1) return {0.0};
  std::vector<double> d(c.size() - 1);
  for (std::size_t k = 1; k < c.size(); ++k) d[k - 1] = static_cast<double>(k) * c[k];
  return d;
}

inline std::vector<double> integrate(const std::vector<double>& c) {
  std::vector<double> p(c.size() + 1, 0.0);
  for (std::size_t k = 0; k < c.size(); ++k) p[k + 1] = c[k] / static_cast<double>(k + 1);
  return p;
}

inline double checked(double v, const char* what) {
  if (!std::isfinite(v)) throw OverflowError(std::string("non-finite value in ") + what);
  return v;
}

}  // namespace detail

/// Real-analytic nonlinearity f given by its Taylor coefficients at zero.
///
/// Closed-form kinds evaluate the exact function; polynomial and
/// custom-series kinds evaluate the coefficient list with Horner's rule.
/// Instances are immutable.
class AnalyticNonlinearity {
 public:
  static constexpr std::size_t default_order = 30;

  static AnalyticNonlinearity polynomial(std::vector<double> coeffs) {
    if (coeffs.empty()) coeffs.push_back(0.0);
    while (coeffs.size() > 1 && coeffs.back() == 0.0) coeffs.pop_back();
    for (double a : coeffs)
      if (!std::isfinite(a)) throw ConfigError("polynomial coefficient is not finite");
    return AnalyticNonlinearity(NonlinearityKind::polynomial, std::move(coeffs));
  }

  /// f(x) = x^2.
  static AnalyticNonlinearity kdv() { return polynomial({0.0, 0.0, 1.0}); }
  /// f(x) = sign * x^3; sign = -1 is the defocusing equation.
  static AnalyticNonlinearity mkdv(double sign) { return polynomial({0.0, 0.0, 0.0, sign}); }
  /// f(x) = x^2 - beta x^3.
  static AnalyticNonlinearity gardner(double beta) { return polynomial({0.0, 0.0, 1.0, -beta}); }

  static AnalyticNonlinearity exponential(std::size_t order = default_order) {
    std::vector<double> a(order + 1);
    double fact = 1.0;
    for (std::size_t k = 0; k <= order; ++k) {
      if (k > 0) fact *= static_cast<double>(k);
      a[k] = 1.0 / fact;
    }
    return AnalyticNonlinearity(NonlinearityKind::exponential, std::move(a));
  }

  static AnalyticNonlinearity sine(std::size_t order = default_order) {
    return AnalyticNonlinearity(NonlinearityKind::sine, trig_coeffs(order, 1));
  }

  static AnalyticNonlinearity cosine(std::size_t order = default_order) {
    return AnalyticNonlinearity(NonlinearityKind::cosine, trig_coeffs(order, 0));
  }

  static AnalyticNonlinearity custom_series(std::vector<double> coeffs) {
    if (coeffs.empty()) throw ConfigError("custom-series needs at least one coefficient");
    for (double a : coeffs)
      if (!std::isfinite(a)) throw ConfigError("series coefficient is not finite");
    return AnalyticNonlinearity(NonlinearityKind::custom_series, std::move(coeffs));
  }

  /// Closed-form kinds rebuilt with the requested truncation order.
  static AnalyticNonlinearity of_kind(NonlinearityKind kind, std::vector<double> coeffs = {},
                                      std::size_t order = default_order) {
    switch (kind) {
      case NonlinearityKind::polynomial: return polynomial(std::move(coeffs));
      case NonlinearityKind::exponential: return exponential(order);
      case NonlinearityKind::sine: return sine(order);
      case NonlinearityKind::cosine: return cosine(order);
      case NonlinearityKind::custom_series: return custom_series(std::move(coeffs));
    }
    throw ConfigError("unknown nonlinearity kind");
  }

  NonlinearityKind kind() const noexcept { return kind_; }
  const std::vector<double>& coeffs() const noexcept { return coeffs_; }
  std::size_t order() const noexcept { return coeffs_.size() - 1; }
  bool is_polynomial() const noexcept { return kind_ == NonlinearityKind::polynomial; }
  /// Degree for polynomial kinds; the truncation order otherwise.
  std::size_t degree() const noexcept { return order(); }

  double f(double x) const {
    switch (kind_) {
      case NonlinearityKind::exponential: return detail::checked(std::exp(x), "f");
      case NonlinearityKind::sine: return std::sin(x);
      case NonlinearityKind::cosine: return std::cos(x);
      default: return detail::checked(detail::horner(coeffs_, x), "f");
    }
  }

  double fp(double x) const {
    switch (kind_) {
      case NonlinearityKind::exponential: return detail::checked(std::exp(x), "f'");
      case NonlinearityKind::sine: return std::cos(x);
      case NonlinearityKind::cosine: return -std::sin(x);
      default: return detail::checked(detail::horner(d1_, x), "f'");
    }
  }

  double fpp(double x) const {
    switch (kind_) {
      case NonlinearityKind::exponential: return detail::checked(std::exp(x), "f''");
      case NonlinearityKind::sine: return -std::sin(x);
      case NonlinearityKind::cosine: return -std::cos(x);
      default: return detail::checked(detail::horner(d2_, x), "f''");
    }
  }

  /// Primitive with F(0) = 0.
  double F(double x) const {
    switch (kind_) {
      case NonlinearityKind::exponential: return detail::checked(std::expm1(x), "F");
      case NonlinearityKind::sine: return 1.0 - std::cos(x);
      case NonlinearityKind::cosine: return std::sin(x);
      default: return detail::checked(detail::horner(prim_, x), "F");
    }
  }

  /// f(psi + u) - f(psi), evaluated without cancellation as u -> 0.
  double difference(double psi, double u) const {
    switch (kind_) {
      case NonlinearityKind::exponential:
        return detail::checked(std::exp(psi) * std::expm1(u), "f difference");
      case NonlinearityKind::sine: return 2.0 * std::cos(psi + 0.5 * u) * std::sin(0.5 * u);
      case NonlinearityKind::cosine: return -2.0 * std::sin(psi + 0.5 * u) * std::sin(0.5 * u);
      default: return detail::checked(shifted_tail(coeffs_, psi, u), "f difference");
    }
  }

  /// F(psi + u) - F(psi) - u f(psi), quadratic in u near zero.
  double primitive_remainder(double psi, double u) const {
    switch (kind_) {
      case NonlinearityKind::exponential:
        return detail::checked(std::exp(psi) * (std::expm1(u) - u), "F remainder");
      case NonlinearityKind::sine:
        // -cos(psi+u) + cos(psi) - u sin(psi)
        return 2.0 * std::sin(psi + 0.5 * u) * std::sin(0.5 * u) - u * std::sin(psi);
      case NonlinearityKind::cosine:
        return 2.0 * std::cos(psi + 0.5 * u) * std::sin(0.5 * u) - u * std::cos(psi);
      default: {
        // Taylor shift of the primitive, dropping the constant and linear terms.
        auto b = taylor_shift(prim_, psi);
        double acc = 0.0;
        for (std::size_t m = b.size(); m-- > 2;) acc = acc * u + b[m];
        return detail::checked(acc * u * u, "F remainder");
      }
    }
  }

  /// True when |f''| is bounded on the whole real line.
  bool globally_bounded_fpp() const noexcept {
    switch (kind_) {
      case NonlinearityKind::sine:
      case NonlinearityKind::cosine: return true;
      case NonlinearityKind::polynomial: return order() <= 2;
      default: return false;
    }
  }

 private:
  AnalyticNonlinearity(NonlinearityKind kind, std::vector<double> coeffs)
      : kind_(kind), coeffs_(std::move(coeffs)) {
    validate_tail();
    d1_ = detail::differentiate(coeffs_);
    d2_ = detail::differentiate(d1_);
    prim_ = detail::integrate(coeffs_);
  }

  // Coefficients of sin (parity 1) or cos (parity 0) up to the given order.
  static std::vector<double> trig_coeffs(std::size_t order, std::size_t parity) {
    std::vector<double> a(order + 1, 0.0);
    double fact = 1.0;
    for (std::size_t k = 0; k <= order; ++k) {
      if (k > 0) fact *= static_cast<double>(k);
      if (k % 2 == parity) a[k] = (((k - parity) / 2) % 2 == 0 ? 1.0 : -1.0) / fact;
    }
    return a;
  }

  void validate_tail() const {
    if (kind_ == NonlinearityKind::polynomial) return;
    const std::size_t K = order();
    if (K < 20) return;
    // Last nonzero coefficient witnesses the decay of the series.
    std::size_t k = K;
    while (k > 0 && coeffs_[k] == 0.0) --k;
    if (k >= 20 && std::pow(std::abs(coeffs_[k]), 1.0 / static_cast<double>(k)) > 0.1)
      throw ConfigError("series tail |a_K|^(1/K) exceeds 0.1; raise the truncation order");
  }

  // b_m = p^(m)(x0)/m! by repeated synthetic division.
  static std::vector<double> taylor_shift(const std::vector<double>& c, double x0) {
    std::vector<double> b = c;
    const std::size_t n = b.size();
    for (std::size_t m = 0; m + 1 < n; ++m)
      for (std::size_t k = n - 1; k > m; --k) b[k - 1] += x0 * b[k];
    return b;
  }

  static double shifted_tail(const std::vector<double>& c, double x0, double u) {
    auto b = taylor_shift(c, x0);
    double acc = 0.0;
    for (std::size_t m = b.size(); m-- > 1;) acc = acc * u + b[m];
    return acc * u;
  }

  NonlinearityKind kind_;
  std::vector<double> coeffs_;
  std::vector<double> d1_, d2_, prim_;
};

/// Result of the f'' supremum scan over a working range.
struct GwpBound {
  double M = 0.0;
  /// |f''| bounded on the real line, so the global-existence hypothesis applies.
  bool hypothesis_holds = false;
};

/// sup |f''| over a dense sample of [lo, hi].
inline GwpBound gwp_bound(const AnalyticNonlinearity& nl, double lo, double hi,
                          std::size_t samples = 4001) {
  if (!(std::isfinite(lo) && std::isfinite(hi))) throw DomainError("gwp_bound: range not bounded");
  if (lo > hi) std::swap(lo, hi);
  double M = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double x = samples == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / (samples - 1);
    M = std::max(M, std::abs(nl.fpp(x)));
  }
  // Closed-form extrema the uniform sample can straddle.
  if (nl.kind() == NonlinearityKind::sine || nl.kind() == NonlinearityKind::cosine) {
    const double phase = nl.kind() == NonlinearityKind::sine ? M_PI / 2 : 0.0;
    const double k0 = std::ceil((lo - phase) / M_PI);
    if (phase + k0 * M_PI <= hi) M = 1.0;
  }
  return {M, nl.globally_bounded_fpp() && std::isfinite(M)};
}

/// Working range of the solution padded by 10 % on each side.
inline std::pair<double, double> padded_range(double lo, double hi, double pad = 0.1) {
  const double w = std::max(hi - lo, 1e-12);
  return {lo - pad * w, hi + pad * w};
}

}  // namespace gkdv
