#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "gkdv/error.hpp"

namespace gkdv {

using complex = std::complex<double>;

/// Uniform periodic sampling of [-L, L) with n = 2^p points.
///
/// Spectral bins use FFT order: bin j carries the signed wavenumber index
/// k(j) = j for j < n/2 and j - n otherwise, i.e. xi_j = pi k(j) / L.
/// Bin n/2 is the single unpaired Nyquist bin.
class Grid {
 public:
  Grid() = default;
  Grid(double half_length, std::size_t n) : L_(half_length), n_(n) {
    if (!(half_length > 0.0) || !std::isfinite(half_length))
      throw ConfigError("grid half-length must be positive");
    if (n < 4 || (n & (n - 1)) != 0) throw ConfigError("grid size must be a power of two >= 4");
  }

  double L() const noexcept { return L_; }
  std::size_t n() const noexcept { return n_; }
  double dx() const noexcept { return 2.0 * L_ / static_cast<double>(n_); }
  double x(std::size_t j) const noexcept { return -L_ + static_cast<double>(j) * dx(); }
  /// Fundamental wavenumber pi/L.
  double dxi() const noexcept { return M_PI / L_; }
  std::ptrdiff_t index(std::size_t j) const noexcept {
    return j < n_ / 2 ? static_cast<std::ptrdiff_t>(j)
                      : static_cast<std::ptrdiff_t>(j) - static_cast<std::ptrdiff_t>(n_);
  }
  double xi(std::size_t j) const noexcept { return dxi() * static_cast<double>(index(j)); }
  /// |xi| of the Nyquist bin.
  double xi_max() const noexcept { return dxi() * static_cast<double>(n_ / 2); }
  std::size_t nyquist() const noexcept { return n_ / 2; }

  std::vector<double> points() const {
    std::vector<double> p(n_);
    for (std::size_t j = 0; j < n_; ++j) p[j] = x(j);
    return p;
  }
  std::vector<double> wavenumbers() const {
    std::vector<double> k(n_);
    for (std::size_t j = 0; j < n_; ++j) k[j] = xi(j);
    return k;
  }

  /// Same half-length, refined by an integer factor (power of two).
  Grid refined(std::size_t factor) const { return Grid(L_, n_ * factor); }

  std::string id() const {
    return "L" + std::to_string(L_) + "_n" + std::to_string(n_);
  }

  friend bool operator==(const Grid& a, const Grid& b) noexcept {
    return a.L_ == b.L_ && a.n_ == b.n_;
  }
  friend bool operator!=(const Grid& a, const Grid& b) noexcept { return !(a == b); }

 private:
  double L_ = 1.0;
  std::size_t n_ = 4;
};

inline void require_same_grid(const Grid& a, const Grid& b, const char* what) {
  if (a != b) throw DomainError(std::string(what) + ": grid mismatch");
}

/// Real samples u(x_j).
struct PhysicalField {
  Grid grid;
  std::vector<double> values;

  PhysicalField() = default;
  explicit PhysicalField(const Grid& g) : grid(g), values(g.n(), 0.0) {}
  PhysicalField(const Grid& g, std::vector<double> v) : grid(g), values(std::move(v)) {
    if (values.size() != g.n()) throw DomainError("field size does not match grid");
  }

  template <class Fn>
  static PhysicalField sample(const Grid& g, Fn&& fn) {
    PhysicalField f(g);
    for (std::size_t j = 0; j < g.n(); ++j) f.values[j] = fn(g.x(j));
    return f;
  }

  std::size_t size() const noexcept { return values.size(); }
  double& operator[](std::size_t j) { return values[j]; }
  double operator[](std::size_t j) const { return values[j]; }

  bool all_finite() const {
    for (double v : values)
      if (!std::isfinite(v)) return false;
    return true;
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
  }

  PhysicalField& operator+=(const PhysicalField& o) {
    require_same_grid(grid, o.grid, "field +=");
    for (std::size_t j = 0; j < values.size(); ++j) values[j] += o.values[j];
    return *this;
  }
  PhysicalField& operator-=(const PhysicalField& o) {
    require_same_grid(grid, o.grid, "field -=");
    for (std::size_t j = 0; j < values.size(); ++j) values[j] -= o.values[j];
    return *this;
  }
  PhysicalField& operator*=(double s) {
    for (auto& v : values) v *= s;
    return *this;
  }
};

inline PhysicalField operator+(PhysicalField a, const PhysicalField& b) { return a += b; }
inline PhysicalField operator-(PhysicalField a, const PhysicalField& b) { return a -= b; }
inline PhysicalField operator*(double s, PhysicalField a) { return a *= s; }

/// Fourier-series coefficients: u(x) = sum_j c_j exp(i xi_j x).
struct SpectralField {
  Grid grid;
  std::vector<complex> coeffs;

  SpectralField() = default;
  explicit SpectralField(const Grid& g) : grid(g), coeffs(g.n(), complex{}) {}
  SpectralField(const Grid& g, std::vector<complex> c) : grid(g), coeffs(std::move(c)) {
    if (coeffs.size() != g.n()) throw DomainError("spectral field size does not match grid");
  }

  std::size_t size() const noexcept { return coeffs.size(); }
  complex& operator[](std::size_t j) { return coeffs[j]; }
  const complex& operator[](std::size_t j) const { return coeffs[j]; }

  SpectralField& operator+=(const SpectralField& o) {
    require_same_grid(grid, o.grid, "spectral +=");
    for (std::size_t j = 0; j < coeffs.size(); ++j) coeffs[j] += o.coeffs[j];
    return *this;
  }
  SpectralField& operator-=(const SpectralField& o) {
    require_same_grid(grid, o.grid, "spectral -=");
    for (std::size_t j = 0; j < coeffs.size(); ++j) coeffs[j] -= o.coeffs[j];
    return *this;
  }
  SpectralField& operator*=(complex s) {
    for (auto& v : coeffs) v *= s;
    return *this;
  }

  /// max_j |c_j - conj(c_{-j})|, zero for real-origin fields.
  double hermitian_defect() const {
    const std::size_t n = coeffs.size();
    double d = std::abs(coeffs[0].imag());
    for (std::size_t j = 1; j < n; ++j) d = std::max(d, std::abs(coeffs[j] - std::conj(coeffs[n - j])));
    return d;
  }
};

inline SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
inline SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
inline SpectralField operator*(complex s, SpectralField a) { return a *= s; }

/// Uniformly time-sampled fields sharing one grid: t_m = t0 + m dt.
struct Trajectory {
  Grid grid;
  double t0 = 0.0;
  double dt = 0.0;
  std::vector<PhysicalField> frames;

  Trajectory() = default;
  Trajectory(const Grid& g, double t0_, double dt_) : grid(g), t0(t0_), dt(dt_) {}

  std::size_t size() const noexcept { return frames.size(); }
  bool empty() const noexcept { return frames.empty(); }
  double time(std::size_t m) const noexcept { return t0 + static_cast<double>(m) * dt; }
  double t_end() const noexcept { return frames.empty() ? t0 : time(frames.size() - 1); }
  const PhysicalField& operator[](std::size_t m) const { return frames[m]; }
  PhysicalField& operator[](std::size_t m) { return frames[m]; }

  void push_back(PhysicalField f) {
    require_same_grid(grid, f.grid, "trajectory push_back");
    frames.push_back(std::move(f));
  }
};

}  // namespace gkdv
