#pragma once

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <map>
#include <mutex>
#include <span>
#include <utility>
#include <vector>

namespace gkdv::fft {

namespace detail {

// FFTW's planner is not thread-safe; execution of an existing plan on new
// arrays is. Plans are made once per (size, sign) with FFTW_ESTIMATE, which
// is deterministic, and FFTW_UNALIGNED so any std::complex buffer works.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(std::size_t n, int sign) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto key = std::make_pair(n, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    std::vector<std::complex<double>> a(n), b(n);
    fftw_plan p = fftw_plan_dft_1d(static_cast<int>(n), reinterpret_cast<fftw_complex*>(a.data()),
                                   reinterpret_cast<fftw_complex*>(b.data()), sign,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(key, p);
    return p;
  }

  PlanCache(const PlanCache&) = delete;
  PlanCache& operator=(const PlanCache&) = delete;

 private:
  PlanCache() = default;
  ~PlanCache() {
    for (auto& [k, p] : plans_) fftw_destroy_plan(p);
  }
  std::mutex mutex_;
  std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

inline void run(std::span<std::complex<double>> in, std::span<std::complex<double>> out, int sign) {
  fftw_plan p = PlanCache::instance().get(in.size(), sign);
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(in.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
}

}  // namespace detail

/// Unnormalized forward DFT: out_j = sum_k in_k exp(-2 pi i jk/n).
inline std::vector<std::complex<double>> forward(std::vector<std::complex<double>> in) {
  std::vector<std::complex<double>> out(in.size());
  detail::run(in, out, FFTW_FORWARD);
  return out;
}

/// Unnormalized backward DFT: out_k = sum_j in_j exp(+2 pi i jk/n).
inline std::vector<std::complex<double>> backward(std::vector<std::complex<double>> in) {
  std::vector<std::complex<double>> out(in.size());
  detail::run(in, out, FFTW_BACKWARD);
  return out;
}

}  // namespace gkdv::fft
