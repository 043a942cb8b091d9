#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>
#include <vector>

namespace sonarnav::fft {

namespace {

enum class Kind { r2c, c2r, c2c_inverse };

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(Kind kind, std::size_t n) {
    std::lock_guard lock(mutex_);
    const auto key = std::make_pair(static_cast<int>(kind), n);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    const int len = static_cast<int>(n);
    auto* re = static_cast<double*>(fftw_malloc(sizeof(double) * n));
    auto* cx = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_plan plan = nullptr;
    switch (kind) {
      case Kind::r2c: plan = fftw_plan_dft_r2c_1d(len, re, cx, flags); break;
      case Kind::c2r: plan = fftw_plan_dft_c2r_1d(len, cx, re, flags); break;
      case Kind::c2c_inverse: plan = fftw_plan_dft_1d(len, cx, cx, FFTW_BACKWARD, flags); break;
    }
    fftw_free(re);
    fftw_free(cx);
    if (!plan) throw std::runtime_error("FFTW planning failed");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<int, std::size_t>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

fftw_complex* as_fftw(std::complex<double>* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

void forward_real(std::span<const double> in, std::span<std::complex<double>> out) {
  const std::size_t n = in.size();
  if (out.size() != n / 2 + 1) throw std::invalid_argument("forward_real: output size mismatch");
  // FFTW's r2c does not modify its input.
  fftw_execute_dft_r2c(cache().get(Kind::r2c, n), const_cast<double*>(in.data()), as_fftw(out.data()));
}

void inverse_real(std::span<const std::complex<double>> in, std::span<double> out) {
  const std::size_t n = out.size();
  if (in.size() != n / 2 + 1) throw std::invalid_argument("inverse_real: input size mismatch");
  // c2r destroys its input, so work on a copy.
  std::vector<std::complex<double>> scratch(in.begin(), in.end());
  fftw_execute_dft_c2r(cache().get(Kind::c2r, n), as_fftw(scratch.data()), out.data());
}

void inverse_complex(std::span<std::complex<double>> data) {
  fftw_execute_dft(cache().get(Kind::c2c_inverse, data.size()), as_fftw(data.data()), as_fftw(data.data()));
}

}  // namespace sonarnav::fft
