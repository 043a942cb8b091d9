#pragma once

// Thin FFTW wrapper with a process-wide plan cache. Planning is serialized;
// execution on caller-owned arrays is thread-safe.

#include <complex>
#include <cstddef>
#include <span>

namespace sonarnav::fft {

std::size_t next_pow2(std::size_t n);

/// Real-to-complex forward transform; in.size() == n, out.size() == n/2 + 1.
void forward_real(std::span<const double> in, std::span<std::complex<double>> out);

/// Complex-to-real inverse transform (unnormalized); out.size() == n, in.size() == n/2 + 1.
void inverse_real(std::span<const std::complex<double>> in, std::span<double> out);

/// Complex inverse transform (unnormalized), in place.
void inverse_complex(std::span<std::complex<double>> data);

}  // namespace sonarnav::fft
