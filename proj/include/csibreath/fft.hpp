#pragma once

#include "csibreath/csi.hpp"

namespace csibreath {

/// Unscaled forward DFT, X[k] = sum_n x[n] exp(-j 2 pi k n / N).
VectorX<Complex> dft(const Eigen::Ref<const VectorX<Complex>>& x);

/// Inverse DFT with 1/N scaling, x[n] = (1/N) sum_k X[k] exp(+j 2 pi k n / N).
VectorX<Complex> idft(const Eigen::Ref<const VectorX<Complex>>& spectrum);

/// Signed frequency of DFT bin k for an N-point transform at sample rate fs.
inline double bin_frequency(Index k, Index n, double fs) {
  const Index signed_k = (k <= n / 2) ? k : k - n;
  return double(signed_k) * fs / double(n);
}

}  // namespace csibreath
