#include "csibreath/csi.hpp"

#include <cmath>
#include <string>

#include <unsupported/Eigen/FFT>

#include "csibreath/fft.hpp"

namespace csibreath {

namespace {

Eigen::FFT<double>& fft_engine() {
  // Eigen's FFT caches twiddle plans per size and is not safe to share.
  thread_local Eigen::FFT<double> engine;
  return engine;
}

template <typename Transform>
Tensor4<Complex> transform_rows(const Tensor4<Complex>& in, Transform&& op) {
  Tensor4<Complex> out(in.shape());
  for (Index t = 0; t < in.dim(0); ++t)
    for (Index i = 0; i < in.dim(1); ++i)
      for (Index j = 0; j < in.dim(2); ++j) out.row(t, i, j) = op(in.row(t, i, j));
  return out;
}

}  // namespace

void RadioMeta::validate() const {
  if (num_snapshots < 1) throw ValidationError("num_snapshots must be >= 1");
  if (num_tx < 1) throw ValidationError("num_tx must be >= 1");
  if (num_rx < 2) throw ValidationError("num_rx must be >= 2");
  if (num_subcarriers < 2) throw ValidationError("num_subcarriers must be >= 2");
  if (!(snapshot_rate_hz > 0.0) || !std::isfinite(snapshot_rate_hz))
    throw ValidationError("snapshot_rate_hz must be positive");
  if (!(subcarrier_spacing_hz > 0.0) || !std::isfinite(subcarrier_spacing_hz))
    throw ValidationError("subcarrier_spacing_hz must be positive");
  if (!(carrier_freq_hz > 0.0) || !std::isfinite(carrier_freq_hz))
    throw ValidationError("carrier_freq_hz must be positive");
}

double RadioMeta::bin_delay_s(Index k) const {
  const Index signed_k = (k <= num_subcarriers / 2) ? k : k - num_subcarriers;
  return double(signed_k) * delay_resolution_s();
}

VectorX<Complex> dft(const Eigen::Ref<const VectorX<Complex>>& x) {
  VectorX<Complex> in = x;
  VectorX<Complex> out(x.size());
  fft_engine().fwd(out, in);
  return out;
}

VectorX<Complex> idft(const Eigen::Ref<const VectorX<Complex>>& spectrum) {
  VectorX<Complex> in = spectrum;
  VectorX<Complex> out(spectrum.size());
  fft_engine().inv(out, in);  // Eigen scales the inverse by 1/N by default
  return out;
}

CirSampleSet csi_to_cir(const CsiSampleSet& csi) {
  return CirSampleSet(csi.meta(), transform_rows(csi.data(), [](const auto& row) { return idft(row); }));
}

CsiSampleSet cir_to_csi(const CirSampleSet& cir) {
  return CsiSampleSet(cir.meta(), transform_rows(cir.data(), [](const auto& row) { return dft(row); }));
}

}  // namespace csibreath
