#include <array>
#include <cmath>
#include <string>

#include "csibreath/filt.hpp"

namespace csibreath {

namespace {

// Daubechies-4 (8 taps) analysis filters.
constexpr std::array<double, 8> kDecLow = {
    -0.010597401785069032, 0.0328830116668852,  0.030841381835560764, -0.18703481171909309,
    -0.027983769416859854, 0.6308807679298589,  0.7148465705529157,   0.2303778133088965};
constexpr std::array<double, 8> kDecHigh = {
    -0.2303778133088965,  0.7148465705529157,   -0.6308807679298589, -0.027983769416859854,
    0.18703481171909309,  0.030841381835560764, -0.0328830116668852, -0.010597401785069032};
constexpr Index kTaps = 8;

/// Half-sample symmetric index: x[-1] = x[0], x[n] = x[n-1], repeated as needed.
Index reflect(Index idx, Index n) {
  const Index period = 2 * n;
  idx %= period;
  if (idx < 0) idx += period;
  return idx < n ? idx : period - 1 - idx;
}

void analyze(const Eigen::VectorXd& x, Eigen::VectorXd& approx, Eigen::VectorXd& detail) {
  const Index n = x.size();
  const Index out_len = (n + kTaps - 1) / 2;
  approx.setZero(out_len);
  detail.setZero(out_len);
  for (Index o = 0; o < out_len; ++o) {
    for (Index k = 0; k < kTaps; ++k) {
      const double sample = x[reflect(2 * o + 1 - k, n)];
      approx[o] += kDecLow[k] * sample;
      detail[o] += kDecHigh[k] * sample;
    }
  }
}

// Adjoint of analyze restricted to [0, length); exact inverse because every
// coefficient touching those samples was computed from the extended signal.
Eigen::VectorXd synthesize(const Eigen::VectorXd& approx, const Eigen::VectorXd& detail, Index length) {
  Eigen::VectorXd y = Eigen::VectorXd::Zero(length);
  for (Index o = 0; o < approx.size(); ++o) {
    for (Index k = 0; k < kTaps; ++k) {
      const Index n = 2 * o + 1 - k;
      if (n < 0 || n >= length) continue;
      y[n] += kDecLow[k] * approx[o] + kDecHigh[k] * detail[o];
    }
  }
  return y;
}

}  // namespace

int wavelet_level(double fs, double cutoff_hz) {
  if (!(fs > 0.0) || !(cutoff_hz > 0.0)) throw ValidationError("wavelet level needs positive rates");
  if (fs < cutoff_hz) throw ValidationError("sample rate below the wavelet cutoff");
  // fs / 2^(L+1) >= cutoff picks the largest L; the strict upper condition follows.
  int level = -1;
  while (fs / std::ldexp(1.0, level + 2) >= cutoff_hz) ++level;
  return level;
}

int db4_max_level(Index n) {
  if (n < kTaps - 1) return 0;
  return static_cast<int>(std::floor(std::log2(double(n) / double(kTaps - 1))));
}

WaveletDecomp db4_decompose(const Eigen::Ref<const Eigen::VectorXd>& x, int level) {
  if (level < 0) throw ValidationError("wavelet level must be non-negative");
  if (level > db4_max_level(x.size())) {
    throw ValidationError("series of " + std::to_string(x.size()) + " samples too short for db4 level " +
                          std::to_string(level) + " (max " + std::to_string(db4_max_level(x.size())) + ")");
  }
  WaveletDecomp out;
  out.level = level;
  out.approx = x;
  for (int l = 0; l < level; ++l) {
    Eigen::VectorXd approx;
    Eigen::VectorXd detail;
    out.lengths.push_back(out.approx.size());
    analyze(out.approx, approx, detail);
    out.approx = std::move(approx);
    out.details.push_back(std::move(detail));
  }
  return out;
}

Eigen::VectorXd db4_reconstruct(const WaveletDecomp& decomp) {
  Eigen::VectorXd approx = decomp.approx;
  for (int l = decomp.level; l >= 1; --l) {
    approx = synthesize(approx, decomp.details[static_cast<std::size_t>(l - 1)],
                        decomp.lengths[static_cast<std::size_t>(l - 1)]);
  }
  return approx;
}

Eigen::VectorXd dwt_db4_approx(const Eigen::Ref<const Eigen::VectorXd>& x, double fs) {
  const int level = std::max(0, wavelet_level(fs));
  WaveletDecomp decomp = db4_decompose(x, level);
  for (auto& d : decomp.details) d.setZero();
  return db4_reconstruct(decomp);
}

}  // namespace csibreath
