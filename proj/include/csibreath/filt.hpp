#pragma once

#include <vector>

#include "csibreath/csi.hpp"
#include "csibreath/fft.hpp"

namespace csibreath {

/// Gaussian-consistency factor applied to the window median absolute deviation.
inline constexpr double kHampelMadScale = 1.4826;

struct TrendSplit {
  Eigen::VectorXd dc;  ///< Hampel trend
  Eigen::VectorXd ac;  ///< input minus trend
};

/// Hampel trend extraction. The window holds floor(window_s * fs) samples
/// centered on t and shrinks at the edges. A sample stays in the trend when
/// |x - median| <= threshold * 1.4826 * MAD and is replaced by the window
/// median otherwise.
TrendSplit hampel_detrend(const Eigen::Ref<const Eigen::VectorXd>& x, double window_s, double threshold, double fs);

/// Decomposition level L with fs / 2^(L+2) < cutoff <= fs / 2^(L+1).
/// May be 0 or -1 for low sample rates where no decomposition is needed.
int wavelet_level(double fs, double cutoff_hz = 0.5);

/// Multi-level db4 decomposition with half-sample symmetric extension.
struct WaveletDecomp {
  int level = 0;
  Eigen::VectorXd approx;               ///< level-L approximation coefficients
  std::vector<Eigen::VectorXd> details; ///< details[l - 1] holds level l (finest first)
  std::vector<Index> lengths;           ///< signal length entering each level, finest first
};

/// Largest level at which every db4 coefficient still sees real samples.
int db4_max_level(Index n);

WaveletDecomp db4_decompose(const Eigen::Ref<const Eigen::VectorXd>& x, int level);
Eigen::VectorXd db4_reconstruct(const WaveletDecomp& decomp);

/// Level-L approximation reconstructed at full length with every detail
/// band zeroed; L from wavelet_level(fs).
Eigen::VectorXd dwt_db4_approx(const Eigen::Ref<const Eigen::VectorXd>& x, double fs);

/// Zeroes every CIR bin with |delay| > tau_max and returns to the subcarrier domain.
CsiSampleSet delay_filter(const CsiSampleSet& csi, double tau_max_s);

/// Zeroes every DFT bin with |f| outside [f_low, f_high] and transforms back.
VectorX<Complex> band_pass(const Eigen::Ref<const VectorX<Complex>>& x, double f_low, double f_high, double fs);

}  // namespace csibreath
