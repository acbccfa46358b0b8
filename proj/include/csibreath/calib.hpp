#pragma once

#include "csibreath/csi.hpp"

namespace csibreath {

/// Least-squares line through the unwrapped phase of a contiguous run of
/// subcarriers. Slope and intercept are in the global subcarrier index.
struct LinearPhaseFit {
  double slope = 0.0;      ///< radians per subcarrier index
  double intercept = 0.0;  ///< radians at m = 0, wrapped to (-pi, pi]
  Index window_first = 0;
  Index window_length = 0;

  Index window_last() const { return window_first + window_length - 1; }
  double at(Index m) const { return slope * double(m) + intercept; }
};

/// Wraps an angle into (-pi, pi].
double wrap_phase(double angle);

/// Sequential unwrap: adds multiples of 2 pi wherever successive samples jump by more than pi.
Eigen::VectorXd unwrap_phase(const Eigen::Ref<const Eigen::VectorXd>& phase);

/// Divides every (t, i, j) slice by its dominant-path level
/// (1 / (2D + 1)) * sqrt(sum of |h|^2 over the 2D + 1 CIR bins around the
/// strongest bin). Ties in the strongest bin go to the lowest index.
CsiSampleSet amplitude_calibrate(const CsiSampleSet& csi, Index half_width = 1);

/// Fits the phase over the strongest run of `window_len` adjacent
/// subcarriers (largest summed amplitude, lowest start on ties).
LinearPhaseFit fit_linear_phase(const Eigen::Ref<const VectorX<Complex>>& row, Index window_len = 8);

/// Removes the linear phase fitted on RX antenna j from RX antenna (j + 1) mod N_R.
/// All fits come from the input; amplitudes are untouched.
CsiSampleSet phase_calibrate(const CsiSampleSet& csi, Index window_len = 8);

/// Wrapped phase difference between adjacent RX antennas, shape [T][N_T][N_R - 1][M].
PhaseTensor phase_difference(const CsiSampleSet& csi);

}  // namespace csibreath
