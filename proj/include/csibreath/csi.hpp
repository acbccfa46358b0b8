#pragma once

#include <array>
#include <complex>
#include <cstddef>

#include <Eigen/Dense>

#include "csibreath/error.hpp"

namespace csibreath {

using Index = Eigen::Index;
using Complex = std::complex<double>;

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Radio and sampling parameters shared by every sample set.
struct RadioMeta {
  Index num_snapshots = 0;
  Index num_tx = 0;
  Index num_rx = 0;
  Index num_subcarriers = 0;
  double snapshot_rate_hz = 0.0;
  double subcarrier_spacing_hz = 0.0;
  double carrier_freq_hz = 0.0;

  /// Throws ValidationError unless T >= 1, N_T >= 1, N_R >= 2, M >= 2 and all rates are positive.
  void validate() const;

  /// Delay spacing of one CIR bin, 1 / (M * subcarrier spacing).
  double delay_resolution_s() const { return 1.0 / (double(num_subcarriers) * subcarrier_spacing_hz); }

  /// Signed circular delay of CIR bin k: bins above M/2 map to negative delays.
  double bin_delay_s(Index k) const;

  double duration_s() const { return double(num_snapshots) / snapshot_rate_hz; }

  bool operator==(const RadioMeta&) const = default;
};

/// Dense row-major 4-D tensor [t][a][b][c] over a scalar type.
///
/// The last axis is contiguous, so `row(t, a, b)` is a plain segment while
/// `series(a, b, c)` walks the snapshot axis with a fixed inner stride.
template <typename Scalar>
class Tensor4 {
 public:
  using Shape = std::array<Index, 4>;
  using Vector = VectorX<Scalar>;
  using SeriesMap = Eigen::Map<const Vector, 0, Eigen::InnerStride<>>;

  Tensor4() : shape_{0, 0, 0, 0} {}

  explicit Tensor4(const Shape& shape) : shape_(shape), data_(Vector::Zero(count(shape))) {}

  Tensor4(const Shape& shape, Vector data) : shape_(shape), data_(std::move(data)) {
    if (data_.size() != count(shape)) {
      throw ValidationError("tensor data length " + std::to_string(data_.size()) +
                            " does not match shape product " + std::to_string(count(shape)));
    }
  }

  const Shape& shape() const { return shape_; }
  Index dim(int axis) const { return shape_[static_cast<std::size_t>(axis)]; }
  Index size() const { return data_.size(); }

  /// Number of 1-D series along the snapshot axis.
  Index num_series() const { return shape_[1] * shape_[2] * shape_[3]; }

  Scalar& operator()(Index t, Index a, Index b, Index c) { return data_[offset(t, a, b) + c]; }
  const Scalar& operator()(Index t, Index a, Index b, Index c) const { return data_[offset(t, a, b) + c]; }

  auto row(Index t, Index a, Index b) { return data_.segment(offset(t, a, b), shape_[3]); }
  auto row(Index t, Index a, Index b) const { return data_.segment(offset(t, a, b), shape_[3]); }

  SeriesMap series(Index a, Index b, Index c) const {
    return SeriesMap(data_.data() + (a * shape_[2] + b) * shape_[3] + c, shape_[0],
                     Eigen::InnerStride<>(num_series()));
  }

  /// Series by flat index s = (a * dim(2) + b) * dim(3) + c.
  SeriesMap series(Index s) const {
    return SeriesMap(data_.data() + s, shape_[0], Eigen::InnerStride<>(num_series()));
  }

  /// Inverse of the flat series index.
  std::array<Index, 3> series_coords(Index s) const {
    return {s / (shape_[2] * shape_[3]), (s / shape_[3]) % shape_[2], s % shape_[3]};
  }

  /// Copy of `count` consecutive snapshots starting at `first`.
  Tensor4 snapshots(Index first, Index n) const {
    const Index stride = num_series();
    Shape shape = shape_;
    shape[0] = n;
    return Tensor4(shape, data_.segment(first * stride, n * stride));
  }

  const Vector& flat() const { return data_; }
  Vector& flat() { return data_; }

  bool operator==(const Tensor4& other) const {
    return shape_ == other.shape_ && data_ == other.data_;
  }

 private:
  static Index count(const Shape& s) { return s[0] * s[1] * s[2] * s[3]; }
  Index offset(Index t, Index a, Index b) const {
    return ((t * shape_[1] + a) * shape_[2] + b) * shape_[3];
  }

  Shape shape_;
  Vector data_;
};

using PhaseTensor = Tensor4<double>;

enum class Domain { frequency, delay };

/// Immutable complex sample set [T x N_T x N_R x M] in either the subcarrier
/// (CSI) or delay-bin (CIR) domain.
template <Domain D>
class ChannelSet {
 public:
  static constexpr Domain domain = D;

  /// Validates meta, shape, and finiteness of every entry.
  ChannelSet(const RadioMeta& meta, Tensor4<Complex> data) : meta_(meta), data_(std::move(data)) {
    meta_.validate();
    const typename Tensor4<Complex>::Shape expected{meta_.num_snapshots, meta_.num_tx, meta_.num_rx,
                                                    meta_.num_subcarriers};
    if (data_.shape() != expected) {
      throw ValidationError("sample set shape does not match radio meta");
    }
    if (!data_.flat().allFinite()) {
      throw ValidationError("sample set contains non-finite entries");
    }
  }

  /// Zero-filled set of the shape given by meta.
  explicit ChannelSet(const RadioMeta& meta)
      : ChannelSet(meta, Tensor4<Complex>({meta.num_snapshots, meta.num_tx, meta.num_rx, meta.num_subcarriers})) {}

  const RadioMeta& meta() const { return meta_; }
  const Tensor4<Complex>& data() const { return data_; }
  const Complex& operator()(Index t, Index i, Index j, Index m) const { return data_(t, i, j, m); }

  /// Snapshots [first, first + n) as a new set.
  ChannelSet window(Index first, Index n) const {
    if (first < 0 || n < 1 || first + n > meta_.num_snapshots) {
      throw ValidationError("snapshot window out of range");
    }
    RadioMeta meta = meta_;
    meta.num_snapshots = n;
    return ChannelSet(meta, data_.snapshots(first, n));
  }

  bool operator==(const ChannelSet&) const = default;

 private:
  RadioMeta meta_;
  Tensor4<Complex> data_;
};

using CsiSampleSet = ChannelSet<Domain::frequency>;
using CirSampleSet = ChannelSet<Domain::delay>;

/// Per-snapshot inverse DFT along subcarriers (scale 1/M).
CirSampleSet csi_to_cir(const CsiSampleSet& csi);

/// Per-snapshot forward DFT along delay bins (no scale); exact inverse of csi_to_cir.
CsiSampleSet cir_to_csi(const CirSampleSet& cir);

}  // namespace csibreath
