#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "csibreath/chansim.hpp"
#include "csibreath/config.hpp"
#include "csibreath/csi.hpp"
#include "csibreath/pipeline.hpp"

namespace csibreath {

// Recording file layout, all integers and floats little-endian:
//
//   offset  size  field
//   0       4     magic "CSIR"
//   4       1     format version (1)
//   5       1     byte order (1 = little-endian)
//   6       1     sample layout (1 = complex float32 pairs, real then imaginary, row-major [t][i][j][m])
//   7       1     reserved (0)
//   8       16    uint32 T, N_T, N_R, M
//   24      24    float64 snapshot rate (Hz), subcarrier spacing (Hz), carrier frequency (Hz)
//   48      8*T*N_T*N_R*M   payload
inline constexpr std::uint8_t kRecordingVersion = 1;
inline constexpr std::size_t kRecordingHeaderSize = 48;

enum class FormatErrc {
  io,
  bad_magic,
  unsupported_version,
  invalid_header,
  truncated_payload,
  trailing_data,
  non_finite,
};

const char* to_string(FormatErrc code);

class FormatError : public ValidationError {
 public:
  FormatError(FormatErrc code, const std::string& what)
      : ValidationError(std::string(to_string(code)) + ": " + what), code_(code) {}
  FormatErrc code() const noexcept { return code_; }

 private:
  FormatErrc code_;
};

void write_recording(const CsiSampleSet& set, std::ostream& out);
void write_recording(const CsiSampleSet& set, const std::string& path);
CsiSampleSet read_recording(std::istream& in);
CsiSampleSet read_recording(const std::string& path);

enum class BandHalf { full, lower, upper };

/// Keeps one TX antenna, one half of the subcarrier axis (upper half takes
/// ceil(M/2) entries), then every stride-th subcarrier from the first kept
/// one. Subcarrier spacing is multiplied by the stride.
CsiSampleSet reduce_dataset(const CsiSampleSet& set, Index keep_tx, Index stride, BandHalf half);

/// One analysis window in snapshot indices.
struct WindowSpan {
  Index first = 0;
  Index length = 0;
};

/// Windows of floor(window_s * fs) snapshots starting every floor(step_s * fs);
/// a trailing partial window is dropped.
std::vector<WindowSpan> sliding_windows(const RadioMeta& meta, double window_s, double step_s);

/// Reference breathing rate, one row per second.
struct GroundTruthTrack {
  std::vector<double> time_s;
  std::vector<double> rate_hz;

  /// Times strictly increasing, rates positive.
  void validate() const;
  /// Rate at the row nearest to t (earlier row on ties).
  double rate_at(double t) const;
  std::size_t size() const { return time_s.size(); }

  static GroundTruthTrack constant(double rate_hz, double duration_s, double step_s = 1.0);
};

/// Text table with header `time_s,rate_hz`; '#' starts a comment.
GroundTruthTrack read_truth(std::istream& in, const std::string& source = "<stream>");
GroundTruthTrack read_truth(const std::string& path);
void write_truth(const GroundTruthTrack& track, std::ostream& out);
void write_truth(const GroundTruthTrack& track, const std::string& path);

/// Scenario from [radio], [motion], [distortion], and either repeated [path]
/// sections or one [room] section. See README for the keys.
Scenario scenario_from_config(const ConfigDocument& doc);
Scenario load_scenario(const std::string& path);
std::string scenario_to_config(const Scenario& scenario);

/// System from a [system] section; unspecified keys take the named system's defaults.
SystemConfig system_from_config(const ConfigDocument& doc);
SystemConfig load_system(const std::string& path);
std::string system_to_config(const SystemConfig& cfg);

}  // namespace csibreath
